"""Command line front end.

Subcommands:

* ``render``  -- deterministic offline rendering of a snapshot to a
                 Standard MIDI File (``--out`` ending in .mid/.midi/.smf)
                 or raw pipeline bytes (any other path, or stdout).
* ``play``    -- real-time playback, writing raw pipeline bytes as the
                 clock runs.
* ``serve``   -- bind the live session endpoint for board UIs.
* ``analyze`` -- Monte Carlo misread rates of the pitch-tower readout for
                 every tower height.
"""

from __future__ import annotations

import argparse
import queue
import sys
import threading

from .analog import misclassification_rate
from .boardio import Snapshot, export_smf, load_snapshot, with_overrides
from .errors import ConfigError, ParseError, RangeError, StreamError
from .melody import note_name
from .pipeline import PipelineSpec, run_offline
from .session import SessionEngine, run_live
from .transport import FRAME_ORDERS, MAX_BPM, MIN_BPM


def _bpm(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bpm must be an integer, got {text!r}") from None
    if not MIN_BPM <= value <= MAX_BPM:
        raise argparse.ArgumentTypeError(f"bpm must be {MIN_BPM}-{MAX_BPM}, got {value}")
    return value


def _cycles(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cycles must be an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"cycles must be >= 1, got {value}")
    return value


def _address(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected HOST:PORT, got {text!r}")
    try:
        return host, int(port)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad port in {text!r}") from None


def _add_board_args(sub: argparse.ArgumentParser, with_cycles: bool = True) -> None:
    sub.add_argument("--snapshot", metavar="PATH", help="board snapshot file (default: empty boards)")
    if with_cycles:
        sub.add_argument("--cycles", type=_cycles, default=1, help="16-quarter cycles to run")
    sub.add_argument("--bpm", type=_bpm, help="override the snapshot tempo")
    sub.add_argument("--no-beatbox", action="store_true", help="detach the rhythm stage")
    sub.add_argument("--no-melody", action="store_true", help="detach the melody stage")
    sub.add_argument(
        "--frame-order",
        choices=FRAME_ORDERS,
        default=None,
        help="where a quarter's content sits relative to its 24 clocks",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brickbox",
        description="Virtual brick-built music machine: clock, beatbox and melody sequencer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    render = sub.add_parser("render", help="render a snapshot offline")
    _add_board_args(render)
    render.add_argument("--out", metavar="PATH", default="-",
                        help="output file; .mid/.midi/.smf selects SMF, otherwise raw bytes")

    play = sub.add_parser("play", help="play in real time, raw bytes to --out")
    _add_board_args(play)
    play.add_argument("--out", metavar="PATH", default="-", help="output file (default stdout)")

    serve = sub.add_parser("serve", help="serve the live session endpoint")
    _add_board_args(serve, with_cycles=False)
    serve.add_argument("--listen", type=_address, default=("127.0.0.1", 8765),
                       metavar="HOST:PORT", help="bind address (default 127.0.0.1:8765)")

    analyze = sub.add_parser("analyze", help="tower-readout misread rates under tolerances")
    analyze.add_argument("--trials", type=int, default=100_000, help="Monte Carlo draws per height")
    analyze.add_argument("--seed", type=int, default=0, help="random seed")
    return parser


def _load(args) -> tuple[Snapshot, PipelineSpec]:
    snapshot = load_snapshot(args.snapshot) if args.snapshot else Snapshot()
    snapshot = with_overrides(snapshot, bpm=args.bpm, frame_order=args.frame_order)
    return snapshot, PipelineSpec(beatbox=not args.no_beatbox, melody=not args.no_melody)


def _write(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as handle:
            handle.write(data)


def _cmd_render(args) -> int:
    snapshot, pipeline = _load(args)
    if args.out.lower().endswith((".mid", ".midi", ".smf")):
        data = export_smf(
            snapshot,
            args.cycles,
            include_rhythm=pipeline.beatbox,
            include_melody=pipeline.melody,
        )
    else:
        data = run_offline(snapshot, args.cycles, pipeline)
    _write(args.out, data)
    return 0


def _cmd_play(args) -> int:
    snapshot, pipeline = _load(args)
    engine = SessionEngine(snapshot, pipeline, cycles=args.cycles)
    events = engine.subscribe()
    out = sys.stdout.buffer if args.out == "-" else open(args.out, "wb")
    try:
        engine.start()
        while True:
            try:
                event = events.get(timeout=0.25)
            except queue.Empty:
                if not engine.running:
                    break
                continue
            if event is None:
                break
            if event.get("event") == "midi":
                out.write(bytes.fromhex(event["bytes"]))
                out.flush()
    except KeyboardInterrupt:
        pass
    finally:
        engine.close()
        if out is not sys.stdout.buffer:
            out.close()
    return 0


def _cmd_serve(args) -> int:
    snapshot, pipeline = _load(args)
    session = run_live(snapshot, pipeline, endpoint=args.listen)
    host, port = session.address
    print(f"listening on {host}:{port}", flush=True)
    try:
        threading.Event().wait()
    except KeyboardInterrupt:
        pass
    finally:
        session.close()
    return 0


def _cmd_analyze(args) -> int:
    print(f"tower readout misreads over {args.trials} draws (seed {args.seed})")
    print(f"{'height':>6}  {'plays':<5}  {'misread_rate':>12}")
    for n in range(12):
        label = note_name(n) if n else "rest"
        rate = misclassification_rate(n, args.trials, args.seed)
        print(f"{n:>6}  {label:<5}  {rate:>12.6f}")
    return 0


_COMMANDS = {
    "render": _cmd_render,
    "play": _cmd_play,
    "serve": _cmd_serve,
    "analyze": _cmd_analyze,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ParseError, RangeError, ConfigError, StreamError) as exc:
        print(f"brickbox: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
