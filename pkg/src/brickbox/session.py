"""Live operation: a running sequencer steered over a duplex session.

The session protocol is newline-delimited JSON over a stream socket.
Clients send command objects (``{"cmd": ...}``) and every subscriber
receives the same ordered event stream (``{"event": ...}``):

* ``state``     -- the full board snapshot, sent on connect and after
                   every accepted edit.
* ``playhead``  -- quarter (1-16) and cycle at each quarter boundary.
* ``midi``      -- one quarter's wire bytes as a lowercase hex string,
                   framed per quarter so clients never parse binary.
* ``error``     -- a rejected command; the session keeps running.

Edits mutate a pending board immediately (and are acknowledged with a
state event), but the stream only picks them up at the next quarter
boundary: the engine copies the boards once per quarter, exactly like the
hardware scan.  Tempo changes follow the same rule.
"""

from __future__ import annotations

import json
import socket
import threading
from queue import SimpleQueue

from .analog import NOMINAL, ResistorModel
from .beatbox import INSTRUMENTS, NUM_STEPS
from .boardio import Snapshot, snapshot_to_dict
from .melody import CHORD_ROWS
from .pipeline import FULL, PipelineSpec, build_frame
from .transport import (
    MAX_BPM,
    MIN_BPM,
    PPQN,
    QUARTERS_PER_CYCLE,
    TickScheduler,
    tick_period,
    validate,
)

from dataclasses import replace

from .analog import MAX_BRICKS


class SessionEngine:
    """Owns the boards and the timing thread; broadcasts ordered events.

    ``realtime=False`` runs ticks back to back (tests, offline drivers);
    ``cycles`` limits playback, None plays until stopped.
    """

    def __init__(
        self,
        snapshot: Snapshot,
        pipeline: PipelineSpec = FULL,
        model: ResistorModel = NOMINAL,
        realtime: bool = True,
        cycles: int | None = None,
    ):
        validate(snapshot.config)
        self._pending = snapshot.clone()
        self._pipeline = pipeline
        self._model = model
        self._realtime = realtime
        self._cycles = cycles
        self._lock = threading.Lock()
        self._subscribers: list[SimpleQueue] = []
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self._closed = False

    # -- subscriptions ------------------------------------------------------

    def subscribe(self) -> SimpleQueue:
        queue: SimpleQueue = SimpleQueue()
        with self._lock:
            self._subscribers.append(queue)
        return queue

    def unsubscribe(self, queue: SimpleQueue) -> None:
        with self._lock:
            if queue in self._subscribers:
                self._subscribers.remove(queue)

    def _broadcast(self, event) -> None:
        with self._lock:
            targets = list(self._subscribers)
        for queue in targets:
            queue.put(event)

    # -- state --------------------------------------------------------------

    def state_snapshot(self) -> Snapshot:
        with self._lock:
            return self._pending.clone()

    def _state_event(self) -> dict:
        with self._lock:
            return {"event": "state", "snapshot": snapshot_to_dict(self._pending)}

    def _error(self, message: str) -> None:
        self._broadcast({"event": "error", "message": message})

    # -- commands -----------------------------------------------------------

    def submit_json(self, line: str) -> None:
        """Parse one wire line and apply it; bad JSON is an error event."""
        try:
            command = json.loads(line)
        except json.JSONDecodeError as exc:
            self._error(f"bad json: {exc.msg}")
            return
        if not isinstance(command, dict):
            self._error("command must be a JSON object")
            return
        self.submit(command)

    def submit(self, command: dict) -> None:
        """Apply one command; invalid commands become error events."""
        if self._closed:
            return
        try:
            self._dispatch(command)
        except (KeyError, TypeError, ValueError) as exc:
            self._error(str(exc) or repr(exc))

    def _dispatch(self, command: dict) -> None:
        name = command.get("cmd")
        if name == "set_pad":
            instrument = command["instrument"]
            step = _int_in(command["step"], 0, NUM_STEPS - 1, "step")
            if instrument not in INSTRUMENTS:
                raise ValueError(f"unknown instrument {instrument!r}")
            with self._lock:
                self._pending.grid.set_pad(instrument, step, bool(command["on"]))
        elif name == "set_tower":
            step = _int_in(command["step"], 0, NUM_STEPS - 1, "step")
            height = _int_in(command["height"], 0, MAX_BRICKS, "height")
            with self._lock:
                self._pending.board.set_tower(step, height)
        elif name == "set_chord":
            step = _int_in(command["step"], 0, NUM_STEPS - 1, "step")
            row = command["row"]
            if row not in CHORD_ROWS:
                raise ValueError(f"chord row must be one of {CHORD_ROWS}")
            with self._lock:
                self._pending.board.set_chord(step, row, bool(command["on"]))
        elif name == "set_bpm":
            bpm = _int_in(command["value"], MIN_BPM, MAX_BPM, "bpm")
            with self._lock:
                self._pending.config = replace(self._pending.config, bpm=bpm)
        elif name == "transport":
            action = command.get("action")
            if action == "start":
                self.start()
            elif action == "stop":
                self.stop()
            else:
                raise ValueError(f"transport action must be start or stop, got {action!r}")
            return  # transport changes carry no state edit
        elif name == "get_state":
            self._broadcast(self._state_event())
            return
        else:
            raise ValueError(f"unknown command {name!r}")
        self._broadcast(self._state_event())

    # -- playback -----------------------------------------------------------

    @property
    def running(self) -> bool:
        return self._thread is not None and self._thread.is_alive()

    def start(self) -> None:
        """Begin playback at quarter 1, cycle 1.  No-op while running."""
        if self.running or self._closed:
            return
        self._stop.clear()
        self._thread = threading.Thread(target=self._run, name="brickbox-clock", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        """Halt playback.  Idempotent."""
        self._stop.set()

    def wait(self, timeout: float | None = None) -> None:
        if self._thread is not None:
            self._thread.join(timeout)

    def close(self) -> None:
        """Stop playback and release subscribers (their queues get None)."""
        if self._closed:
            return
        self._closed = True
        self.stop()
        self.wait(timeout=2.0)
        self._broadcast(None)

    def _period(self, config) -> float:
        return tick_period(config.bpm) if self._realtime else 0.0

    def _run(self) -> None:
        with self._lock:
            active = self._pending.clone()
        scheduler = TickScheduler(self._period(active.config))
        total_ticks = None if self._cycles is None else self._cycles * QUARTERS_PER_CYCLE * PPQN

        def on_tick(k: int) -> None:
            if k % PPQN:
                return
            quarter = (k // PPQN) % QUARTERS_PER_CYCLE + 1
            cycle = k // (PPQN * QUARTERS_PER_CYCLE) + 1
            with self._lock:
                active = self._pending.clone()
            scheduler.set_period(self._period(active.config))
            frame = build_frame(active, quarter, self._pipeline, self._model)
            payload = frame.to_bytes(active.config.frame_order)
            self._broadcast({"event": "playhead", "quarter": quarter, "cycle": cycle})
            self._broadcast(
                {"event": "midi", "quarter": quarter, "cycle": cycle, "bytes": payload.hex()}
            )

        scheduler.run(on_tick, ticks=total_ticks, stop=self._stop)


def _int_in(value, low: int, high: int, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{what} must be an integer, got {value!r}")
    if not low <= value <= high:
        raise ValueError(f"{what} {value} not in {low}-{high}")
    return value


class SessionServer:
    """Serves one engine's session over TCP, newline-delimited JSON."""

    def __init__(self, engine: SessionEngine, host: str = "127.0.0.1", port: int = 0):
        self.engine = engine
        self._listener = socket.create_server((host, port))
        self.address = self._listener.getsockname()[:2]
        self._closing = False
        self._accept_thread = threading.Thread(
            target=self._accept_loop, name="brickbox-accept", daemon=True
        )
        self._accept_thread.start()

    def _accept_loop(self) -> None:
        while not self._closing:
            try:
                conn, _ = self._listener.accept()
            except OSError:
                return
            threading.Thread(
                target=self._serve_client, args=(conn,), name="brickbox-client", daemon=True
            ).start()

    def _serve_client(self, conn: socket.socket) -> None:
        queue = self.engine.subscribe()
        queue.put(self.engine._state_event())  # connecting clients see the board

        def write_loop() -> None:
            try:
                while True:
                    event = queue.get()
                    if event is None:
                        break
                    conn.sendall(json.dumps(event).encode() + b"\n")
            except OSError:
                pass
            finally:
                self.engine.unsubscribe(queue)
                try:
                    conn.shutdown(socket.SHUT_RDWR)
                except OSError:
                    pass
                conn.close()

        writer = threading.Thread(target=write_loop, name="brickbox-write", daemon=True)
        writer.start()
        try:
            reader = conn.makefile("r", encoding="utf-8")
            for line in reader:
                if line.strip():
                    self.engine.submit_json(line)
        except (OSError, ValueError):
            pass
        finally:
            queue.put(None)  # unblock and finish the writer

    def close(self) -> None:
        self._closing = True
        try:
            self._listener.close()
        except OSError:
            pass


class LiveSession:
    """Handle for a served live session: engine plus its TCP endpoint."""

    def __init__(self, engine: SessionEngine, server: SessionServer):
        self.engine = engine
        self.server = server

    @property
    def address(self) -> tuple[str, int]:
        return self.server.address

    def close(self) -> None:
        self.server.close()
        self.engine.close()


def run_live(
    snapshot: Snapshot,
    pipeline: PipelineSpec = FULL,
    endpoint: tuple[str, int] = ("127.0.0.1", 0),
    model: ResistorModel = NOMINAL,
    realtime: bool = True,
    cycles: int | None = None,
) -> LiveSession:
    """Bind a session endpoint around a fresh engine and return its handle."""
    engine = SessionEngine(snapshot, pipeline, model, realtime=realtime, cycles=cycles)
    host, port = endpoint
    server = SessionServer(engine, host, port)
    return LiveSession(engine, server)
