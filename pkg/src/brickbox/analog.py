"""Analog model of the pitch-tower readout chain.

A tower of n modified bricks puts n identical resistors in parallel; the
stack forms the lower leg of a voltage divider whose midpoint is read by
a 10-bit ADC.  The resulting digital output code (DOC) falls as bricks
are added, and a note is decided by which interval around the ideal code
of each note the reading lands in.  Interval boundaries sit at the
midpoints between adjacent ideal codes; readings above the midpoint
between note 1 and the open-circuit full-scale code read as a rest.

Resistor tolerances (5% per brick, 10% for the reference) smear the code
each tower produces; :func:`sample_tower` draws one toleranced reading and
:func:`misclassification_rate` estimates how often a tower of a given
height decodes to the wrong note.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RangeError

MAX_BRICKS = 11  # tallest decodable tower: one chromatic octave minus one


@dataclass(frozen=True)
class ResistorModel:
    """Electrical parameters of the divider and converter.

    Resistances are in kilo-ohms, tolerances are fractions of the nominal
    value, ``adc_levels`` is the number of converter codes (2^bits).
    """

    r_brick: float = 50.0
    r_ref: float = 10.0
    tol_brick: float = 0.05
    tol_ref: float = 0.10
    v_in: float = 3.3
    adc_levels: int = 1024

    def __post_init__(self) -> None:
        if self.r_brick <= 0 or self.r_ref <= 0 or self.v_in <= 0:
            raise ValueError("resistances and supply voltage must be positive")
        if not (0 <= self.tol_brick < 1 and 0 <= self.tol_ref < 1):
            raise ValueError("tolerances must be fractions in [0, 1)")
        if self.adc_levels < 2 or self.adc_levels & (self.adc_levels - 1):
            raise ValueError("adc_levels must be a power of two")


NOMINAL = ResistorModel()


@dataclass(frozen=True)
class PitchTower:
    """A stack of 0-11 bricks encoding one quarter-note's pitch."""

    n_bricks: int

    def __post_init__(self) -> None:
        if not 0 <= self.n_bricks <= MAX_BRICKS:
            raise RangeError(f"tower height {self.n_bricks} not in 0-{MAX_BRICKS}")


@dataclass(frozen=True)
class AnalogReading:
    """One readout: stack resistance (None = open circuit), voltage, code."""

    z2: float | None
    v_out: float
    doc: int


@dataclass(frozen=True)
class Note:
    """Decoded note: index 1 is the lowest pitch (C4), 11 the highest."""

    index: int


@dataclass(frozen=True)
class Rest:
    """No tower on the step: the quarter is silent."""


NoteDecision = Note | Rest
REST = Rest()


def stack_resistance(n: int, model: ResistorModel = NOMINAL) -> float | None:
    """Equivalent resistance of n stacked bricks; None for an empty step.

    Stacking connects the per-brick resistors in parallel, so the stack
    reads ``r_brick / n``.
    """
    if not 0 <= n <= MAX_BRICKS:
        raise RangeError(f"tower height {n} not in 0-{MAX_BRICKS}")
    if n == 0:
        return None
    return model.r_brick / n


def divider_voltage(z2: float | None, model: ResistorModel = NOMINAL) -> float:
    """Divider midpoint voltage for a lower-leg resistance of ``z2`` kΩ.

    An open circuit (None) draws no current, so the midpoint sits at the
    supply rail.
    """
    if z2 is None:
        return model.v_in
    return model.v_in * z2 / (model.r_ref + z2)


def adc_code(v: float, model: ResistorModel = NOMINAL) -> int:
    """Quantize a voltage to the converter's integer output code.

    Truncating quantization; the full-scale input maps to the top code
    rather than one past it.
    """
    if not 0 <= v <= model.v_in:
        raise RangeError(f"voltage {v} outside 0-{model.v_in}")
    return min(model.adc_levels - 1, math.floor(model.adc_levels * v / model.v_in))


def ideal_doc(i: int) -> float:
    """Centre of note i's decision interval: the code an ideal tower of
    i bricks produces, kept as a real number (no quantization).

    With nominal values this is 1024·(50/i)/(10 + 50/i) = 5120/(i + 5).
    """
    if not 1 <= i <= MAX_BRICKS:
        raise RangeError(f"note index {i} not in 1-{MAX_BRICKS}")
    return NOMINAL.adc_levels * NOMINAL.r_brick / (NOMINAL.r_ref * i + NOMINAL.r_brick)


# Decision geometry, precomputed from the ideal codes.  _LOWER[k] is the
# lower bound of note k+1's interval (midpoint with the next note down the
# voltage scale); REST_THRESHOLD extends the midpoint rule to the
# open-circuit full-scale code.  Note 11's interval reaches down to 0.
_IDEAL = tuple(ideal_doc(i) for i in range(1, MAX_BRICKS + 1))
REST_THRESHOLD = (_IDEAL[0] + (NOMINAL.adc_levels - 1)) / 2
_LOWER = tuple((_IDEAL[k] + _IDEAL[k + 1]) / 2 for k in range(MAX_BRICKS - 1))


def decide_note(doc: float) -> NoteDecision:
    """Map a converter code in 0-1023 to a note or a rest.

    A code exactly on an interval boundary resolves to the lower note
    index (the higher-voltage side).
    """
    if doc > REST_THRESHOLD:
        return REST
    for i, lower in enumerate(_LOWER, start=1):
        if doc >= lower:
            return Note(i)
    return Note(MAX_BRICKS)


def expected_decision(n: int) -> NoteDecision:
    """The decision a perfect readout of an n-brick tower produces."""
    if not 0 <= n <= MAX_BRICKS:
        raise RangeError(f"tower height {n} not in 0-{MAX_BRICKS}")
    return REST if n == 0 else Note(n)


def sample_tower(
    n: int, model: ResistorModel = NOMINAL, rng: np.random.Generator | None = None
) -> AnalogReading:
    """Read an n-brick tower once with toleranced resistors.

    Each brick resistor is drawn independently and uniformly from its
    tolerance band, as is the reference; the reading then follows the
    nominal chain with the sampled values.  ``rng`` is caller-owned so
    studies are reproducible.
    """
    if not 0 <= n <= MAX_BRICKS:
        raise RangeError(f"tower height {n} not in 0-{MAX_BRICKS}")
    if rng is None:
        rng = np.random.default_rng()
    u = rng.random(n + 1)  # n brick draws, then the reference draw
    bricks = model.r_brick * (1.0 - model.tol_brick) + u[:n] * (2.0 * model.tol_brick * model.r_brick)
    z1 = model.r_ref * (1.0 - model.tol_ref) + float(u[n]) * (2.0 * model.tol_ref * model.r_ref)
    if n == 0:
        z2 = None
        v = model.v_in
    else:
        z2 = float(1.0 / np.sum(1.0 / bricks))
        v = model.v_in * z2 / (z1 + z2)
    return AnalogReading(z2, v, adc_code(v, model))


def misclassification_rate(
    n: int, trials: int, seed: int, model: ResistorModel = NOMINAL
) -> float:
    """Fraction of toleranced readings of an n-brick tower that decode to
    the wrong decision, over ``trials`` Monte Carlo draws.

    Deterministic for a given seed.  The sampling is vectorized but draws
    the exact same values as ``trials`` successive :func:`sample_tower`
    calls on ``default_rng(seed)``.
    """
    if not 0 <= n <= MAX_BRICKS:
        raise RangeError(f"tower height {n} not in 0-{MAX_BRICKS}")
    if trials < 1:
        raise RangeError(f"trials {trials} must be >= 1")
    rng = np.random.default_rng(seed)
    u = rng.random((trials, n + 1))
    z1 = model.r_ref * (1.0 - model.tol_ref) + u[:, n] * (2.0 * model.tol_ref * model.r_ref)
    if n == 0:
        v = np.full(trials, model.v_in)
    else:
        bricks = model.r_brick * (1.0 - model.tol_brick) + u[:, :n] * (2.0 * model.tol_brick * model.r_brick)
        z2 = 1.0 / np.sum(1.0 / bricks, axis=1)
        v = model.v_in * z2 / (z1 + z2)
    docs = np.minimum(model.adc_levels - 1, np.floor(model.adc_levels * v / model.v_in))
    rest = docs > REST_THRESHOLD
    if n == 0:
        wrong = ~rest
    else:
        # Note index = 1 + number of interval lower bounds above the code.
        idx = 1 + np.sum(docs[:, None] < np.asarray(_LOWER)[None, :], axis=1)
        wrong = rest | (idx != n)
    return float(np.count_nonzero(wrong)) / trials
