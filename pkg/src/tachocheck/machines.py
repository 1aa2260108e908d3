"""Three fixed register programs under a fuel-bounded interpreter.

The programs form a closed set: one that always halts, one that never
halts, and the 3n+1 iteration whose halting status is open in general. The
interpreter never claims a program loops — running out of fuel yields an
explicitly inconclusive outcome, since no amount of cleverness decides
halting in general.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Program(Enum):
    DECREMENT = "decrement"
    INCREMENT_FOREVER = "increment-forever"
    COLLATZ = "collatz"


@dataclass(frozen=True)
class Halted:
    steps: int
    trajectory: tuple[int, ...]


@dataclass(frozen=True)
class FuelExhausted:
    last_value: int


Outcome = Halted | FuelExhausted


class HaltsVerdict(Enum):
    HALTS = "Halts"
    UNKNOWN = "Unknown"


def _is_halt_state(program: Program, value: int) -> bool:
    if program is Program.DECREMENT:
        return value == 0
    if program is Program.COLLATZ:
        return value == 1
    return False  # INCREMENT_FOREVER has no halt state


def _step(program: Program, value: int) -> int:
    if program is Program.DECREMENT:
        return value - 1
    if program is Program.INCREMENT_FOREVER:
        return value + 1
    if value % 2 == 0:
        return value // 2
    return 3 * value + 1


def run(program: Program, value: int, fuel: int) -> Outcome:
    """Execute up to `fuel` steps, recording every register value.

    Registers are arbitrary precision; the 3n+1 iteration overflows fixed
    words for plenty of inputs.
    """
    if fuel < 1:
        raise ValueError(f"fuel must be at least 1, got {fuel}")
    if value < 0:
        raise ValueError(f"input must be a natural number, got {value}")
    trajectory = [value]
    steps = 0
    while steps < fuel:
        if _is_halt_state(program, value):
            return Halted(steps, tuple(trajectory))
        value = _step(program, value)
        trajectory.append(value)
        steps += 1
    if _is_halt_state(program, value):
        return Halted(steps, tuple(trajectory))
    return FuelExhausted(value)


def bounded_halts(program: Program, value: int, fuel: int) -> HaltsVerdict:
    """Halts when a run finishes within fuel; otherwise Unknown, never 'loops'."""
    outcome = run(program, value, fuel)
    return HaltsVerdict.HALTS if isinstance(outcome, Halted) else HaltsVerdict.UNKNOWN
