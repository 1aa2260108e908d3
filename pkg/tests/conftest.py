"""Shared trace-building helpers."""

from __future__ import annotations

from tachocheck.timeline import SECONDS_PER_WEEK, Activity, SecondTrace

HOUR = 3600
D = Activity.DRIVING
R = Activity.REST
O = Activity.OTHER_WORK


def trace_of(*runs: tuple[Activity, int], start: int = 0) -> SecondTrace:
    return SecondTrace.from_runs(start, runs)


def minutes_of(*runs: tuple[Activity, int], start: int = 0) -> SecondTrace:
    """Like trace_of but with durations given in minutes."""
    return SecondTrace.from_runs(start, [(a, m * 60) for a, m in runs])


def day_cycle() -> list[tuple[Activity, int]]:
    """A 23-hour block that satisfies every rule: 8 h driving split by a
    full break, padding work, then a 9 h daily rest."""
    return [(D, 4 * HOUR), (R, 1 * HOUR), (D, 4 * HOUR), (O, 5 * HOUR), (R, 9 * HOUR)]


def week_runs(weekly_rest_hours: int) -> list[tuple[Activity, int]]:
    """One full calendar week: a leading weekly rest, then day cycles."""
    runs: list[tuple[Activity, int]] = [(R, weekly_rest_hours * HOUR)]
    gap = SECONDS_PER_WEEK - weekly_rest_hours * HOUR
    cycles, remainder = divmod(gap, 23 * HOUR)
    for _ in range(cycles):
        runs.extend(day_cycle())
    if remainder:
        runs.append((O, remainder))
    return runs
