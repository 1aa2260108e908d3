"""Second-to-minute activity labeling.

Minute labeling happens in two layers. First each complete calendar minute
takes the label of the longest continuous activity run inside it, ties going
to the latest of the equally long runs. Second, any minute whose two
neighbouring minutes are both driving is upgraded to driving.

What exactly makes a neighbour "driving" for the second layer is not pinned
down by the rule text, so it is a configurable semantics here rather than a
silent choice:

- NeighborRule52: neighbours are judged by their first-layer labels and the
  upgrade runs in a single pass.
- NeighborRaw: a neighbour counts only if every one of its raw seconds is
  driving.
- Fixpoint: the NeighborRule52 pass is re-applied until stable. (A single
  pass is provably already stable: an upgrade needs both raw-layer
  neighbours labeled driving, and an upgraded neighbour would itself have
  needed this minute to be driving already. The mode exists so the reading
  can be selected and audited, not because it changes results.)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .timeline import (
    ACTIVITY_BY_CODE,
    SECONDS_PER_MINUTE,
    Activity,
    SecondTrace,
    TimeGrid,
    TraceError,
)


class TraceTooShortError(TraceError):
    """Trace does not cover a single complete minute on the grid."""


class Rule51Semantics(Enum):
    NEIGHBOR_RAW = "NeighborRaw"
    NEIGHBOR_RULE52 = "NeighborRule52"
    FIXPOINT = "Fixpoint"


@dataclass(frozen=True)
class MinuteTrace:
    """One activity label per complete calendar minute of the source trace."""

    start_minute: int
    labels: tuple[Activity, ...]
    grid: TimeGrid

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def start_instant(self) -> int:
        return self.grid.minute_start(self.start_minute)

    @property
    def end_instant(self) -> int:
        return self.grid.minute_start(self.start_minute + len(self.labels))

    def minute_instant(self, index: int) -> int:
        """Instant at which minute `index` (relative to this trace) begins."""
        return self.grid.minute_start(self.start_minute + index)

    def driving_minutes(self) -> int:
        return self.labels.count(Activity.DRIVING)

    def label_runs(self) -> Iterator[tuple[Activity, int, int]]:
        """Yield maximal (activity, first minute index, minute count) runs."""
        index = 0
        for activity, group in itertools.groupby(self.labels):
            count = len(list(group))
            yield activity, index, count
            index += count

    def driving_between(self, start: int, end: int) -> int:
        """Count driving-labeled minutes in the instant range [start, end)."""
        lo = max(0, (start - self.start_instant) // SECONDS_PER_MINUTE)
        hi = min(len(self.labels), (end - self.start_instant) // SECONDS_PER_MINUTE)
        return self.labels[lo:hi].count(Activity.DRIVING)

    def to_records(self) -> str:
        """Serialize to the trace record format at 60-second granularity."""
        lines = []
        for activity, index, count in self.label_runs():
            start = self.minute_instant(index)
            lines.append(f"{start},{activity.value},{count * SECONDS_PER_MINUTE}")
        return "\n".join(lines) + "\n"


def _minute_window(trace: SecondTrace, grid: TimeGrid, minute: int) -> bytes:
    offset = grid.minute_start(minute) - trace.start
    return trace.samples[offset : offset + SECONDS_PER_MINUTE]


def _longest_latest(window: bytes) -> Activity:
    # Scan runs; ">=" hands ties to the run seen later.
    best_len = 0
    best_code = window[0]
    run_len = 0
    prev = -1
    for code in window:
        if code == prev:
            run_len += 1
        else:
            prev = code
            run_len = 1
        if run_len >= best_len:
            best_len = run_len
            best_code = code
    return ACTIVITY_BY_CODE[best_code]


def label_rule52(trace: SecondTrace, grid: TimeGrid) -> MinuteTrace:
    """First-layer labels: longest continuous activity, latest wins ties.

    Partial minutes at the trace edges are dropped; they would have to be
    padded with invented data to be labeled.
    """
    first = grid.first_full_minute(trace.start)
    count = (trace.end - grid.minute_offset_seconds) // SECONDS_PER_MINUTE - first
    if count < 1:
        raise TraceTooShortError(
            "trace does not cover a complete minute on the given grid"
        )
    labels = []
    for minute in range(first, first + count):
        window = _minute_window(trace, grid, minute)
        head = window[0]
        if window.count(head) == SECONDS_PER_MINUTE:
            labels.append(ACTIVITY_BY_CODE[head])
        else:
            labels.append(_longest_latest(window))
    return MinuteTrace(first, tuple(labels), grid)


def _upgrade_pass(labels: list[Activity], neighbor_is_driving: list[bool]) -> list[Activity]:
    out = list(labels)
    for i in range(1, len(labels) - 1):
        if (
            labels[i] is not Activity.DRIVING
            and neighbor_is_driving[i - 1]
            and neighbor_is_driving[i + 1]
        ):
            out[i] = Activity.DRIVING
    return out


def label_minutes(
    trace: SecondTrace,
    grid: TimeGrid,
    semantics: Rule51Semantics = Rule51Semantics.NEIGHBOR_RULE52,
) -> MinuteTrace:
    """Full minute labeling: first-layer labels plus the driving upgrade.

    The first and last minutes never have two neighbours, so they are never
    upgraded under any semantics.
    """
    base = label_rule52(trace, grid)
    labels = list(base.labels)

    if semantics is Rule51Semantics.NEIGHBOR_RULE52:
        driving = [label is Activity.DRIVING for label in labels]
        labels = _upgrade_pass(labels, driving)
    elif semantics is Rule51Semantics.NEIGHBOR_RAW:
        all_driving = []
        for minute in range(base.start_minute, base.start_minute + len(labels)):
            window = _minute_window(trace, grid, minute)
            all_driving.append(window.count(Activity.DRIVING.code) == SECONDS_PER_MINUTE)
        labels = _upgrade_pass(labels, all_driving)
    elif semantics is Rule51Semantics.FIXPOINT:
        # Each pass only adds driving labels, so this stabilises within
        # len(labels) passes; in practice it stabilises after one.
        for _ in range(len(labels) + 1):
            driving = [label is Activity.DRIVING for label in labels]
            new_labels = _upgrade_pass(labels, driving)
            if new_labels == labels:
                break
            labels = new_labels
    else:  # pragma: no cover - closed enum
        raise TraceError(f"unknown semantics {semantics!r}")

    return MinuteTrace(base.start_minute, tuple(labels), grid)
