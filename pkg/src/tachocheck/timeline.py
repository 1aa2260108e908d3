"""Time model for second-resolution driver activity traces.

Instants are integer seconds counted from a fixed epoch. By convention the
epoch falls on a Monday 00:00, so calendar weeks (Monday 00:00 through
Sunday 24:00) are epoch-aligned and week arithmetic needs no real-world
calendar. Leap seconds are never fetched from anywhere: they are supplied
explicitly as a table of end-of-Sunday adjustments and default to none.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

SECONDS_PER_MINUTE = 60
SECONDS_PER_DAY = 86400
SECONDS_PER_WEEK = 7 * SECONDS_PER_DAY


class TraceError(ValueError):
    """Invalid trace data or an ill-posed time computation."""


class TraceParseError(TraceError):
    """Trace text does not follow the record format."""


class WeekUndefinedError(TraceError):
    """Letter-policy week lookup on a Sunday whose 24:00 instant does not exist."""


class Activity(Enum):
    DRIVING = "DRIVING"
    REST = "REST"
    OTHER_WORK = "OTHER_WORK"

    @property
    def code(self) -> int:
        return _CODE_BY_ACTIVITY[self]


_CODE_BY_ACTIVITY = {
    Activity.DRIVING: ord("D"),
    Activity.REST: ord("R"),
    Activity.OTHER_WORK: ord("O"),
}
ACTIVITY_BY_CODE = {code: act for act, code in _CODE_BY_ACTIVITY.items()}
_ACTIVITY_BY_NAME = {act.value: act for act in Activity}

_RUN_RE = re.compile(rb"(.)\1*", re.DOTALL)


class WeekPolicy(Enum):
    LETTER = "Letter"
    SPIRIT = "Spirit"


@dataclass(frozen=True)
class LeapSecond:
    """A one-second adjustment at the end of the Sunday closing the given week."""

    sunday_index: int
    delta: int  # +1 second inserted, -1 second removed

    def __post_init__(self) -> None:
        if self.delta not in (-1, 1):
            raise TraceError(f"leap second delta must be -1 or +1, got {self.delta}")


def parse_leap_table(text: str) -> tuple[LeapSecond, ...]:
    """Parse a JSON list of {"sunday_index": int, "delta": -1|+1} entries."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceError(f"leap table is not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise TraceError("leap table must be a JSON list")
    entries = []
    for item in raw:
        if not isinstance(item, dict) or set(item) != {"sunday_index", "delta"}:
            raise TraceError(f"bad leap table entry: {item!r}")
        entries.append(LeapSecond(int(item["sunday_index"]), int(item["delta"])))
    return tuple(entries)


@dataclass(frozen=True)
class TimeGrid:
    """Phase of the minute grid: minute boundaries sit at offset (mod 60)."""

    minute_offset_seconds: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.minute_offset_seconds < SECONDS_PER_MINUTE:
            raise TraceError(
                f"grid offset must be in [0, 60), got {self.minute_offset_seconds}"
            )

    def minute_start(self, index: int) -> int:
        return index * SECONDS_PER_MINUTE + self.minute_offset_seconds

    def minute_index(self, t: int) -> int:
        """Index of the grid minute containing instant t."""
        return (t - self.minute_offset_seconds) // SECONDS_PER_MINUTE

    def first_full_minute(self, t: int) -> int:
        """Index of the first grid minute starting at or after t."""
        return -((self.minute_offset_seconds - t) // SECONDS_PER_MINUTE)


@dataclass(frozen=True)
class SecondTrace:
    """Contiguous per-second activity samples starting at a given instant.

    Samples are stored expanded, one byte per second (codes D/R/O), which
    keeps multi-week traces cheap to slice and label.
    """

    start: int
    samples: bytes

    def __post_init__(self) -> None:
        if not self.samples:
            raise TraceError("trace must cover at least one second")
        bad = set(self.samples) - set(ACTIVITY_BY_CODE)
        if bad:
            raise TraceError(f"unknown activity codes in samples: {sorted(bad)}")

    @classmethod
    def from_runs(cls, start: int, runs: Iterable[tuple[Activity, int]]) -> "SecondTrace":
        chunks = []
        for activity, seconds in runs:
            if seconds <= 0:
                raise TraceError(f"run duration must be positive, got {seconds}")
            chunks.append(bytes([activity.code]) * seconds)
        return cls(start, b"".join(chunks))

    @property
    def duration(self) -> int:
        return len(self.samples)

    @property
    def end(self) -> int:
        return self.start + len(self.samples)

    def activity_at(self, t: int) -> Activity:
        if not self.start <= t < self.end:
            raise TraceError(f"instant {t} outside trace [{self.start}, {self.end})")
        return ACTIVITY_BY_CODE[self.samples[t - self.start]]

    def activities(self) -> Iterator[Activity]:
        for code in self.samples:
            yield ACTIVITY_BY_CODE[code]

    def runs(self) -> Iterator[tuple[Activity, int, int]]:
        """Yield maximal (activity, start instant, seconds) runs."""
        pos = self.start
        for match in _RUN_RE.finditer(self.samples):
            length = match.end() - match.start()
            yield ACTIVITY_BY_CODE[match.group()[0]], pos, length
            pos += length

    def truncated(self, end: int) -> "SecondTrace":
        """The prefix of this trace strictly before instant `end`."""
        if end <= self.start:
            raise TraceError("truncation would leave an empty trace")
        return SecondTrace(self.start, self.samples[: end - self.start])

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.start}:".encode("ascii"))
        h.update(self.samples)
        return h.hexdigest()

    def to_records(self) -> str:
        lines = [
            f"{start},{activity.value},{seconds}"
            for activity, start, seconds in self.runs()
        ]
        return "\n".join(lines) + "\n"


def parse_trace(data: bytes | str) -> SecondTrace:
    """Parse the record-per-line text format into an expanded trace.

    Each record is `start_second,ACTIVITY,duration_seconds`; records must be
    sorted and contiguous. Blank lines and lines starting with '#' are skipped.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise TraceParseError(f"trace is not ASCII text: {exc}") from exc
    else:
        text = data

    records: list[tuple[int, Activity, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise TraceParseError(
                f"line {lineno}: expected 'start,ACTIVITY,duration', got {line!r}"
            )
        try:
            start = int(parts[0])
            duration = int(parts[2])
        except ValueError:
            raise TraceParseError(f"line {lineno}: non-integer field in {line!r}") from None
        name = parts[1].strip()
        if name not in _ACTIVITY_BY_NAME:
            raise TraceParseError(f"line {lineno}: unknown activity {name!r}")
        if duration <= 0:
            raise TraceParseError(f"line {lineno}: duration must be positive")
        records.append((start, _ACTIVITY_BY_NAME[name], duration))

    if not records:
        raise TraceParseError("trace contains no records")

    chunks = []
    expected = records[0][0]
    for start, activity, duration in records:
        if start < expected:
            raise TraceParseError(
                f"records overlap or are unsorted at second {start} (expected {expected})"
            )
        if start > expected:
            raise TraceParseError(
                f"gap of {start - expected} s before record starting at second {start}"
            )
        chunks.append(bytes([activity.code]) * duration)
        expected = start + duration
    return SecondTrace(records[0][0], b"".join(chunks))


def week_start(week: int, leap_table: Sequence[LeapSecond] = ()) -> int:
    """Instant at which the given calendar week begins (Monday 00:00)."""
    base = week * SECONDS_PER_WEEK
    return base + sum(ls.delta for ls in leap_table if ls.sunday_index < week)


def week_of(
    t: int,
    policy: WeekPolicy = WeekPolicy.SPIRIT,
    leap_table: Sequence[LeapSecond] = (),
) -> int:
    """Calendar week containing instant t.

    Under the Spirit policy a week simply ends when its Sunday ends, leap
    seconds included. Under the Letter policy a negative leap second on the
    closing Sunday removes the Sunday-24:00 instant the week definition
    hangs on, so the lookup is refused.
    """
    week = t // SECONDS_PER_WEEK
    while t < week_start(week, leap_table):
        week -= 1
    while t >= week_start(week + 1, leap_table):
        week += 1
    if policy is WeekPolicy.LETTER:
        for ls in leap_table:
            if ls.sunday_index == week and ls.delta == -1:
                raise WeekUndefinedError(
                    f"week {week}: its Sunday ends at 23:59:59 and the 24:00 "
                    "instant the week definition refers to does not exist"
                )
    return week


def shift_grid(trace: SecondTrace, offset: int) -> SecondTrace:
    """Displace a trace by `offset` seconds without changing its content.

    Used to compare how the same physical recording reads against two minute
    grids whose origins differ, e.g. timestamps with and without accumulated
    leap seconds.
    """
    return SecondTrace(trace.start + offset, trace.samples)
