"""Interpretation profiles: the closed ledger of ambiguity resolutions.

Every place where the rule text under-determines behaviour is a named knob
here. A profile assigns a value to every knob, so that a compliance verdict
is always relative to an explicit, auditable set of legal readings. Profiles
are data (JSON), not code.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .minutes import Rule51Semantics
from .timeline import LeapSecond, SecondTrace, TimeGrid, WeekPolicy


class ProfileError(ValueError):
    """Malformed profile data."""


class WeeklyGapSemantics(Enum):
    # Strict: driving squeezed between two weekly rests defines no daily
    # driving time at all; Spirit: every rest-to-rest stretch does.
    STRICT = "Strict"
    SPIRIT = "Spirit"


class ExtendedAttribution(Enum):
    # Which week an extended daily driving time crossing Sunday 24:00 counts
    # against.
    START_WEEK = "StartWeek"
    END_WEEK = "EndWeek"
    MINIMIZE_VIOLATIONS = "MinimizeViolations"


@dataclass(frozen=True)
class InterpretationProfile:
    id: str
    leap_week_policy: WeekPolicy = WeekPolicy.SPIRIT
    rule51: Rule51Semantics = Rule51Semantics.NEIGHBOR_RULE52
    weekly_gap: WeeklyGapSemantics = WeeklyGapSemantics.SPIRIT
    trace_edge_is_rest: bool = True
    extended_attribution: ExtendedAttribution = ExtendedAttribution.END_WEEK
    daily_rest_threshold: int = 540  # minutes; 9 h
    attached_compensation: bool = False
    grid_offset: int = 0  # seconds

    def __post_init__(self) -> None:
        if not self.id:
            raise ProfileError("profile id must be non-empty")
        if not 15 <= self.daily_rest_threshold <= 1440:
            raise ProfileError(
                f"daily_rest_threshold must be in [15, 1440] minutes, "
                f"got {self.daily_rest_threshold}"
            )
        if not 0 <= self.grid_offset < 60:
            raise ProfileError(f"grid_offset must be in [0, 60), got {self.grid_offset}")

    def grid(self) -> TimeGrid:
        return TimeGrid(self.grid_offset)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "leap_week_policy": self.leap_week_policy.value,
            "rule51": self.rule51.value,
            "weekly_gap": self.weekly_gap.value,
            "trace_edge_is_rest": self.trace_edge_is_rest,
            "extended_attribution": self.extended_attribution.value,
            "daily_rest_threshold": self.daily_rest_threshold,
            "attached_compensation": self.attached_compensation,
            "grid_offset": self.grid_offset,
        }


_KNOB_PARSERS = {
    "leap_week_policy": lambda v: _enum_value(WeekPolicy, v),
    "rule51": lambda v: _enum_value(Rule51Semantics, v),
    "weekly_gap": lambda v: _enum_value(WeeklyGapSemantics, v),
    "trace_edge_is_rest": lambda v: _bool_value(v),
    "extended_attribution": lambda v: _enum_value(ExtendedAttribution, v),
    "daily_rest_threshold": lambda v: _int_value(v),
    "attached_compensation": lambda v: _bool_value(v),
    "grid_offset": lambda v: _int_value(v),
}


def _enum_value(enum_cls, value):
    try:
        return enum_cls(value)
    except ValueError:
        choices = ", ".join(member.value for member in enum_cls)
        raise ProfileError(
            f"invalid value {value!r}; expected one of: {choices}"
        ) from None


def _bool_value(value):
    if not isinstance(value, bool):
        raise ProfileError(f"expected a boolean, got {value!r}")
    return value


def _int_value(value):
    if not isinstance(value, int) or isinstance(value, bool):
        raise ProfileError(f"expected an integer, got {value!r}")
    return value


def parse_profile(text: str, default_id: str | None = None) -> InterpretationProfile:
    """Parse a profile JSON object.

    Unknown keys are rejected so a typo cannot silently fall back to a
    default reading. Omitted knobs take the documented defaults.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileError(f"profile is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ProfileError("profile must be a JSON object")

    unknown = set(raw) - set(_KNOB_PARSERS) - {"id"}
    if unknown:
        raise ProfileError(f"unknown profile keys: {sorted(unknown)}")

    kwargs = {}
    for key, value in raw.items():
        if key == "id":
            if not isinstance(value, str):
                raise ProfileError("profile id must be a string")
            kwargs["id"] = value
            continue
        try:
            kwargs[key] = _KNOB_PARSERS[key](value)
        except ProfileError as exc:
            raise ProfileError(f"knob {key!r}: {exc}") from None

    if "id" not in kwargs:
        if default_id is None:
            raise ProfileError("profile has no id and no default was supplied")
        kwargs["id"] = default_id
    return InterpretationProfile(**kwargs)


def load_profile(path) -> InterpretationProfile:
    from pathlib import Path

    p = Path(path)
    return parse_profile(p.read_text(encoding="utf-8"), default_id=p.stem)


def builtin_profiles() -> dict[str, InterpretationProfile]:
    """Named reference profiles.

    `letter` takes every literal reading, `spirit` every purposive one;
    `unix-grid` and `utc-grid` differ only in the 27-second phase between a
    leap-second-blind minute grid and one that honours accumulated leap
    seconds.
    """
    spirit = InterpretationProfile(id="spirit")
    letter = dataclasses.replace(
        spirit,
        id="letter",
        leap_week_policy=WeekPolicy.LETTER,
        weekly_gap=WeeklyGapSemantics.STRICT,
        trace_edge_is_rest=False,
    )
    unix_grid = dataclasses.replace(spirit, id="unix-grid", grid_offset=0)
    utc_grid = dataclasses.replace(spirit, id="utc-grid", grid_offset=27)
    return {p.id: p for p in (letter, spirit, unix_grid, utc_grid)}


@dataclass(frozen=True)
class DivergenceReport:
    """Where profiles disagree about the same trace."""

    profile_ids: tuple[str, ...]
    verdicts: dict  # article -> {profile id -> violation count}
    disagreements: tuple[dict, ...]  # windows flagged by some profiles only

    @property
    def is_empty(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {
            "profiles": list(self.profile_ids),
            "verdicts": self.verdicts,
            "disagreements": [dict(d) for d in self.disagreements],
            "divergent": not self.is_empty,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def diff_verdicts(
    trace: SecondTrace,
    profiles: Sequence[InterpretationProfile],
    leap_table: Sequence[LeapSecond] = (),
) -> DivergenceReport:
    """Run the full check under each profile and report disagreements.

    Profiles are evaluated independently and merged in id order, so the
    report does not depend on the order they were supplied in.
    """
    from .rules import check_all

    if len(profiles) < 2:
        raise ProfileError("divergence needs at least two profiles")
    ordered = sorted(profiles, key=lambda p: p.id)
    ids = tuple(p.id for p in ordered)
    if len(set(ids)) != len(ids):
        raise ProfileError("profile ids must be unique")

    keys_by_profile: dict[str, set] = {}
    counts: dict[str, dict[str, int]] = {}
    for profile in ordered:
        report = check_all(trace, profile.grid(), profile, leap_table)
        keys = {(v.article, v.window_start, v.window_end) for v in report.violations}
        keys_by_profile[profile.id] = keys
        for article, _, _ in keys:
            counts.setdefault(article, {})
        for violation in report.violations:
            per_article = counts.setdefault(violation.article, {})
            per_article[violation.profile_id] = per_article.get(violation.profile_id, 0) + 1

    verdicts = {
        article: {pid: per.get(pid, 0) for pid in ids}
        for article, per in sorted(counts.items())
    }

    all_keys = sorted(set().union(*keys_by_profile.values()) if keys_by_profile else set())
    disagreements = []
    for key in all_keys:
        flagging = [pid for pid in ids if key in keys_by_profile[pid]]
        if 0 < len(flagging) < len(ids):
            article, start, end = key
            disagreements.append(
                {
                    "article": article,
                    "window": {"start": start, "end": end},
                    "profiles": flagging,
                }
            )
    return DivergenceReport(ids, verdicts, tuple(disagreements))
