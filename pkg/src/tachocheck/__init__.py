"""Compliance engine for driver-hours rules over second-resolution traces."""

from .timeline import (
    Activity,
    LeapSecond,
    SecondTrace,
    TimeGrid,
    TraceError,
    TraceParseError,
    WeekPolicy,
    WeekUndefinedError,
    parse_leap_table,
    parse_trace,
    shift_grid,
    week_of,
    week_start,
)
from .minutes import MinuteTrace, Rule51Semantics, label_minutes, label_rule52
from .periods import (
    DailyDrivingSpan,
    Period,
    PeriodKind,
    accumulate_driving,
    classify_rests,
    daily_driving_spans,
)
from .profiles import (
    DivergenceReport,
    ExtendedAttribution,
    InterpretationProfile,
    ProfileError,
    WeeklyGapSemantics,
    builtin_profiles,
    diff_verdicts,
    load_profile,
    parse_profile,
)
from .rules import (
    Report,
    Violation,
    check_all,
    check_article7,
    check_article61,
    check_article82,
    check_article86,
    complete_weeks,
    solve_weekly_rests,
)

__version__ = "0.1.0"
