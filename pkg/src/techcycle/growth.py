"""Logistic S-curve algebra and the power-law substitution model.

Two technologies growing along logistic curves obey an exact relation
between their odds transforms; in the early phase (levels far below
capacity) that relation collapses to a power law whose exponent is the
ratio of the two growth rates.  This module implements the curves, the
exact relation, the early-phase power law, and the log-log fit used to
estimate it from data.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, InsufficientDataError, ValidationError
from .market_data import RevenueSeries, positive_overlap_window
from .regress import OlsFit, ols_simple

__all__ = [
    "LogisticParams",
    "LogisticFit",
    "OddsRelation",
    "Regime",
    "SubstitutionFit",
    "logistic_value",
    "log_odds",
    "fit_logistic",
    "odds_relation",
    "implied_exponent",
    "allometric_coefficients",
    "fit_substitution",
    "classify_regime",
]


@dataclass(frozen=True)
class LogisticParams:
    """Parameters of ``level(t) = k / (1 + exp(a - b * t))``.

    ``k`` is the equilibrium level, ``b`` the growth rate per year, and the
    inflection sits at ``t = a / b`` where the level equals ``k / 2``.
    """

    k: float
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValidationError(f"equilibrium level must be positive, got {self.k}")
        if not math.isfinite(self.a):
            raise ValidationError(f"location constant must be finite, got {self.a}")
        if not (math.isfinite(self.b) and self.b > 0):
            raise ValidationError(f"growth rate must be positive, got {self.b}")

    @property
    def inflection(self) -> float:
        return self.a / self.b


@dataclass(frozen=True)
class LogisticFit:
    """Grid-search estimate of logistic parameters from a revenue series.

    ``degenerate`` is set when the linearized regression finds no usable
    growth (e.g. a series already saturated at a constant level); ``k`` is
    still meaningful in that case but ``params`` cannot be constructed.
    """

    k: float
    a: float
    b: float
    sse: float
    n_points: int
    degenerate: bool

    @property
    def params(self) -> LogisticParams:
        if self.degenerate:
            raise ValidationError("degenerate logistic fit has no valid growth parameters")
        return LogisticParams(k=self.k, a=self.a, b=self.b)


@dataclass(frozen=True)
class OddsRelation:
    """Exact coupling of two logistic curves through their odds transforms.

    For curves 1 and 2 sharing the time axis,
    ``odds1(t) = c1 * odds2(t) ** exponent`` holds identically, with
    ``c1 = exp(b1 * (t2 - t1))`` (``t1``, ``t2`` the inflection times) and
    ``exponent = b1 / b2``.  The constant is stored in log space; widely
    separated inflections would overflow ``c1`` itself.
    """

    log_c1: float
    exponent: float

    @property
    def c1(self) -> float:
        try:
            return math.exp(self.log_c1)
        except OverflowError:
            return math.inf


class Regime(enum.Enum):
    """Qualitative reading of the substitution exponent."""

    LOW_GROWTH = "LowGrowth"
    PROPORTIONAL = "Proportional"
    ACCELERATION = "Acceleration"
    NEGATIVE_COUPLING = "NegativeCoupling"

    def __str__(self) -> str:  # pragma: no cover - trivial
        return self.value


@dataclass(frozen=True)
class SubstitutionFit:
    """Estimated power law ``new = exp(log_a) * old ** b_exponent``."""

    log_a: float
    b_exponent: float
    fit: OlsFit
    window: tuple[int, int]
    regime: Regime


def logistic_value(p: LogisticParams, t: float) -> float:
    """Evaluate the S-curve at time ``t`` without overflow at extreme inputs."""
    z = p.a - p.b * t
    if z >= 0.0:
        e = math.exp(-z)
        return p.k * e / (1.0 + e)
    return p.k / (1.0 + math.exp(z))


def log_odds(p: LogisticParams, t: float) -> float:
    """``log(level / (k - level))`` evaluated in closed form.

    The odds of a logistic curve are exactly ``exp(b * t - a)``, so the log
    odds are linear in time; using the closed form avoids the catastrophic
    cancellation of ``k - level`` near saturation.
    """
    return p.b * t - p.a


def fit_logistic(series: RevenueSeries, grid_points: int = 400) -> LogisticFit:
    """Estimate (k, a, b) by grid search over k with a linearized inner fit.

    For each candidate equilibrium k in ``(max, 5 * max]`` the transform
    ``log((k - v) / v)`` is regressed on the year, and the candidate with
    the smallest level-space squared error wins.  A local refinement pass
    sharpens k within one coarse grid step.  Deterministic throughout.
    """
    points = [(year, value) for year, value in series.points.items() if value > 0.0]
    if len(points) < 4:
        raise InsufficientDataError(
            f"{series.technology}: logistic fit needs >= 4 positive points, got {len(points)}"
        )
    vmax = max(value for _, value in points)
    step = 4.0 * vmax / grid_points
    coarse = [vmax + i * step for i in range(1, grid_points + 1)]
    best = _best_candidate(points, coarse)
    if best is None:
        raise InsufficientDataError(
            f"{series.technology}: no equilibrium candidate leaves >= 4 usable points"
        )
    k0 = best[0]
    # second pass: same point count spread over +/- one coarse step around k0
    half = grid_points // 2
    fine_step = step / half
    fine = [k0 + (i - half) * fine_step for i in range(grid_points + 1)]
    refined = _best_candidate(points, [k for k in fine if k > vmax])
    if refined is not None and refined[3] <= best[3]:
        best = refined
    k, a, b, sse = best
    degenerate = not (b > 1e-12)
    return LogisticFit(k=k, a=a, b=b, sse=sse, n_points=len(points), degenerate=degenerate)


def _best_candidate(
    points: list[tuple[int, float]], candidates: list[float]
) -> tuple[float, float, float, float] | None:
    best: tuple[float, float, float, float] | None = None
    for k in candidates:
        usable = [(t, v) for t, v in points if v < k]
        if len(usable) < 4:
            continue
        ts = [float(t) for t, _ in usable]
        ys = [math.log((k - v) / v) for _, v in usable]
        slope, intercept = _line_fit(ts, ys)
        a, b = intercept, -slope
        sse = math.fsum(
            (v - _logistic_raw(k, a, b, t)) ** 2 for t, v in points
        )
        if best is None or sse < best[3]:
            best = (k, a, b, sse)
    return best


def _line_fit(xs: list[float], ys: list[float]) -> tuple[float, float]:
    """Least-squares slope and intercept, centered for numerical stability."""
    n = len(xs)
    x_mean = math.fsum(xs) / n
    y_mean = math.fsum(ys) / n
    sxx = math.fsum((x - x_mean) ** 2 for x in xs)
    if sxx == 0.0:
        return 0.0, y_mean
    slope = math.fsum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys)) / sxx
    return slope, y_mean - slope * x_mean


def _logistic_raw(k: float, a: float, b: float, t: float) -> float:
    z = a - b * t
    if z >= 0.0:
        e = math.exp(-z)
        return k * e / (1.0 + e)
    return k / (1.0 + math.exp(z))


def odds_relation(p1: LogisticParams, p2: LogisticParams) -> OddsRelation:
    """Constants tying curve 1's odds to curve 2's, exact for all t."""
    log_c1 = p1.b * (p2.inflection - p1.inflection)
    return OddsRelation(log_c1=log_c1, exponent=p1.b / p2.b)


def implied_exponent(p_old: LogisticParams, p_new: LogisticParams) -> float:
    """Growth-rate ratio new/old: the theoretical early-phase exponent."""
    return p_new.b / p_old.b


def allometric_coefficients(p_old: LogisticParams, p_new: LogisticParams) -> tuple[float, float]:
    """Early-phase power law ``new ~= A * old ** B`` as ``(log A, B)``.

    Far below both capacities the curves reduce to exponentials, giving
    ``B = b_new / b_old`` and
    ``log A = log(k_new) - B * log(k_old) + B * a_old - a_new``.
    """
    b_ratio = implied_exponent(p_old, p_new)
    log_a = (
        math.log(p_new.k)
        - b_ratio * math.log(p_old.k)
        + b_ratio * p_old.a
        - p_new.a
    )
    return log_a, b_ratio


def fit_substitution(
    disruptive: RevenueSeries,
    established: RevenueSeries,
    window: tuple[int, int] | None = None,
    tolerance: float = 0.05,
) -> SubstitutionFit:
    """Log-log least squares of the disruptive series on the established one.

    ``window=None`` selects the maximal contiguous span where both series
    are strictly positive.  Natural logarithms throughout.
    """
    if window is None:
        window = positive_overlap_window(disruptive, established)
        if window is None:
            raise InsufficientDataError(
                f"{disruptive.technology} vs {established.technology}: "
                "no overlapping strictly-positive years"
            )
    first, last = window
    xs: list[float] = []
    ys: list[float] = []
    for year in range(first, last + 1):
        v = established.value(year)
        ki = disruptive.value(year)
        for label, value in ((established.technology, v), (disruptive.technology, ki)):
            if value is None or value <= 0.0:
                raise DomainError(
                    f"{label}: value for {year} is absent or non-positive inside window "
                    f"{first}-{last}"
                )
        xs.append(math.log(v))
        ys.append(math.log(ki))
    if len(xs) < 3:
        raise InsufficientDataError(
            f"window {first}-{last} has {len(xs)} usable years; need >= 3"
        )
    fit = ols_simple(xs, ys)
    return SubstitutionFit(
        log_a=fit.intercept,
        b_exponent=fit.slope,
        fit=fit,
        window=(first, last),
        regime=classify_regime(fit.slope, tolerance),
    )


def classify_regime(b: float, tolerance: float = 0.05) -> Regime:
    """Map a substitution exponent to its qualitative regime.

    Negative exponents get their own label: the established technology
    shrinks while the disruptor grows, which is economically distinct from
    slow positive coupling.
    """
    if not (math.isfinite(tolerance) and tolerance > 0):
        raise DomainError(f"tolerance must be positive, got {tolerance}")
    if b < 0.0:
        return Regime.NEGATIVE_COUPLING
    if abs(b - 1.0) <= tolerance:
        return Regime.PROPORTIONAL
    if b < 1.0 - tolerance:
        return Regime.LOW_GROWTH
    return Regime.ACCELERATION
