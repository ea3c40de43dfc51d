"""Intervals, strictly monotone generators and their inversion.

A :class:`Generator` is a continuous strictly monotone scalar map on an
:class:`Interval`. Means in this package are built from generators, so the
two basic services offered here are checked forward evaluation and
inversion (closed form when registered, bracketed bisection otherwise).
"""

from __future__ import annotations

import bisect
import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterator, Optional, Sequence

from .errors import DomainError, InversionFailure, SpecParseError

INCREASING = "increasing"
DECREASING = "decreasing"

# Largest argument for which math.exp is finite in double precision.
EXP_LIMIT = math.log(1.7976931348623157e308)

_MAX_EXPANSIONS = 200
_MAX_BISECTIONS = 200
_WIDTH_RTOL = 1e-13


@dataclass(frozen=True)
class Interval:
    """An interval of the extended real line with openness flags."""

    lower: float
    upper: float
    lower_open: bool = True
    upper_open: bool = True

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"empty interval: lower={self.lower} upper={self.upper}")

    @classmethod
    def real_line(cls) -> Interval:
        return cls(-math.inf, math.inf)

    @classmethod
    def positive(cls) -> Interval:
        return cls(0.0, math.inf)

    @classmethod
    def closed(cls, lower: float, upper: float) -> Interval:
        return cls(lower, upper, False, False)

    def contains(self, x: float) -> bool:
        if math.isnan(x):
            return False
        above = x > self.lower if self.lower_open else x >= self.lower
        below = x < self.upper if self.upper_open else x <= self.upper
        return above and below

    __contains__ = contains

    def issubset(self, other: Interval) -> bool:
        lo_ok = self.lower > other.lower or (
            self.lower == other.lower and (self.lower_open or not other.lower_open)
        )
        hi_ok = self.upper < other.upper or (
            self.upper == other.upper and (self.upper_open or not other.upper_open)
        )
        return lo_ok and hi_ok

    def intersect(self, other: Interval) -> Optional[Interval]:
        """Return the intersection, or None when it is empty or a point."""
        if self.lower > other.lower:
            lo, lo_open = self.lower, self.lower_open
        elif self.lower < other.lower:
            lo, lo_open = other.lower, other.lower_open
        else:
            lo, lo_open = self.lower, self.lower_open or other.lower_open
        if self.upper < other.upper:
            hi, hi_open = self.upper, self.upper_open
        elif self.upper > other.upper:
            hi, hi_open = other.upper, other.upper_open
        else:
            hi, hi_open = self.upper, self.upper_open or other.upper_open
        if not lo < hi:
            return None
        return Interval(lo, hi, lo_open, hi_open)

    def is_symmetric(self) -> bool:
        return (
            self.lower == -self.upper
            and self.lower_open == self.upper_open
        )

    def scaled(self, t: float) -> Interval:
        """The image ``{t*x : x in self}`` for ``t > 0``."""
        return Interval(self.lower * t, self.upper * t, self.lower_open, self.upper_open)

    def reciprocal(self) -> Interval:
        """The image under ``x -> 1/x``; only defined for positive intervals."""
        if self.lower < 0:
            raise DomainError(f"reciprocal image of {self} is not an interval")
        lo = 0.0 if self.upper == math.inf else 1.0 / self.upper
        hi = math.inf if self.lower == 0 else 1.0 / self.lower
        return Interval(lo, hi, self.upper_open, self.lower_open)

    def sampling_bounds(self) -> tuple[float, float]:
        """Finite closed bounds safe for sampling inside this interval.

        Open endpoints are pulled inward by a relative 1e-12 so that
        rounding in ``exp(uniform(log lo, log hi))`` cannot leave the set.
        """
        lo, hi = self.lower, self.upper
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise DomainError(f"cannot sample the unbounded interval {self}")
        if self.lower_open:
            lo = lo + max(abs(lo), 1e-300) * 1e-12
        if self.upper_open:
            hi = hi - max(abs(hi), 1e-300) * 1e-12
        return lo, hi

    def __str__(self):
        left = "(" if self.lower_open else "["
        right = ")" if self.upper_open else "]"
        return f"{left}{self.lower:g}, {self.upper:g}{right}"


def _probe_grid(domain: Interval) -> list[float]:
    """A small ascending set of interior points used for spot checks."""
    lo, hi = domain.lower, domain.upper
    if lo == -math.inf and hi == math.inf:
        pos = [2.0 ** k for k in range(-4, 9)]
        return [-p for p in reversed(pos)] + [0.0] + pos
    if hi == math.inf:
        return [lo + 2.0 ** k for k in range(-8, 9)]
    if lo == -math.inf:
        return [hi - 2.0 ** k for k in range(8, -9, -1)]
    return [lo + (hi - lo) * j / 16 for j in range(1, 16)]


def _seed_and_probes(domain: Interval):
    """Seed point plus upward and downward probe sequences for bracketing.

    Probes move away from the seed geometrically: by powers of two on an
    unbounded side, and by halving the remaining gap toward a finite end.
    """
    lo, hi = domain.lower, domain.upper

    if lo == -math.inf and hi == math.inf:
        seed = 0.0
    elif hi == math.inf:
        seed = lo + 1.0
    elif lo == -math.inf:
        seed = hi - 1.0
    else:
        seed = lo + (hi - lo) / 2

    def upward() -> Iterator[float]:
        for k in range(_MAX_EXPANSIONS):
            if hi == math.inf:
                base = lo if lo != -math.inf else 0.0
                p = base + 2.0 ** (k + 1) if lo != -math.inf else 2.0 ** k
            else:
                p = hi - (hi - seed) / 2.0 ** (k + 1)
                if p >= hi:
                    if not domain.upper_open:
                        yield hi
                    return
            yield p

    def downward() -> Iterator[float]:
        for k in range(_MAX_EXPANSIONS):
            if lo == -math.inf:
                p = hi - 2.0 ** (k + 1) if hi != math.inf else -(2.0 ** k)
            else:
                p = lo + (seed - lo) / 2.0 ** (k + 1)
                if p <= lo:
                    if not domain.lower_open:
                        yield lo
                    return
            yield p

    return seed, upward(), downward()


@dataclass(frozen=True)
class Generator:
    """A continuous strictly monotone function on ``domain``.

    ``forward`` is the raw callable; use the instance itself as a callable
    to get domain and overflow checking. ``inverse`` is an optional closed
    form. The monotonicity ``direction`` is declared and spot-checked on
    construction (pass ``check=False`` to skip).
    """

    forward: Callable[[float], float]
    domain: Interval
    direction: str = INCREASING
    inverse: Optional[Callable[[float], float]] = None
    label: str = "generator"
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if self.direction not in (INCREASING, DECREASING):
            raise ValueError(f"direction must be increasing or decreasing, got {self.direction!r}")
        if self.check:
            self.validate()

    @property
    def sign(self) -> int:
        return 1 if self.direction == INCREASING else -1

    def __call__(self, t: float) -> float:
        if not self.domain.contains(t):
            raise DomainError(f"{t!r} outside domain {self.domain} of {self.label}")
        try:
            y = self.forward(t)
        except OverflowError as exc:
            raise DomainError(f"{self.label} overflows at {t!r}") from exc
        y = float(y)
        if not math.isfinite(y):
            raise DomainError(f"{self.label} is not finite at {t!r}")
        return y

    def validate(self) -> None:
        """Spot-check strict monotonicity and the closed-form inverse."""
        values = []
        for t in _probe_grid(self.domain):
            try:
                values.append((t, self(t)))
            except DomainError:
                continue
        for (s, fs), (t, ft) in zip(values, values[1:]):
            if (ft - fs) * self.sign <= 0:
                raise ValueError(
                    f"{self.label} is not strictly {self.direction} between {s!r} and {t!r}"
                )
        if self.inverse is not None:
            for t, ft in values:
                back = self.inverse(ft)
                if not math.isclose(back, t, rel_tol=1e-10, abs_tol=1e-15):
                    raise ValueError(
                        f"inverse of {self.label} does not round-trip at {t!r} (got {back!r})"
                    )

    def invert(self, y: float) -> float:
        return invert_generator(self, y)

    def restrict(self, interval: Interval) -> Generator:
        dom = self.domain.intersect(interval)
        if dom is None:
            raise DomainError(f"domain of {self.label} does not meet {interval}")
        if dom == self.domain:
            return self
        return replace(self, domain=dom, check=False)

    def affine(self, a: float, b: float) -> Generator:
        """The generator ``a*self + b`` (``a != 0``)."""
        if a == 0:
            raise ValueError("affine factor must be nonzero")
        f, inv = self.forward, self.inverse
        return Generator(
            forward=lambda t: a * f(t) + b,
            domain=self.domain,
            direction=self.direction if a > 0 else _flip(self.direction),
            inverse=None if inv is None else (lambda y: inv((y - b) / a)),
            label=f"{num_label(a)}*({self.label})+{num_label(b)}",
            check=False,
        )

    def log_of(self) -> Generator:
        """The generator ``log(self(t))`` for a positive-valued generator."""
        f, inv = self.forward, self.inverse

        def forward(t):
            v = f(t)
            if not v > 0:
                raise DomainError(f"{self.label} is not positive at {t!r}")
            return math.log(v)

        return Generator(
            forward=forward,
            domain=self.domain,
            direction=self.direction,
            inverse=None if inv is None else (lambda y: inv(math.exp(y))),
            label=f"log({self.label})",
            check=False,
        )

    def inverted(self, target: Interval) -> Generator:
        """The inverse map as a generator on ``target`` (the image of the domain)."""
        inv = self.inverse
        return Generator(
            forward=inv if inv is not None else (lambda y: invert_generator(self, y)),
            domain=target,
            direction=self.direction,
            inverse=self.forward,
            label=f"inverse({self.label})",
            check=False,
        )


def num_label(x: float) -> str:
    """Compact text for a numeric parameter: ``1`` rather than ``1.0``."""
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 1e16 else repr(x)


def _flip(direction: str) -> str:
    return DECREASING if direction == INCREASING else INCREASING


def invert_generator(gen: Generator, y: float) -> float:
    """Return ``t`` in ``gen.domain`` with ``gen(t) == y``.

    Uses the closed-form inverse when one is registered. Otherwise the value
    is bracketed by geometric expansion from an interior seed and refined by
    bisection until the bracket is below a relative width of 1e-13 or can no
    longer be split in floating point.
    """
    if gen.inverse is not None:
        try:
            t = float(gen.inverse(y))
        except (ValueError, OverflowError, ZeroDivisionError) as exc:
            raise InversionFailure(f"closed-form inverse of {gen.label} failed at {y!r}") from exc
        if not gen.domain.contains(t):
            raise InversionFailure(f"{y!r} is outside the range of {gen.label}")
        return t

    sign = gen.sign

    def excess(t):
        return sign * (gen(t) - y)

    seed, upward, downward = _seed_and_probes(gen.domain)
    f_seed = excess(seed)
    if f_seed == 0:
        return seed

    # lo has excess < 0, hi has excess > 0
    if f_seed < 0:
        lo, hi = seed, None
        for p in upward:
            try:
                fp = excess(p)
            except DomainError:
                break
            if fp == 0:
                return p
            if fp > 0:
                hi = p
                break
            lo = p
    else:
        lo, hi = None, seed
        for p in downward:
            try:
                fp = excess(p)
            except DomainError:
                break
            if fp == 0:
                return p
            if fp < 0:
                lo = p
                break
            hi = p
    if lo is None or hi is None:
        raise InversionFailure(f"could not bracket {y!r} in the range of {gen.label}")

    mid = lo + (hi - lo) / 2
    for _ in range(_MAX_BISECTIONS):
        mid = lo + (hi - lo) / 2
        if mid <= lo or mid >= hi:
            break
        fm = excess(mid)
        if fm == 0:
            return mid
        if fm < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _WIDTH_RTOL * abs(mid):
            mid = lo + (hi - lo) / 2
            break
    return mid


@dataclass(frozen=True)
class Homeomorphism:
    """A monotone bijection from ``source`` (the generator's domain) onto ``target``."""

    gen: Generator
    target: Interval

    @property
    def source(self) -> Interval:
        return self.gen.domain

    @property
    def label(self) -> str:
        return self.gen.label

    def __call__(self, x: float) -> float:
        return self.gen(x)

    def backward(self, y: float) -> float:
        if not self.target.contains(y):
            raise DomainError(f"{y!r} outside target {self.target} of {self.label}")
        return invert_generator(self.gen, y)

    def inverse(self) -> Homeomorphism:
        return Homeomorphism(self.gen.inverted(self.target), self.gen.domain)


def _safe_exp(t):
    if t > EXP_LIMIT:
        raise OverflowError("exp overflow")
    return math.exp(t)


def _reciprocal(t):
    return 1.0 / t


def _cbrt(y):
    return math.copysign(abs(y) ** (1.0 / 3.0), y)


def identity_generator(domain: Optional[Interval] = None) -> Generator:
    return Generator(lambda t: t, domain or Interval.real_line(), INCREASING,
                     lambda y: y, "identity", check=False)


def log_generator() -> Generator:
    return Generator(math.log, Interval.positive(), INCREASING, _safe_exp, "log", check=False)


def exp_generator() -> Generator:
    """``exp`` on the open interval where it stays finite in double precision."""
    return Generator(_safe_exp, Interval(-EXP_LIMIT, EXP_LIMIT), INCREASING, math.log, "exp",
                     check=False)


def reciprocal_generator() -> Generator:
    return Generator(_reciprocal, Interval.positive(), DECREASING, _reciprocal, "reciprocal",
                     check=False)


def power_generator(r: float) -> Generator:
    """``t**r`` on (0, inf); ``r == 0`` falls back to ``log``, the homogeneous limit."""
    if r == 0:
        return log_generator()
    return Generator(
        forward=lambda t: t ** r,
        domain=Interval.positive(),
        direction=INCREASING if r > 0 else DECREASING,
        inverse=lambda y: y ** (1.0 / r),
        label=f"power:{num_label(r)}",
    )


def affine_log_generator(a: float, b: float) -> Generator:
    """``a*log(t) + b`` on (0, inf)."""
    if a == 0:
        raise ValueError("affine-log needs a nonzero factor")
    gen = log_generator().affine(a, b)
    return replace(gen, label=f"affine-log:{num_label(a)}:{num_label(b)}", check=False)


def cube_generator() -> Generator:
    return Generator(lambda t: t ** 3, Interval.real_line(), INCREASING, _cbrt, "cube",
                     check=False)


def poly_cube_generator() -> Generator:
    """``t + t**3`` on the real line, deliberately without a closed-form inverse."""
    return Generator(lambda t: t + t * t * t, Interval.real_line(), INCREASING, None,
                     "poly-cube", check=False)


def sinh_generator() -> Generator:
    return Generator(math.sinh, Interval(-EXP_LIMIT, EXP_LIMIT), INCREASING, math.asinh,
                     "sinh", check=False)


def exp_power_generator(a: float, b: float) -> Generator:
    """``exp(b) * t**a`` on (0, inf)."""
    if a == 0:
        raise ValueError("exponent must be nonzero")
    scale = math.exp(b)
    return Generator(
        forward=lambda t: scale * t ** a,
        domain=Interval.positive(),
        direction=INCREASING if a > 0 else DECREASING,
        inverse=lambda y: (y / scale) ** (1.0 / a),
        label=f"exp-power:{num_label(a)}:{num_label(b)}",
    )


def table_generator(ts: Sequence[float], ys: Sequence[float], label: str = "table") -> Generator:
    """Piecewise-linear generator through the points ``(ts[i], ys[i])``.

    ``ts`` must be strictly increasing and ``ys`` strictly monotone. The
    inverse is the piecewise-linear interpolant with the columns swapped.
    """
    ts = [float(t) for t in ts]
    ys = [float(y) for y in ys]
    if len(ts) != len(ys) or len(ts) < 2:
        raise ValueError("a table needs at least two (t, value) pairs of equal length")
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("table abscissae must be strictly increasing")
    diffs = [b - a for a, b in zip(ys, ys[1:])]
    if all(d > 0 for d in diffs):
        direction = INCREASING
        ys_sorted, ts_by_y = ys, ts
    elif all(d < 0 for d in diffs):
        direction = DECREASING
        ys_sorted, ts_by_y = ys[::-1], ts[::-1]
    else:
        raise ValueError("table values must be strictly monotone")

    def interp(x, xp, fp):
        i = bisect.bisect_right(xp, x) - 1
        i = min(max(i, 0), len(xp) - 2)
        x0, x1 = xp[i], xp[i + 1]
        return fp[i] + (fp[i + 1] - fp[i]) * (x - x0) / (x1 - x0)

    y_lo, y_hi = ys_sorted[0], ys_sorted[-1]

    def inverse(y):
        if not y_lo <= y <= y_hi:
            raise ValueError(f"{y!r} outside table range")
        return interp(y, ys_sorted, ts_by_y)

    return Generator(
        forward=lambda t: interp(t, ts, ys),
        domain=Interval.closed(ts[0], ts[-1]),
        direction=direction,
        inverse=inverse,
        label=label,
    )


def load_table(path: str | Path) -> Generator:
    """Read a ``t,value`` CSV (optional header, ``#`` comments) into a table generator."""
    ts, ys = [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if len(row) != 2:
                raise SpecParseError(f"{path}:{lineno}: expected two columns, got {len(row)}")
            try:
                t, y = float(row[0]), float(row[1])
            except ValueError:
                if not ts:
                    continue  # header
                raise SpecParseError(f"{path}:{lineno}: non-numeric row {row!r}") from None
            ts.append(t)
            ys.append(y)
    try:
        return table_generator(ts, ys, label=f"custom-table:{path}")
    except ValueError as exc:
        raise SpecParseError(f"{path}: {exc}") from exc


def identity_homeomorphism() -> Homeomorphism:
    return Homeomorphism(identity_generator(), Interval.real_line())


def reciprocal_homeomorphism() -> Homeomorphism:
    return Homeomorphism(reciprocal_generator(), Interval.positive())


def exp_homeomorphism() -> Homeomorphism:
    """``exp`` from the reals onto (0, inf), evaluated where it stays finite."""
    return Homeomorphism(exp_generator(), Interval.positive())


def log_homeomorphism() -> Homeomorphism:
    return Homeomorphism(log_generator(), Interval.real_line())
