"""Weighted means built from generators, and conjugation of means.

Every mean here maps an n-tuple inside its domain to a value between the
minimum and maximum of the tuple. Results are clamped into that range so
floating-point rounding in a closed-form inverse cannot break the mean
axiom; the clamp never moves a value by more than a few ulps for a valid
generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .errors import ArityMismatch, DomainError, InvalidWeights
from .generators import (
    Generator,
    Homeomorphism,
    Interval,
    invert_generator,
    num_label,
)

_WEIGHT_SUM_ATOL = 1e-9
_POWER_ZERO = 1e-8


@dataclass(frozen=True)
class Weights:
    """Positive weights summing to one, stored renormalized."""

    values: tuple[float, ...]

    def __init__(self, values: Sequence[float]):
        vals = tuple(float(v) for v in values)
        if len(vals) < 2:
            raise InvalidWeights(f"need at least two weights, got {len(vals)}")
        if not all(v > 0 and math.isfinite(v) for v in vals):
            raise InvalidWeights(f"weights must be positive and finite: {vals}")
        total = math.fsum(vals)
        if abs(total - 1.0) > _WEIGHT_SUM_ATOL:
            raise InvalidWeights(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "values", tuple(v / total for v in vals))

    @classmethod
    def uniform(cls, n: int) -> Weights:
        return cls([1.0 / n] * n)

    @classmethod
    def normalized(cls, raw: Sequence[float]) -> Weights:
        """Scale arbitrary positive numbers to unit sum."""
        raw = [float(v) for v in raw]
        if not all(v > 0 and math.isfinite(v) for v in raw):
            raise InvalidWeights(f"weights must be positive and finite: {raw}")
        total = math.fsum(raw)
        return cls([v / total for v in raw])

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __str__(self):
        return ",".join(num_label(v) for v in self.values)


def _resolve_weights(w: Optional[Weights], xs: Sequence[float]) -> Weights:
    if w is None:
        return Weights.uniform(len(xs))
    if len(w) != len(xs):
        raise ArityMismatch(f"{len(xs)} inputs for {len(w)} weights", inputs=tuple(xs))
    return w


def _clamp(value: float, xs: Sequence[float]) -> float:
    return min(max(value, min(xs)), max(xs))


def _require_positive(xs: Sequence[float]) -> None:
    for x in xs:
        if not x > 0:
            raise DomainError(f"inputs must be positive, got {x!r}", inputs=tuple(xs))


def _require_domain(gen: Generator, xs: Sequence[float]) -> None:
    for x in xs:
        if not gen.domain.contains(x):
            raise DomainError(f"{x!r} outside domain {gen.domain} of {gen.label}",
                              inputs=tuple(xs))


def reciprocal_image(xs: Sequence[float]) -> tuple[float, ...]:
    """Elementwise reciprocals ``(1/x_1, ..., 1/x_n)`` of positive inputs."""
    _require_positive(xs)
    return tuple(1.0 / x for x in xs)


def eval_quasiarithmetic(gen: Generator, w: Optional[Weights], xs: Sequence[float]) -> float:
    """Weighted quasiarithmetic mean ``gen^-1(sum_j w_j gen(x_j))``.

    >>> from quasimeans.generators import identity_generator
    >>> eval_quasiarithmetic(identity_generator(), Weights([0.5, 0.5]), (2, 4))
    3.0
    """
    w = _resolve_weights(w, xs)
    _require_domain(gen, xs)
    y = math.fsum(p * gen(x) for p, x in zip(w, xs))
    return _clamp(invert_generator(gen, y), xs)


def eval_geometric(w: Optional[Weights], xs: Sequence[float]) -> float:
    """Weighted geometric mean, computed as ``exp(sum_j w_j log x_j)``."""
    w = _resolve_weights(w, xs)
    _require_positive(xs)
    return _clamp(math.exp(math.fsum(p * math.log(x) for p, x in zip(w, xs))), xs)


def eval_power_mean(r: float, w: Optional[Weights], xs: Sequence[float]) -> float:
    """Weighted power mean of order ``r``; the geometric mean when ``|r| < 1e-8``.

    Inputs are scaled by their maximum (``r > 0``) or minimum (``r < 0``)
    before exponentiation, which keeps ``x**r`` in range for wide tuples.
    """
    w = _resolve_weights(w, xs)
    _require_positive(xs)
    if abs(r) < _POWER_ZERO:
        return eval_geometric(w, xs)
    ref = max(xs) if r > 0 else min(xs)
    s = math.fsum(p * (x / ref) ** r for p, x in zip(w, xs))
    return _clamp(ref * s ** (1.0 / r), xs)


def eval_quasigeometric(gen: Generator, w: Optional[Weights], xs: Sequence[float]) -> float:
    """Weighted quasigeometric mean ``gen^-1(prod_j gen(x_j)**w_j)``.

    The product is formed directly and only falls back to the log domain
    when it under- or overflows.
    """
    w = _resolve_weights(w, xs)
    _require_domain(gen, xs)
    values = [gen(x) for x in xs]
    for x, v in zip(xs, values):
        if not v > 0:
            raise DomainError(f"{gen.label} is not positive at {x!r}", inputs=tuple(xs))
    prod = math.prod(v ** p for p, v in zip(w, values))
    if prod == 0 or not math.isfinite(prod):
        prod = math.exp(math.fsum(p * math.log(v) for p, v in zip(w, values)))
    return _clamp(invert_generator(gen, prod), xs)


def product_log_generator(gs: Sequence[Generator]) -> Generator:
    """``log`` of the pointwise product ``x -> prod_j g_j(x)`` as one generator."""
    directions = {g.direction for g in gs}
    if len(directions) != 1:
        raise DomainError("generators of a generalized quasigeometric mean must share a direction")
    domain = Interval.positive()
    for g in gs:
        domain = domain.intersect(g.domain)
        if domain is None:
            raise DomainError("generators have no common positive domain")

    def forward(t):
        total = 0.0
        for g in gs:
            v = g(t)
            if not v > 0:
                raise DomainError(f"{g.label} is not positive at {t!r}")
            total += math.log(v)
        return total

    return Generator(
        forward=forward,
        domain=domain,
        direction=directions.pop(),
        label="log(prod(" + ",".join(g.label for g in gs) + "))",
        check=False,
    )


def eval_generalized_quasigeometric(gs: Sequence[Generator], xs: Sequence[float],
                                    product_inverse=None) -> float:
    """Evaluate ``(prod_j g_j)^-1(prod_j g_j(x_j))``.

    The product function is inverted numerically (in log coordinates)
    unless ``product_inverse``, a closed form for ``(prod_j g_j)^-1``, is given.
    """
    if len(gs) != len(xs):
        raise ArityMismatch(f"{len(xs)} inputs for {len(gs)} generators", inputs=tuple(xs))
    log_prod = product_log_generator(gs)
    _require_domain(log_prod, xs)
    terms = []
    for g, x in zip(gs, xs):
        v = g(x)
        if not v > 0:
            raise DomainError(f"{g.label} is not positive at {x!r}", inputs=tuple(xs))
        terms.append(math.log(v))
    target = math.fsum(terms)
    if product_inverse is not None:
        t = float(product_inverse(math.exp(target)))
    else:
        t = invert_generator(log_prod, target)
    return _clamp(t, xs)


class MeanSpec:
    """Common interface of every mean family.

    Subclasses provide ``domain``, ``arity`` (None when weights default to
    uniform over however many inputs are given), ``weights``, ``strict``,
    ``label`` and ``evaluate``.
    """

    strict = True

    @property
    def weights(self) -> Optional[Weights]:
        return getattr(self, "w", None)

    @property
    def arity(self) -> Optional[int]:
        w = self.weights
        return None if w is None else len(w)

    def __call__(self, xs: Sequence[float]) -> float:
        return self.evaluate(tuple(float(x) for x in xs))

    def evaluate(self, xs: tuple[float, ...]) -> float:
        raise NotImplementedError

    def _wlabel(self) -> str:
        return "" if self.weights is None else f":{self.weights}"


@dataclass(frozen=True)
class Quasiarithmetic(MeanSpec):
    gen: Generator
    w: Optional[Weights] = None

    @property
    def domain(self) -> Interval:
        return self.gen.domain

    @property
    def label(self) -> str:
        return f"quasiarithmetic:{self.gen.label}{self._wlabel()}"

    def evaluate(self, xs):
        return eval_quasiarithmetic(self.gen, self.w, xs)


@dataclass(frozen=True)
class Quasigeometric(MeanSpec):
    """Quasigeometric mean; the generator is restricted to its positive part."""

    gen: Generator
    w: Optional[Weights] = None

    def __post_init__(self):
        object.__setattr__(self, "gen", self.gen.restrict(Interval.positive()))

    @property
    def domain(self) -> Interval:
        return self.gen.domain

    @property
    def label(self) -> str:
        return f"quasigeometric:{self.gen.label}{self._wlabel()}"

    def evaluate(self, xs):
        return eval_quasigeometric(self.gen, self.w, xs)


@dataclass(frozen=True)
class Power(MeanSpec):
    r: float
    w: Optional[Weights] = None

    domain = Interval.positive()

    @property
    def label(self) -> str:
        return f"power:{num_label(self.r)}{self._wlabel()}"

    def evaluate(self, xs):
        return eval_power_mean(self.r, self.w, xs)


@dataclass(frozen=True)
class Geometric(MeanSpec):
    w: Optional[Weights] = None

    domain = Interval.positive()

    @property
    def label(self) -> str:
        return f"geometric{self._wlabel()}"

    def evaluate(self, xs):
        return eval_geometric(self.w, xs)


@dataclass(frozen=True)
class GeneralizedQuasigeometric(MeanSpec):
    gs: tuple[Generator, ...]
    product_inverse: Optional[object] = None

    def __post_init__(self):
        gs = tuple(self.gs)
        if len(gs) < 2:
            raise ArityMismatch("need at least two generators")
        object.__setattr__(self, "gs", gs)
        # validates shared direction and common domain
        object.__setattr__(self, "_log_prod", product_log_generator(gs))

    @property
    def domain(self) -> Interval:
        return self._log_prod.domain

    @property
    def arity(self) -> int:
        return len(self.gs)

    @property
    def label(self) -> str:
        return "generalized:" + "+".join(g.label for g in self.gs)

    def evaluate(self, xs):
        return eval_generalized_quasigeometric(self.gs, xs, self.product_inverse)


@dataclass(frozen=True)
class Conjugate(MeanSpec):
    """The conjugate mean ``h^-1(inner(h(x_1), ..., h(x_n)))`` on ``h.source``."""

    inner: MeanSpec
    h: Homeomorphism

    def __post_init__(self):
        if not self.h.target.issubset(self.inner.domain):
            raise DomainError(
                f"{self.h.label} maps onto {self.h.target}, outside the domain "
                f"{self.inner.domain} of {self.inner.label}"
            )

    @property
    def domain(self) -> Interval:
        return self.h.source

    @property
    def weights(self) -> Optional[Weights]:
        return self.inner.weights

    @property
    def arity(self) -> Optional[int]:
        return self.inner.arity

    @property
    def strict(self) -> bool:
        return self.inner.strict

    @property
    def label(self) -> str:
        return f"conjugate:{self.h.label}:{self.inner.label}"

    def evaluate(self, xs):
        return conjugate_eval(self.inner, self.h, xs)


def conjugate_eval(inner: MeanSpec, h: Homeomorphism, xs: Sequence[float]) -> float:
    """Evaluate the ``h``-conjugate of ``inner`` at ``xs``."""
    for x in xs:
        if not h.source.contains(x):
            raise DomainError(f"{x!r} outside source {h.source} of {h.label}", inputs=tuple(xs))
    mapped = tuple(h(x) for x in xs)
    return _clamp(h.backward(inner(mapped)), xs)


def with_weights(spec: MeanSpec, w: Weights) -> MeanSpec:
    """Return ``spec`` with its weights replaced (recursing through conjugates)."""
    if isinstance(spec, Conjugate):
        return Conjugate(with_weights(spec.inner, w), spec.h)
    if isinstance(spec, (Quasiarithmetic, Quasigeometric, Power, Geometric)):
        return replace(spec, w=w)
    raise TypeError(f"{type(spec).__name__} does not take weights")
