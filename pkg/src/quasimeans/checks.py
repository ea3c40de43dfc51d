"""Sampled residual checks for means and generators.

Each check draws a deterministic sample (seeded by :class:`SampleConfig`),
evaluates a residual that is zero exactly when the tested identity holds,
and returns a :class:`CheckReport` whose verdict is ``pass`` iff the largest
residual is within tolerance. Every check seeds its own generator, so the
samples do not depend on the order in which checks run.

Multiplicative checks sample log-uniformly. The sampling window is the
configured range intersected with the domain of the object under test and,
where the identity also evaluates at ``1/x`` or ``t*x``, with the matching
image of that domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import ArityMismatch, DegenerateFit, DomainError, MeanError
from .generators import Generator, Interval
from .means import (
    MeanSpec,
    Quasiarithmetic,
    Quasigeometric,
    Weights,
    eval_geometric,
    eval_quasiarithmetic,
    eval_quasigeometric,
    reciprocal_image,
)

PASS = "pass"
FAIL = "fail"

HOMOGENEITY_FACTORS = (1e-3, 0.5, 2.0, 1e3)
AFFINE_ANCHORS = (2.0, 3.0)


@dataclass(frozen=True)
class SampleConfig:
    """Seeded sampling parameters shared by all checks.

    ``arity`` only applies to means without explicit weights.
    """

    seed: int = 0
    tuples: int = 256
    range: Interval = field(default_factory=lambda: Interval.closed(1e-6, 1e6))
    arity: int = 2

    def __post_init__(self):
        if self.tuples < 1:
            raise ValueError("need at least one sample tuple")
        if self.arity < 2:
            raise ValueError("arity must be at least 2")
        if self.range.lower < 0:
            raise ValueError("sampling range must lie in (0, inf)")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class CheckReport:
    check_name: str
    subject: str
    verdict: str
    max_residual: float
    worst_input: tuple
    samples: int
    tolerance_used: float
    fitted_params: Optional[tuple[float, float]] = None

    @property
    def passed(self) -> bool:
        return self.verdict == PASS


class _Tracker:
    """Running maximum of residuals, remembering the input that attained it."""

    def __init__(self):
        self.worst = -1.0
        self.worst_input: tuple = ()
        self.count = 0

    def add(self, residual: float, inputs) -> None:
        self.count += 1
        if math.isnan(residual):
            residual = math.inf
        if residual > self.worst:
            self.worst = residual
            self.worst_input = tuple(float(v) for v in inputs)

    def report(self, name, subject, tol, fitted=None) -> CheckReport:
        worst = max(self.worst, 0.0)
        return CheckReport(
            check_name=name,
            subject=subject,
            verdict=PASS if worst <= tol else FAIL,
            max_residual=worst,
            worst_input=self.worst_input,
            samples=self.count,
            tolerance_used=tol,
            fitted_params=fitted,
        )


def _call(fn: Callable, xs):
    try:
        return fn(xs)
    except MeanError as exc:
        if exc.inputs is None:
            exc.inputs = tuple(float(x) for x in np.atleast_1d(xs))
        raise


def _arity(spec: MeanSpec, cfg: SampleConfig) -> int:
    return spec.arity if spec.arity is not None else cfg.arity


def _window(cfg: SampleConfig, *domains: Interval) -> Interval:
    win = cfg.range.intersect(Interval.positive())
    for d in domains:
        win = None if win is None else win.intersect(d)
    if win is None:
        raise DomainError(f"sampling range {cfg.range} does not meet the domain")
    return win


def _reciprocal_window(cfg: SampleConfig, domain: Interval) -> Interval:
    """Largest subwindow closed under ``x -> 1/x``."""
    win = _window(cfg, domain)
    win = win.intersect(win.reciprocal())
    if win is None:
        raise DomainError(f"no reciprocal-closed sampling window inside {domain}")
    return win


def _log_uniform(rng, win: Interval, shape) -> np.ndarray:
    lo, hi = win.sampling_bounds()
    xs = np.exp(rng.uniform(math.log(lo), math.log(hi), size=shape))
    return np.clip(xs, lo, hi)


def _log_samples(cfg: SampleConfig, win: Interval, arity: int) -> np.ndarray:
    """Logarithms of log-uniform tuples; ``exp`` of these are the tuples."""
    lo, hi = win.sampling_bounds()
    return cfg.rng().uniform(math.log(lo), math.log(hi), size=(cfg.tuples, arity))


# ---------------------------------------------------------------- means


def check_mean_axiom(spec: MeanSpec, cfg: SampleConfig, tol: float = 1e-12) -> CheckReport:
    """``min(xs) <= M(xs) <= max(xs)``; residual is the excursion relative to ``max|xs|``."""
    n = _arity(spec, cfg)
    xs_all = _log_uniform(cfg.rng(), _window(cfg, spec.domain), (cfg.tuples, n))
    tr = _Tracker()
    for xs in xs_all.tolist():
        m = _call(spec, xs)
        lo, hi = min(xs), max(xs)
        scale = max(abs(lo), abs(hi), 1e-300)
        tr.add(max(0.0, lo - m, m - hi) / scale, xs)
    return tr.report("mean-axiom", spec.label, tol)


def check_strictness(spec: MeanSpec, cfg: SampleConfig) -> CheckReport:
    """Counts nonconstant tuples whose mean touches ``min`` or ``max``.

    Only meaningful for strict families; the tolerance is zero violations.
    """
    n = _arity(spec, cfg)
    xs_all = _log_uniform(cfg.rng(), _window(cfg, spec.domain), (cfg.tuples, n))
    violations = 0
    first: tuple = ()
    for xs in xs_all.tolist():
        if min(xs) == max(xs):
            continue
        m = _call(spec, xs)
        if not min(xs) < m < max(xs):
            violations += 1
            first = first or tuple(xs)
    return CheckReport("strictness", spec.label, PASS if violations == 0 else FAIL,
                       float(violations), first, len(xs_all), 0.0)


def check_reciprocal_self_conjugacy(spec: MeanSpec, cfg: SampleConfig,
                                    tol: float = 1e-10) -> CheckReport:
    """Residual ``|M(xs) * M(1/xs) - 1|`` over log-uniform tuples."""
    n = _arity(spec, cfg)
    win = _reciprocal_window(cfg, spec.domain)
    tr = _Tracker()
    for ts in _log_samples(cfg, win, n).tolist():
        xs = [math.exp(t) for t in ts]
        prod = _call(spec, xs) * _call(spec, reciprocal_image(xs))
        tr.add(abs(prod - 1.0), xs)
    return tr.report("reciprocal", spec.label, tol)


def exp_conjugate(spec: MeanSpec, ts: Sequence[float]) -> float:
    """``log M(exp(t_1), ..., exp(t_n))``."""
    return math.log(_call(spec, [math.exp(t) for t in ts]))


def check_exp_conjugate_odd(spec: MeanSpec, cfg: SampleConfig,
                            tol: float = 1e-10) -> CheckReport:
    """Residual ``|E(-ts) + E(ts)|`` for the exp-conjugate ``E`` of ``spec``.

    The ``ts`` are the logarithms of the tuples used by
    :func:`check_reciprocal_self_conjugacy` under the same config, so the
    two checks see exactly the same points.
    """
    n = _arity(spec, cfg)
    win = _reciprocal_window(cfg, spec.domain)
    tr = _Tracker()
    for ts in _log_samples(cfg, win, n).tolist():
        tr.add(abs(exp_conjugate(spec, [-t for t in ts]) + exp_conjugate(spec, ts)), ts)
    return tr.report("exp-odd", spec.label, tol)


def _symmetric_samples(cfg: SampleConfig, domain: Interval, shape) -> np.ndarray:
    if not domain.is_symmetric():
        raise DomainError(f"domain {domain} is not symmetric about 0")
    upper = Interval(0.0, domain.upper, True, domain.upper_open)
    rng = cfg.rng()
    mags = _log_uniform(rng, _window(cfg, upper), shape)
    signs = rng.choice((-1.0, 1.0), size=shape)
    return mags * signs


def check_mean_odd(spec: MeanSpec, cfg: SampleConfig, tol: float = 1e-10) -> CheckReport:
    """Oddness ``M(-ts) = -M(ts)`` of a mean on a domain symmetric about 0.

    Residual ``|M(-ts) + M(ts)|`` relative to ``max(1, max|ts|)``.
    """
    n = _arity(spec, cfg)
    tr = _Tracker()
    for ts in _symmetric_samples(cfg, spec.domain, (cfg.tuples, n)).tolist():
        scale = max(1.0, max(abs(t) for t in ts))
        tr.add(abs(_call(spec, [-t for t in ts]) + _call(spec, ts)) / scale, ts)
    return tr.report("mean-odd", spec.label, tol)


def check_homogeneity(spec: MeanSpec, cfg: SampleConfig, tol: float = 1e-10) -> CheckReport:
    """Residual ``|M(t*xs) / (t*M(xs)) - 1|`` for ``t`` in 1e-3, 0.5, 2, 1e3.

    Raises :class:`DomainError` when no sample window survives scaling by
    every factor inside the domain of ``spec``.
    """
    n = _arity(spec, cfg)
    scaled = [spec.domain.scaled(1.0 / t) for t in HOMOGENEITY_FACTORS]
    win = _window(cfg, spec.domain, *scaled)
    tr = _Tracker()
    for xs in _log_uniform(cfg.rng(), win, (cfg.tuples, n)).tolist():
        base = _call(spec, xs)
        for t in HOMOGENEITY_FACTORS:
            tr.add(abs(_call(spec, [t * x for x in xs]) / (t * base) - 1.0), xs)
    return tr.report("homogeneity", spec.label, tol)


# ---------------------------------------------------------------- generators


def fit_affine_reciprocal(gen: Generator) -> tuple[float, float]:
    """Solve ``gen(1/x) = a*gen(x) + b`` at the anchors ``x = 2`` and ``x = 3``."""
    (x1, x2) = AFFINE_ANCHORS
    f1, f2 = gen(x1), gen(x2)
    if f1 == f2:
        raise DegenerateFit(f"{gen.label} takes equal values at the anchors {x1}, {x2}")
    r1, r2 = gen(1.0 / x1), gen(1.0 / x2)
    a = (r1 - r2) / (f1 - f2)
    b = r1 - a * f1
    return a, b


def check_generator_affine_reciprocal(gen: Generator, cfg: SampleConfig,
                                      tol: float = 1e-8) -> CheckReport:
    """Fit ``gen(1/x) = a*gen(x) + b`` at two anchors, validate on the sample.

    Residuals are normalized by the spread of ``|gen|`` over the sampled
    values (both ``x`` and ``1/x``), so the verdict is invariant under
    rescaling the generator.
    """
    win = _reciprocal_window(cfg, gen.domain)
    for x in AFFINE_ANCHORS:
        if not win.contains(x):
            raise DomainError(f"anchor {x} outside sampling window {win}")
    a, b = fit_affine_reciprocal(gen)
    xs = _log_uniform(cfg.rng(), win, cfg.tuples).tolist()
    pairs = [(x, _call(gen, x), _call(gen, 1.0 / x)) for x in xs]
    mags = [abs(v) for _, fx, fr in pairs for v in (fx, fr)]
    spread = max(mags) - min(mags) or 1.0
    tr = _Tracker()
    for x, fx, fr in pairs:
        tr.add(abs(fr - (a * fx + b)) / spread, (x,))
    return tr.report("affine-reciprocal", gen.label, tol, fitted=(a, b))


def check_generator_odd_shift(gen: Generator, cfg: SampleConfig,
                              tol: float = 1e-10) -> CheckReport:
    """Residual ``|gen(-t) + gen(t) - 2 gen(0)|`` on symmetric samples.

    Normalized by ``max(1, |gen(t)|, |gen(-t)|)`` so rounding in large
    values does not register as a violation.
    """
    ts = np.abs(_symmetric_samples(cfg, gen.domain, cfg.tuples)).tolist()
    f0 = gen(0.0)
    tr = _Tracker()
    for t in ts:
        fp, fm = _call(gen, t), _call(gen, -t)
        tr.add(abs(fm + fp - 2.0 * f0) / max(1.0, abs(fp), abs(fm)), (t,))
    return tr.report("odd-shift", gen.label, tol)


def check_generator_multiplicative_reciprocal(gen: Generator, cfg: SampleConfig,
                                              tol: float = 1e-10) -> CheckReport:
    """Residual ``|gen(x) gen(1/x) / gen(1)**2 - 1|``."""
    win = _reciprocal_window(cfg, gen.domain)
    g1 = gen(1.0)
    if not g1 > 0:
        raise DomainError(f"{gen.label} is not positive at 1")
    tr = _Tracker()
    for x in _log_uniform(cfg.rng(), win, cfg.tuples).tolist():
        gx, gr = _call(gen, x), _call(gen, 1.0 / x)
        if not (gx > 0 and gr > 0):
            raise DomainError(f"{gen.label} is not positive near {x!r}", inputs=(x,))
        tr.add(abs((gx / g1) * (gr / g1) - 1.0), (x,))
    return tr.report("multiplicative-reciprocal", gen.label, tol)


def check_quasigeometric_equivalence(gen: Generator, w: Weights, cfg: SampleConfig,
                                     tol: float = 1e-10) -> CheckReport:
    """Relative difference between the quasigeometric mean of ``gen`` and the
    quasiarithmetic mean of ``log(gen)``."""
    pos = gen.restrict(Interval.positive())
    log_gen = pos.log_of()
    tr = _Tracker()
    for xs in _log_uniform(cfg.rng(), _window(cfg, pos.domain), (cfg.tuples, len(w))).tolist():
        qg = _call(lambda v: eval_quasigeometric(pos, w, v), xs)
        qa = _call(lambda v: eval_quasiarithmetic(log_gen, w, v), xs)
        tr.add(abs(qg - qa) / abs(qa), xs)
    return tr.report("quasigeometric-equivalence", f"{gen.label}:{w}", tol)


def check_daroczy_pales_identity(p: float, u: float, v: float) -> CheckReport:
    """Evaluate the convex-combination identity at one ``(p, u, v)``.

    ``p(p m + (1-p) u) + (1-p)(p v + (1-p) m) = m`` with ``m = (u+v)/2``.
    """
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    m = (u + v) / 2
    lhs = p * (p * m + (1 - p) * u) + (1 - p) * (p * v + (1 - p) * m)
    tol = 1e-12 * max(1.0, abs(u), abs(v))
    res = abs(lhs - m)
    return CheckReport("daroczy-pales", f"p={p!r}", PASS if res <= tol else FAIL,
                       res, (p, u, v), 1, tol)


def check_daroczy_pales_sampled(cfg: SampleConfig) -> CheckReport:
    """The identity over ``cfg.tuples`` random triples; residuals are relative
    to ``max(1, |u|, |v|)`` and the tolerance is 1e-12."""
    rng = cfg.rng()
    lo, hi = cfg.range.sampling_bounds()
    ps = rng.uniform(0.0, 1.0, size=cfg.tuples)
    uv = np.exp(rng.uniform(math.log(lo), math.log(hi), size=(cfg.tuples, 2)))
    uv *= rng.choice((-1.0, 1.0), size=(cfg.tuples, 2))
    tr = _Tracker()
    for p, (u, v) in zip(ps.tolist(), uv.tolist()):
        if not 0 < p < 1:
            continue
        rep = check_daroczy_pales_identity(p, u, v)
        tr.add(rep.max_residual / max(1.0, abs(u), abs(v)), (p, u, v))
    return tr.report("daroczy-pales", "random triples", 1e-12)


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class Classification:
    subject: str
    homogeneity: CheckReport
    reciprocal: CheckReport
    must_be_geometric: bool
    geometric_deviation: Optional[float]
    summary: str


def classify_mean(spec: MeanSpec, cfg: SampleConfig) -> Classification:
    """Apply the uniqueness result for homogeneous, reciprocal-consistent means.

    When both checks pass the mean must coincide with the weighted geometric
    mean of the same weights; the maximal relative deviation from it over
    the sample is then reported (None if the weights are not known).
    """
    hom = check_homogeneity(spec, cfg)
    rec = check_reciprocal_self_conjugacy(spec, cfg)
    deviation = None
    if hom.passed and rec.passed:
        summary = "homogeneous and reciprocal-consistent: must be the weighted geometric mean"
        n = _arity(spec, cfg)
        if spec.weights is not None or spec.arity is None:
            w = spec.weights or Weights.uniform(n)
            deviation = 0.0
            for xs in _log_uniform(cfg.rng(), _window(cfg, spec.domain), (cfg.tuples, n)).tolist():
                g = eval_geometric(w, xs)
                deviation = max(deviation, abs(_call(spec, xs) - g) / g)
    elif hom.passed:
        summary = "homogeneous but not reciprocal-consistent: not geometric"
    elif rec.passed:
        summary = "reciprocal-consistent but not homogeneous: outside the uniqueness result"
    else:
        summary = "neither homogeneous nor reciprocal-consistent"
    return Classification(spec.label, hom, rec, hom.passed and rec.passed, deviation, summary)


# ---------------------------------------------------------------- equivalences


def _agreement(name: str, left: CheckReport, right: CheckReport) -> CheckReport:
    agree = left.verdict == right.verdict
    return CheckReport(
        check_name=name,
        subject=f"{left.check_name}={left.verdict} {right.check_name}={right.verdict}",
        verdict=PASS if agree else FAIL,
        max_residual=0.0 if agree else 1.0,
        worst_input=() if agree else (left.worst_input or right.worst_input),
        samples=max(left.samples, right.samples),
        tolerance_used=0.0,
    )


def equivalence_reciprocal_affine(gen: Generator, w: Weights, cfg: SampleConfig) -> CheckReport:
    """Reciprocal consistency of the quasiarithmetic mean vs. affine reciprocity of ``gen``."""
    rec = check_reciprocal_self_conjugacy(Quasiarithmetic(gen, w), cfg)
    return _agreement("equiv:reciprocal/affine-reciprocal", rec,
                      check_generator_affine_reciprocal(gen, cfg))


def equivalence_reciprocal_exp_odd(spec: MeanSpec, cfg: SampleConfig) -> CheckReport:
    """Reciprocal consistency vs. oddness of the exp-conjugate, on the same samples."""
    return _agreement("equiv:reciprocal/exp-odd", check_reciprocal_self_conjugacy(spec, cfg),
                      check_exp_conjugate_odd(spec, cfg))


def equivalence_reciprocal_multiplicative(gen: Generator, w: Weights,
                                          cfg: SampleConfig) -> CheckReport:
    """Reciprocal consistency of the quasigeometric mean vs. ``gen(x)gen(1/x) = gen(1)**2``."""
    rec = check_reciprocal_self_conjugacy(Quasigeometric(gen, w), cfg)
    return _agreement("equiv:reciprocal/multiplicative-reciprocal", rec,
                      check_generator_multiplicative_reciprocal(gen, cfg))


def equivalence_mean_odd_shift(gen: Generator, w: Weights, cfg: SampleConfig) -> CheckReport:
    """Oddness of the quasiarithmetic mean on a symmetric domain vs. oddness of ``gen - gen(0)``."""
    return _agreement("equiv:mean-odd/odd-shift",
                      check_mean_odd(Quasiarithmetic(gen, w), cfg),
                      check_generator_odd_shift(gen, cfg))


# ---------------------------------------------------------------- batteries


def _positive_on_window(gen: Generator, cfg: SampleConfig) -> bool:
    try:
        win = _reciprocal_window(cfg, gen.domain)
        lo, hi = win.sampling_bounds()
        return all(gen(x) > 0 for x in (lo, 1.0, hi))
    except MeanError:
        return False


def mean_battery(spec: MeanSpec, cfg: SampleConfig,
                 tol: Optional[float] = None) -> tuple[list[CheckReport], Classification]:
    """Every check applicable to ``spec`` plus the matching equivalences."""
    kw = {} if tol is None else {"tol": tol}
    reports = [check_mean_axiom(spec, cfg, **kw)]
    if spec.strict:
        reports.append(check_strictness(spec, cfg))
    reports += [
        check_reciprocal_self_conjugacy(spec, cfg, **kw),
        check_exp_conjugate_odd(spec, cfg, **kw),
        check_homogeneity(spec, cfg, **kw),
        equivalence_reciprocal_exp_odd(spec, cfg),
    ]
    w = spec.weights or Weights.uniform(_arity(spec, cfg))
    if isinstance(spec, Quasiarithmetic):
        try:
            reports.append(check_generator_affine_reciprocal(spec.gen, cfg, **kw))
            reports.append(equivalence_reciprocal_affine(spec.gen, w, cfg))
        except DomainError:
            pass  # generator not defined around the anchors
    if isinstance(spec, Quasigeometric):
        reports.append(check_quasigeometric_equivalence(spec.gen, w, cfg, **kw))
        if _positive_on_window(spec.gen, cfg):
            reports.append(check_generator_multiplicative_reciprocal(spec.gen, cfg, **kw))
            reports.append(equivalence_reciprocal_multiplicative(spec.gen, w, cfg))
    return reports, classify_mean(spec, cfg)


def generator_battery(gen: Generator, w: Weights, cfg: SampleConfig,
                      tol: Optional[float] = None) -> list[CheckReport]:
    """Every generator check whose domain preconditions ``gen`` meets."""
    kw = {} if tol is None else {"tol": tol}
    reports = []
    try:
        _reciprocal_window(cfg, gen.domain)
        has_positive = all(_reciprocal_window(cfg, gen.domain).contains(x) for x in AFFINE_ANCHORS)
    except DomainError:
        has_positive = False
    if has_positive:
        reports.append(check_generator_affine_reciprocal(gen, cfg, **kw))
        reports.append(equivalence_reciprocal_affine(gen, w, cfg))
    if gen.domain.is_symmetric():
        reports.append(check_generator_odd_shift(gen, cfg, **kw))
        reports.append(equivalence_mean_odd_shift(gen, w, cfg))
    if _positive_on_window(gen, cfg):
        reports.append(check_generator_multiplicative_reciprocal(gen, cfg, **kw))
        reports.append(equivalence_reciprocal_multiplicative(gen, w, cfg))
        reports.append(check_quasigeometric_equivalence(gen, w, cfg, **kw))
    if not reports:
        raise DomainError(f"no generator check applies to {gen.label} on {gen.domain}")
    return reports
