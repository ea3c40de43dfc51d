"""Command-line front end: ``quasimeans {eval,check,fx-report,sweep}``.

Exit status: 0 on success (every requested check passed), 1 when a check
failed, 2 on usage, parse or evaluation errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

from . import checks as C
from . import registry
from .errors import MeanError, SpecParseError
from .fx import decay_weights, linear_grid, load_series, mean_comparison_table, power_sweep
from .generators import Generator, Interval
from .means import MeanSpec, Weights
from .reports import classification_lines, fmt_float, records, render_checks, render_consistency

MEAN_CHECKS = ("mean-axiom", "strictness", "reciprocal", "exp-odd", "homogeneity", "mean-odd",
               "classify")
GENERATOR_CHECKS = ("affine-reciprocal", "odd-shift", "multiplicative-reciprocal",
                    "quasigeometric-equivalence")
CHECK_NAMES = ("all",) + MEAN_CHECKS + GENERATOR_CHECKS + ("daroczy-pales",)

DEFAULT_FX_MEANS = ("power:-1", "geometric", "power:1")


@dataclass(frozen=True)
class EvalCommand:
    spec: MeanSpec
    inputs: tuple[float, ...]


@dataclass(frozen=True)
class CheckCommand:
    name: str
    target: Union[MeanSpec, Generator, None]
    weights: Optional[Weights]
    cfg: C.SampleConfig
    tol: Optional[float] = None
    fmt: str = "table"


@dataclass(frozen=True)
class FxReportCommand:
    path: str
    specs: tuple[MeanSpec, ...]
    tol: float = 1e-9
    window: Optional[tuple[Optional[int], Optional[int]]] = None
    weights: Optional[str] = None
    fmt: str = "table"


@dataclass(frozen=True)
class SweepCommand:
    path: str
    r_min: float = -2.0
    r_max: float = 2.0
    steps: int = 9
    window: Optional[tuple[Optional[int], Optional[int]]] = None
    fmt: str = "table"


Command = Union[EvalCommand, CheckCommand, FxReportCommand, SweepCommand]


class Outcome(NamedTuple):
    status: int
    out: str
    err: str = ""


class UsageError(MeanError):
    pass


def _range(text: str) -> Interval:
    try:
        lo, hi = (float(v) for v in text.split(","))
        return Interval.closed(lo, hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI with LO < HI, got {text!r}") from None


def _window(text: str):
    start, sep, stop = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected START:STOP, got {text!r}")
    try:
        return (int(start) if start else None, int(stop) if stop else None)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad window {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasimeans",
        description="Weighted quasiarithmetic means, reciprocal consistency checks "
                    "and an exchange-rate consistency harness.",
        epilog=registry.__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add_format(p):
        p.add_argument("--format", choices=("table", "records"), default="table")

    p = sub.add_parser("eval", help="evaluate a mean at the given inputs")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--mean", help="mean spec, e.g. geometric:0.5,0.5")
    src.add_argument("--generator", help="quasiarithmetic mean of this generator")
    p.add_argument("--weights", help="comma-separated weights overriding the spec")
    p.add_argument("inputs", nargs="*", type=float, help="input values (put them after --)")

    p = sub.add_parser("check", help="run a property check (or all of them)")
    p.add_argument("name", choices=CHECK_NAMES)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--mean")
    src.add_argument("--generator")
    p.add_argument("--weights")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--range", type=_range, default=None, help="sampling range LO,HI")
    p.add_argument("--arity", type=int, default=2, help="arity for unweighted means")
    p.add_argument("--tol", type=float, default=None, help="override each check's tolerance")
    add_format(p)

    p = sub.add_parser("fx-report", help="cross-analyst consistency of candidate means")
    p.add_argument("csv")
    p.add_argument("--mean", action="append", help="repeatable; default power:-1, geometric, "
                   "power:1")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--window", type=_window, help="row slice START:STOP")
    p.add_argument("--weights", help="comma-separated weights or exp-decay:<factor>")
    add_format(p)

    p = sub.add_parser("sweep", help="log_gap of power means over a grid of orders")
    p.add_argument("csv")
    p.add_argument("--r-min", type=float, default=-2.0)
    p.add_argument("--r-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=9)
    p.add_argument("--window", type=_window)
    add_format(p)
    return parser


def parse_args(argv: Sequence[str]) -> Command:
    """Parse ``argv`` into a command.

    argparse usage errors exit with status 2; malformed mean or generator
    strings raise :class:`SpecParseError`.
    """
    ns = build_parser().parse_args(list(argv))
    weights = registry.parse_weights(ns.weights) if getattr(ns, "weights", None) and \
        ns.command in ("eval", "check") else None

    if ns.command == "eval":
        text = ns.mean if ns.mean else f"quasiarithmetic:{ns.generator}"
        return EvalCommand(registry.parse_mean(text, weights), tuple(ns.inputs))

    if ns.command == "check":
        if ns.mean:
            target = registry.parse_mean(ns.mean, weights)
        elif ns.generator:
            target = registry.parse_generator(ns.generator)
        else:
            target = None
        if ns.name in MEAN_CHECKS and not isinstance(target, MeanSpec):
            raise UsageError(f"check {ns.name} needs --mean")
        if ns.name in GENERATOR_CHECKS and target is None:
            raise UsageError(f"check {ns.name} needs --generator (or --mean)")
        if ns.name == "all" and target is None:
            raise UsageError("check all needs --mean or --generator")
        try:
            cfg = C.SampleConfig(seed=ns.seed, tuples=ns.samples, arity=ns.arity,
                                 **({"range": ns.range} if ns.range else {}))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return CheckCommand(ns.name, target, weights, cfg, ns.tol, ns.format)

    if ns.command == "fx-report":
        specs = tuple(registry.parse_mean(m) for m in (ns.mean or DEFAULT_FX_MEANS))
        return FxReportCommand(ns.csv, specs, ns.tol, ns.window, ns.weights, ns.format)

    return SweepCommand(ns.csv, ns.r_min, ns.r_max, ns.steps, ns.window, ns.format)


def _generator_of(target) -> Optional[Generator]:
    if isinstance(target, Generator):
        return target
    return getattr(target, "gen", None)


def _run_check(cmd: CheckCommand) -> Outcome:
    cfg, kw = cmd.cfg, ({} if cmd.tol is None else {"tol": cmd.tol})
    target = cmd.target
    gen = _generator_of(target)
    w = cmd.weights or (target.weights if isinstance(target, MeanSpec) else None) \
        or Weights.uniform(cfg.arity)
    classification = None

    if cmd.name == "all":
        if isinstance(target, MeanSpec):
            reports, classification = C.mean_battery(target, cfg, cmd.tol)
        else:
            reports = C.generator_battery(target, w, cfg, cmd.tol)
    elif cmd.name == "classify":
        reports, classification = [], C.classify_mean(target, cfg)
    elif cmd.name == "daroczy-pales":
        reports = [C.check_daroczy_pales_sampled(cfg)]
    elif cmd.name in MEAN_CHECKS:
        fn = {
            "mean-axiom": C.check_mean_axiom,
            "reciprocal": C.check_reciprocal_self_conjugacy,
            "exp-odd": C.check_exp_conjugate_odd,
            "homogeneity": C.check_homogeneity,
            "mean-odd": C.check_mean_odd,
        }.get(cmd.name)
        reports = [C.check_strictness(target, cfg) if fn is None else fn(target, cfg, **kw)]
    else:
        if gen is None:
            raise UsageError(f"check {cmd.name} needs a generator-based target")
        if cmd.name == "affine-reciprocal":
            reports = [C.check_generator_affine_reciprocal(gen, cfg, **kw)]
        elif cmd.name == "odd-shift":
            reports = [C.check_generator_odd_shift(gen, cfg, **kw)]
        elif cmd.name == "multiplicative-reciprocal":
            reports = [C.check_generator_multiplicative_reciprocal(gen, cfg, **kw)]
        else:
            reports = [C.check_quasigeometric_equivalence(gen, w, cfg, **kw)]

    parts = []
    if reports:
        parts.append(render_checks(reports, cmd.fmt))
    if classification is not None:
        parts.append(classification_lines(classification, cmd.fmt))
    status = 0 if all(r.passed for r in reports) else 1
    return Outcome(status, "\n".join(parts) + "\n")


def _slice(series, window):
    return series if window is None else series.window(*window)


def _fx_weights(text: Optional[str], n: int) -> Optional[Weights]:
    if not text:
        return None
    if text.startswith("exp-decay:"):
        try:
            return decay_weights(n, float(text.split(":", 1)[1]))
        except ValueError as exc:
            raise SpecParseError(f"bad decay weights {text!r}: {exc}") from exc
    return registry.parse_weights(text)


def run(cmd: Command) -> Outcome:
    """Execute ``cmd``; module errors become a diagnostic with status 2."""
    try:
        if isinstance(cmd, EvalCommand):
            return Outcome(0, fmt_float(cmd.spec(cmd.inputs)) + "\n")
        if isinstance(cmd, CheckCommand):
            return _run_check(cmd)
        if isinstance(cmd, FxReportCommand):
            series = _slice(load_series(cmd.path), cmd.window)
            rows = mean_comparison_table(series, cmd.specs, cmd.tol,
                                         _fx_weights(cmd.weights, len(series)))
            status = 2 if any(r.error for r in rows) else 0
            return Outcome(status, render_consistency(rows, cmd.fmt) + "\n")
        series = _slice(load_series(cmd.path), cmd.window)
        sweep = power_sweep(series, linear_grid(cmd.r_min, cmd.r_max, cmd.steps))
        if cmd.fmt == "records":
            text = "\n".join(records([("r", fmt_float(r)), ("log_gap", fmt_float(g))])
                             for r, g in sweep)
        else:
            text = "\n".join([f"{'r':>12}  log_gap"] + [f"{r:12.6g}  {fmt_float(g)}"
                                                        for r, g in sweep])
        return Outcome(0, text + "\n")
    except (MeanError, OSError, ValueError) as exc:
        where = getattr(exc, "inputs", None)
        suffix = f" (inputs: {','.join(fmt_float(v) for v in where)})" if where else ""
        return Outcome(2, "", f"error: {exc}{suffix}\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cmd = parse_args(argv)
    except MeanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    outcome = run(cmd)
    sys.stdout.write(outcome.out)
    sys.stderr.write(outcome.err)
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
