"""Text renderings of check and consistency reports.

Two formats are produced:

* ``table``: aligned, human-oriented columns with rounded numbers.
* ``records``: one line per report, tab-separated ``key=value`` fields.
  Floats use ``repr`` (shortest round-trip form), tuples are
  comma-separated, and a missing value is written as ``-``.

Both are deterministic for identical inputs.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .checks import CheckReport, Classification


def fmt_float(x: float) -> str:
    """Shortest round-trip text for ``x``; integral values drop the ``.0``."""
    x = float(x)
    if math.isfinite(x) and x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _fmt_tuple(values) -> str:
    return ",".join(fmt_float(v) for v in values) if values else "-"


def _params(rep: CheckReport) -> str:
    if rep.fitted_params is None:
        return "-"
    a, b = rep.fitted_params
    return f"a={fmt_float(a)},b={fmt_float(b)}"


def records(fields: Sequence[tuple[str, str]]) -> str:
    return "\t".join(f"{k}={v}" for k, v in fields)


def check_record(rep: CheckReport) -> str:
    return records([
        ("check", rep.check_name),
        ("subject", rep.subject),
        ("verdict", rep.verdict),
        ("max_residual", fmt_float(rep.max_residual)),
        ("tol", fmt_float(rep.tolerance_used)),
        ("samples", str(rep.samples)),
        ("params", _params(rep)),
        ("worst_input", _fmt_tuple(rep.worst_input)),
    ])


def parse_record(line: str) -> dict[str, str]:
    """Inverse of :func:`records` for one line."""
    out = {}
    for field in line.rstrip("\n").split("\t"):
        key, _, value = field.partition("=")
        out[key] = value
    return out


def _table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    rows = [list(header)] + [list(r) for r in rows]
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines)


def check_table(reports: Sequence[CheckReport]) -> str:
    header = ("check", "verdict", "max_residual", "tol", "samples", "params",
              "worst_input", "subject")
    rows = [
        (r.check_name, r.verdict, f"{r.max_residual:.3e}", f"{r.tolerance_used:.0e}",
         str(r.samples), _params(r), _short_tuple(r.worst_input), r.subject)
        for r in reports
    ]
    return _table(header, rows)


def _short_tuple(values) -> str:
    return ",".join(f"{v:.6g}" for v in values) if values else "-"


def classification_lines(c: Classification, fmt: str = "table") -> str:
    dev = "-" if c.geometric_deviation is None else fmt_float(c.geometric_deviation)
    if fmt == "records":
        return records([
            ("classify", c.subject),
            ("homogeneous", c.homogeneity.verdict),
            ("reciprocal", c.reciprocal.verdict),
            ("must_be_geometric", "yes" if c.must_be_geometric else "no"),
            ("geometric_deviation", dev),
            ("summary", c.summary),
        ])
    return (f"classification of {c.subject}: {c.summary}\n"
            f"  homogeneity={c.homogeneity.verdict} reciprocal={c.reciprocal.verdict} "
            f"geometric_deviation={dev}")


def render_checks(reports: Sequence[CheckReport], fmt: str = "table") -> str:
    if fmt == "records":
        return "\n".join(check_record(r) for r in reports)
    return check_table(reports)


def consistency_record(rep) -> str:
    return records([
        ("mean", rep.mean_name),
        ("uk_mean", fmt_float(rep.uk_mean)),
        ("us_mean", fmt_float(rep.us_mean)),
        ("product", fmt_float(rep.product)),
        ("log_gap", fmt_float(rep.log_gap)),
        ("consistent", "yes" if rep.consistent else "no"),
        ("tol", fmt_float(rep.tol)),
        ("error", rep.error or "-"),
    ])


def render_consistency(reports, fmt: str = "table") -> str:
    if fmt == "records":
        return "\n".join(consistency_record(r) for r in reports)
    header = ("mean", "uk_mean", "us_mean", "product", "log_gap", "consistent")
    rows = []
    for r in reports:
        if r.error:
            rows.append((r.mean_name, "-", "-", "-", "-", f"error: {r.error}"))
        else:
            rows.append((r.mean_name, f"{r.uk_mean:.10g}", f"{r.us_mean:.10g}",
                         f"{r.product:.12g}", f"{r.log_gap:.6e}",
                         "yes" if r.consistent else "no"))
    return _table(header, rows)
