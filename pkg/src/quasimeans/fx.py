"""Cross-analyst consistency of averaged exchange rates.

One analyst records a rate series ``x_t`` (quote per base); the analyst on
the other side of the pair records ``1/x_t``. A mean ``M`` lets each side
infer the other's average only if ``M(x) * M(1/x) == 1``. The reports
below measure how far a candidate mean is from that, through the product
of the two averages and its logarithm (``log_gap``).

Bid/ask spreads and rounding are not modelled; rates are taken as exact.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Optional, Sequence, Union

from .errors import InvariantError, MeanError, ParseError
from .means import MeanSpec, Power, Weights, with_weights

Timestamp = Union[int, str]

HEADER = ("timestamp", "rate")


def _parse_timestamp(text: str, row: int) -> tuple[Timestamp, object]:
    """Return the stored timestamp and its ordering key."""
    text = text.strip()
    try:
        value = int(text)
        return value, value
    except ValueError:
        pass
    try:
        iso = text[:-1] + "+00:00" if text.endswith("Z") else text
        return text, datetime.fromisoformat(iso)
    except ValueError:
        raise ParseError(f"row {row}: bad timestamp {text!r}", row=row) from None


@dataclass(frozen=True)
class RateSeries:
    timestamps: tuple[Timestamp, ...]
    rates: tuple[float, ...]

    def __post_init__(self):
        if len(self.timestamps) != len(self.rates):
            raise InvariantError("timestamps and rates differ in length")
        if len(self.rates) < 2:
            raise InvariantError(f"a series needs at least two rates, got {len(self.rates)}")
        for i, r in enumerate(self.rates):
            if not (r > 0 and math.isfinite(r)):
                raise InvariantError(f"rate #{i} is not a positive finite number: {r!r}")

    def __len__(self):
        return len(self.rates)

    def window(self, start: Optional[int] = None, stop: Optional[int] = None) -> RateSeries:
        return RateSeries(self.timestamps[start:stop], self.rates[start:stop])


def load_series(path: Union[str, Path]) -> RateSeries:
    """Read a ``timestamp,rate`` CSV.

    Lines starting with ``#`` and blank lines are ignored. Row numbers in
    errors are physical line numbers in the file.
    """
    timestamps, rates, keys = [], [], []
    header_seen = False
    with open(path, newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            row = next(csv.reader([line]))
            cells = tuple(c.strip() for c in row)
            if not header_seen:
                if cells != HEADER:
                    raise ParseError(f"row {lineno}: expected header 'timestamp,rate', "
                                     f"got {line.strip()!r}", row=lineno)
                header_seen = True
                continue
            if len(cells) != 2:
                raise ParseError(f"row {lineno}: expected 2 fields, got {len(cells)}", row=lineno)
            stamp, key = _parse_timestamp(cells[0], lineno)
            try:
                rate = float(cells[1])
            except ValueError:
                raise ParseError(f"row {lineno}: bad rate {cells[1]!r}", row=lineno) from None
            if not (rate > 0 and math.isfinite(rate)):
                raise InvariantError(f"row {lineno}: rate must be positive, got {rate!r}",
                                     row=lineno)
            if keys:
                try:
                    increasing = key > keys[-1]
                except TypeError:
                    raise ParseError(f"row {lineno}: timestamp {cells[0]!r} is not comparable "
                                     f"with the previous one", row=lineno) from None
                if not increasing:
                    raise InvariantError(f"row {lineno}: timestamps must be strictly increasing",
                                         row=lineno)
            timestamps.append(stamp)
            rates.append(rate)
            keys.append(key)
    if not header_seen:
        raise ParseError("missing header 'timestamp,rate'", row=None)
    return RateSeries(tuple(timestamps), tuple(rates))


def dump_series(series: RateSeries, path: Union[str, Path]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        for t, r in zip(series.timestamps, series.rates):
            writer.writerow((t, repr(r)))


def mirror_series(series: RateSeries) -> RateSeries:
    """The same pair seen from the other side: ``1/x_t`` at the same timestamps."""
    return RateSeries(series.timestamps, tuple(1.0 / r for r in series.rates))


@dataclass(frozen=True)
class ConsistencyReport:
    mean_name: str
    uk_mean: float
    us_mean: float
    product: float
    log_gap: float
    consistent: bool
    tol: float
    error: Optional[str] = None


def decay_weights(n: int, factor: float) -> Weights:
    """Exponentially decaying weights, newest observation heaviest."""
    if not 0 < factor <= 1:
        raise ValueError("decay factor must lie in (0, 1]")
    return Weights.normalized([factor ** (n - 1 - j) for j in range(n)])


def consistency_report(series: RateSeries, spec: MeanSpec, tol: float = 1e-9,
                       weights: Optional[Weights] = None) -> ConsistencyReport:
    name = spec.label
    if weights is not None:
        spec = with_weights(spec, weights)
    uk = spec(series.rates)
    us = spec(mirror_series(series).rates)
    product = uk * us
    return ConsistencyReport(name, uk, us, product, math.log(product),
                             abs(product - 1.0) <= tol, tol)


def mean_comparison_table(series: RateSeries, specs: Sequence[MeanSpec], tol: float = 1e-9,
                          weights: Optional[Weights] = None) -> list[ConsistencyReport]:
    """One report per spec, in order; a failing spec yields a row with ``error`` set."""
    if not specs:
        raise ValueError("need at least one mean to compare")
    rows = []
    for spec in specs:
        try:
            rows.append(consistency_report(series, spec, tol, weights))
        except (MeanError, TypeError) as exc:
            nan = math.nan
            rows.append(ConsistencyReport(getattr(spec, "label", str(spec)), nan, nan, nan, nan,
                                          False, tol, error=str(exc)))
    return rows


def power_sweep(series: RateSeries, r_grid: Sequence[float],
                weights: Optional[Weights] = None) -> list[tuple[float, float]]:
    """``(r, log_gap)`` of the power mean of order ``r`` for each grid point."""
    return [(float(r), consistency_report(series, Power(float(r), weights)).log_gap)
            for r in r_grid]


def linear_grid(r_min: float, r_max: float, steps: int) -> list[float]:
    if steps < 1:
        raise ValueError("steps must be positive")
    if steps == 1:
        return [float(r_min)]
    return [r_min + (r_max - r_min) * i / (steps - 1) for i in range(steps)]
