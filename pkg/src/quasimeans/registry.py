"""Name-keyed generator registry and the mean spec string grammar.

Generators::

    identity | log | exp | cube | sinh | poly-cube | reciprocal
    power:<r> | affine-log:<a>:<b> | exp-power:<a>:<b> | custom-table:<path>

Means (``<family>:<params>:<weights>``, weights comma-separated and
optional; omitted weights mean uniform over the input length)::

    geometric[:<w>]
    power:<r>[:<w>]
    quasiarithmetic:<generator>[:<w>]
    quasigeometric:<generator>[:<w>]
    generalized:<generator>+<generator>+...
    conjugate:<identity|reciprocal|exp|log>:<mean>
"""

from __future__ import annotations

from typing import Optional

from . import generators as G
from .errors import SpecParseError
from .generators import Generator, Homeomorphism
from .means import (
    Conjugate,
    GeneralizedQuasigeometric,
    Geometric,
    MeanSpec,
    Power,
    Quasiarithmetic,
    Quasigeometric,
    Weights,
    with_weights,
)

# name -> (number of ':' separated parameters, factory)
_GENERATORS = {
    "identity": (0, G.identity_generator),
    "log": (0, G.log_generator),
    "exp": (0, G.exp_generator),
    "cube": (0, G.cube_generator),
    "sinh": (0, G.sinh_generator),
    "poly-cube": (0, G.poly_cube_generator),
    "reciprocal": (0, G.reciprocal_generator),
    "power": (1, lambda r: G.power_generator(_num(r))),
    "affine-log": (2, lambda a, b: G.affine_log_generator(_num(a), _num(b))),
    "exp-power": (2, lambda a, b: G.exp_power_generator(_num(a), _num(b))),
    "custom-table": (1, G.load_table),
}

_HOMEOMORPHISMS = {
    "identity": G.identity_homeomorphism,
    "reciprocal": G.reciprocal_homeomorphism,
    "exp": G.exp_homeomorphism,
    "log": G.log_homeomorphism,
}

GENERATOR_NAMES = tuple(_GENERATORS)
MEAN_FAMILIES = ("geometric", "power", "quasiarithmetic", "quasigeometric",
                 "generalized", "conjugate")


def _num(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SpecParseError(f"not a number: {text!r}") from None


def _looks_numeric(text: str) -> bool:
    try:
        [float(t) for t in text.split(",")]
    except ValueError:
        return False
    return True


def parse_weights(text: str) -> Weights:
    try:
        return Weights([_num(t) for t in text.split(",") if t.strip()])
    except SpecParseError:
        raise
    except ValueError as exc:
        raise SpecParseError(f"bad weights {text!r}: {exc}") from exc


def _take_generator(tokens: list[str]) -> tuple[Generator, list[str]]:
    if not tokens or tokens[0] not in _GENERATORS:
        name = tokens[0] if tokens else ""
        raise SpecParseError(
            f"unknown generator {name!r}; expected one of {', '.join(GENERATOR_NAMES)}"
        )
    nparams, factory = _GENERATORS[tokens[0]]
    params, rest = tokens[1:1 + nparams], tokens[1 + nparams:]
    if len(params) != nparams:
        raise SpecParseError(f"generator {tokens[0]!r} takes {nparams} parameter(s)")
    if tokens[0] == "custom-table" and rest:
        # a path may itself contain ':'; only a trailing numeric list is weights
        if _looks_numeric(rest[-1]):
            params, rest = [":".join(tokens[1:-1])], rest[-1:]
        else:
            params, rest = [":".join(tokens[1:])], []
    try:
        return factory(*params), rest
    except SpecParseError:
        raise
    except (ValueError, OSError) as exc:
        raise SpecParseError(f"cannot build generator {':'.join(tokens)!r}: {exc}") from exc


def parse_generator(text: str) -> Generator:
    gen, rest = _take_generator(text.strip().split(":"))
    if rest:
        raise SpecParseError(f"trailing text after generator: {':'.join(rest)!r}")
    return gen


def parse_homeomorphism(name: str) -> Homeomorphism:
    try:
        return _HOMEOMORPHISMS[name]()
    except KeyError:
        raise SpecParseError(
            f"unknown homeomorphism {name!r}; expected one of {', '.join(_HOMEOMORPHISMS)}"
        ) from None


def _optional_weights(rest: list[str]) -> Optional[Weights]:
    if not rest:
        return None
    if len(rest) > 1:
        raise SpecParseError(f"unexpected text {':'.join(rest)!r}")
    return parse_weights(rest[0])


def parse_mean(text: str, weights: Optional[Weights] = None) -> MeanSpec:
    """Parse a mean spec string; ``weights`` overrides any weights in the string."""
    tokens = text.strip().split(":")
    family, rest = tokens[0], tokens[1:]
    if family == "geometric":
        spec = Geometric(_optional_weights(rest))
    elif family == "power":
        if not rest:
            raise SpecParseError("power needs an order: power:<r>[:<weights>]")
        spec = Power(_num(rest[0]), _optional_weights(rest[1:]))
    elif family in ("quasiarithmetic", "quasigeometric"):
        gen, rest = _take_generator(rest)
        cls = Quasiarithmetic if family == "quasiarithmetic" else Quasigeometric
        try:
            spec = cls(gen, _optional_weights(rest))
        except ValueError as exc:
            raise SpecParseError(str(exc)) from exc
    elif family == "generalized":
        parts = ":".join(rest).split("+")
        if len(parts) < 2:
            raise SpecParseError("generalized needs at least two '+'-separated generators")
        try:
            spec = GeneralizedQuasigeometric(tuple(parse_generator(p) for p in parts))
        except SpecParseError:
            raise
        except ValueError as exc:
            raise SpecParseError(str(exc)) from exc
        if weights is not None:
            raise SpecParseError("generalized means take no weights")
    elif family == "conjugate":
        if len(rest) < 2:
            raise SpecParseError("conjugate needs a map and an inner mean: conjugate:<map>:<mean>")
        h = parse_homeomorphism(rest[0])
        inner = parse_mean(":".join(rest[1:]))
        try:
            spec = Conjugate(inner, h)
        except ValueError as exc:
            raise SpecParseError(str(exc)) from exc
    else:
        raise SpecParseError(
            f"unknown mean family {family!r}; expected one of {', '.join(MEAN_FAMILIES)}"
        )
    if weights is not None:
        spec = with_weights(spec, weights)
    return spec
