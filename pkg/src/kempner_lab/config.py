"""JSON configuration documents: parsing, validation, canonical dumping.

One schema describes a run: the quotient rule, the digit constraint, and
optional operation parameters.  Parsing is strict; every failure names
the offending field path.  ``to_dict(parse_dict(doc))`` is canonical and
stable, so documents round-trip losslessly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import indexsets
from .constraints import DigitConstraint, make_constraint
from .errors import ConfigInvalid, KempnerLabError
from .gadic import QuotientSequence, make_sequence

SEQUENCE_KINDS = ("constant", "explicit", "power", "factorial")
INDEX_KINDS = ("all", "explicit", "arithmetic", "powers-of", "complement")


@dataclass(frozen=True)
class Config:
    sequence: QuotientSequence
    constraint: DigitConstraint | None
    max_k: int | None = None
    upto: int | None = None
    budget: int | None = None
    delta: Fraction | None = None


def _expect_int(doc: dict, key: str, path: str, required: bool = True) -> int | None:
    if key not in doc:
        if required:
            raise ConfigInvalid(f"{path}.{key}", "required field is missing")
        return None
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigInvalid(f"{path}.{key}", f"expected an integer, got {v!r}")
    return v


def _parse_sequence(doc, path: str = "sequence") -> QuotientSequence:
    if not isinstance(doc, dict):
        raise ConfigInvalid(path, "expected an object")
    kind = doc.get("kind")
    if kind not in SEQUENCE_KINDS:
        raise ConfigInvalid(f"{path}.kind", f"expected one of {SEQUENCE_KINDS}, got {kind!r}")
    bound_hint = _expect_int(doc, "bound_hint", path, required=False)
    try:
        if kind == "constant":
            return make_sequence("constant", d=_expect_int(doc, "d", path), bound_hint=bound_hint)
        if kind == "explicit":
            values = doc.get("values")
            if not isinstance(values, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in values
            ):
                raise ConfigInvalid(f"{path}.values", "expected a list of integers")
            extend = doc.get("extend", "repeat-last")
            if extend not in ("repeat-last", "cycle"):
                raise ConfigInvalid(f"{path}.extend", f"expected 'repeat-last' or 'cycle', got {extend!r}")
            return make_sequence("explicit", values=values, extend=extend, bound_hint=bound_hint)
        if kind == "power":
            return make_sequence("power", base=_expect_int(doc, "base", path), bound_hint=bound_hint)
        return make_sequence("factorial", bound_hint=bound_hint)
    except ConfigInvalid:
        raise
    except KempnerLabError as exc:
        raise ConfigInvalid(path, str(exc)) from exc


def _parse_index_set(doc, path: str) -> indexsets.IndexSet:
    if not isinstance(doc, dict):
        raise ConfigInvalid(path, "expected an object")
    kind = doc.get("kind")
    if kind not in INDEX_KINDS:
        raise ConfigInvalid(f"{path}.kind", f"expected one of {INDEX_KINDS}, got {kind!r}")
    try:
        if kind == "all":
            return indexsets.AllIndices()
        if kind == "explicit":
            indices = doc.get("indices")
            if not isinstance(indices, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in indices
            ):
                raise ConfigInvalid(f"{path}.indices", "expected a list of integers")
            return indexsets.ExplicitIndices(frozenset(indices))
        if kind == "arithmetic":
            return indexsets.ArithmeticIndices(
                first=_expect_int(doc, "first", path), step=_expect_int(doc, "step", path)
            )
        if kind == "powers-of":
            return indexsets.PowerIndices(base=_expect_int(doc, "base", path))
        return indexsets.ComplementIndices(_parse_index_set(doc.get("of"), f"{path}.of"))
    except ConfigInvalid:
        raise
    except KempnerLabError as exc:
        raise ConfigInvalid(path, str(exc)) from exc


def _parse_constraint(doc, seq: QuotientSequence, path: str = "constraint") -> DigitConstraint:
    if not isinstance(doc, dict):
        raise ConfigInvalid(path, "expected an object")
    index_set = _parse_index_set(doc.get("index_set"), f"{path}.index_set")
    forbidden = doc.get("forbidden")
    if not isinstance(forbidden, dict):
        raise ConfigInvalid(f"{path}.forbidden", "expected an object")
    default = forbidden.get("default", [])
    if not isinstance(default, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in default
    ):
        raise ConfigInvalid(f"{path}.forbidden.default", "expected a list of integers")
    overrides_doc = forbidden.get("overrides", {})
    if not isinstance(overrides_doc, dict):
        raise ConfigInvalid(f"{path}.forbidden.overrides", "expected an object keyed by position")
    overrides = {}
    for key, val in overrides_doc.items():
        try:
            i = int(key)
        except (TypeError, ValueError):
            raise ConfigInvalid(
                f"{path}.forbidden.overrides.{key}", "keys must be integer positions"
            )
        if not isinstance(val, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in val
        ):
            raise ConfigInvalid(
                f"{path}.forbidden.overrides.{key}", "expected a list of integers"
            )
        overrides[i] = set(val)
    try:
        return make_constraint(seq, index_set, default=default or None, overrides=overrides)
    except KempnerLabError as exc:
        raise ConfigInvalid(path, str(exc)) from exc


def _parse_delta(value, path: str) -> Fraction:
    try:
        if isinstance(value, float):
            return Fraction(str(value))
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ConfigInvalid(path, f"expected a rational like '2/5' or 0.4, got {value!r}") from exc


def parse_dict(doc: dict) -> Config:
    if not isinstance(doc, dict):
        raise ConfigInvalid("", "top-level document must be an object")
    unknown = set(doc) - {"sequence", "constraint", "params"}
    if unknown:
        raise ConfigInvalid(sorted(unknown)[0], "unknown top-level field")
    if "sequence" not in doc:
        raise ConfigInvalid("sequence", "required field is missing")
    seq = _parse_sequence(doc["sequence"])
    constraint = None
    if "constraint" in doc and doc["constraint"] is not None:
        constraint = _parse_constraint(doc["constraint"], seq)
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ConfigInvalid("params", "expected an object")
    unknown = set(params) - {"max_k", "upto", "budget", "delta"}
    if unknown:
        raise ConfigInvalid(f"params.{sorted(unknown)[0]}", "unknown parameter")
    delta = _parse_delta(params["delta"], "params.delta") if "delta" in params else None
    return Config(
        sequence=seq,
        constraint=constraint,
        max_k=_expect_int(params, "max_k", "params", required=False),
        upto=_expect_int(params, "upto", "params", required=False),
        budget=_expect_int(params, "budget", "params", required=False),
        delta=delta,
    )


def parse_json(text: str) -> Config:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid("", f"not valid JSON: {exc}") from exc
    return parse_dict(doc)


def _sequence_dict(seq: QuotientSequence) -> dict:
    out: dict = {"kind": seq.kind}
    if seq.kind == "constant":
        out["d"] = seq.d
    elif seq.kind == "explicit":
        out["values"] = list(seq.values)
        out["extend"] = seq.extend
    elif seq.kind == "power":
        out["base"] = seq.base
    if seq.bound_hint is not None:
        out["bound_hint"] = seq.bound_hint
    return out


def _index_set_dict(ix: indexsets.IndexSet) -> dict:
    if isinstance(ix, indexsets.AllIndices):
        return {"kind": "all"}
    if isinstance(ix, indexsets.ExplicitIndices):
        return {"kind": "explicit", "indices": sorted(ix.indices)}
    if isinstance(ix, indexsets.ArithmeticIndices):
        return {"kind": "arithmetic", "first": ix.first, "step": ix.step}
    if isinstance(ix, indexsets.PowerIndices):
        return {"kind": "powers-of", "base": ix.base}
    return {"kind": "complement", "of": _index_set_dict(ix.inner)}


def to_dict(config: Config) -> dict:
    out: dict = {"sequence": _sequence_dict(config.sequence)}
    if config.constraint is not None:
        c = config.constraint
        out["constraint"] = {
            "index_set": _index_set_dict(c.index_set),
            "forbidden": {
                "default": sorted(c.default_forbidden or ()),
                "overrides": {str(i): sorted(s) for i, s in c.overrides},
            },
        }
    params: dict = {}
    if config.max_k is not None:
        params["max_k"] = config.max_k
    if config.upto is not None:
        params["upto"] = config.upto
    if config.budget is not None:
        params["budget"] = config.budget
    if config.delta is not None:
        params["delta"] = str(config.delta)
    if params:
        out["params"] = params
    return out


def to_json(config: Config) -> str:
    return json.dumps(to_dict(config), indent=2, sort_keys=True) + "\n"
