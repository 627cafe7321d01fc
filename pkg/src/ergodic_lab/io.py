"""JSON schemas for function specs, operator specs and certificates.

Rationals travel as strings ``"p/q"`` in lowest terms (``"p"`` when integral).
Sequences use ``{"prefix": [...], "period": [...]}``; long sparse sequences
(such as a sign-flip multiplier) may use ``{"base": [...], "exceptions":
[[index, value], ...]}`` with the base aligned at index 1.  Both forms are
accepted everywhere.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .counterexample import LevelBand, OscillationCertificate
from .evseq import EvSeq, IndexSet, as_fraction
from .measure_model import DomainError, Part, SpaceFunction, SpaceModel
from .operators import (
    BlockExpectation,
    Compose,
    DSOperator,
    Identity,
    Lift,
    MultiplierComposition,
    Permutation,
    ShiftAlong,
)

DENSE_LIMIT = 256


class SpecError(DomainError):
    """Malformed spec file; the message names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def fmt(x: Fraction) -> str:
    return str(Fraction(x))


def _rational(value, path: str) -> Fraction:
    if isinstance(value, float):
        raise SpecError(path, f"floats are not allowed, write {value!r} as a \"p/q\" string")
    try:
        return as_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SpecError(path, f"expected a rational like \"3/4\", got {value!r}") from None


def _rationals(values, path: str) -> list:
    if not isinstance(values, list):
        raise SpecError(path, "expected a list")
    return [_rational(v, f"{path}[{i}]") for i, v in enumerate(values)]


def _require(obj, key: str, path: str):
    if not isinstance(obj, dict):
        raise SpecError(path, "expected an object")
    if key not in obj:
        raise SpecError(f"{path}.{key}", "missing field")
    return obj[key]


# -- sequences ---------------------------------------------------------------------


def seq_to_json(seq: EvSeq) -> dict:
    if seq.threshold <= DENSE_LIMIT:
        return {"prefix": [fmt(v) for v in seq.prefix], "period": [fmt(v) for v in seq.period]}
    return {
        "base": [fmt(v) for v in seq.base],
        "exceptions": [[n, fmt(v)] for n, v in seq.exceptions.items()],
    }


def seq_from_json(obj, path: str) -> EvSeq:
    if not isinstance(obj, dict):
        raise SpecError(path, "expected a sequence object")
    if "base" in obj:
        base = _rationals(obj["base"], f"{path}.base")
        if not base:
            raise SpecError(f"{path}.base", "must be nonempty")
        exc = {}
        for i, item in enumerate(obj.get("exceptions", [])):
            if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], int)):
                raise SpecError(f"{path}.exceptions[{i}]", "expected [index, value]")
            if item[0] < 1:
                raise SpecError(f"{path}.exceptions[{i}]", "index must be >= 1")
            exc[item[0]] = _rational(item[1], f"{path}.exceptions[{i}][1]")
        return EvSeq.sparse(base, exc)
    prefix = _rationals(obj.get("prefix", []), f"{path}.prefix")
    period = _rationals(obj.get("period", ["0"]), f"{path}.period")
    if not period:
        raise SpecError(f"{path}.period", "must be nonempty")
    return EvSeq(prefix, period)


# -- functions ---------------------------------------------------------------------


def space_to_json(space: SpaceModel) -> dict:
    return {
        "cells": space.cells,
        "atom_weight": fmt(space.atom_weight) if space.has_atoms else None,
        "exceptional": [fmt(w) for w in space.exceptional],
    }


def space_from_json(obj, path: str = "space") -> SpaceModel:
    if not isinstance(obj, dict):
        raise SpecError(path, "expected an object")
    cells = obj.get("cells", False)
    if not isinstance(cells, bool):
        raise SpecError(f"{path}.cells", "expected true or false")
    w = obj.get("atom_weight")
    weight = None if w is None else _rational(w, f"{path}.atom_weight")
    exceptional = _rationals(obj.get("exceptional", []), f"{path}.exceptional")
    try:
        return SpaceModel(cells, weight, tuple(exceptional))
    except DomainError as exc:
        raise SpecError(path, str(exc)) from None


def function_to_json(f: SpaceFunction) -> dict:
    return {
        "space": space_to_json(f.space),
        "cell_values": seq_to_json(f.cell_values) if f.space.cells else None,
        "atom_values": seq_to_json(f.atom_values) if f.space.has_atoms else None,
        "exceptional_values": [fmt(v) for v in f.exceptional_values],
    }


def function_from_json(obj) -> SpaceFunction:
    space = space_from_json(_require(obj, "space", "$"), "$.space")
    parts = {}
    for key, present in (("cell_values", space.cells), ("atom_values", space.has_atoms)):
        raw = obj.get(key)
        if present and raw is None:
            parts[key] = EvSeq.constant(0)
        elif present:
            parts[key] = seq_from_json(raw, f"$.{key}")
        elif raw is not None:
            raise SpecError(f"$.{key}", "given but the space has no such part")
        else:
            parts[key] = None
    exc = _rationals(obj.get("exceptional_values", ["0"] * len(space.exceptional)), "$.exceptional_values")
    if len(exc) != len(space.exceptional):
        raise SpecError("$.exceptional_values", f"expected {len(space.exceptional)} values")
    return SpaceFunction(space, parts["cell_values"], parts["atom_values"], tuple(exc))


# -- operators ---------------------------------------------------------------------


def _tau_to_json(tau) -> dict:
    if isinstance(tau, ShiftAlong):
        return {"kind": "shift", "support": seq_to_json(tau.support.indicator)}
    if isinstance(tau, Permutation):
        return {"kind": "permutation", "mapping": [list(p) for p in tau.mapping]}
    return {"kind": "identity"}


def _tau_from_json(obj, path: str):
    kind = _require(obj, "kind", path)
    try:
        if kind == "identity":
            return Identity()
        if kind == "shift":
            support = obj.get("support")
            return ShiftAlong(IndexSet.all() if support is None else IndexSet(seq_from_json(support, f"{path}.support")))
        if kind == "permutation":
            return Permutation(tuple(tuple(p) for p in _require(obj, "mapping", path)))
    except (DomainError, ValueError, TypeError) as exc:
        raise SpecError(path, str(exc)) from None
    raise SpecError(f"{path}.kind", f"unknown map kind {kind!r}")


def operator_to_json(T: DSOperator) -> dict:
    if isinstance(T, MultiplierComposition):
        phi = [fmt(v) for v in T.phi] if T.part is Part.EXCEPTIONAL else seq_to_json(T.phi)
        return {
            "type": "multiplier",
            "part": T.part.value,
            "phi": phi,
            "tau": _tau_to_json(T.tau),
            "zero_off_part": T.zero_off_part,
        }
    if isinstance(T, BlockExpectation):
        return {"type": "block_expectation", "part": T.part.value, "block_size": T.block_size}
    if isinstance(T, Lift):
        return {"type": "lift", "part": T.part.value, "inner": operator_to_json(T.inner)}
    if isinstance(T, Compose):
        return {"type": "compose", "outer": operator_to_json(T.outer), "inner": operator_to_json(T.inner)}
    raise TypeError(f"cannot serialise {type(T).__name__}")


def _part(obj, path: str) -> Part:
    raw = _require(obj, "part", path)
    try:
        return Part(raw)
    except ValueError:
        raise SpecError(f"{path}.part", f"unknown part {raw!r}") from None


def operator_from_json(obj, path: str = "$") -> DSOperator:
    kind = _require(obj, "type", path)
    try:
        if kind == "multiplier":
            part = _part(obj, path)
            raw_phi = obj.get("phi")
            if part is Part.EXCEPTIONAL:
                phi = tuple(_rationals(raw_phi or [], f"{path}.phi"))
            else:
                phi = EvSeq.constant(1) if raw_phi is None else seq_from_json(raw_phi, f"{path}.phi")
            tau = _tau_from_json(obj.get("tau", {"kind": "identity"}), f"{path}.tau")
            return MultiplierComposition(part, phi, tau, bool(obj.get("zero_off_part", False)))
        if kind == "block_expectation":
            size = _require(obj, "block_size", path)
            if not isinstance(size, int):
                raise SpecError(f"{path}.block_size", "expected an integer")
            return BlockExpectation(_part(obj, path), size)
        if kind == "lift":
            return Lift(operator_from_json(_require(obj, "inner", path), f"{path}.inner"), _part(obj, path))
        if kind == "compose":
            return Compose(
                operator_from_json(_require(obj, "outer", path), f"{path}.outer"),
                operator_from_json(_require(obj, "inner", path), f"{path}.inner"),
            )
    except SpecError:
        raise
    except DomainError as exc:
        raise SpecError(path, str(exc)) from None
    raise SpecError(f"{path}.type", f"unknown operator type {kind!r}")


# -- certificates ------------------------------------------------------------------


def certificate_to_json(cert: OscillationCertificate, f: SpaceFunction) -> dict:
    band = cert.band
    return {
        "a": fmt(band.a),
        "b": fmt(band.b),
        "part": band.part.value,
        "m1": band.m1,
        "sign": band.sign,
        "threshold": fmt(cert.threshold),
        "support": seq_to_json(band.support.indicator),
        "ns": list(cert.ns),
        "trace": [fmt(v) for v in cert.trace],
        "function": function_to_json(f),
        "operator": operator_to_json(cert.operator),
    }


def certificate_from_json(obj) -> tuple:
    """Return ``(certificate, function)``; also checks the declared ``m1`` against the support."""
    a = _rational(_require(obj, "a", "$"), "$.a")
    b = _rational(_require(obj, "b", "$"), "$.b")
    part = _part(obj, "$")
    sign = obj.get("sign", 1)
    if sign not in (1, -1):
        raise SpecError("$.sign", "expected 1 or -1")
    try:
        support = IndexSet(seq_from_json(_require(obj, "support", "$"), "$.support"))
    except ValueError as exc:
        raise SpecError("$.support", str(exc)) from None
    band = LevelBand(a, b, part, support, sign)
    m1 = _require(obj, "m1", "$")
    if m1 != band.m1:
        raise SpecError("$.m1", f"declared {m1} but the support starts at {band.m1}")
    ns = _require(obj, "ns", "$")
    if not isinstance(ns, list) or not all(isinstance(n, int) for n in ns):
        raise SpecError("$.ns", "expected a list of integers")
    trace = _rationals(_require(obj, "trace", "$"), "$.trace")
    f = function_from_json(_require(obj, "function", "$"))
    T = operator_from_json(_require(obj, "operator", "$"), "$.operator")
    return OscillationCertificate(band, tuple(ns), tuple(trace), T), f


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_json(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
