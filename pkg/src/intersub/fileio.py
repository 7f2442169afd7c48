"""JSON formats for models, measurements, POVMs, ensembles and reports.

Rationals are written as exact ``"p/q"`` strings (integers as plain
strings) and read from integers or such strings; floats are refused on the
GPT side. Tuple labels, such as the pairs labelling a joint measurement,
are written as JSON lists and read back as tuples.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import catalog
from .metrics import DegreeReport
from .model import Effect, Measurement, OutcomePartition, StateSpace
from .quantum import Povm
from .rational import as_rational, fmt

DIMENSION_CONVENTION = "linear = affine-hull + 1"


class InputError(ValueError):
    """Malformed or inconsistent input document."""


def rat(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InputError(f"expected an integer or a 'p/q' string, got {x!r}")
    try:
        return as_rational(x)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad rational {x!r}") from e


def rats(xs) -> tuple[Fraction, ...]:
    if not isinstance(xs, list):
        raise InputError(f"expected a list of rationals, got {xs!r}")
    return tuple(rat(x) for x in xs)


def label_out(x):
    return [label_out(y) for y in x] if isinstance(x, tuple) else x


def label_in(x):
    return tuple(label_in(y) for y in x) if isinstance(x, list) else x


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e


def _field(doc: Mapping, key: str):
    if not isinstance(doc, Mapping) or key not in doc:
        raise InputError(f"missing field {key!r}")
    return doc[key]


# -- models and measurements ---------------------------------------------------


def model_to_dict(S: StateSpace) -> dict:
    return {
        "name": S.name,
        "dim": S.dim,
        "vertices": [[fmt(c) for c in v] for v in S.vertices],
    }


def model_from_dict(doc: Mapping) -> StateSpace:
    dim = _field(doc, "dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InputError("'dim' must be a positive integer")
    verts = tuple(rats(v) for v in _field(doc, "vertices"))
    if not verts or any(len(v) != dim for v in verts):
        raise InputError("every vertex needs exactly 'dim' coordinates")
    return StateSpace(str(doc.get("name", "model")), dim, verts)


def resolve_model(ref, base: Path | None = None) -> StateSpace:
    """A model given inline, as a path to a model file, or as a catalog entry name."""
    if isinstance(ref, Mapping):
        return model_from_dict(ref)
    if not isinstance(ref, str):
        raise InputError("'model' must be an inline model or a file reference")
    path = Path(ref) if base is None or Path(ref).is_absolute() else base / ref
    if path.exists():
        return model_from_dict(read_json(path))
    if ref in catalog.names() and catalog.load_example(ref).model is not None:
        return catalog.load_example(ref).model
    raise InputError(f"model {ref!r} is neither a file nor a catalog GPT entry")


def effect_to_dict(a: Effect) -> dict:
    return {
        "linear": [fmt(c) for c in a.linear],
        "constant": fmt(a.constant),
        "values": [fmt(c) for c in a.values],
    }


def effect_from_dict(doc: Mapping, S: StateSpace) -> Effect:
    linear = rats(_field(doc, "linear"))
    if len(linear) != S.dim:
        raise InputError(f"effect has {len(linear)} coefficients, model has dim {S.dim}")
    return Effect(S, linear, rat(_field(doc, "constant")))


def measurement_to_dict(A: Measurement, inline_model: bool = True) -> dict:
    return {
        "model": model_to_dict(A.space) if inline_model else A.space.name,
        "labels": [label_out(x) for x in A.labels],
        "effects": [effect_to_dict(a) for a in A.effects],
    }


def measurement_from_dict(
    doc: Mapping, model: StateSpace | None = None, base: Path | None = None
) -> Measurement:
    if model is None:
        model = resolve_model(_field(doc, "model"), base)
    labels = tuple(label_in(x) for x in _field(doc, "labels"))
    effects = tuple(effect_from_dict(e, model) for e in _field(doc, "effects"))
    if len(labels) != len(effects):
        raise InputError("need exactly one label per effect")
    return Measurement(model, labels, effects)


def load_model(path: str | Path) -> StateSpace:
    return model_from_dict(read_json(path))


def load_measurement(path: str | Path, model: StateSpace | None = None) -> Measurement:
    return measurement_from_dict(read_json(path), model, Path(path).parent)


# -- quantum ---------------------------------------------------------------------


def povm_to_dict(A: Povm) -> dict:
    return {
        "dim": A.dim,
        "labels": [label_out(x) for x in A.labels],
        "elements": [
            [[[float(z.real), float(z.imag)] for z in row] for row in e] for e in A.elements
        ],
    }


def povm_from_dict(doc: Mapping) -> Povm:
    dim = _field(doc, "dim")
    try:
        elems = [
            np.array([[complex(re, im) for re, im in row] for row in e], dtype=complex)
            for e in _field(doc, "elements")
        ]
    except (TypeError, ValueError) as e:
        raise InputError("elements must be matrices of [re, im] pairs") from e
    if any(e.shape != (dim, dim) for e in elems):
        raise InputError(f"every element must be {dim}x{dim}")
    labels = doc.get("labels") or [str(i + 1) for i in range(len(elems))]
    return Povm(tuple(label_in(x) for x in labels), tuple(elems))


def load_povm(path: str | Path) -> Povm:
    return povm_from_dict(read_json(path))


# -- ensembles ---------------------------------------------------------------------


def ensemble_to_dict(E, inline_model: bool = True) -> dict:
    return {
        "model": model_to_dict(E.space) if inline_model else E.space.name,
        "states": [
            {"point": [fmt(c) for c in p], "prob": fmt(q)} for p, q in zip(E.points, E.probs)
        ],
    }


def ensemble_from_dict(doc: Mapping, model: StateSpace | None = None, base: Path | None = None):
    from .tasks import Ensemble

    if model is None:
        model = resolve_model(_field(doc, "model"), base)
    states = _field(doc, "states")
    points = tuple(rats(_field(s, "point")) for s in states)
    probs = tuple(rat(_field(s, "prob")) for s in states)
    return Ensemble(model, points, probs)


def load_ensemble(path: str | Path, model: StateSpace | None = None):
    return ensemble_from_dict(read_json(path), model, Path(path).parent)


# -- reports -------------------------------------------------------------------------


def value_out(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, Fraction):
        return fmt(v)
    if isinstance(v, (int, float)):
        return v
    return str(v)


def partition_to_list(P: OutcomePartition) -> list:
    return [[label_out(x) for x in block] for block in P.blocks]


def degree_report_to_dict(r: DegreeReport, A: Measurement) -> dict:
    """Every witness a report carries, with vertex coordinates spelled out."""
    out: dict[str, Any] = {"kind": r.kind, "value": fmt(r.value)}
    if r.witness_state is not None:
        out["witness_state"] = {
            "index": r.witness_state,
            "vertex": [fmt(c) for c in A.space.vertices[r.witness_state]],
        }
    if r.witness_joint is not None:
        out["witness_joint"] = measurement_to_dict(r.witness_joint, inline_model=False)
    if r.witness_effect is not None:
        c, pair = r.witness_effect
        out["witness_effect"] = {"effect": effect_to_dict(c), "pair": [label_out(x) for x in pair]}
    if r.witness_partition is not None:
        out["witness_partition"] = partition_to_list(r.witness_partition)
    if r.inner is not None:
        from .model import coarse_grain

        out["inner"] = degree_report_to_dict(r.inner, coarse_grain(A, r.witness_partition))
    return out


def report(command: str, value, witnesses: Mapping | None = None, guards: Mapping | None = None) -> dict:
    return {
        "command": command,
        "value": value_out(value),
        "witnesses": dict(witnesses or {}),
        "dimension_convention": DIMENSION_CONVENTION,
        "guards": dict(guards or {}),
    }
