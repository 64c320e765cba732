"""Model documents on disk: typed data files, encoded model files, theory resolution.

A *model file* is a JSON document ``{"schema": "isolab.model/1", "theory": kind,
"carriers": ..., "ops": ...}`` where each op lists ``[args, result]`` rows and
absent rows mean undefined.  Kinds that need more than the tables carry extra
keys: ``"index"`` (the category J of a presheaf or M-set), ``"braid"`` (a
symmetry) and ``"crossed"`` (the groups, boundary and action of a crossed
module, whose tables are those of its strict monoidal category).

A *data file* is the typed input of ``isolab model encode``; its shape depends
on the kind, see :func:`structure_from_data`.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .dsl import parse_theory
from .models import SCHEMA, ModelError, PartialStructure, structure_from_doc, structure_to_doc
from .phl import Theory
from .theories import (
    CrossedModule,
    FiniteCategory,
    FiniteGroup,
    FiniteMonoid,
    FiniteStrictMonCat,
    InvariantError,
    Presheaf,
    SymmetricStrictMonCat,
    build_theory,
    crossed_module_smc,
    decode_model,
    encode_cmonoid,
    encode_model,
    presheaf_theory,
)

MODEL_KINDS = ("monoid", "cmonoid", "group", "category", "strmoncat", "ssmc", "presheaf", "mset", "crossed")
ALIASES = {"smc": "strmoncat"}
# kind -> theory used for the tables
_BASE = {"ssmc": "strmoncat", "crossed": "strmoncat", "mset": "presheaf"}


def canonical_kind(kind: str) -> str:
    kind = ALIASES.get(kind, kind)
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(MODEL_KINDS)}")
    return kind


def base_kind(kind: str) -> str:
    return _BASE.get(kind, kind)


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def read_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None


# -- small table helpers --


def _rows(table) -> list:
    return [[list(k) if isinstance(k, tuple) else [k], v] for k, v in sorted(table.items())]


def _binary(rows) -> dict:
    return {tuple(args): res for args, res in rows}


def _unary(rows) -> dict:
    out = {}
    for args, res in rows:
        if len(args) != 1:
            raise ModelError(f"expected a unary row, got {args}")
        out[args[0]] = res
    return out


# -- categories and groups as plain data --


def category_to_data(J: FiniteCategory) -> dict:
    return {
        "name": J.name,
        "objects": list(J.objects),
        "arrows": [[f, J.dom[f], J.cod[f]] for f in J.arrows],
        "identities": {i: J.ident[i] for i in J.objects},
        "comp": _rows(J.comp),
    }


def category_from_data(d: dict) -> FiniteCategory:
    arrows = [a[0] for a in d["arrows"]]
    dom = {a[0]: a[1] for a in d["arrows"]}
    cod = {a[0]: a[2] for a in d["arrows"]}
    return FiniteCategory(tuple(d["objects"]), tuple(arrows), dom, cod, d["identities"], _binary(d["comp"]), d.get("name", ""))


def monoid_to_data(M: FiniteMonoid) -> dict:
    return {"name": M.name, "elements": list(M.elements), "unit": M.unit, "table": _rows(M.table)}


def monoid_from_data(d: dict, group: bool = False) -> FiniteMonoid:
    cls = FiniteGroup if group else FiniteMonoid
    return cls(tuple(d["elements"]), d["unit"], _binary(d["table"]), d.get("name", ""))


def _smc_to_data(C: FiniteStrictMonCat) -> dict:
    return {
        "name": C.name,
        "category": category_to_data(C.category),
        "tensor_objects": _rows(C.tensor_ob),
        "tensor_arrows": _rows(C.tensor_arr),
        "unit_object": C.unit_ob,
        "unit_arrow": C.unit_arr,
    }


def _smc_from_data(d: dict) -> FiniteStrictMonCat:
    return FiniteStrictMonCat(
        category_from_data(d["category"]),
        _binary(d["tensor_objects"]),
        _binary(d["tensor_arrows"]),
        d["unit_object"],
        d["unit_arrow"],
        d.get("name", ""),
    )


def _crossed_to_data(X: CrossedModule) -> dict:
    return {
        "name": X.name,
        "A": monoid_to_data(X.A),
        "G": monoid_to_data(X.G),
        "boundary": dict(X.boundary),
        "action": _rows(X.action),
    }


def _crossed_from_data(d: dict) -> CrossedModule:
    return CrossedModule(
        monoid_from_data(d["A"], group=True),
        monoid_from_data(d["G"], group=True),
        d["boundary"],
        _binary(d["action"]),
        d.get("name", ""),
    )


def _presheaf_to_data(P: Presheaf) -> dict:
    return {
        "name": P.name,
        "index": category_to_data(P.J),
        "sets": {i: list(v) for i, v in P.sets.items()},
        "maps": {f: dict(m) for f, m in P.maps.items()},
    }


def _presheaf_from_data(d: dict) -> Presheaf:
    return Presheaf(category_from_data(d["index"]), d["sets"], d["maps"], d.get("name", ""))


def structure_to_data(kind: str, x) -> dict:
    """The typed data-file document for ``x``."""
    kind = canonical_kind(kind)
    if kind in ("monoid", "cmonoid", "group"):
        body = monoid_to_data(x)
    elif kind == "category":
        body = category_to_data(x)
    elif kind == "strmoncat":
        body = _smc_to_data(x)
    elif kind == "ssmc":
        body = {"smc": _smc_to_data(x.smc), "braid": _rows(x.braid), "name": x.name}
    elif kind in ("presheaf", "mset"):
        body = _presheaf_to_data(x)
    else:
        body = _crossed_to_data(x)
    return {"kind": kind, **body}


def structure_from_data(kind: str, d: dict):
    """Build the typed structure from a data-file document; raises on invariant violations."""
    kind = canonical_kind(kind)
    try:
        if kind in ("monoid", "cmonoid"):
            M = monoid_from_data(d)
            if kind == "cmonoid" and not M.is_commutative():
                raise InvariantError("monoid is not commutative")
            return M
        if kind == "group":
            return monoid_from_data(d, group=True)
        if kind == "category":
            return category_from_data(d)
        if kind == "strmoncat":
            return _smc_from_data(d)
        if kind == "ssmc":
            return SymmetricStrictMonCat(_smc_from_data(d["smc"]), _binary(d["braid"]), d.get("name", ""))
        if kind in ("presheaf", "mset"):
            P = _presheaf_from_data(d)
            if kind == "mset" and len(P.J.objects) != 1:
                raise InvariantError("an M-set is a presheaf over a one-object category")
            return P
        return _crossed_from_data(d)
    except KeyError as exc:
        raise ModelError(f"data file for {kind} is missing the key {exc.args[0]!r}") from None


# -- encoded model documents --


def encode_structure(kind: str, x) -> PartialStructure:
    kind = canonical_kind(kind)
    if kind == "cmonoid":
        return encode_cmonoid(x)
    if kind == "ssmc":
        return encode_model(x.smc)
    if kind == "crossed":
        return encode_model(crossed_module_smc(x))
    return encode_model(x)


def model_doc(kind: str, x) -> dict:
    """Encoded model document for a typed structure."""
    kind = canonical_kind(kind)
    extra: dict[str, Any] = {}
    if kind in ("presheaf", "mset"):
        extra["index"] = category_to_data(x.J)
    elif kind == "ssmc":
        extra["braid"] = _rows(x.braid)
    elif kind == "crossed":
        extra["crossed"] = _crossed_to_data(x)
    if getattr(x, "name", ""):
        extra["name"] = x.name
    return structure_to_doc(encode_structure(kind, x), kind, extra)


@dataclass
class LoadedModel:
    kind: str
    structure: PartialStructure
    doc: dict
    index: FiniteCategory | None = None

    def typed(self):
        """Decode to the typed structure for this kind; raises on invariant violations."""
        kind, doc, M = self.kind, self.doc, self.structure
        if kind == "crossed":
            return _crossed_from_data(doc["crossed"])
        if kind == "ssmc":
            return SymmetricStrictMonCat(decode_model("strmoncat", M), _binary(doc["braid"]), doc.get("name", ""))
        x = decode_model(base_kind(kind), M, self.index)
        if kind == "cmonoid" and not x.is_commutative():
            raise InvariantError("monoid is not commutative")
        if doc.get("name"):
            object.__setattr__(x, "name", doc["name"])
        return x


def resolve_theory(spec: str, index: FiniteCategory | None = None) -> Theory:
    """A built-in kind name, or a path to a ``.theory`` file."""
    kind = ALIASES.get(spec, spec)
    if kind in MODEL_KINDS:
        kind = base_kind(kind)
        if kind == "presheaf":
            if index is None:
                raise ModelError("a presheaf theory needs the index category J")
            return presheaf_theory(index)
        return build_theory(kind)
    path = Path(spec)
    if path.is_file():
        return parse_theory(path.read_text(encoding="utf-8"))
    raise ValueError(f"{spec!r} is neither a built-in kind nor a theory file")


def load_model(path: str | Path, theory_spec: str | None = None) -> LoadedModel:
    """Read an encoded model file; ``theory_spec`` overrides the kind recorded in it."""
    doc = read_json(path)
    if doc.get("schema") != SCHEMA:
        raise ModelError(f"{path}: expected schema {SCHEMA!r}, got {doc.get('schema')!r}")
    spec = theory_spec or doc.get("theory")
    if spec is None:
        raise ModelError(f"{path}: no theory given")
    index = category_from_data(doc["index"]) if "index" in doc else None
    theory = resolve_theory(spec, index)
    kind = ALIASES.get(spec, spec)
    if kind not in MODEL_KINDS:
        kind = theory.name
    return LoadedModel(kind, structure_from_doc(doc, theory), doc, index)
