"""One-indeterminate normal-form engines, one per built-in theory."""

from __future__ import annotations

from .base import Engine, EngineError, NotNormal, constant_names
from .monoid import CMonoidEngine, GroupEngine, MonoidEngine
from .presheaf import Const, Gen, PresheafEngine, presheaf_engines
from .smc import SmcEngine, Word, smc_engines

ENGINE_KINDS = ("monoid", "cmonoid", "group", "strmoncat", "presheaf")


def engines_for(kind: str, model, J=None) -> dict[str, Engine]:
    """One engine per sort: the engine for sort ``S`` adjoins an indeterminate of sort ``S``."""
    if kind == "monoid":
        return {"M": MonoidEngine(model)}
    if kind == "cmonoid":
        return {"M": CMonoidEngine(model)}
    if kind == "group":
        return {"G": GroupEngine(model)}
    if kind in ("strmoncat", "smc"):
        return smc_engines(model)
    if kind == "presheaf":
        if J is None:
            raise EngineError("the presheaf engine needs the index category J")
        return presheaf_engines(model, J)
    raise EngineError(f"no normal-form engine for {kind!r}; available: {', '.join(ENGINE_KINDS)}")


__all__ = [
    "CMonoidEngine",
    "Const",
    "Engine",
    "EngineError",
    "Gen",
    "GroupEngine",
    "MonoidEngine",
    "NotNormal",
    "PresheafEngine",
    "SmcEngine",
    "Word",
    "constant_names",
    "engines_for",
    "presheaf_engines",
    "smc_engines",
]
