"""Command-line interface.

Exit codes: 0 on success or agreement, 1 when a check fails (a certificate is
printed), 2 on usage errors.  ``--format json`` prints one self-describing
document per run with sorted keys, so equal inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import catalog
from .dsl import DSLError, format_term, format_theory, parse_theory
from .files import (
    ALIASES,
    MODEL_KINDS,
    base_kind,
    canonical_kind,
    category_from_data,
    load_model,
    model_doc,
    read_json,
    sha256_file,
    structure_from_data,
)
from .groups import GroupError, GroupTable, describe, group_isomorphism
from .isotropy import SETTING_KINDS, ClosureEscape, brute_force_isotropy, closed_form_isotropy, setting_for
from .models import ModelError, check_model, dumps
from .normal_forms import EngineError, engines_for
from .phl import SortError
from .rewriting import STRATEGIES, RewriteLimit
from .suite import DEFAULT_SEED, run_suite
from .theories import KINDS as THEORY_KINDS
from .theories import InvariantError, build_theory

RUN_SCHEMA = "isolab.run/1"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    method: str | None = None
    bounds: tuple[int, int] | None = None
    format: str = "text"
    seed: int | None = None


@dataclass
class Outcome:
    code: int
    text: list[str]
    results: dict


def parse_bounds(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*,\s*(\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError("bounds must look like K,L")
    k, l = int(m.group(1)), int(m.group(2))
    if k < 1 or l < 1:
        raise argparse.ArgumentTypeError("bounds must be positive")
    return k, l


def _index_category(spec: str | None):
    if spec is None:
        return None
    cats = catalog.index_categories()
    if spec in cats:
        return cats[spec]
    path = Path(spec)
    if path.is_file():
        return category_from_data(read_json(path))
    raise UsageError(f"unknown index category {spec!r}; use a file or one of {', '.join(cats)}")


def _require_file(path: str) -> str:
    if not Path(path).is_file():
        raise UsageError(f"no such file: {path}")
    return path


# -- theory --------------------------------------------------------------------


def cmd_theory_emit(args, cfg) -> Outcome:
    kind = ALIASES.get(args.kind, args.kind)
    if kind not in THEORY_KINDS:
        raise UsageError(f"unknown theory kind {args.kind!r}; expected one of {', '.join(THEORY_KINDS)}")
    J = _index_category(args.index)
    if kind == "presheaf" and J is None:
        raise UsageError("theory emit presheaf needs --index")
    text = format_theory(build_theory(kind, J))
    th = build_theory(kind, J)
    return Outcome(0, [text.rstrip("\n")], {"source": text, "sorts": len(th.sorts), "ops": len(th.ops), "axioms": len(th.axioms)})


def cmd_theory_check(args, cfg) -> Outcome:
    source = Path(_require_file(args.file)).read_text(encoding="utf-8")
    try:
        th = parse_theory(source)
    except DSLError as exc:
        return Outcome(1, [f"error at line {exc.line}, column {exc.col}: {exc}"], {"ok": False, "error": str(exc), "line": exc.line, "column": exc.col})
    except SortError as exc:
        return Outcome(1, [f"sort error: {exc}"], {"ok": False, "error": str(exc)})
    roundtrip = parse_theory(format_theory(th)) == th
    res = {"ok": roundtrip, "name": th.name, "sorts": len(th.sorts), "ops": len(th.ops), "axioms": len(th.axioms), "roundtrip": roundtrip}
    lines = [f"theory {th.name}: {len(th.sorts)} sorts, {len(th.ops)} ops, {len(th.axioms)} axioms"]
    if not roundtrip:
        lines.append("pretty-printing does not round-trip")
    return Outcome(0 if roundtrip else 1, lines, res)


# -- model -----------------------------------------------------------------------


def _load(theory_spec, path):
    try:
        return load_model(_require_file(path), theory_spec)
    except ValueError as exc:
        if isinstance(exc, (ModelError, SortError)):
            raise
        raise UsageError(str(exc)) from None


def cmd_model_check(args, cfg) -> Outcome:
    try:
        lm = _load(args.theory, args.model)
    except (ModelError, SortError) as exc:
        return Outcome(1, [f"malformed model: {exc}"], {"ok": False, "error": str(exc)})
    report = check_model(lm.structure)
    failures = [{"axiom": ax.label or str(ax), "sequent": str(ax), "witness": dict(sorted(env.items()))} for ax, env in report.failures]
    if report.ok:
        lines = [f"ok: {lm.structure.theory.name} model satisfies all {len(lm.structure.theory.axioms)} axioms"]
    else:
        lines = [f"failed axiom {f['axiom']}: {f['sequent']}  witness {f['witness'] or '{}'}" for f in failures]
    return Outcome(0 if report.ok else 1, lines, {"ok": report.ok, "failures": failures})


def cmd_model_encode(args, cfg) -> Outcome:
    kind = _kind(args.kind)
    data = read_json(_require_file(args.data))
    try:
        x = structure_from_data(kind, data)
    except (InvariantError, ModelError) as exc:
        witness = getattr(exc, "witness", None)
        return Outcome(1, [f"invalid {kind}: {exc}"], {"ok": False, "error": str(exc), "witness": _jsonable(witness)})
    doc = model_doc(kind, x)
    text = dumps(doc)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        lines = [f"wrote {args.output}"]
    else:
        lines = [text.rstrip("\n")]
    return Outcome(0, lines, {"ok": True, "model": doc})


def _kind(text: str) -> str:
    try:
        return canonical_kind(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _jsonable(x):
    return json.loads(json.dumps(x, default=str)) if x is not None else None


# -- nf ----------------------------------------------------------------------------

_POWER = re.compile(r"^x(?:\^(-?\d+)|⁻¹)$")


def _word_term(eng, text: str):
    """A whitespace- or ⊗-separated word of element ids and ``x`` as a right-nested product term."""
    sort = eng.sort
    if eng.name.startswith("smc"):
        op = f"tens_{sort}"
    elif eng.theory.signature.has_op("mul"):
        op = "mul"
    else:
        raise UsageError("words are only understood for monoid-like and strict monoidal engines; give a term")
    letters = []
    for tok in text.replace("⊗", " ").split():
        m = _POWER.match(tok)
        if tok == "x":
            letters.append(eng.x_term())
        elif m and op == "mul":
            k = -1 if m.group(1) is None else int(m.group(1))
            if k == 0 or (k < 0 and not eng.theory.signature.has_op("inv")):
                raise UsageError(f"cannot read {tok!r} here")
            base = eng.x_term() if k > 0 else eng.app("inv", eng.x_term())
            letters += [base] * abs(k)
        elif (sort, tok) in eng.const_ops:
            letters.append(eng.const_term(sort, tok))
        else:
            raise UsageError(f"{tok!r} is not an element of {sort} or x")
    if not letters:
        raise UsageError("empty word")
    out = letters[-1]
    for t in reversed(letters[:-1]):
        out = eng.app(op, t, out)
    return out


def cmd_nf_reduce(args, cfg) -> Outcome:
    kind = _kind(args.kind)
    if base_kind(kind) not in ("monoid", "cmonoid", "group", "strmoncat", "presheaf") or kind == "ssmc":
        raise UsageError(f"no normal-form engine for {kind}")
    lm = _load(kind, args.model)
    engines = engines_for(base_kind(kind), lm.structure, lm.index)
    sort = args.sort or next(iter(engines))
    if sort not in engines:
        raise UsageError(f"unknown sort {sort!r}; expected one of {', '.join(engines)}")
    eng = engines[sort]
    try:
        term = eng.parse(args.term) if "(" in args.term or "@" in args.term else _word_term(eng, args.term)
    except (DSLError, SortError) as exc:
        raise UsageError(f"cannot parse term: {exc}") from None
    trace = [] if args.trace else None
    try:
        if args.strategy == "direct":
            value = eng.normalize(term)
        else:
            value = eng.reduce(term, args.strategy, trace)
    except RewriteLimit as exc:
        return Outcome(1, [str(exc)], {"ok": False, "error": str(exc)})
    nf = None if value is None else eng.format(value)
    lines = [f"{format_term(term)}  ~>  {nf if nf is not None else 'undefined'}"]
    steps = []
    for st in trace or ():
        steps.append({"rule": st.rule, "position": list(st.position), "redex": format_term(st.redex), "contractum": format_term(st.contractum)})
        lines.append(f"  {st.rule} at {list(st.position)}: {format_term(st.redex)} -> {format_term(st.contractum)}")
    res = {"term": format_term(term), "defined": value is not None, "normal_form": nf, "engine": eng.name, "indeterminate_sort": sort}
    if args.trace:
        res["steps"] = steps
    return Outcome(0, lines, res)


# -- isotropy ----------------------------------------------------------------------


def _typed(kind, path):
    lm = _load(kind, path)
    try:
        return lm.typed()
    except (InvariantError, ModelError) as exc:
        raise ModelError(f"model is not a valid {kind}: {exc}") from None


def _group_lines(G: GroupTable) -> list[str]:
    lines = [f"group: {describe(G)} (order {len(G)})"]
    for a in G.labels:
        deco = G.decorations.get(a)
        lines.append(f"  {a}" + (f" = {deco}" if deco is not None else ""))
    lines.append(G.format())
    return lines


def _brute(kind, x, bounds):
    if kind not in SETTING_KINDS:
        raise UsageError(f"brute force needs a normal-form engine; not available for {kind}")
    return brute_force_isotropy(setting_for(kind, x), bounds)


def cmd_isotropy_compute(args, cfg) -> Outcome:
    kind = _kind(args.kind)
    try:
        x = _typed(kind, args.model)
    except ModelError as exc:
        return Outcome(1, [str(exc)], {"ok": False, "error": str(exc)})
    if args.method == "closed":
        G = closed_form_isotropy(kind, x)
    else:
        try:
            G = _brute(kind, x, args.bounds).group
        except ClosureEscape as exc:
            return Outcome(1, [f"closure escape: {exc}"], {"ok": False, "closure_escape": str(exc), "witness": _jsonable(exc.witness)})
    return Outcome(0, _group_lines(G), {"ok": True, "group": G.to_doc()})


def cmd_isotropy_compare(args, cfg) -> Outcome:
    kind = _kind(args.kind)
    try:
        x = _typed(kind, args.model)
    except ModelError as exc:
        return Outcome(1, [str(exc)], {"ok": False, "error": str(exc)})
    closed = closed_form_isotropy(kind, x)
    try:
        brute = _brute(kind, x, args.bounds).group
    except ClosureEscape as exc:
        return Outcome(1, [f"closure escape: {exc}"], {"ok": False, "closure_escape": str(exc), "witness": _jsonable(exc.witness)})
    try:
        iso = group_isomorphism(brute, closed)
    except GroupError as exc:
        raise UsageError(str(exc)) from None
    res = {"closed": closed.to_doc(), "brute": brute.to_doc()}
    if iso is not None:
        lines = [f"isomorphic: {describe(closed)}"]
        lines += [f"  {a} = {brute.decorations.get(a, a)}  ->  {iso[a]}" for a in brute.labels]
        res.update(ok=True, isomorphism=dict(sorted(iso.items())))
        return Outcome(0, lines, res)
    cert = {
        "brute_order": len(brute),
        "closed_order": len(closed),
        "brute_order_profile": [list(p) for p in brute.order_profile()],
        "closed_order_profile": [list(p) for p in closed.order_profile()],
    }
    lines = [f"not isomorphic: brute force gives {describe(brute)}, closed form gives {describe(closed)}", f"  certificate {cert}"]
    res.update(ok=False, certificate=cert)
    return Outcome(1, lines, res)


# -- suite -------------------------------------------------------------------------


def cmd_suite_run(args, cfg) -> Outcome:
    only = None
    if args.only:
        try:
            only = [int(n) for n in args.only.split(",")]
        except ValueError:
            raise UsageError("--only takes a comma-separated list of criterion numbers") from None
        if any(n < 1 or n > 8 for n in only):
            raise UsageError("criteria are numbered 1 to 8")
    results = run_suite(args.seed, only)
    ok = all(r.passed for r in results)
    lines = [r.line() for r in results]
    for r in results:
        lines += [f"    {f}" for f in r.failures[:5]]
    return Outcome(0 if ok else 1, lines, {"ok": ok, "criteria": [r.to_doc() for r in results]})


# -- plumbing ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="output format")

    p = argparse.ArgumentParser(prog="isolab", description="Partial Horn theories, normal forms and isotropy groups.")
    top = p.add_subparsers(dest="group", required=True)

    th = top.add_parser("theory", help="emit or check theory files").add_subparsers(dest="action", required=True)
    s = th.add_parser("emit", parents=[common], help="print a built-in theory in the DSL")
    s.add_argument("kind", help=", ".join(THEORY_KINDS))
    s.add_argument("--index", help="index category for presheaf: a catalog key or a category data file")
    s.set_defaults(func=cmd_theory_emit)
    s = th.add_parser("check", parents=[common], help="parse a theory file")
    s.add_argument("file")
    s.set_defaults(func=cmd_theory_check)

    mo = top.add_parser("model", help="check or encode models").add_subparsers(dest="action", required=True)
    s = mo.add_parser("check", parents=[common], help="check a model file against a theory")
    s.add_argument("theory", help="a built-in kind or a .theory file")
    s.add_argument("model")
    s.set_defaults(func=cmd_model_check)
    s = mo.add_parser("encode", parents=[common], help="encode a typed data file as a model file")
    s.add_argument("kind", help=", ".join(MODEL_KINDS))
    s.add_argument("data")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_model_encode)

    nf = top.add_parser("nf", help="normal forms").add_subparsers(dest="action", required=True)
    s = nf.add_parser("reduce", parents=[common], help="normalize a term of M<x>")
    s.add_argument("kind")
    s.add_argument("model")
    s.add_argument("term", help="a term such as 'mul(x, @1)' or a word such as 'x 1 x'")
    s.add_argument("--sort", help="sort of the indeterminate (default: the first sort)")
    s.add_argument("--strategy", choices=(*STRATEGIES, "direct"), default="innermost")
    s.add_argument("--trace", action="store_true", help="list the rewrite steps")
    s.set_defaults(func=cmd_nf_reduce)

    iso = top.add_parser("isotropy", help="isotropy groups").add_subparsers(dest="action", required=True)
    for name, func in (("compute", cmd_isotropy_compute), ("compare", cmd_isotropy_compare)):
        s = iso.add_parser(name, parents=[common], help=f"{name} the isotropy group")
        if name == "compute":
            s.add_argument("--method", choices=("closed", "brute"), default="brute")
        s.add_argument("--bounds", type=parse_bounds, default=(2, 5), help="max x-occurrences,max word length")
        s.add_argument("kind")
        s.add_argument("model")
        s.set_defaults(func=func)

    su = top.add_parser("suite", help="acceptance suite").add_subparsers(dest="action", required=True)
    s = su.add_parser("run", parents=[common], help="run the acceptance checks")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.set_defaults(func=cmd_suite_run)
    return p


def _config(args) -> RunConfig:
    inputs = [getattr(args, a) for a in ("file", "model", "data") if getattr(args, a, None)]
    return RunConfig(
        command=f"{args.group} {args.action}",
        inputs=inputs,
        method=getattr(args, "method", None),
        bounds=getattr(args, "bounds", None),
        format=args.format,
        seed=getattr(args, "seed", None),
    )


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = _config(args)
    try:
        outcome = args.func(args, cfg)
    except UsageError as exc:
        print(f"isolab: error: {exc}", file=sys.stderr)
        return 2
    except (EngineError, InvariantError, ModelError, SortError) as exc:
        outcome = Outcome(1, [f"error: {exc}"], {"ok": False, "error": str(exc)})
    if cfg.format == "json":
        doc = {
            "schema": RUN_SCHEMA,
            "command": cfg.command,
            "config": {k: v for k, v in asdict(cfg).items() if k not in ("command", "inputs", "format")},
            "inputs": {p: sha256_file(p) for p in cfg.inputs},
            "results": outcome.results,
            "exit_code": outcome.code,
        }
        out.write(json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n")
    else:
        for line in outcome.text:
            print(line, file=out)
    return outcome.code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
