"""The eight acceptance checks, runnable from the CLI (``isolab suite run``) and from pytest.

Each check returns a :class:`CriterionResult` with a one-line summary and, on
failure, the first counterexample found.
"""

from __future__ import annotations

import itertools
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from . import catalog
from .groups import GroupTable, cyclic, describe, group_isomorphic, trivial_group
from .isotropy import (
    ClosureEscape,
    brute_force_isotropy,
    center_auts,
    check_definable_inner,
    closed_form_isotropy,
    has_picard_shape,
    inv_elements,
    picard,
    setting_for,
    sigma,
    theta,
)
from .models import HomKind, Homomorphism, PartialStructure, check_homomorphism, compose, identity_hom
from .normal_forms import Engine, MonoidEngine, engines_for
from .phl import App, OpSymbol, Signature, Term, Theory, term_size
from .rewriting import RewriteLimit
from .theories import encode_cmonoid, encode_model, ob_arr

MONOID_BOUNDS = (2, 7)
SMC_BOUNDS = (2, 5)
PRESHEAF_BOUNDS = (1, 1)
THETA_BOUNDS = (1, 3)
RANDOM_TERMS = 1000
MAX_TERM_SIZE = 12
RANDOM_HOMS = 200
DEFAULT_SEED = 20240917


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number}: {self.title}: {self.summary} ({self.seconds:.1f}s)"

    def to_doc(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "summary": self.summary,
            "failures": [str(f) for f in self.failures[:10]],
        }


def threads() -> int:
    try:
        return max(1, int(os.environ.get("ISOLAB_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn: Callable[[int], object], n: int) -> list:
    """``[fn(i) for i in range(n)]``, spread over ISOLAB_THREADS worker processes; order is kept."""
    k = threads()
    if k == 1 or n < 2:
        return [fn(i) for i in range(n)]
    with ProcessPoolExecutor(max_workers=min(k, n)) as pool:
        return list(pool.map(fn, range(n)))


# -- 1: monoids --------------------------------------------------------------


def _monoid_case(i: int):
    M = catalog.monoid_fixtures()[i]
    r = brute_force_isotropy(setting_for("monoid", M), MONOID_BOUNDS)
    problems = []
    if not group_isomorphic(r.group, inv_elements(M)):
        problems.append(f"{M.name}: brute force {describe(r.group)} vs Inv {describe(inv_elements(M))}")
    for e in r.elements:
        w = e["M"]
        if len(w) != 2 or M.inverse(w[0]) != w[1]:
            problems.append(f"{M.name}: element {' x '.join(w)} is not a·x·a⁻¹")
    return M.name, len(r.group), problems


def criterion_monoids(seed: int = DEFAULT_SEED) -> CriterionResult:
    t = time.perf_counter()
    results = _map(_monoid_case, len(catalog.monoid_fixtures()))
    dt = time.perf_counter() - t
    failures = [p for _, _, ps in results for p in ps]
    if dt >= 10:
        failures.append(f"runtime {dt:.1f}s exceeds 10s")
    summary = f"{len(results)} monoids, bounds {MONOID_BOUNDS}, Z ≅ Inv(M) with a·x·a⁻¹ forms"
    return CriterionResult(1, "monoid isotropy", not failures, summary, dt, failures)


# -- 2: Picard ---------------------------------------------------------------


def _smc_case(i: int):
    C = catalog.smc_fixtures()[i]
    setting = setting_for("strmoncat", C)
    problems = []
    try:
        r = brute_force_isotropy(setting, SMC_BOUNDS)
    except ClosureEscape as exc:
        return C.name, 0, [f"{C.name}: {exc}"]
    P = picard(C)
    if not group_isomorphic(r.group, P):
        problems.append(f"{C.name}: brute force {describe(r.group)} vs Pic {describe(P)}")
    tens = C.tensor_ob
    for e in r.elements:
        a, _, b = e["O"].letters if len(e["O"].letters) == 3 else (None, None, None)
        ok = has_picard_shape(setting, e) and tens[a, b] == C.unit_ob and tens[b, a] == C.unit_ob
        if not ok:
            problems.append(f"{C.name}: element {setting.format(e)} is not (a⊗x⊗a⁻¹, id(a)⊗x⊗id(a⁻¹))")
    return C.name, len(r.group), problems


def criterion_picard(seed: int = DEFAULT_SEED) -> CriterionResult:
    t = time.perf_counter()
    results = _map(_smc_case, len(catalog.smc_fixtures()))
    dt = time.perf_counter() - t
    failures = [p for _, _, ps in results for p in ps]
    if dt >= 60:
        failures.append(f"runtime {dt:.1f}s exceeds 60s")
    summary = f"{len(results)} strict monoidal categories, bounds {SMC_BOUNDS}, Z ≅ Pic(C) with verbatim shape"
    return CriterionResult(2, "Picard theorem", not failures, summary, dt, failures)


# -- 3: presheaves -----------------------------------------------------------

EXPECTED_PRESHEAF = {
    "BZ2": cyclic(2),
    "BZ3": cyclic(3),
    "BZ4": cyclic(4),
    "BS3": trivial_group(),
    "chain3": trivial_group(),
    "parallel": trivial_group(),
}


def criterion_presheaves(seed: int = DEFAULT_SEED) -> CriterionResult:
    t = time.perf_counter()
    failures = []
    count = 0
    for key, J in catalog.index_categories().items():
        Z = center_auts(J)
        if not group_isomorphic(Z, EXPECTED_PRESHEAF[key]):
            failures.append(f"{key}: Aut(Id_J) is {describe(Z)}")
        models = catalog.presheaf_models(key)
        keys = set()
        for P in models:
            count += 1
            r = brute_force_isotropy(setting_for("presheaf", P), PRESHEAF_BOUNDS)
            if not group_isomorphic(r.group, Z):
                failures.append(f"{key}/{P.name}: brute force {describe(r.group)} vs Aut(Id_J) {describe(Z)}")
            keys.add(tuple(e.key for e in r.elements))
        if len(models) != 3 or len(keys) != 1:
            failures.append(f"{key}: isotropy differs between models")
    dt = time.perf_counter() - t
    if dt >= 30:
        failures.append(f"runtime {dt:.1f}s exceeds 30s")
    summary = f"{count} presheaves over 6 index categories, identical across models"
    return CriterionResult(3, "presheaf isotropy", not failures, summary, dt, failures)


# -- 4: closed forms ---------------------------------------------------------


def criterion_closed_forms(seed: int = DEFAULT_SEED) -> CriterionResult:
    t = time.perf_counter()
    failures = []
    for X in catalog.crossed_module_fixtures():
        Z = closed_form_isotropy("crossed", X)
        G = closed_form_isotropy("group", X.G)
        brute = brute_force_isotropy(setting_for("crossed", X), SMC_BOUNDS).group
        if not (group_isomorphic(Z, G) and group_isomorphic(brute, G)):
            failures.append(f"{X.name}: closed {describe(Z)}, brute {describe(brute)}, G {describe(G)}")
    for S in catalog.symmetric_fixtures():
        Z = closed_form_isotropy("ssmc", S)
        if len(Z) != 1:
            failures.append(f"{S.name}: symmetric closed form has order {len(Z)}")
    P = catalog.mset_fixture()
    Z = closed_form_isotropy("mset", P)
    brute = brute_force_isotropy(setting_for("mset", P), PRESHEAF_BOUNDS).group
    if len(Z) != 2 or not group_isomorphic(Z, brute):
        failures.append(f"M-set: closed {describe(Z)}, brute {describe(brute)}")
    dt = time.perf_counter() - t
    summary = "crossed modules give G, symmetric gives trivial, M-set over Z2xSL2 gives order 2"
    return CriterionResult(4, "closed-form dispatch", not failures, summary, dt, failures)


# -- 5: word problems --------------------------------------------------------


class _NoTerm(Exception):
    pass


def random_term(engine: Engine, sort: str, max_size: int, rng: random.Random) -> Term:
    """A random closed term of ``sort`` over the engine's extended signature, with at most ``max_size`` nodes."""
    sig = engine.signature
    leaves: dict[str, list[OpSymbol]] = {}
    inner: dict[str, list[OpSymbol]] = {}
    for op in sig.ops:
        (leaves if op.arity == 0 else inner).setdefault(op.result_sort, []).append(op)

    def gen(s, budget):
        ls = leaves.get(s, [])
        ops = [op for op in inner.get(s, []) if op.arity < budget]
        if ls and (not ops or budget == 1 or rng.random() < 0.3):
            return App(rng.choice(ls), ())
        if not ops:
            raise _NoTerm
        op = rng.choice(ops)
        spare = budget - 1 - op.arity
        shares = [1] * op.arity
        for _ in range(rng.randint(0, spare)):
            shares[rng.randrange(op.arity)] += 1
        return App(op, tuple(gen(a, b) for a, b in zip(op.arg_sorts, shares)))

    for _ in range(100):
        try:
            return gen(sort, rng.randint(1, max_size))
        except _NoTerm:
            continue
    raise ValueError(f"no closed term of sort {sort}")


def word_problem_engines() -> list[tuple[str, Engine]]:
    """One or more representative engines of every kind."""
    out = []
    M = catalog.product_monoid(catalog.cyclic_group(2), catalog.semilattice())
    out.append(("monoid Z2xSL2", MonoidEngine(encode_model(M))))
    out.append(("monoid T2", MonoidEngine(encode_model(catalog.full_transformation_monoid(2)))))
    out.append(("cmonoid Z4+0", engines_for("cmonoid", encode_cmonoid(catalog.adjoin_zero(catalog.cyclic_group(4))))["M"]))
    out.append(("group S3", engines_for("group", encode_model(catalog.symmetric_group(3)))["G"]))
    for C in (catalog.hand_built_smcs()[0], catalog.max_poset_smc(3)):
        for s, e in engines_for("strmoncat", encode_model(C)).items():
            out.append((f"{e.name} {C.name}", e))
    for key, idx in (("parallel", 1), ("BS3", 0)):
        P = catalog.presheaf_models(key)[idx]
        for s, e in engines_for("presheaf", encode_model(P), P.J).items():
            out.append((f"presheaf {key}/{P.name} x:{s}", e))
    return out


def dual_strategy_failures(engine: Engine, term: Term) -> str | None:
    """Compare direct evaluation with both rewriting strategies; a description of any disagreement."""
    direct = engine.normalize(term)
    try:
        inner = engine.reduce(term, "innermost")
        outer = engine.reduce(term, "outermost")
    except RewriteLimit as exc:
        return f"{term}: {exc}"
    if not (direct == inner == outer):
        return f"{term}: direct {direct}, innermost {inner}, outermost {outer}"
    return None


def congruence_example_failures(M) -> list[str]:
    """``x m1 x m1m2 x`` and ``x e m1 e x e m3 x`` with ``m3 = m1·m2`` have the same normal form."""
    eng = MonoidEngine(encode_model(M))
    c = lambda a: eng.const_names["M", a]  # noqa: E731
    out = []
    for m1, m2 in itertools.product(M.elements, repeat=2):
        m3, e = M.mul(m1, m2), M.unit
        t = f"mul(x, mul({c(m1)}, mul(x, mul(mul({c(m1)}, {c(m2)}), x))))"
        v = f"mul(mul(mul(x, mul({c(e)}, mul({c(m1)}, {c(e)}))), x), mul({c(e)}, mul({c(m3)}, x)))"
        tt, vt = eng.parse(t), eng.parse(v)
        expected = (e, m1, m3, e)
        for strategy in ("innermost", "outermost"):
            a, b = eng.reduce(tt, strategy), eng.reduce(vt, strategy)
            if not (a == b == expected == eng.normalize(tt) == eng.normalize(vt)):
                out.append(f"{M.name} m1={m1} m2={m2} {strategy}: {a} vs {b}")
        if eng.parse_word(f"x {m1} x {m1} {m2} x") != expected:
            out.append(f"{M.name} m1={m1} m2={m2}: word normal form")
    return out


def substitution_law_failures(M, max_x: int = 3) -> list[str]:
    """Unit and associativity laws of substitution, exhaustively up to ``max_x`` x's in the result.

    The direct letterwise ``subst`` is also compared with evaluating the term of ``u`` at ``x := v``.
    """
    eng = MonoidEngine(encode_model(M))
    words = [(a,) for a in M.elements] + eng.enumerate("M", (max_x, 2 * max_x + 1))
    x = eng.indeterminate()
    out = []
    for u in words:
        if eng.subst(x, u) != u or eng.subst(u, x) != u:
            out.append(f"{M.name}: unit law fails at {eng.format(u)}")
    for u, v in itertools.product(words, repeat=2):
        if eng.x_count(u) * eng.x_count(v) > max_x:
            continue
        if eng.subst(u, v) != eng.substitute(u, v):
            out.append(f"{M.name}: subst({eng.format(u)}, {eng.format(v)}) disagrees with term evaluation")
        for w in words:
            if eng.x_count(u) * eng.x_count(v) * eng.x_count(w) > max_x:
                continue
            if eng.subst(eng.subst(u, v), w) != eng.subst(u, eng.subst(v, w)):
                out.append(f"{M.name}: associativity fails at {eng.format(u)}, {eng.format(v)}, {eng.format(w)}")
    return out


def criterion_word_problems(seed: int = DEFAULT_SEED) -> CriterionResult:
    t = time.perf_counter()
    rng = random.Random(seed)
    failures = []
    engines = word_problem_engines()
    for label, eng in engines:
        sorts = eng.theory.sorts
        for _ in range(RANDOM_TERMS):
            term = random_term(eng, rng.choice(sorts), MAX_TERM_SIZE, rng)
            assert term_size(term) <= MAX_TERM_SIZE
            bad = dual_strategy_failures(eng, term)
            if bad:
                failures.append(f"{label}: {bad}")
    small = catalog.small_monoids(3)
    for M in small:
        failures += substitution_law_failures(M)
    for M in catalog.monoid_fixtures():
        failures += congruence_example_failures(M)
    dt = time.perf_counter() - t
    summary = (
        f"{RANDOM_TERMS} terms x {len(engines)} engines, substitution laws on {len(small)} monoids, congruence example"
    )
    return CriterionResult(5, "word-problem properties", not failures, summary, dt, failures)


# -- 6: Arr preservation -----------------------------------------------------


def arr_letterwise(word) -> tuple:
    """Arrow word of ``C⟨x_O⟩`` to the matching element of ``Arr(C)⟨x⟩``: ``id(x)`` becomes ``x``."""
    return tuple(a for i, a in enumerate(word.letters) if i % 2 == 0)


def arr_preservation_failures(C, max_len: int = 3) -> list[str]:
    smc = engines_for("strmoncat", encode_model(C))["O"]
    arr = MonoidEngine(encode_model(ob_arr(C, "Arr")))
    words = smc.constants("A") + [w for w in smc.enumerate("A", (max_len, max_len)) if w.sort == "A"]
    targets = arr.constants("M") + arr.enumerate("M", (max_len, max_len))
    out = []
    image = [arr_letterwise(w) for w in words]
    if sorted(image) != sorted(targets) or len(set(image)) != len(image):
        out.append(f"{C.name}: the letterwise map is not a bijection on words of length ≤ {max_len}")
    if arr_letterwise(smc.apply("I_A", ())) != arr.apply("e", ()):
        out.append(f"{C.name}: unit not preserved")
    for u, v in itertools.product(words, repeat=2):
        if arr_letterwise(smc.tensor(u, v)) != arr.mul(arr_letterwise(u), arr_letterwise(v)):
            out.append(f"{C.name}: tensor of {smc.format(u)} and {smc.format(v)} not preserved")
    return out


def arr_fixtures() -> list:
    return [C for C in catalog.smc_fixtures() if len(C.objects) <= 4]


def criterion_arr(seed: int = DEFAULT_SEED) -> CriterionResult:
    t = time.perf_counter()
    fixtures = arr_fixtures()
    failures = [f for C in fixtures for f in arr_preservation_failures(C)]
    dt = time.perf_counter() - t
    summary = f"letterwise Arr(C<x_O>) -> Arr(C)<x> is a monoid isomorphism on {len(fixtures)} categories"
    return CriterionResult(6, "Arr preservation", not failures, summary, dt, failures)


# -- 7: isomorphism reflection -----------------------------------------------

RANDOM_THEORY = Theory(
    "random",
    Signature(
        ("P", "Q"),
        (
            OpSymbol("c", (), "P"),
            OpSymbol("u", ("P",), "Q"),
            OpSymbol("k", ("Q",), "P"),
            OpSymbol("b", ("P", "P"), "P"),
        ),
    ),
    (),
)


def random_structure(rng: random.Random, theory: Theory = RANDOM_THEORY, max_size: int = 3) -> PartialStructure:
    carriers = {s: tuple(f"{s.lower()}{i}" for i in range(rng.randint(1, max_size))) for s in theory.sorts}
    tables = {}
    for op in theory.ops:
        rows = {}
        for args in itertools.product(*(carriers[s] for s in op.arg_sorts)):
            if rng.random() < 0.6:
                rows[args] = rng.choice(carriers[op.result_sort])
        tables[op.name] = rows
    return PartialStructure(theory, carriers, tables)


def random_bijective_hom(rng: random.Random, M: PartialStructure) -> Homomorphism:
    """Transport ``M`` along random bijections, then sometimes define extra rows in the copy."""
    theory = M.theory
    maps = {}
    for s in theory.sorts:
        targets = [f"{s}{i}" for i in range(len(M.carrier(s)))]
        rng.shuffle(targets)
        maps[s] = dict(zip(M.carrier(s), targets))
    carriers = {s: tuple(sorted(maps[s].values())) for s in theory.sorts}
    extra = rng.random() < 0.5
    tables = {}
    for op in theory.ops:
        rows = {}
        for args in itertools.product(*(M.carrier(s) for s in op.arg_sorts)):
            img = tuple(maps[s][a] for s, a in zip(op.arg_sorts, args))
            r = M.lookup(op.name, args)
            if r is not None:
                rows[img] = maps[op.result_sort][r]
            elif extra and rng.random() < 0.3:
                rows[img] = rng.choice(carriers[op.result_sort])
        tables[op.name] = rows
    return Homomorphism(M, PartialStructure(theory, carriers, tables), maps)


def inverse_homomorphism(h: Homomorphism) -> Homomorphism | None:
    """Exhaustive search over all maps ``N -> M`` for a two-sided inverse homomorphism."""
    M, N = h.source, h.target
    sorts = M.theory.sorts
    per_sort = []
    for s in sorts:
        dom, cod = N.carrier(s), M.carrier(s)
        per_sort.append([dict(zip(dom, img)) for img in itertools.product(cod, repeat=len(dom))])
    for choice in itertools.product(*per_sort):
        g = Homomorphism(N, M, dict(zip(sorts, choice)))
        if check_homomorphism(g) is HomKind.NOT_HOM:
            continue
        if compose(g, h).maps == identity_hom(M).maps and compose(h, g).maps == identity_hom(N).maps:
            return g
    return None


def criterion_reflection(seed: int = DEFAULT_SEED) -> CriterionResult:
    t = time.perf_counter()
    rng = random.Random(seed)
    failures = []
    isos = 0
    for i in range(RANDOM_HOMS):
        M = random_structure(rng)
        h = random_bijective_hom(rng, M)
        kind = check_homomorphism(h)
        has_inverse = inverse_homomorphism(h) is not None
        isos += kind is HomKind.ISO
        if kind is HomKind.NOT_HOM or (kind is HomKind.ISO) != has_inverse:
            failures.append(f"case {i}: classified {kind.value}, inverse exists: {has_inverse}")
    dt = time.perf_counter() - t
    summary = f"{RANDOM_HOMS} random bijective homomorphisms ({isos} iso), classification matches inverse search"
    return CriterionResult(7, "isomorphism reflection", not failures, summary, dt, failures)


# -- 8: θ and σ --------------------------------------------------------------


def theta_sigma_failures(C) -> list[str]:
    setting = setting_for("strmoncat", C)
    out = []
    P = picard(C)
    seen = {}
    ident = setting.identity()
    for a in P.labels:
        e = theta(setting, a)
        if a == C.unit_ob and e != ident:
            out.append(f"{C.name}: θ(unit) is not the identity family")
        verdict = check_definable_inner(setting, e, THETA_BOUNDS)
        if not verdict:
            out.append(f"{C.name}: θ({a}) fails: {verdict}")
        if sigma(setting, e) != a:
            out.append(f"{C.name}: σ(θ({a})) = {sigma(setting, e)}")
        if e["O"] in seen:
            out.append(f"{C.name}: θ({a}) = θ({seen[e['O']]})")
        seen[e["O"]] = a
    for a, b in itertools.product(P.labels, repeat=2):
        prod = setting.compose(theta(setting, a), theta(setting, b))
        if prod is None or sigma(setting, prod) != C.tensor_ob[a, b]:
            out.append(f"{C.name}: σ is not multiplicative at ({a}, {b})")
    return out


def criterion_theta_sigma(seed: int = DEFAULT_SEED) -> CriterionResult:
    t = time.perf_counter()
    fixtures = list(catalog.smc_fixtures()) + catalog.crossed_smc_fixtures()
    failures = [f for C in fixtures for f in theta_sigma_failures(C)]
    dt = time.perf_counter() - t
    summary = f"σ∘θ = 1 elementwise on {len(fixtures)} strict monoidal categories"
    return CriterionResult(8, "θ/σ section-retraction", not failures, summary, dt, failures)


CRITERIA: dict[int, Callable[[int], CriterionResult]] = {
    1: criterion_monoids,
    2: criterion_picard,
    3: criterion_presheaves,
    4: criterion_closed_forms,
    5: criterion_word_problems,
    6: criterion_arr,
    7: criterion_reflection,
    8: criterion_theta_sigma,
}


def run_suite(seed: int = DEFAULT_SEED, only=None) -> list[CriterionResult]:
    numbers = sorted(CRITERIA) if not only else sorted(only)
    return [CRITERIA[n](seed) for n in numbers]


def group_summary(G: GroupTable) -> str:
    return f"{describe(G)} (order {len(G)})"
