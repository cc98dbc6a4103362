"""Finite reflexive graphs as presheaves on the two-object base, the preorder
reflection, and the witness searches certifying that the reflection preserves
finite products and is an exponential ideal but is not semi-left-exact.

A reflexive graph here is (n, edges): n vertices v0..v{n-1}, one distinguished
loop per vertex, plus a multiset of extra directed edges (parallel edges and
extra loops allowed).  A preorder embeds as the graph with exactly one edge
per related pair, the distinguished loops being the reflexivity edges.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .budget import Budget, ensure_budget
from .errors import BudgetExceeded, ShapeMismatch
from .finset import FinFn, FinSet, canon_key
from .presheaf import (
    Presheaf,
    PresheafMap,
    dependent_product,
    exponential,
    nat_transformations,
    product_presheaf,
    pullback_presheaf,
)
from .verdicts import FAIL, INCONCLUSIVE, NOT_FOUND, PASS, MediatorAnalysis, Verdict, WitnessSquare


@lru_cache(maxsize=1)
def base():
    from .fixtures import delta1_base
    return delta1_base()


# ---------------------------------------------------------------------------
# reflexive graphs


@dataclass(frozen=True)
class RefGraph:
    n: int
    edges: tuple  # sorted multiset of (src, tgt) vertex indices

    def __post_init__(self):
        assert self.edges == tuple(sorted(self.edges))
        for (a, b) in self.edges:
            assert 0 <= a < self.n and 0 <= b < self.n

    @staticmethod
    def of(n: int, edges) -> "RefGraph":
        return RefGraph(n, tuple(sorted(tuple(e) for e in edges)))

    def canonical(self) -> "RefGraph":
        best = None
        for perm in itertools.permutations(range(self.n)):
            relab = tuple(sorted((perm[a], perm[b]) for a, b in self.edges))
            if best is None or relab < best:
                best = relab
        return RefGraph(self.n, best if best is not None else ())

    def is_canonical(self) -> bool:
        return self == self.canonical()

    def presheaf(self) -> Presheaf:
        C = base()
        verts = [f"v{i}" for i in range(self.n)]
        loops = [("r", i) for i in range(self.n)]
        extra = [("e", k, a, b) for k, (a, b) in enumerate(self.edges)]
        at = {"V": FinSet.of(verts), "E": FinSet.of(loops + extra)}

        def src(e):
            return f"v{e[1]}" if e[0] == "r" else f"v{e[2]}"

        def tgt(e):
            return f"v{e[1]}" if e[0] == "r" else f"v{e[3]}"

        act = {
            "d0": FinFn.of(at["E"], at["V"], src),
            "d1": FinFn.of(at["E"], at["V"], tgt),
            "s": FinFn.of(at["V"], at["E"], {f"v{i}": ("r", i) for i in range(self.n)}),
        }
        act["d0.s"] = act["d0"].then(act["s"])
        act["d1.s"] = act["d1"].then(act["s"])
        return Presheaf.of(C, at, act)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @staticmethod
    def from_json(j: dict) -> "RefGraph":
        return RefGraph.of(j["n"], [tuple(e) for e in j["edges"]])


def graphs_of_size(n: int, e: int):
    """Canonical representatives with exactly n vertices and e extra edges."""
    pairs = [(a, b) for a in range(n) for b in range(n)]
    for combo in itertools.combinations_with_replacement(pairs, e):
        g = RefGraph.of(n, combo)
        if g.is_canonical():
            yield g


def enumerate_graphs(max_v: int, max_e: int):
    """All reflexive graphs within bounds, one per isomorphism class, in
    canonically increasing (n, e, encoding) order."""
    for n in range(max_v + 1):
        for e in range(max_e + 1):
            yield from graphs_of_size(n, e)


# ---------------------------------------------------------------------------
# preorders


@dataclass(frozen=True)
class Preorder:
    carrier: tuple
    rel: frozenset  # ordered pairs, includes the diagonal

    @staticmethod
    def of(carrier, rel) -> "Preorder":
        carrier = tuple(sorted(carrier, key=canon_key))
        rel = frozenset(rel) | {(x, x) for x in carrier}
        p = Preorder(carrier, rel)
        bad = p.violations()
        if bad:
            raise ShapeMismatch("; ".join(bad))
        return p

    def violations(self) -> list[str]:
        out = []
        cs = set(self.carrier)
        for (a, b) in self.rel:
            if a not in cs or b not in cs:
                out.append(f"relation pair ({a!r}, {b!r}) outside carrier")
        for x in self.carrier:
            if (x, x) not in self.rel:
                out.append(f"not reflexive at {x!r}")
        for (a, b) in self.rel:
            for (b2, c) in self.rel:
                if b2 == b and (a, c) not in self.rel:
                    out.append(f"not transitive: {a!r} <= {b!r} <= {c!r}")
        return out

    def leq(self, a, b) -> bool:
        return (a, b) in self.rel

    def to_json(self) -> dict:
        from .report import elem_to_json
        return {
            "carrier": [elem_to_json(x) for x in self.carrier],
            "rel": sorted(([elem_to_json(a), elem_to_json(b)] for a, b in self.rel)),
        }

    @staticmethod
    def from_json(j: dict) -> "Preorder":
        from .report import elem_from_json
        return Preorder.of(
            [elem_from_json(x) for x in j["carrier"]],
            {(elem_from_json(a), elem_from_json(b)) for a, b in j["rel"]},
        )


def preorders_of_size(n: int):
    """Preorders on v0..v{n-1}, one canonical representative per iso class."""
    elems = [f"v{i}" for i in range(n)]
    off_diag = [(a, b) for a in elems for b in elems if a != b]
    seen = set()
    for bits in itertools.product([0, 1], repeat=len(off_diag)):
        rel = {p for p, b in zip(off_diag, bits) if b} | {(x, x) for x in elems}
        if any((a, c) not in rel for (a, b) in rel for (b2, c) in rel if b2 == b):
            continue
        key = _canon_rel(elems, rel)
        if key in seen:
            continue
        seen.add(key)
        yield Preorder.of(elems, rel)


def _canon_rel(elems, rel):
    best = None
    idx = {x: i for i, x in enumerate(elems)}
    for perm in itertools.permutations(range(len(elems))):
        enc = tuple(sorted((perm[idx[a]], perm[idx[b]]) for (a, b) in rel))
        if best is None or enc < best:
            best = enc
    return best


def enumerate_preorders(max_n: int):
    for n in range(max_n + 1):
        yield from preorders_of_size(n)


def monotone_maps(P: Preorder, Q: Preorder):
    """All monotone maps P -> Q as dicts, canonically ordered."""
    out = []
    for values in itertools.product(Q.carrier, repeat=len(P.carrier)):
        f = dict(zip(P.carrier, values))
        if all(Q.leq(f[a], f[b]) for (a, b) in P.rel):
            out.append(f)
    return out


# ---------------------------------------------------------------------------
# the reflection


def embed(P: Preorder) -> Presheaf:
    """One edge per related pair; reflexivity pairs are the distinguished loops."""
    C = base()
    at = {"V": FinSet.of(P.carrier), "E": FinSet.of(tuple(p) for p in P.rel)}
    act = {
        "d0": FinFn.of(at["E"], at["V"], {p: p[0] for p in at["E"]}),
        "d1": FinFn.of(at["E"], at["V"], {p: p[1] for p in at["E"]}),
        "s": FinFn.of(at["V"], at["E"], {x: (x, x) for x in at["V"]}),
    }
    act["d0.s"] = act["d0"].then(act["s"])
    act["d1.s"] = act["d1"].then(act["s"])
    return Presheaf.of(C, at, act)


def embed_map(u: dict, P: Preorder, Q: Preorder) -> PresheafMap:
    """The graph map F(u): embed(P) -> embed(Q) of a monotone map u."""
    src, tgt = embed(P), embed(Q)
    return PresheafMap.of(src, tgt, {
        "V": {x: u[x] for x in P.carrier},
        "E": {(a, b): (u[a], u[b]) for (a, b) in src.at["E"]},
    })


def _edge_pairs(G: Presheaf):
    return [(G.act["d0"](e), G.act["d1"](e)) for e in G.at["E"]]


def transitive_closure(carrier, pairs) -> frozenset:
    rel = set(pairs) | {(x, x) for x in carrier}
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (b2, c) in list(rel):
                if b2 == b and (a, c) not in rel:
                    rel.add((a, c))
                    changed = True
    return frozenset(rel)


def preorder_reflection(G: Presheaf):
    """(L G, unit: G -> embed(L G)); the reflexive-transitive closure of the
    edge relation, parallel edges collapsing to one."""
    carrier = list(G.at["V"])
    rel = transitive_closure(carrier, _edge_pairs(G))
    LG = Preorder.of(carrier, rel)
    FLG = embed(LG)
    unit = PresheafMap.of(G, FLG, {
        "V": {v: v for v in carrier},
        "E": {e: (G.act["d0"](e), G.act["d1"](e)) for e in G.at["E"]},
    })
    return LG, unit


def reflect_map(f: PresheafMap) -> dict:
    """L on morphisms: the vertex component, which is monotone on reflections."""
    return {v: f.components["V"](v) for v in f.source.at["V"]}


def graph_maps(G: Presheaf, H: Presheaf, budget: Budget | int | None = None):
    return nat_transformations(G, H, budget)


def vertex_maps_to_embedded(G: Presheaf, Q: Preorder):
    """Graph maps G -> embed(Q) biject with edge-respecting vertex maps,
    since embed(Q) has one edge per related pair."""
    FQ = embed(Q)
    out = []
    verts = list(G.at["V"])
    pairs = _edge_pairs(G)
    for values in itertools.product(Q.carrier, repeat=len(verts)):
        w = dict(zip(verts, values))
        if all(Q.leq(w[a], w[b]) for (a, b) in pairs):
            comps = {
                "V": w,
                "E": {e: (w[G.act["d0"](e)], w[G.act["d1"](e)]) for e in G.at["E"]},
            }
            out.append(PresheafMap.of(G, FQ, comps))
    return out


def is_embedded_preorder(X: Presheaf):
    """(True, "") iff X is isomorphic to embed of a preorder: no parallel
    edges and a transitive edge relation (reflexivity is supplied by the
    distinguished loops)."""
    pairs = _edge_pairs(X)
    if len(set(pairs)) != len(pairs):
        dup = sorted(p for p in set(pairs) if pairs.count(p) > 1)[0]
        return False, f"parallel edges over {dup!r}"
    rel = set(pairs) | {(v, v) for v in X.at["V"]}
    for (a, b) in rel:
        for (b2, c) in rel:
            if b2 == b and (a, c) not in rel:
                return False, f"missing transitive edge {a!r} -> {c!r}"
    return True, ""


# ---------------------------------------------------------------------------
# product preservation / exponential ideal (object level)


def product_reflection_agrees(G: RefGraph, H: RefGraph) -> tuple[bool, dict]:
    """L(G x H) vs LG x LH via the canonical vertex-identity comparison."""
    PG, PH = G.presheaf(), H.presheaf()
    prod, _, _ = product_presheaf(PG, PH)
    left, _ = preorder_reflection(prod)
    LG, _ = preorder_reflection(PG)
    LH, _ = preorder_reflection(PH)
    right = frozenset(
        ((g1, h1), (g2, h2))
        for (g1, g2) in LG.rel for (h1, h2) in LH.rel
    )
    ok = left.rel == right
    info = {}
    if not ok:
        info = {
            "only_left": sorted(map(repr, left.rel - right)),
            "only_right": sorted(map(repr, right - left.rel)),
        }
    return ok, info


def check_product_preservation(max_v: int = 3, max_e: int = 4,
                               random_pairs: int = 0, random_max_v: int = 5,
                               seed: int = 20210521) -> Verdict:
    """Exhaustive over canonical graph pairs within bounds, plus optional
    deterministic pseudo-random pairs at a larger vertex bound."""
    import random as _random

    graphs = list(enumerate_graphs(max_v, max_e))
    tested = 0
    for i, G in enumerate(graphs):
        for H in graphs[i:]:
            tested += 1
            ok, info = product_reflection_agrees(G, H)
            if not ok:
                return Verdict("graph-product-preservation", FAIL,
                               witness={"kind": "graph-product",
                                        "G": G.to_json(), "H": H.to_json(), **info},
                               bounds={"max_v": max_v, "max_e": max_e},
                               stats={"pairs": tested})
    rng = _random.Random(seed)
    for _ in range(random_pairs):
        pair = []
        for _ in range(2):
            n = rng.randint(1, random_max_v)
            e = rng.randint(0, 2 * n)
            edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(e)]
            pair.append(RefGraph.of(n, edges))
        tested += 1
        ok, info = product_reflection_agrees(*pair)
        if not ok:
            return Verdict("graph-product-preservation", FAIL,
                           witness={"kind": "graph-product",
                                    "G": pair[0].to_json(), "H": pair[1].to_json(), **info},
                           bounds={"max_v": max_v, "max_e": max_e,
                                   "random_max_v": random_max_v},
                           stats={"pairs": tested})
    return Verdict("graph-product-preservation", PASS,
                   bounds={"max_v": max_v, "max_e": max_e,
                           "random_pairs": random_pairs, "random_max_v": random_max_v},
                   stats={"pairs": tested, "graphs": len(graphs)})


def check_exponential_ideal_graphs(max_p: int = 3, max_v: int = 3, max_e: int = 4,
                                   budget: Budget | int | None = None) -> Verdict:
    """(embed P)^G is an embedded preorder for all preorders P and graphs G
    within bounds."""
    b_ = ensure_budget(budget, "check_exponential_ideal_graphs")
    tested = 0
    bounds = {"max_p": max_p, "max_v": max_v, "max_e": max_e}
    for P in enumerate_preorders(max_p):
        FP = embed(P)
        for G in enumerate_graphs(max_v, max_e):
            tested += 1
            try:
                # each instance gets a fresh budget; the cap is per-exponential
                E, _ = exponential(G.presheaf(), FP, b_.sub("exponential"))
            except BudgetExceeded:
                return Verdict("graph-exponential-ideal", INCONCLUSIVE,
                               bounds=dict(bounds, budget=b_.limit),
                               stats={"tested": tested},
                               detail=f"budget exhausted on P={P.carrier}, G={G}")
            ok, why = is_embedded_preorder(E)
            if not ok:
                return Verdict("graph-exponential-ideal", FAIL,
                               witness={"kind": "graph-exponential",
                                        "P": P.to_json(), "G": G.to_json(),
                                        "violation": why},
                               bounds={"max_p": max_p, "max_v": max_v, "max_e": max_e},
                               stats={"tested": tested})
    return Verdict("graph-exponential-ideal", PASS,
                   bounds={"max_p": max_p, "max_v": max_v, "max_e": max_e},
                   stats={"tested": tested})


# ---------------------------------------------------------------------------
# semi-left-exactness failure search (the decisive certificate)


def _sle_instance_fails(X: RefGraph, P: Preorder, Q: Preorder, u: dict,
                        f: PresheafMap):
    """Test one candidate square; returns None or failure data."""
    PX = f.source
    fu = embed_map(u, P, Q)
    W, p1, p2 = pullback_presheaf(f, fu)
    LW, _ = preorder_reflection(W)
    LX, _ = preorder_reflection(PX)
    f_vert = reflect_map(f)
    # pullback of preorders: pairs with matching images, componentwise order
    pb_rel = frozenset(
        (w1, w2)
        for w1 in LW.carrier for w2 in LW.carrier
        if LX.leq(w1[0], w2[0]) and P.leq(w1[1], w2[1])
    )
    if LW.rel == pb_rel:
        return None
    missing = sorted(pb_rel - LW.rel, key=canon_key)
    return {"missing": missing, "LW": LW, "pb_rel": pb_rel}


def find_sle_failure(max_v: int = 4, max_e: int = 8, fast: bool = False,
                     budget: Budget | int | None = None) -> Verdict:
    """Search canonical pullback squares of graphs over embedded-preorder legs
    whose preorder reflection fails to be a pullback.  Candidates are ordered
    by total size then lexicographically, so the first hit is minimal (the
    `fast` flag is accepted for interface symmetry; first-found is already
    the strategy)."""
    b_ = ensure_budget(budget, "find_sle_failure")
    max_total = max_v * 3 + max_e
    try:
        return _sle_search(max_v, max_e, max_total, b_)
    except BudgetExceeded:
        return Verdict("sle-failure-search", INCONCLUSIVE,
                       bounds={"max_v": max_v, "max_e": max_e, "budget": b_.limit},
                       detail="budget exhausted before the space was covered")


def _sle_search(max_v, max_e, max_total, b_) -> Verdict:
    tested = 0
    for total in range(max_total + 1):
        for nq in range(0, max_v + 1):
            for np_ in range(0, max_v + 1):
                for nx in range(0, max_v + 1):
                    ex = total - nq - np_ - nx
                    if ex < 0 or ex > max_e:
                        continue
                    for Q in preorders_of_size(nq):
                        for P in preorders_of_size(np_):
                            for u in monotone_maps(P, Q):
                                for X in graphs_of_size(nx, ex):
                                    PX = X.presheaf()
                                    for f in vertex_maps_to_embedded(PX, Q):
                                        b_.charge()
                                        tested += 1
                                        bad = _sle_instance_fails(X, P, Q, u, f)
                                        if bad is not None:
                                            return _sle_witness_verdict(
                                                X, P, Q, u, f, bad, tested,
                                                {"max_v": max_v, "max_e": max_e})
    return Verdict("sle-failure-search", NOT_FOUND,
                   bounds={"max_v": max_v, "max_e": max_e},
                   stats={"squares": tested})


def _sle_witness_verdict(X, P, Q, u, f, bad, tested, bounds) -> Verdict:
    from .report import elem_to_json

    # the projections are jointly injective on carriers, so the identity is
    # the only candidate mediator from the true preorder pullback; it works
    # iff it is monotone, i.e. iff no relation is missing
    LW = bad["LW"]
    mediators = 1 if all(p in LW.rel for p in bad["pb_rel"]) else 0
    w = WitnessSquare(
        square={
            "kind": "graph-sle-square",
            "X": X.to_json(),
            "P": P.to_json(),
            "Q": Q.to_json(),
            "u": {k: elem_to_json(v) for k, v in sorted(u.items())},
            "f": {k: elem_to_json(f.components["V"](k))
                  for k in sorted(f.source.at["V"].elements)},
        },
        f_image_leg="g",
        l_image={"missing_relations": [[elem_to_json(a), elem_to_json(b)]
                                       for a, b in bad["missing"]]},
        analysis=MediatorAnalysis(
            cone={"description": "the preorder pullback with its projections"},
            count=mediators),
    )
    return Verdict("sle-failure-search", FAIL, witness=w, bounds=bounds,
                   stats={"squares": tested})


def reverify_graph_witness(w: dict) -> Verdict:
    """Independent replay of serialized graph-level witnesses."""
    from .report import elem_from_json

    kind = w.get("kind") or w.get("square", {}).get("kind")
    if kind == "graph-sle-square":
        sq = w.get("square", w)
        X = RefGraph.from_json(sq["X"])
        P = Preorder.from_json(sq["P"])
        Q = Preorder.from_json(sq["Q"])
        u = {k: elem_from_json(v) for k, v in sq["u"].items()}
        PX = X.presheaf()
        fv = {k: elem_from_json(v) for k, v in sq["f"].items()}
        FQ = embed(Q)
        f = PresheafMap.of(PX, FQ, {
            "V": fv,
            "E": {e: (fv[PX.act["d0"](e)], fv[PX.act["d1"](e)]) for e in PX.at["E"]},
        })
        bad = _sle_instance_fails(X, P, Q, u, f)
        if bad is None:
            return Verdict("witness-replay", FAIL,
                           witness={"kind": "replay",
                                    "reason": "square reflects to a pullback after all"})
        claimed = {(elem_from_json(a), elem_from_json(b))
                   for a, b in w.get("l_image", {}).get("missing_relations", [])}
        if claimed and claimed != set(bad["missing"]):
            return Verdict("witness-replay", FAIL,
                           witness={"kind": "replay",
                                    "reason": "missing-relation set differs from the claim"})
        return Verdict("witness-replay", PASS,
                       stats={"missing": [[repr(a), repr(b)] for a, b in bad["missing"]]})
    if kind == "graph-pi":
        P = Preorder.from_json(w["Y"])
        X = Preorder.from_json(w["X"])
        Z = Preorder.from_json(w["Z"])
        f = {elem_from_json(a): elem_from_json(b) for a, b in w["f"]}
        g = {elem_from_json(a): elem_from_json(b) for a, b in w["g"]}
        pi = dependent_product(embed_map(f, X, P), embed_map(g, Z, X))
        ok, why = is_embedded_preorder(pi.source)
        if ok:
            return Verdict("witness-replay", FAIL,
                           witness={"kind": "replay",
                                    "reason": "dependent product is a preorder after all"})
        return Verdict("witness-replay", PASS, stats={"violation": why})
    if kind == "graph-sieve":
        A0 = Preorder.from_json(w["A0"])
        B0 = RefGraph.from_json(w["B0"])
        uv = {k: elem_from_json(v) for k, v in w["u"].items()}
        return _sieve_instance_verdict(A0, B0, uv, replay=True)
    raise ShapeMismatch(f"unknown graph witness kind {kind!r}")


# ---------------------------------------------------------------------------
# dependent-product evidence search


def find_pi_witness(max_n: int = 3, max_instances: int = 2000,
                    budget: Budget | int | None = None) -> Verdict:
    """Look for monotone f: X -> Y, g: Z -> X whose dependent product taken in
    reflexive graphs is not an embedded preorder.  Evidence only; the decisive
    certificate is find_sle_failure."""
    b_ = ensure_budget(budget, "find_pi_witness")
    tested = 0
    pre = list(enumerate_preorders(max_n))
    for Y in pre:
        for X in pre:
            for f in monotone_maps(X, Y):
                for Z in pre:
                    for g in monotone_maps(Z, X):
                        if tested >= max_instances:
                            return Verdict("pi-witness-search", NOT_FOUND,
                                           bounds={"max_n": max_n,
                                                   "max_instances": max_instances},
                                           stats={"tested": tested},
                                           detail="instance cap reached")
                        b_.charge()
                        tested += 1
                        try:
                            pi = dependent_product(embed_map(f, X, Y),
                                                   embed_map(g, Z, X),
                                                   b_.sub("dependent_product"))
                        except BudgetExceeded:
                            return Verdict("pi-witness-search", INCONCLUSIVE,
                                           bounds={"max_n": max_n, "budget": b_.limit},
                                           stats={"tested": tested},
                                           detail="budget exhausted mid-search")
                        ok, why = is_embedded_preorder(pi.source)
                        if not ok:
                            from .report import elem_to_json
                            return Verdict(
                                "pi-witness-search", FAIL,
                                witness={
                                    "kind": "graph-pi",
                                    "Y": Y.to_json(), "X": X.to_json(), "Z": Z.to_json(),
                                    "f": [[elem_to_json(a), elem_to_json(bv)]
                                          for a, bv in sorted(f.items())],
                                    "g": [[elem_to_json(a), elem_to_json(bv)]
                                          for a, bv in sorted(g.items())],
                                    "violation": why,
                                },
                                bounds={"max_n": max_n},
                                stats={"tested": tested},
                                detail="EVIDENCE: dependent products not inherited")
    return Verdict("pi-witness-search", NOT_FOUND,
                   bounds={"max_n": max_n}, stats={"tested": tested})


# ---------------------------------------------------------------------------
# sieve witness (hyperconnectedness remark)


def _sieve_instance_verdict(A0: Preorder, B0: RefGraph, uv: dict, replay=False):
    """For the sieve generated by u: B0 -> F(A0): u is a member by definition;
    is F(L u) a member, i.e. does it factor through u?"""
    PB = B0.presheaf()
    FA = embed(A0)
    u = PresheafMap.of(PB, FA, {
        "V": uv,
        "E": {e: (uv[PB.act["d0"](e)], uv[PB.act["d1"](e)]) for e in PB.at["E"]},
    })
    LB, _ = preorder_reflection(PB)
    lu = reflect_map(u)
    FLB = embed(LB)
    flu = PresheafMap.of(FLB, FA, {
        "V": {v: lu[v] for v in LB.carrier},
        "E": {(a, b): (lu[a], lu[b]) for (a, b) in FLB.at["E"]},
    })
    factors = any(
        w.then(u).encoding() == flu.encoding()
        for w in nat_transformations(FLB, PB)
    )
    name = "witness-replay" if replay else "sieve-witness-search"
    if factors:
        return Verdict(name, FAIL if replay else NOT_FOUND,
                       witness={"kind": "replay",
                                "reason": "F(Lu) factors through u"} if replay else None,
                       stats={"factors": True})
    return Verdict(name, PASS, stats={"factors": False})


def find_sieve_witness(max_n: int = 3, max_v: int = 3, max_e: int = 4,
                       budget: Budget | int | None = None) -> Verdict:
    """Search for a preorder A0, graph B0 and u: B0 -> F(A0) such that u lies
    in the sieve it generates but F(L u) does not."""
    b_ = ensure_budget(budget, "find_sieve_witness")
    try:
        return _sieve_search(max_n, max_v, max_e, b_)
    except BudgetExceeded:
        return Verdict("sieve-witness-search", INCONCLUSIVE,
                       bounds={"max_n": max_n, "max_v": max_v, "max_e": max_e,
                               "budget": b_.limit},
                       detail="budget exhausted before the space was covered")


def _sieve_search(max_n, max_v, max_e, b_) -> Verdict:
    tested = 0
    for A0 in enumerate_preorders(max_n):
        FA = embed(A0)
        for B0 in enumerate_graphs(max_v, max_e):
            PB = B0.presheaf()
            for um in vertex_maps_to_embedded(PB, A0):
                b_.charge()
                tested += 1
                uv = {v: um.components["V"](v) for v in PB.at["V"]}
                v = _sieve_instance_verdict(A0, B0, uv)
                if v.passed:
                    from .report import elem_to_json
                    return Verdict("sieve-witness-search", FAIL,
                                   witness={"kind": "graph-sieve",
                                            "A0": A0.to_json(), "B0": B0.to_json(),
                                            "u": {k: elem_to_json(val)
                                                  for k, val in sorted(uv.items())}},
                                   bounds={"max_n": max_n, "max_v": max_v, "max_e": max_e},
                                   stats={"tested": tested},
                                   detail="u in its sieve, F(Lu) not")
    return Verdict("sieve-witness-search", NOT_FOUND,
                   bounds={"max_n": max_n, "max_v": max_v, "max_e": max_e},
                   stats={"tested": tested})
