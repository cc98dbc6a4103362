"""Presheaves on a finite base: Yoneda, natural-transformation enumeration,
limits, exponentials, sieves, and dependent products.

A presheaf acts contravariantly: for f: c -> d the action is a function
at(d) -> at(c).  Natural transformations are enumerated as the limit of the
target over the (opposite) category of elements of the source, which routes
every enumeration through one audited backtracking loop (finset.limit).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .budget import Budget, ensure_budget
from .errors import InvalidStructure, ShapeMismatch
from .fincat import (
    FinCategory,
    FinFunctor,
    Violation,
    build_category,
    opposite,
)
from .finset import FinFn, FinSet, SetDiagram, canon_key, canon_sort, limit


def ename(e) -> str:
    """Injective string encoding of an element (str/int/tuple nesting)."""
    return repr(e)


class Presheaf:
    def __init__(self, base: FinCategory, at, act):
        self.base = base
        self.at = dict(at)
        self.act = dict(act)

    @staticmethod
    def of(base: FinCategory, at: dict, act: dict) -> "Presheaf":
        """Builds and validates; identity actions are filled in if missing."""
        at = {o: s if isinstance(s, FinSet) else FinSet.of(s) for o, s in at.items()}
        act = dict(act)
        for o in base.objects:
            i = base.identity[o]
            if i not in act and o in at:
                act[i] = FinFn.identity(at[o])
        p = Presheaf(base, at, act)
        bad = p.violations()
        if bad:
            raise InvalidStructure(bad)
        return p

    def violations(self) -> list[Violation]:
        out = []
        C = self.base
        for o in C.objects:
            if o not in self.at:
                out.append(Violation("DanglingReference", f"presheaf missing value at {o}"))
        for m in C.morphisms:
            if m not in self.act:
                out.append(Violation("DanglingReference", f"presheaf missing action at {m}"))
        if out:
            return out
        for m in C.morphisms:
            fn = self.act[m]
            if fn.dom != self.at[C.cod[m]] or fn.cod != self.at[C.dom[m]]:
                out.append(Violation("DanglingReference", f"action at {m} has wrong endpoints"))
        if out:
            return out
        for o in C.objects:
            if self.act[C.identity[o]] != FinFn.identity(self.at[o]):
                out.append(Violation("BrokenIdentity", f"action at id({o}) is not the identity"))
        for (g, f), gf in C.comp.items():
            # contravariance: act(g.f) = act(f) . act(g)
            if self.act[g].then(self.act[f]) != self.act[gf]:
                out.append(Violation("BrokenAssociativity", f"contravariant functoriality fails at {g}.{f}"))
        return out

    def validate(self) -> "Presheaf":
        bad = self.violations()
        if bad:
            raise InvalidStructure(bad)
        return self

    def encoding(self) -> tuple:
        return (
            tuple((o, self.at[o].elements) for o in self.base.objects),
            tuple((m, self.act[m].mapping) for m in self.base.morphisms),
        )

    def __eq__(self, other):
        return (isinstance(other, Presheaf) and self.base == other.base
                and self.encoding() == other.encoding())

    def __hash__(self):
        return hash(self.encoding())

    def total_size(self) -> int:
        return sum(len(self.at[o]) for o in self.base.objects)

    def __repr__(self):
        sizes = ", ".join(f"{o}:{len(self.at[o])}" for o in self.base.objects)
        return f"Presheaf({sizes})"


class PresheafMap:
    def __init__(self, source: Presheaf, target: Presheaf, components):
        self.source = source
        self.target = target
        self.components = dict(components)

    @staticmethod
    def of(source: Presheaf, target: Presheaf, components) -> "PresheafMap":
        comps = {}
        for o in source.base.objects:
            c = components[o]
            if not isinstance(c, FinFn):
                c = FinFn.of(source.at[o], target.at[o], c)
            comps[o] = c
        m = PresheafMap(source, target, comps)
        bad = m.violations()
        if bad:
            raise InvalidStructure(bad)
        return m

    def violations(self) -> list[Violation]:
        out = []
        if self.source.base != self.target.base:
            return [Violation("DanglingReference", "presheaf map across different bases")]
        C = self.source.base
        for o in C.objects:
            c = self.components.get(o)
            if c is None or c.dom != self.source.at[o] or c.cod != self.target.at[o]:
                out.append(Violation("DanglingReference", f"component at {o} missing or mistyped"))
        if out:
            return out
        for m in C.morphisms:
            c, d = C.dom[m], C.cod[m]
            lhs = self.source.act[m].then(self.components[c])
            rhs = self.components[d].then(self.target.act[m])
            if lhs != rhs:
                out.append(Violation("BrokenAssociativity", f"naturality fails at {m}"))
        return out

    def validate(self) -> "PresheafMap":
        bad = self.violations()
        if bad:
            raise InvalidStructure(bad)
        return self

    def then(self, other: "PresheafMap") -> "PresheafMap":
        if other.source.encoding() != self.target.encoding():
            raise ShapeMismatch("presheaf map composition mismatch")
        return PresheafMap(
            self.source, other.target,
            {o: self.components[o].then(other.components[o]) for o in self.components},
        )

    @staticmethod
    def identity(P: Presheaf) -> "PresheafMap":
        return PresheafMap(P, P, {o: FinFn.identity(P.at[o]) for o in P.base.objects})

    def encoding(self) -> tuple:
        return tuple((o, self.components[o].mapping) for o in self.source.base.objects)

    def __eq__(self, other):
        return (isinstance(other, PresheafMap) and self.source == other.source
                and self.target == other.target and self.encoding() == other.encoding())

    def __hash__(self):
        return hash(self.encoding())

    def is_pointwise_bijection(self) -> bool:
        return all(c.is_bijective() for c in self.components.values())

    def is_pointwise_surjection(self) -> bool:
        return all(c.is_surjective() for c in self.components.values())


# ---------------------------------------------------------------------------
# basic objects


def terminal_presheaf(C: FinCategory) -> Presheaf:
    at = {o: FinSet.of(["*"]) for o in C.objects}
    act = {m: FinFn.of(at[C.cod[m]], at[C.dom[m]], {"*": "*"}) for m in C.morphisms}
    return Presheaf.of(C, at, act)


def empty_presheaf(C: FinCategory) -> Presheaf:
    at = {o: FinSet.of([]) for o in C.objects}
    act = {m: FinFn.of(at[C.cod[m]], at[C.dom[m]], {}) for m in C.morphisms}
    return Presheaf.of(C, at, act)


def yoneda(C: FinCategory, c: str) -> Presheaf:
    if c not in set(C.objects):
        raise ShapeMismatch(f"{c} is not an object")
    at = {d: FinSet.of(C.hom(d, c)) for d in C.objects}
    act = {}
    for f in C.morphisms:
        d, e = C.dom[f], C.cod[f]
        act[f] = FinFn.of(at[e], at[d], {h: C.compose(h, f) for h in at[e]})
    return Presheaf.of(C, at, act)


def product_presheaf(X: Presheaf, Y: Presheaf):
    """Pointwise product; elements are (x, y) pairs.  Returns (P, p1, p2)."""
    if X.base != Y.base:
        raise ShapeMismatch("product across different bases")
    C = X.base
    at = {o: FinSet.of((x, y) for x in X.at[o] for y in Y.at[o]) for o in C.objects}
    act = {
        m: FinFn.of(at[C.cod[m]], at[C.dom[m]],
                    {(x, y): (X.act[m](x), Y.act[m](y)) for (x, y) in at[C.cod[m]]})
        for m in C.morphisms
    }
    P = Presheaf.of(C, at, act)
    p1 = PresheafMap.of(P, X, {o: {(x, y): x for (x, y) in at[o]} for o in C.objects})
    p2 = PresheafMap.of(P, Y, {o: {(x, y): y for (x, y) in at[o]} for o in C.objects})
    return P, p1, p2


def pullback_presheaf(f: PresheafMap, g: PresheafMap):
    """Pointwise pullback of the cospan f: X -> Z <- Y :g.  Returns (P, p1, p2)."""
    if f.target.encoding() != g.target.encoding():
        raise ShapeMismatch("pullback requires a cospan")
    X, Y = f.source, g.source
    C = X.base
    at = {
        o: FinSet.of((x, y) for x in X.at[o] for y in Y.at[o]
                     if f.components[o](x) == g.components[o](y))
        for o in C.objects
    }
    act = {
        m: FinFn.of(at[C.cod[m]], at[C.dom[m]],
                    {(x, y): (X.act[m](x), Y.act[m](y)) for (x, y) in at[C.cod[m]]})
        for m in C.morphisms
    }
    P = Presheaf.of(C, at, act)
    p1 = PresheafMap.of(P, X, {o: {(x, y): x for (x, y) in at[o]} for o in C.objects})
    p2 = PresheafMap.of(P, Y, {o: {(x, y): y for (x, y) in at[o]} for o in C.objects})
    return P, p1, p2


# ---------------------------------------------------------------------------
# category of elements


@dataclass(frozen=True)
class Elements:
    category: FinCategory
    projection: FinFunctor
    obj_id: dict  # (c, elem) -> object id
    decode: dict  # object id -> (c, elem)
    mor_id: dict  # (phi, oid1, oid2) -> morphism id


def category_of_elements(P: Presheaf) -> Elements:
    """el(P): objects (c, x in P(c)); (c,x) -> (d,y) is phi: c -> d with
    P(phi)(y) = x.  Returns the category plus the projection functor."""
    C = P.base
    obj_id = {}
    decode = {}
    for c in C.objects:
        for x in P.at[c]:
            oid = f"{c}@{ename(x)}"
            obj_id[(c, x)] = oid
            decode[oid] = (c, x)
    objs = sorted(decode)
    morphisms, dom, cod, identity, comp = [], {}, {}, {}, {}
    mor_id = {}
    tri = []
    for o1 in objs:
        c, x = decode[o1]
        for o2 in objs:
            d, y = decode[o2]
            for phi in C.hom(c, d):
                if P.act[phi](y) == x:
                    n = f"{phi}[{o1}>{o2}]"
                    morphisms.append(n)
                    dom[n], cod[n] = o1, o2
                    mor_id[(phi, o1, o2)] = n
                    tri.append((phi, o1, o2, n))
                    if o1 == o2 and C.is_identity(phi):
                        identity[o1] = n
    for p1, o1, o2, n1 in tri:
        for p2, o2b, o3, n2 in tri:
            if o2b == o2:
                comp[(n2, n1)] = mor_id[(C.compose(p2, p1), o1, o3)]
    cat = build_category(objs, morphisms, dom, cod, identity, comp)
    proj = FinFunctor(cat, C,
                      {o: decode[o][0] for o in objs},
                      {n: phi for phi, _, _, n in tri})
    return Elements(cat, proj, obj_id, decode, mor_id)


# ---------------------------------------------------------------------------
# natural transformations


def nat_transformations(X: Presheaf, Y: Presheaf, budget: Budget | int | None = None) -> list[PresheafMap]:
    """Complete duplicate-free enumeration of X => Y, canonically sorted.

    Computed as the limit of Y over el(X)^op: a compatible family picks
    alpha_c(x) in Y(c) per element (c, x), and the el-morphism constraints
    are exactly naturality.
    """
    if X.base != Y.base:
        raise ShapeMismatch("natural transformations require a common base")
    b = ensure_budget(budget, "nat_transformations")
    el = category_of_elements(X)
    idx = opposite(el.category)
    on_objects = {o: Y.at[el.decode[o][0]] for o in idx.objects}
    # in the opposite index an el-arrow over phi: c -> d runs (d,y) -> (c,x)
    # and acts by Y.act[phi]: Y(d) -> Y(c)
    on_morphisms = {m: Y.act[el.projection.mor_map[m]] for m in el.category.morphisms}
    D = SetDiagram.of(idx, on_objects, on_morphisms)
    lim, projs = limit(D, b)
    out = []
    for fam in lim:
        comps = {}
        for c in X.base.objects:
            table = {}
            for x in X.at[c]:
                oid = el.obj_id[(c, x)]
                table[x] = projs[oid](fam) if projs else None
            comps[c] = FinFn.of(X.at[c], Y.at[c], table)
        out.append(PresheafMap(X, Y, comps))
    out.sort(key=lambda m: canon_key(m.encoding()))
    return out


def presheaf_iso(X: Presheaf, Y: Presheaf, budget: Budget | int | None = None) -> PresheafMap | None:
    """First canonical natural isomorphism X -> Y, or None."""
    if X.base != Y.base:
        return None
    if any(len(X.at[o]) != len(Y.at[o]) for o in X.base.objects):
        return None
    for m in nat_transformations(X, Y, budget):
        if m.is_pointwise_bijection():
            return m
    return None


# ---------------------------------------------------------------------------
# exponentials


def exponential(X: Presheaf, Y: Presheaf, budget: Budget | int | None = None):
    """(Y^X)(c) = Nat(y_c x X, Y), action by precomposition.

    Returns (E, ev) where ev: E x X -> Y evaluates at the identity.
    Elements of E are the canonical encodings of the natural families.
    """
    if X.base != Y.base:
        raise ShapeMismatch("exponential requires a common base")
    b = ensure_budget(budget, "exponential")
    C = X.base
    maps_at: dict = {}
    prod_at: dict = {}
    for c in C.objects:
        P, _, _ = product_presheaf(yoneda(C, c), X)
        prod_at[c] = P
        fams = nat_transformations(P, Y, b)
        maps_at[c] = {m.encoding(): m for m in fams}
    at = {c: FinSet.of(maps_at[c].keys()) for c in C.objects}
    act = {}
    for f in C.morphisms:
        c, d = C.dom[f], C.cod[f]  # f: c -> d; E(f): E(d) -> E(c)
        table = {}
        for enc, alpha in maps_at[d].items():
            comps = {}
            for e in C.objects:
                tbl = {}
                for (h, x) in prod_at[c].at[e]:
                    tbl[(h, x)] = alpha.components[e]((C.compose(f, h), x))
                comps[e] = FinFn.of(prod_at[c].at[e], Y.at[e], tbl)
            alpha_f = PresheafMap(prod_at[c], Y, comps)
            table[enc] = alpha_f.encoding()
        act[f] = FinFn.of(at[d], at[c], table)
    E = Presheaf.of(C, at, act)
    EX, _, _ = product_presheaf(E, X)
    ev_comps = {}
    for c in C.objects:
        tbl = {}
        for (enc, x) in EX.at[c]:
            alpha = maps_at[c][enc]
            tbl[(enc, x)] = alpha.components[c]((C.identity[c], x))
        ev_comps[c] = FinFn.of(EX.at[c], Y.at[c], tbl)
    ev = PresheafMap.of(EX, Y, ev_comps)
    return E.validate(), ev


# ---------------------------------------------------------------------------
# dependent products


def _over_to_elements(f: PresheafMap, el_y: Elements) -> Presheaf:
    """Presheaf on el(target) with fiber f^-1(y) at (c, y)."""
    X, Y = f.source, f.target
    elC = el_y.category
    at = {}
    for oid in elC.objects:
        c, y = el_y.decode[oid]
        at[oid] = FinSet.of(x for x in X.at[c] if f.components[c](x) == y)
    act = {}
    for m in elC.morphisms:
        phi = el_y.projection.mor_map[m]
        o1, o2 = elC.dom[m], elC.cod[m]
        act[m] = FinFn.of(at[o2], at[o1], {x: X.act[phi](x) for x in at[o2]})
    return Presheaf.of(elC, at, act)


def elements_functor(f: PresheafMap, el_x: Elements, el_y: Elements) -> FinFunctor:
    """el(f): el(X) -> el(Y) over the same base, (c, x) -> (c, f x)."""
    X = f.source
    obj_map = {}
    for oid in el_x.category.objects:
        c, x = el_x.decode[oid]
        obj_map[oid] = el_y.obj_id[(c, f.components[c](x))]
    mor_map = {}
    for m in el_x.category.morphisms:
        phi = el_x.projection.mor_map[m]
        o1, o2 = el_x.category.dom[m], el_x.category.cod[m]
        mor_map[m] = el_y.mor_id[(phi, obj_map[o1], obj_map[o2])]
    return FinFunctor(el_x.category, el_y.category, obj_map, mor_map).validate()


def dependent_product(f: PresheafMap, g: PresheafMap, budget: Budget | int | None = None) -> PresheafMap:
    """Pi_f g -> Y for f: X -> Y and g: Z -> X, via the elements reduction:
    slices over Y are presheaves on el(Y), pullback along f is restriction
    along el(f), and Pi_f is right Kan extension along el(f)."""
    from . import kan  # local import; kan builds on this module

    if g.target.encoding() != f.source.encoding():
        raise ShapeMismatch("dependent product requires cod(g) = dom(f)")
    b = ensure_budget(budget, "dependent_product")
    X, Y, Z = f.source, f.target, g.source
    C = Y.base
    el_x = category_of_elements(X)
    el_y = category_of_elements(Y)
    el_f = elements_functor(f, el_x, el_y)
    z_tilde = _over_to_elements(g, el_x)
    w_tilde = kan.ran(el_f, z_tilde, b).output

    at = {}
    for c in C.objects:
        elems = []
        for y in Y.at[c]:
            oid = el_y.obj_id[(c, y)]
            for w in w_tilde.at[oid]:
                elems.append((y, w))
        at[c] = FinSet.of(elems)
    act = {}
    for m in C.morphisms:
        c, d = C.dom[m], C.cod[m]  # m: c -> d; W(m): W(d) -> W(c)
        table = {}
        for (y2, w2) in at[d]:
            y1 = Y.act[m](y2)
            o1 = el_y.obj_id[(c, y1)]
            o2 = el_y.obj_id[(d, y2)]
            em = el_y.mor_id[(m, o1, o2)]
            table[(y2, w2)] = (y1, w_tilde.act[em](w2))
        act[m] = FinFn.of(at[d], at[c], table)
    W = Presheaf.of(C, at, act)
    proj = PresheafMap.of(W, Y, {c: {(y, w): y for (y, w) in at[c]} for c in C.objects})
    return proj


# ---------------------------------------------------------------------------
# sieves


@dataclass(frozen=True)
class Sieve:
    base: FinCategory
    on: str
    members: frozenset

    def violations(self) -> list[Violation]:
        out = []
        C = self.base
        for u in self.members:
            if u not in set(C.morphisms) or C.cod[u] != self.on:
                out.append(Violation("DanglingReference", f"sieve member {u} not into {self.on}"))
        if out:
            return out
        for u in self.members:
            for v in C.morphisms:
                if C.cod[v] == C.dom[u] and C.compose(u, v) not in self.members:
                    out.append(Violation("BrokenAssociativity", f"sieve not right-closed: {u}.{v}"))
        return out

    def validate(self) -> "Sieve":
        bad = self.violations()
        if bad:
            raise InvalidStructure(bad)
        return self


def sieves_on(C: FinCategory, c: str, budget: Budget | int | None = None) -> list[Sieve]:
    """All right-closed sets of morphisms into c, canonically ordered."""
    b = ensure_budget(budget, "sieves_on")
    arrows = sorted(m for m in C.morphisms if C.cod[m] == c)
    out = []
    for r in range(len(arrows) + 1):
        for combo in itertools.combinations(arrows, r):
            b.charge()
            s = Sieve(C, c, frozenset(combo))
            if not s.violations():
                out.append(s)
    out.sort(key=lambda s: (len(s.members), tuple(sorted(s.members))))
    return out


# ---------------------------------------------------------------------------
# deterministic presheaf corpus


def canonical_encoding(P: Presheaf) -> tuple:
    """Least encoding over per-object element relabelings; iso-invariant for
    relabeling isos (which is what corpus dedup needs)."""
    C = P.base
    best = None
    per_obj = [list(itertools.permutations(range(len(P.at[o])))) for o in C.objects]
    idx_of = {o: {x: i for i, x in enumerate(P.at[o].elements)} for o in C.objects}
    for perms in itertools.product(*per_obj):
        relabel = {
            o: {x: perm[idx_of[o][x]] for x in P.at[o]}
            for o, perm in zip(C.objects, perms)
        }
        enc = (
            tuple(len(P.at[o]) for o in C.objects),
            tuple(
                (m, tuple(sorted(
                    (relabel[C.cod[m]][x], relabel[C.dom[m]][P.act[m](x)])
                    for x in P.at[C.cod[m]]
                )))
                for m in C.morphisms if not C.is_identity(m)
            ),
        )
        if best is None or enc < best:
            best = enc
    return best


def presheaf_corpus(C: FinCategory, carrier_bound: int = 2,
                    include_representables: bool = True) -> list[Presheaf]:
    """All presheaves with every carrier <= bound, one per relabeling class,
    plus representables; deterministic order."""
    objs = list(C.objects)
    nonid = [m for m in C.morphisms if not C.is_identity(m)]
    seen = {}
    for sizes in itertools.product(range(carrier_bound + 1), repeat=len(objs)):
        at = {o: FinSet.of([f"x{i}" for i in range(n)]) for o, n in zip(objs, sizes)}
        per_mor = []
        for m in nonid:
            src, dst = at[C.cod[m]], at[C.dom[m]]
            fns = [FinFn.of(src, dst, dict(zip(src.elements, choice)))
                   for choice in itertools.product(dst.elements, repeat=len(src))]
            if len(src) > 0 and len(dst) == 0:
                fns = []  # no function into the empty set
            per_mor.append(fns)
        for combo in itertools.product(*per_mor):
            act = dict(zip(nonid, combo))
            p = Presheaf(C, at, act)
            for o in objs:
                p.act[C.identity[o]] = FinFn.identity(at[o])
            if p.violations():
                continue
            key = canonical_encoding(p)
            if key not in seen:
                seen[key] = p
    if include_representables:
        for c in objs:
            p = yoneda(C, c)
            key = canonical_encoding(p)
            if key not in seen:
                seen[key] = p
    return [seen[k] for k in sorted(seen)]
