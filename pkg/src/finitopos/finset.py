"""Exact finite sets, functions, and limits/colimits of set-valued diagrams.

Elements are hashable immutables (strings, ints, or nested tuples thereof);
`canon_key` gives them one global total order so every construction is
deterministic and diffable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .budget import Budget, ensure_budget
from .errors import InvalidStructure, ShapeMismatch

Elem = object  # str | int | tuple of Elem


def _canon_key(e):
    if isinstance(e, tuple):
        return (2, tuple(canon_key(x) for x in e))
    if isinstance(e, str):
        return (1, e)
    if isinstance(e, bool):
        return (0, int(e))
    if isinstance(e, int):
        return (0, e)
    raise TypeError(f"unsupported element type: {type(e)!r}")


_canon_cache: dict = {}


def canon_key(e):
    """Total order on heterogeneous elements (type-tagged, recursive).

    Memoized: element encodings (e.g. of exponential transposes) repeat
    heavily across sorts, and they can be deeply nested.
    """
    # keys must distinguish 1 from True; pair the value with its type
    k = (e.__class__, e)
    try:
        return _canon_cache[k]
    except TypeError:
        return _canon_key(e)
    except KeyError:
        v = _canon_cache[k] = _canon_key(e)
        return v


def canon_sort(elems: Iterable[Elem]) -> tuple:
    return tuple(sorted(elems, key=canon_key))


@dataclass(frozen=True)
class FinSet:
    elements: tuple

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise InvalidStructure(["duplicate elements in FinSet"])

    @staticmethod
    def of(elems: Iterable[Elem]) -> "FinSet":
        return FinSet(canon_sort(elems))

    def __contains__(self, e) -> bool:
        try:
            members = self._members
        except AttributeError:
            members = frozenset(self.elements)
            object.__setattr__(self, "_members", members)
        return e in members

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


EMPTY = FinSet(())


@dataclass(frozen=True)
class FinFn:
    dom: FinSet
    cod: FinSet
    mapping: tuple  # sorted tuple of (x, f(x)) pairs

    @staticmethod
    def of(dom: FinSet, cod: FinSet, table) -> "FinFn":
        if callable(table):
            table = {x: table(x) for x in dom}
        pairs = tuple(sorted(table.items(), key=lambda kv: canon_key(kv[0])))
        fn = FinFn(dom, cod, pairs)
        bad = fn.violations()
        if bad:
            raise InvalidStructure(bad)
        return fn

    @staticmethod
    def identity(s: FinSet) -> "FinFn":
        return FinFn.of(s, s, {x: x for x in s})

    def violations(self) -> list:
        table = self.table
        dom = set(self.dom.elements)
        cod = set(self.cod.elements)
        if table.keys() == dom and set(table.values()) <= cod:
            return []
        out = []
        for x in sorted(dom - table.keys(), key=canon_key):
            out.append(f"FinFn not total: missing {x!r}")
        for x in sorted(table.keys() - dom, key=canon_key):
            out.append(f"FinFn keyed by non-domain element {x!r}")
        for x in sorted(table.keys() & dom, key=canon_key):
            if table[x] not in cod:
                out.append(f"FinFn value {table[x]!r} outside codomain")
        return out

    def __call__(self, x):
        return self.table[x]

    @property
    def table(self) -> dict:
        try:
            return self._table
        except AttributeError:
            t = dict(self.mapping)
            object.__setattr__(self, "_table", t)
            return t

    def then(self, g: "FinFn") -> "FinFn":
        """self followed by g (i.e. g . self)."""
        if g.dom != self.cod:
            raise ShapeMismatch("FinFn composition shape mismatch")
        gt = g.table
        return FinFn.of(self.dom, g.cod, {x: gt[v] for x, v in self.mapping})

    def is_injective(self) -> bool:
        vals = [v for _, v in self.mapping]
        return len(set(vals)) == len(vals)

    def is_surjective(self) -> bool:
        return set(v for _, v in self.mapping) == set(self.cod.elements)

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()


@dataclass(frozen=True)
class SetDiagram:
    """Covariant finite-set-valued functor on a finite index category."""

    index: object  # FinCategory; kept untyped to avoid an import cycle
    on_objects: tuple  # sorted tuple of (obj, FinSet)
    on_morphisms: tuple  # sorted tuple of (mor, FinFn)

    @staticmethod
    def of(index, on_objects: dict, on_morphisms: dict) -> "SetDiagram":
        d = SetDiagram(
            index,
            tuple(sorted(on_objects.items())),
            tuple(sorted(on_morphisms.items())),
        )
        bad = d.violations()
        if bad:
            raise InvalidStructure(bad)
        return d

    def obj(self, o) -> FinSet:
        return dict(self.on_objects)[o]

    def mor(self, m) -> FinFn:
        return dict(self.on_morphisms)[m]

    def violations(self) -> list:
        out = []
        C = self.index
        objs = dict(self.on_objects)
        mors = dict(self.on_morphisms)
        for o in C.objects:
            if o not in objs:
                out.append(f"diagram missing object {o}")
        for m in C.morphisms:
            if m not in mors:
                out.append(f"diagram missing morphism {m}")
        if out:
            return out
        for m in C.morphisms:
            fn = mors[m]
            if fn.dom != objs[C.dom[m]] or fn.cod != objs[C.cod[m]]:
                out.append(f"diagram morphism {m} has wrong endpoints")
        for o in C.objects:
            if mors[C.identity[o]] != FinFn.identity(objs[o]):
                out.append(f"diagram sends identity of {o} to a non-identity")
        for (g, f), gf in C.comp.items():
            if mors[f].then(mors[g]) != mors[gf]:
                out.append(f"diagram breaks composite {g}.{f}")
        return out


def product(sets: list[FinSet]) -> tuple[FinSet, list[FinFn]]:
    """Cartesian product with projections; elements are tuples in input order."""
    elems = [()]
    for s in sets:
        elems = [t + (x,) for t in elems for x in s]
    p = FinSet.of(elems)
    projs = [FinFn.of(p, s, {t: t[i] for t in p}) for i, s in enumerate(sets)]
    return p, projs


def equalizer(f: FinFn, g: FinFn) -> tuple[FinSet, FinFn]:
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch("equalizer requires a parallel pair")
    e = FinSet.of(x for x in f.dom if f(x) == g(x))
    return e, FinFn.of(e, f.dom, {x: x for x in e})


def coproduct(sets: list[FinSet]) -> tuple[FinSet, list[FinFn]]:
    """Disjoint union; elements tagged by input position."""
    elems = [(i, x) for i, s in enumerate(sets) for x in s]
    c = FinSet.of(elems)
    injs = [FinFn.of(s, c, {x: (i, x) for x in s}) for i, s in enumerate(sets)]
    return c, injs


class UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # smaller canonical key wins, so representatives are deterministic
        if canon_key(ra) <= canon_key(rb):
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb

    def classes(self) -> dict:
        return {x: self.find(x) for x in self.parent}


def coequalizer(f: FinFn, g: FinFn) -> tuple[FinSet, FinFn]:
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch("coequalizer requires a parallel pair")
    uf = UnionFind(f.cod)
    for x in f.dom:
        uf.union(f(x), g(x))
    cls = uf.classes()
    q = FinSet.of(set(cls.values()))
    return q, FinFn.of(f.cod, q, cls)


def limit(D: SetDiagram, budget: Budget | int | None = None) -> tuple[FinSet, dict]:
    """Set of compatible families, with projections.

    Elements are tuples in index-object order.  Computed by backtracking with
    forward propagation rather than by materializing the full product: a
    morphism out of an assigned object forces the value at its codomain, which
    keeps representable-heavy diagrams (exponentials) tractable.
    """
    b = ensure_budget(budget, "limit")
    C = D.index
    objs = list(C.objects)
    pos = {o: i for i, o in enumerate(objs)}
    # constraint tables indexed by endpoint for fast incremental checks
    incoming: dict = {o: [] for o in objs}  # o -> [(j, table)] for f: j -> o
    outgoing: dict = {o: [] for o in objs}  # o -> [(k, table)] for f: o -> k
    loops: dict = {o: [] for o in objs}
    for m in C.morphisms:
        j, k, t = C.dom[m], C.cod[m], D.mor(m).table
        if j == k:
            loops[j].append(t)
        else:
            incoming[k].append((j, t))
            outgoing[j].append((k, t))

    results: list[tuple] = []

    def order_next(assigned: dict) -> str | None:
        # prefer an object whose value is forced by an already-assigned one
        for o in objs:
            if o not in assigned and any(j in assigned for j, _ in incoming[o]):
                return o
        for o in objs:
            if o not in assigned:
                return o
        return None

    def candidates(o, assigned: dict):
        forced = None
        for j, t in incoming[o]:
            if j in assigned:
                v = t[assigned[j]]
                if forced is None:
                    forced = {v}
                else:
                    forced &= {v}
        if forced is not None:
            return [v for v in D.obj(o) if v in forced]
        return list(D.obj(o))

    def consistent(o, v, assigned: dict) -> bool:
        for k, t in outgoing[o]:
            if k in assigned and t[v] != assigned[k]:
                return False
        for j, t in incoming[o]:
            if j in assigned and t[assigned[j]] != v:
                return False
        for t in loops[o]:
            if t[v] != v:
                return False
        return True

    def search(assigned: dict):
        o = order_next(assigned)
        if o is None:
            results.append(tuple(assigned[x] for x in objs))
            return
        for v in candidates(o, assigned):
            b.charge()
            if consistent(o, v, assigned):
                assigned[o] = v
                search(assigned)
                del assigned[o]

    if not objs:
        lim = FinSet.of([()])
        return lim, {}
    search({})
    lim = FinSet.of(results)
    projs = {
        o: FinFn.of(lim, D.obj(o), {t: t[pos[o]] for t in lim}) for o in objs
    }
    return lim, projs


def limit_by_product(D: SetDiagram) -> FinSet:
    """Equalizer-of-products limit; independent oracle for small diagrams."""
    C = D.index
    objs = list(C.objects)
    pos = {o: i for i, o in enumerate(objs)}
    prod, _ = product([D.obj(o) for o in objs])
    good = []
    for t in prod:
        if all(D.mor(m)(t[pos[C.dom[m]]]) == t[pos[C.cod[m]]] for m in C.morphisms):
            good.append(t)
    return FinSet.of(good)


def colimit(D: SetDiagram) -> tuple[FinSet, dict]:
    """Quotient of the disjoint union by the generated equivalence.

    Class representatives are least tagged elements in canonical order, so
    output is deterministic.  Injections are returned per index object.
    """
    C = D.index
    items = [(o, x) for o in C.objects for x in D.obj(o)]
    uf = UnionFind(items)
    for m in C.morphisms:
        fn = D.mor(m)
        j, k = C.dom[m], C.cod[m]
        for x in D.obj(j):
            uf.union((j, x), (k, fn(x)))
    cls = uf.classes()
    colim = FinSet.of(set(cls.values()))
    injs = {
        o: FinFn.of(D.obj(o), colim, {x: cls[(o, x)] for x in D.obj(o)})
        for o in C.objects
    }
    return colim, injs
