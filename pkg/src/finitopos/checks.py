"""Executable adjunction-property checkers: Frobenius reciprocity,
semi-left-exactness, stable units, exponential ideals, local connectedness,
and local cartesian closure of finite lattice fixtures.

Every PASS is bound-relative (the exhausted search space is recorded) and
every FAIL carries a witness that re-verifies from its serialized form via
`reverify`, independently of the search loop that produced it.
"""

from __future__ import annotations

import itertools

from .budget import Budget, ensure_budget
from .errors import ShapeMismatch
from .fincat import (
    FinCategory,
    FinFunctor,
    Reflection,
    binary_product,
    check_adjunction,
    exponential_object,
    find_inverse,
    mediator_census,
    pullback,
    terminal_object,
)
from .verdicts import FAIL, INCONCLUSIVE, PASS, MediatorAnalysis, Verdict, WitnessSquare

# ---------------------------------------------------------------------------
# helpers


def _require_reflection(R: Reflection) -> None:
    if not check_adjunction(R).passed:
        raise ShapeMismatch("input reflection fails its adjunction check")


def _is_pullback_square(C: FinCategory, apex: str, legs: tuple, cospan: tuple):
    """(True, None) or (False, first failing MediatorAnalysis)."""
    f, g = cospan
    p1, p2 = legs
    if C.compose(f, p1) != C.compose(g, p2):
        return False, MediatorAnalysis(cone={"reason": "square does not commute"}, count=0)
    for (z, m1, m2, n) in mediator_census(C, apex, legs, cospan):
        if n != 1:
            return False, MediatorAnalysis(cone={"z": z, "m1": m1, "m2": m2}, count=n)
    return True, None


def _category_square_witness(R: Reflection, square: dict, analysis: MediatorAnalysis,
                             f_image_leg: str, l_image: dict) -> WitnessSquare:
    from .report import reflection_to_json

    data = dict(square)
    data["reflection"] = reflection_to_json(R)
    data["kind"] = "category-square"
    return WitnessSquare(square=data, f_image_leg=f_image_leg,
                         l_image=l_image, analysis=analysis)


# ---------------------------------------------------------------------------
# Frobenius reciprocity


def check_frobenius(R: Reflection, I: str, A_obj: str) -> Verdict:
    """Is the canonical map L(FI x A) -> I x LA an isomorphism?"""
    _require_reflection(R)
    A, B = R.A, R.B
    fi = R.F.obj_map[I]
    pb = binary_product(B, fi, A_obj)
    if pb is None:
        return Verdict("frobenius", INCONCLUSIVE, detail=f"MissingProduct({fi}, {A_obj}) in B",
                       stats={"I": I, "A_obj": A_obj})
    la = R.L.obj_map[A_obj]
    qa = binary_product(A, I, la)
    if qa is None:
        return Verdict("frobenius", INCONCLUSIVE, detail=f"MissingProduct({I}, {la}) in A",
                       stats={"I": I, "A_obj": A_obj})
    P, pi1, pi2 = pb
    Q, rho1, rho2 = qa
    pi1_hat = R.transpose(P, I, pi1)
    lp = R.L.obj_map[P]
    cands = [
        h for h in A.hom(lp, Q)
        if A.compose(rho1, h) == pi1_hat and A.compose(rho2, h) == R.L.mor_map[pi2]
    ]
    assert len(cands) == 1, "product universal property broken"
    m = cands[0]
    if find_inverse(A, m) is None:
        return Verdict("frobenius", FAIL,
                       witness={"I": I, "A_obj": A_obj, "canonical_map": m,
                                "dom": lp, "cod": Q},
                       stats={"I": I, "A_obj": A_obj})
    return Verdict("frobenius", PASS, stats={"I": I, "A_obj": A_obj, "canonical_map": m})


def check_frobenius_all(R: Reflection) -> Verdict:
    """Frobenius over every (I, A_obj) pair; MissingProduct pairs reported."""
    _require_reflection(R)
    missing, total = [], 0
    for I in R.A.objects:
        for A_obj in R.B.objects:
            total += 1
            v = check_frobenius(R, I, A_obj)
            if v.outcome == FAIL:
                return Verdict("frobenius", FAIL, witness=v.witness,
                               stats={"pairs": total})
            if v.outcome == INCONCLUSIVE:
                missing.append((I, A_obj))
    if missing:
        return Verdict("frobenius", INCONCLUSIVE,
                       detail=f"{len(missing)} pairs lack products",
                       stats={"pairs": total, "missing": missing})
    return Verdict("frobenius", PASS, stats={"pairs": total})


# ---------------------------------------------------------------------------
# semi-left-exactness / stable units


def _check_l_preserves_pullbacks(R: Reflection, cospans, property_name: str,
                                 bound: int | None) -> Verdict:
    """Shared engine: pull back each cospan in B, apply L, test pullback-ness."""
    A, B = R.A, R.B
    tested = 0
    skipped = []
    for (f, g, f_image_leg) in cospans:
        if bound is not None and tested >= bound:
            break
        pb = pullback(B, f, g)
        if pb is None:
            skipped.append((f, g))
            continue
        tested += 1
        p, p1, p2 = pb
        Lm = R.L.mor_map
        apex = R.L.obj_map[p]
        ok, analysis = _is_pullback_square(A, apex, (Lm[p1], Lm[p2]), (Lm[f], Lm[g]))
        if not ok:
            square = {
                "apex": p, "p1": p1, "p2": p2, "f": f, "g": g,
                "corners": {"X": B.dom[f], "Y": B.dom[g], "Z": B.cod[f]},
            }
            l_image = {
                "apex": apex, "p1": Lm[p1], "p2": Lm[p2], "f": Lm[f], "g": Lm[g],
            }
            w = _category_square_witness(R, square, analysis, f_image_leg, l_image)
            return Verdict(property_name, FAIL, witness=w,
                           bounds={"cospans": tested},
                           stats={"tested": tested, "missing_pullback": len(skipped)})
    outcome = PASS if not skipped else INCONCLUSIVE
    detail = "" if not skipped else f"{len(skipped)} cospans lack pullbacks"
    return Verdict(property_name, outcome, bounds={"cospans": tested},
                   stats={"tested": tested, "missing_pullback": len(skipped)},
                   detail=detail)


def check_semi_left_exact(R: Reflection, bound: int | None = None) -> Verdict:
    """L preserves pullbacks along morphisms in the image of F."""
    _require_reflection(R)
    B = R.B
    cospans = []
    for u in sorted(R.A.morphisms):
        fu = R.F.mor_map[u]
        z = B.cod[fu]
        for f in sorted(B.morphisms):
            if B.cod[f] == z:
                cospans.append((f, fu, "g"))
    return _check_l_preserves_pullbacks(R, cospans, "semi-left-exact", bound)


def check_stable_units(R: Reflection, bound: int | None = None) -> Verdict:
    """L preserves all pullbacks over objects in the image of F."""
    _require_reflection(R)
    B = R.B
    f_objs = sorted({R.F.obj_map[a] for a in R.A.objects})
    cospans = []
    for z in f_objs:
        ins = sorted(m for m in B.morphisms if B.cod[m] == z)
        for f in ins:
            for g in ins:
                cospans.append((f, g, "base-object"))
    return _check_l_preserves_pullbacks(R, cospans, "stable-units", bound)


# ---------------------------------------------------------------------------
# exponential ideal


def check_exponential_ideal(R: Reflection, bound: int | None = None) -> Verdict:
    """(a) L preserves binary products; (b) exponentials (Fa)^b land in the
    image of F.  Sub-verdicts reported separately in stats."""
    _require_reflection(R)
    A, B = R.A, R.B

    prod_missing, prod_tested = [], 0
    prod_fail = None
    pairs = list(itertools.combinations_with_replacement(sorted(B.objects), 2))
    if bound is not None:
        pairs = pairs[:bound]
    for (X, Y) in pairs:
        pb = binary_product(B, X, Y)
        qa = binary_product(A, R.L.obj_map[X], R.L.obj_map[Y])
        if pb is None or qa is None:
            prod_missing.append((X, Y))
            continue
        prod_tested += 1
        P, pi1, pi2 = pb
        Q, rho1, rho2 = qa
        lp = R.L.obj_map[P]
        cands = [
            h for h in A.hom(lp, Q)
            if A.compose(rho1, h) == R.L.mor_map[pi1]
            and A.compose(rho2, h) == R.L.mor_map[pi2]
        ]
        m = cands[0]
        if find_inverse(A, m) is None:
            prod_fail = {"pair": (X, Y), "canonical_map": m}
            break
    if prod_fail is not None:
        sub_a = Verdict("product-preservation", FAIL, witness=prod_fail,
                        stats={"tested": prod_tested})
    elif prod_missing:
        sub_a = Verdict("product-preservation", INCONCLUSIVE,
                        detail=f"MissingProduct for {len(prod_missing)} pairs",
                        stats={"tested": prod_tested, "missing": prod_missing})
    else:
        sub_a = Verdict("product-preservation", PASS, stats={"tested": prod_tested})

    exp_missing, exp_tested = [], 0
    exp_fail = None
    for a in sorted(A.objects):
        for b in sorted(B.objects):
            E = exponential_object(B, b, R.F.obj_map[a])
            if E is None:
                exp_missing.append((a, b))
                continue
            exp_tested += 1
            e_obj, _ = E
            in_image = any(
                any(find_inverse(B, m) is not None for m in B.hom(e_obj, R.F.obj_map[a2]))
                for a2 in A.objects
            )
            if not in_image:
                exp_fail = {"a": a, "b": b, "exponential": e_obj}
                break
        if exp_fail:
            break
    if exp_fail is not None:
        sub_b = Verdict("exponential-closure", FAIL, witness=exp_fail,
                        stats={"tested": exp_tested})
    elif exp_missing:
        sub_b = Verdict("exponential-closure", INCONCLUSIVE,
                        detail=f"MissingExponential for {len(exp_missing)} pairs",
                        stats={"tested": exp_tested, "missing": exp_missing})
    else:
        sub_b = Verdict("exponential-closure", PASS, stats={"tested": exp_tested})

    stats = {"product_preservation": sub_a.to_json(), "exponential_closure": sub_b.to_json()}
    if FAIL in (sub_a.outcome, sub_b.outcome):
        bad = sub_a if sub_a.outcome == FAIL else sub_b
        return Verdict("exponential-ideal", FAIL, witness=bad.witness, stats=stats)
    if INCONCLUSIVE in (sub_a.outcome, sub_b.outcome):
        return Verdict("exponential-ideal", INCONCLUSIVE, stats=stats,
                       detail="missing products or exponentials")
    return Verdict("exponential-ideal", PASS, stats=stats)


# ---------------------------------------------------------------------------
# local connectedness (presheaf level)


def check_locally_connected(L: FinFunctor, bound: int = 200, carrier_bound: int = 1,
                            budget: Budget | int | None = None,
                            pi_spot_checks: int = 3) -> Verdict:
    """Diagram-(1) preservation for L! -| L* over a deterministic presheaf
    corpus, plus dependent-product spot checks for L* itself."""
    from . import kan
    from .presheaf import (
        dependent_product,
        nat_transformations,
        presheaf_corpus,
        pullback_presheaf,
    )

    b_ = ensure_budget(budget, "check_locally_connected")
    A, B = L.target, L.source
    corp_a = presheaf_corpus(A, carrier_bound)
    corp_b = presheaf_corpus(B, carrier_bound)
    tested = 0

    for I in corp_a:
        for J in corp_a:
            for u in nat_transformations(J, I, b_):
                lu = kan.restrict_map(L, u)
                ri = kan.restrict(L, I)
                for Apre in corp_b:
                    for amap in nat_transformations(Apre, ri, b_):
                        if tested >= bound:
                            break
                        tested += 1
                        Bpre, b1, b2 = pullback_presheaf(amap, lu)
                        rB = kan.lan(L, Bpre, b_)
                        rA = kan.lan(L, Apre, b_)
                        lf = kan.lan_map(L, rB, rA, b1)
                        b_hat = kan.lan_transpose(rB, J, b2)
                        a_hat = kan.lan_transpose(rA, I, amap)
                        # commutes by construction; test pointwise pullback-ness
                        for obj in A.objects:
                            pb_elems = {
                                (j, la)
                                for j in J.at[obj] for la in rA.output.at[obj]
                                if u.components[obj](j) == a_hat.components[obj](la)
                            }
                            image = [
                                (b_hat.components[obj](x), lf.components[obj](x))
                                for x in rB.output.at[obj]
                            ]
                            if len(set(image)) != len(image) or set(image) != pb_elems:
                                from .report import (
                                    presheaf_map_to_json,
                                    presheaf_to_json,
                                )
                                w = WitnessSquare(
                                    square={
                                        "kind": "presheaf-square",
                                        "u": presheaf_map_to_json(u),
                                        "a": presheaf_map_to_json(amap),
                                    },
                                    f_image_leg="g",
                                    l_image={"object": obj,
                                             "comparison_image": sorted(map(repr, image)),
                                             "pullback": sorted(map(repr, pb_elems))},
                                    analysis=MediatorAnalysis(
                                        cone={"object": obj},
                                        count=0 if set(image) != pb_elems else 2),
                                )
                                return Verdict("locally-connected", FAIL, witness=w,
                                               bounds={"squares": tested,
                                                       "carrier": carrier_bound},
                                               stats={"squares": tested})

    pi_tested = 0
    for Y in corp_a:
        if pi_tested >= pi_spot_checks:
            break
        for X in corp_a:
            if pi_tested >= pi_spot_checks:
                break
            for f in nat_transformations(X, Y, b_):
                if pi_tested >= pi_spot_checks:
                    break
                for Z in corp_a:
                    for g in nat_transformations(Z, X, b_)[:1]:
                        if pi_tested >= pi_spot_checks:
                            break
                        pi_tested += 1
                        up = dependent_product(f, g, b_)
                        down = dependent_product(
                            kan.restrict_map(L, f), kan.restrict_map(L, g), b_)
                        r_up_dom = kan.restrict(L, up.source)
                        r_up = kan.restrict_map(L, up)
                        isos = [
                            h for h in nat_transformations(r_up_dom, down.source, b_)
                            if h.is_pointwise_bijection()
                            and h.then(down).encoding() == r_up.encoding()
                        ]
                        if not isos:
                            from .report import presheaf_map_to_json
                            w = WitnessSquare(
                                square={"kind": "pi-comparison",
                                        "f": presheaf_map_to_json(f),
                                        "g": presheaf_map_to_json(g)},
                                f_image_leg="n/a",
                                l_image={},
                                analysis=MediatorAnalysis(cone={}, count=0),
                            )
                            return Verdict("locally-connected", FAIL, witness=w,
                                           bounds={"squares": tested,
                                                   "pi_checks": pi_tested,
                                                   "carrier": carrier_bound},
                                           stats={"squares": tested,
                                                  "pi_checks": pi_tested})
    return Verdict("locally-connected", PASS,
                   bounds={"squares": tested, "pi_checks": pi_tested,
                           "carrier": carrier_bound},
                   stats={"squares": tested, "pi_checks": pi_tested})


# ---------------------------------------------------------------------------
# local cartesian closure of finite lattices


def _leq(C: FinCategory, x: str, y: str) -> bool:
    return len(C.hom(x, y)) > 0


def check_lcc(C: FinCategory, bound: int | None = None) -> Verdict:
    """For every f: x -> y, search for a right adjoint to pullback between
    slices.  For thin finitely complete categories this is the existence of
    max{b <= y : b /\\ x <= c} for every c <= x; the search is exhaustive."""
    if any(len(C.hom(x, y)) > 1 for x in C.objects for y in C.objects):
        return Verdict("lcc", INCONCLUSIVE, detail="category is not thin")
    if terminal_object(C) is None:
        return Verdict("lcc", INCONCLUSIVE, detail="no terminal object")
    meets = {}
    for x in C.objects:
        for y in C.objects:
            p = binary_product(C, x, y)
            if p is None:
                return Verdict("lcc", INCONCLUSIVE, detail=f"MissingProduct({x}, {y})")
            meets[(x, y)] = p[0]
    tested = 0
    for x in sorted(C.objects):
        for y in sorted(C.objects):
            if not _leq(C, x, y) or x == y:
                continue
            for c in sorted(C.objects):
                if not _leq(C, c, x):
                    continue
                tested += 1
                if bound is not None and tested > bound:
                    return Verdict("lcc", INCONCLUSIVE, detail="bound exhausted",
                                   bounds={"slices": bound})
                cands = [b for b in C.objects
                         if _leq(C, b, y) and _leq(C, meets[(b, x)], c)]
                tops = [b for b in cands if all(_leq(C, b2, b) for b2 in cands)]
                if not tops:
                    maximal = sorted(
                        b for b in cands
                        if not any(b2 != b and _leq(C, b, b2) for b2 in cands))
                    from .report import category_to_json
                    w = {"kind": "lcc", "category": category_to_json(C),
                         "x": x, "y": y, "c": c, "maximal_candidates": maximal}
                    return Verdict("lcc", FAIL, witness=w,
                                   bounds={"slices": tested}, stats={"slices": tested})
    return Verdict("lcc", PASS, bounds={"slices": tested}, stats={"slices": tested})


# ---------------------------------------------------------------------------
# independent re-verification of serialized witnesses


def reverify(witness: dict) -> Verdict:
    """Re-check a serialized FAIL witness from its own data alone."""
    kind = witness.get("kind") or witness.get("square", {}).get("kind")
    if kind == "category-square":
        return _reverify_category_square(witness)
    if kind == "lcc":
        return _reverify_lcc(witness)
    if kind in ("graph-sle-square", "graph-pi", "graph-sieve"):
        from . import graphpre
        return graphpre.reverify_graph_witness(witness)
    raise ShapeMismatch(f"unknown witness kind {kind!r}")


def _reverify_category_square(w: dict) -> Verdict:
    from .report import reflection_from_json

    sq = w["square"] if "square" in w else w
    R = reflection_from_json(sq["reflection"])
    A, B = R.A, R.B
    f, g, p1, p2, p = sq["f"], sq["g"], sq["p1"], sq["p2"], sq["apex"]
    # the stored square must be the pullback it claims to be
    ok, _ = _is_pullback_square(B, p, (p1, p2), (f, g))
    if not ok:
        return Verdict("witness-replay", FAIL,
                       witness={"kind": "replay", "reason": "stored square is not a pullback"})
    Lm = R.L.mor_map
    ok, analysis = _is_pullback_square(
        A, R.L.obj_map[p], (Lm[p1], Lm[p2]), (Lm[f], Lm[g]))
    if ok:
        return Verdict("witness-replay", FAIL,
                       witness={"kind": "replay", "reason": "L-image square is a pullback after all"})
    return Verdict("witness-replay", PASS, stats={"analysis": analysis.to_json()})


def _reverify_lcc(w: dict) -> Verdict:
    from .report import category_from_json

    C = category_from_json(w["category"])
    x, y, c = w["x"], w["y"], w["c"]
    mx = {}
    for b in C.objects:
        p = binary_product(C, b, x)
        if p is None:
            return Verdict("witness-replay", FAIL,
                           witness={"kind": "replay", "reason": "missing meet"})
        mx[b] = p[0]
    cands = [b for b in C.objects if _leq(C, b, y) and _leq(C, mx[b], c)]
    tops = [b for b in cands if all(_leq(C, b2, b) for b2 in cands)]
    if tops:
        return Verdict("witness-replay", FAIL,
                       witness={"kind": "replay", "reason": "right adjoint exists after all"})
    return Verdict("witness-replay", PASS, stats={"candidates": sorted(cands)})
