#!/usr/bin/env python3
"""Run the full certification pipeline and print one verdict per line.

This is the long-form version of what the acceptance tests assert: fixture
validation, the Kan adjunction chain, the reflection property checkers, the
graphs-vs-preorders certificates, and the counterexample search.  Bounds are
adjustable so the script doubles as a scaling probe.
"""

import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from finitopos import checks, fixtures, graphpre, kan  # noqa: E402
from finitopos.fincat import check_adjunction  # noqa: E402


def stamp(label, verdict, t0):
    print(f"[{time.time() - t0:7.1f}s] {label}: {verdict.summary()}")
    return verdict


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--carrier-bound", type=int, default=2,
                    help="presheaf corpus carrier bound for the Kan chain")
    ap.add_argument("--max-vertices", type=int, default=4)
    ap.add_argument("--max-edges", type=int, default=8)
    ap.add_argument("--graph-bound", type=int, default=3,
                    help="vertex bound for the exhaustive product/exponential sweeps")
    ap.add_argument("--out", type=Path, default=None,
                    help="write all verdicts to a JSON file")
    args = ap.parse_args()

    t0 = time.time()
    results = {}

    for name in fixtures.FIXTURE_REFLECTIONS:
        R = fixtures.get_reflection(name)
        results[f"adjunction/{name}"] = stamp(
            f"adjunction {name}", check_adjunction(R), t0)
        results[f"kan-chain/{name}"] = stamp(
            f"kan chain {name}",
            kan.verify_essential_local(R, carrier_bound=args.carrier_bound), t0)
        results[f"frobenius/{name}"] = stamp(
            f"frobenius {name}", checks.check_frobenius_all(R), t0)
        results[f"sle/{name}"] = stamp(
            f"semi-left-exact {name}", checks.check_semi_left_exact(R), t0)
        results[f"stable-units/{name}"] = stamp(
            f"stable units {name}", checks.check_stable_units(R), t0)
        results[f"exp-ideal/{name}"] = stamp(
            f"exponential ideal {name}", checks.check_exponential_ideal(R), t0)

    for name in ("chain-2", "bool-2", "m3"):
        results[f"lcc/{name}"] = stamp(
            f"lcc {name}", checks.check_lcc(fixtures.get_category(name)), t0)

    results["graph-products"] = stamp(
        "graph product preservation",
        graphpre.check_product_preservation(max_v=args.graph_bound, max_e=4,
                                            random_pairs=100), t0)
    results["graph-exp-ideal"] = stamp(
        "graph exponential ideal",
        graphpre.check_exponential_ideal_graphs(max_p=3, max_v=args.graph_bound,
                                                max_e=4), t0)
    results["sle-failure"] = stamp(
        "sle-failure search",
        graphpre.find_sle_failure(max_v=args.max_vertices, max_e=args.max_edges), t0)
    results["pi-witness"] = stamp(
        "pi-witness search", graphpre.find_pi_witness(max_n=3), t0)
    results["sieve-witness"] = stamp(
        "sieve-witness search",
        graphpre.find_sieve_witness(max_n=3, max_v=3, max_e=4), t0)

    if args.out:
        args.out.write_text(json.dumps(
            {k: v.to_json() for k, v in results.items()}, indent=2, sort_keys=True) + "\n")
        print(f"verdicts written to {args.out}")

    bad = [k for k, v in results.items() if v.outcome == "INCONCLUSIVE"]
    if bad:
        print("inconclusive:", ", ".join(bad))
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
