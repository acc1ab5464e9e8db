#!/usr/bin/env python3
"""
Acceptance suite for groupalg
Runs the finite-scale theorem cross-checks over curated fixtures and random
corpora; usable standalone (prints a summary) or through pytest.
"""

import math
import os
import sys
import time
from typing import Any, Dict, Iterator, List, Tuple

import numpy as np

import algebra_analysis as alg
import coarse_roe as cr
import graph_tools as gt
import groupoid_core as gc
import inverse_semigroup as isg
import partial_action as pa
import self_similar as ss
import twisted_convolution as tc
from config import Config
from groupalg_utils import TriState

SLACK = 1e-9


def _data(name: str) -> str:
    return os.path.join(Config.DATA_DIR, name)


def curated_groupoids() -> List[Tuple[gc.FiniteGroupoid, Any]]:
    out = []
    for name in ("groupoid_z2.json", "groupoid_pair2.json", "groupoid_nonhausdorff.json"):
        out.append((gc.load_groupoid(_data(name)), None))
    klein = gc.load_groupoid(_data("groupoid_klein.json"))
    out.append((klein, tc.load_cocycle(_data("cocycle_klein.json"), klein)))
    for name in ("paction_swap.json", "paction_identity.json", "paction_partial.json", "paction_klein_twisted.json"):
        theta, u = pa.load_action(_data(name))
        out.append(pa.transformation_groupoid(theta, u))
    return out


def _paths(q: gt.DirectedGraph, length: int) -> Iterator[Tuple[str, ...]]:
    """Every path of the given length, with s(mu_i) = r(mu_{i+1})."""
    frontier = [(e,) for e, _, _ in q.edges]
    for _ in range(length - 1):
        frontier = [mu + (e,) for mu in frontier for e in q.receiving[q.s(mu[-1])]]
    return iter(frontier)


class GroupalgAcceptanceTester:
    """Acceptance criteria for the toolkit, one method per criterion"""

    def __init__(self, seed: int = Config.DEFAULT_SEED):
        self.test_results = {
            "passed": 0,
            "failed": 0,
            "errors": [],
            "performance_metrics": {}
        }
        self.rng = np.random.default_rng(seed)
        self.start_time = time.time()

    def log_test(self, test_name: str, success: bool, message: str = ""):
        """Log test result"""
        status = "✅ PASS" if success else "❌ FAIL"
        print(f"{status}: {test_name}")
        if message:
            print(f"   {message}")

        if success:
            self.test_results["passed"] += 1
        else:
            self.test_results["failed"] += 1
            self.test_results["errors"].append(f"{test_name}: {message}")

    def _timed(self, metric: str, started: float) -> None:
        self.test_results["performance_metrics"][metric] = time.time() - started

    def test_theorem_crosscheck(self) -> None:
        """Simplicity with a maximal abelian diagonal iff topologically free and minimal"""
        print("\n🧮 Testing Theorem Cross-check...")
        started = time.time()
        corpus = curated_groupoids() + [(gc.random_groupoid(self.rng), None) for _ in range(100)]
        theorem, untwisted, checked = [], [], 0
        for g, sigma in corpus:
            out = alg.crosscheck(g, sigma)
            if not out["discrete"]:
                continue
            checked += 1
            if not out["theorem_agrees"]:
                theorem.append(g.name)
            if "trivial_rep_agrees" in out and not (out["trivial_rep_agrees"] and out["untwisted_agrees"]):
                untwisted.append(g.name)
        self._timed("crosscheck_time", started)
        self.log_test(f"Theorem agreement on {checked} groupoids", not theorem, ", ".join(theorem))
        self.log_test("Trivial representation criterion", not untwisted, ", ".join(untwisted))

    def test_norm_chain(self) -> None:
        """Regular representation norms against the Hahn norms, and expectation faithfulness"""
        print("\n📏 Testing Norm Chain...")
        started = time.time()
        chain, exact, faithful = [], [], []
        for k in range(500):
            if k % 10 == 0:
                g = gc.random_groupoid(self.rng)
            f = tc.random_element(g, self.rng)
            rep = tc.regular_rep(f)
            two = tc.operator_norm(rep, 2)
            middle = tc.lp_norm_bound(f, 2)
            if not two <= middle * (1 + SLACK) + Config.FLOAT_TOL <= float(tc.norm(f, "I")) * (1 + SLACK) + 2 * Config.FLOAT_TOL:
                chain.append(k)
            if tc.operator_norm(rep, 1) != tc.norm(f, "star_d") or tc.operator_norm(rep, math.inf) != tc.norm(f, "star_r"):
                exact.append(k)
            out = tc.check_faithfulness(f)
            if any(out["diagonal_sup"] > out[p] * (1 + SLACK) + Config.FLOAT_TOL for p in ("1", "2", "inf")):
                faithful.append(k)
        self._timed("norm_chain_time", started)
        self.log_test("p = 2 norm below the star and I-norms", not chain, f"violations at {chain[:5]}")
        self.log_test("p = 1 and p = inf norms are the star norms", not exact, f"violations at {exact[:5]}")
        self.log_test("Diagonal expectation is contractive", not faithful, f"violations at {faithful[:5]}")

    def test_tight_groupoids(self) -> None:
        """Semigroup conditions match their tight groupoid counterparts"""
        print("\n🔗 Testing Tight Groupoids...")
        family = isg.small_inverse_semigroups(max_size=6)
        for name in ("semigroup_sym2.json", "semigroup_semilattice.json", "semigroup_z2.json"):
            family.append(isg.load_semigroup(_data(name)))
        disagreements = []
        for s in family:
            if len(s) == 1:
                continue
            out = isg.tight_groupoid_crosscheck(s)
            bad = [k for k, v in out.items() if (k.endswith("agrees") or k == "tight_equals_ultra") and not v]
            if bad:
                disagreements.append(f"{s.name} ({', '.join(bad)})")
        self.log_test(f"Tight groupoid equivalences on {len(family)} semigroups", not disagreements,
                      "; ".join(disagreements))

    def test_graph_verdicts(self) -> None:
        """Graph decision procedure against the Burnside oracle"""
        print("\n🕸️  Testing Graph Verdicts...")
        o2 = gt.load_graph(_data("graph_o2.dot"))
        self.log_test("O2 is purely infinite simple", gt.simplicity_verdict(o2).kind == gt.SIMPLE_PURELY_INFINITE)
        loop = gt.load_graph(_data("graph_loop.json"))
        self.log_test("Single loop is not simple", gt.simplicity_verdict(loop).kind == gt.NOT_SIMPLE)
        disagreements = []
        for k in range(50):
            q = gt.random_acyclic_graph(self.rng)
            g = gt.boundary_path_groupoid_acyclic(q)
            oracle = bool(alg.is_simple_burnside(alg.from_groupoid(g)))
            if oracle != (gt.simplicity_verdict(q).kind == gt.SIMPLE_AF):
                disagreements.append(k)
        self.log_test("Acyclic graphs agree with the oracle", not disagreements, f"graphs {disagreements}")

    def test_roe_decomposition(self) -> None:
        """Bisection decompositions and the controlled-propagation norm bound"""
        print("\n🧱 Testing Roe Decomposition...")
        started = time.time()
        bad_pieces = []
        for k in range(100):
            cs, e = cr.random_coarse_space(self.rng)
            pieces = cr.decompose_into_bisections(cs, e)
            n = cr.n_of(cs, e) if e else 0
            disjoint = sum(len(p) for p in pieces) == len(e)
            if not (disjoint and frozenset().union(*pieces) == e and len(pieces) <= n * n + 1
                    and all(cr.is_bisection(p) for p in pieces)):
                bad_pieces.append(k)
        self.log_test("Entourages split into few disjoint bisections", not bad_pieces, f"entourages {bad_pieces}")
        bad_bounds = []
        for k in range(200):
            cs, _ = cr.random_coarse_space(self.rng, max_points=10)
            t = cr.random_controlled_matrix(self.rng, cs, exact=k % 2 == 0)
            if not t.blocks:
                continue
            for p in (1, 2, "inf"):
                result = cr.matrix_rep_norm_bound(cs, t, p)
                if result.exact > result.bound * (1 + SLACK):
                    bad_bounds.append((k, p))
        self._timed("roe_time", started)
        self.log_test("Controlled matrices respect the norm bound", not bad_bounds, f"{bad_bounds[:5]}")

    def test_finite_certificates(self) -> None:
        """Pure-infiniteness conditions fail on finite inputs with a certificate"""
        print("\n📜 Testing Finite Certificates...")
        missing = []
        groupoids = [g for g, _ in curated_groupoids()]
        groupoids += [gc.random_groupoid(self.rng, max_units=4, max_arrows=12) for _ in range(10)]
        for g in groupoids:
            filling = gc.is_n_filling(g, 2)
            if filling or filling.certificate.get("unit_space_cardinality") != len(g.units):
                missing.append(f"{g.name}: n-filling")
            contracting = gc.is_locally_contracting(g)
            if contracting or "searched" not in contracting.certificate:
                missing.append(f"{g.name}: locally contracting")
            if not g.is_discrete:
                continue
            a = alg.from_groupoid(g)
            for x in g.unit_list:
                idem = alg.is_infinite_idempotent(a, alg.element_vector(a, tc.delta(g, x)))
                if idem or not isinstance(idem.certificate.get("dim_eA"), int):
                    missing.append(f"{g.name}: idempotent {g.label(x)}")
        self.log_test(f"Certificates on {len(groupoids)} groupoids", not missing, "; ".join(missing[:5]))

    def test_self_similar_identities(self) -> None:
        """Cocycle identities, the path-composition law and monotone verdicts"""
        print("\n🌀 Testing Self-similar Actions...")
        actions = [ss.odometer()] + [ss.load_selfsim(_data(name)) for name in (
            "selfsim_odometer.json", "selfsim_subtree.json", "selfsim_lazy.json", "selfsim_trivial_o2.json")]
        for a in actions:
            self.log_test(f"Identities on {a.name}", ss.validate_cocycle_identities(a).ok)
            failures = []
            for mu in _paths(a.graph, 8):
                for g in a.states:
                    whole = ss.act_on_path(a, g, mu)
                    for cut in range(1, len(mu)):
                        head, h = ss.act_on_path(a, g, mu[:cut])
                        tail, k = ss.act_on_path(a, h, mu[cut:])
                        if whole != (head + tail, k):
                            failures.append((g, "/".join(mu), cut))
            self.log_test(f"Path composition on {a.name}", not failures, f"{failures[:3]}")
            decided: Dict[str, TriState] = {}
            flips = []
            for depth in range(2, 13):
                for key, decision in ss.verdict(a, depth).hypotheses.items():
                    if key in decided and decision.status is not decided[key]:
                        flips.append(f"{key}@{depth}")
                    elif decision.status is not TriState.UNKNOWN:
                        decided[key] = decision.status
            self.log_test(f"Verdicts monotone in depth on {a.name}", not flips, ", ".join(flips))

    def run_all_tests(self) -> Dict[str, Any]:
        """Run the acceptance suite"""
        print("🧪 Starting groupalg Acceptance Suite...")
        print("=" * 60)

        self.test_theorem_crosscheck()
        self.test_norm_chain()
        self.test_tight_groupoids()
        self.test_graph_verdicts()
        self.test_roe_decomposition()
        self.test_finite_certificates()
        self.test_self_similar_identities()

        total_time = time.time() - self.start_time
        self.test_results["performance_metrics"]["total_test_time"] = total_time

        print("\n" + "=" * 60)
        print("🎯 TEST SUMMARY")
        print("=" * 60)
        print(f"✅ Tests Passed: {self.test_results['passed']}")
        print(f"❌ Tests Failed: {self.test_results['failed']}")
        print(f"⏱️  Total Time: {total_time:.2f}s")

        if self.test_results["errors"]:
            print(f"\n❌ ERRORS ({len(self.test_results['errors'])}):")
            for error in self.test_results["errors"]:
                print(f"   • {error}")

        if self.test_results["performance_metrics"]:
            print("\n⚡ PERFORMANCE METRICS:")
            for metric, value in self.test_results["performance_metrics"].items():
                print(f"   • {metric}: {value:.3f}s")

        return self.test_results


def test_acceptance_suite():
    results = GroupalgAcceptanceTester().run_all_tests()
    assert results["failed"] == 0, results["errors"]


if __name__ == "__main__":
    tester = GroupalgAcceptanceTester()
    results = tester.run_all_tests()

    exit_code = 0 if results["failed"] == 0 else 1
    sys.exit(exit_code)
