"""Tests for finite coarse spaces and controlled-propagation matrices"""

from fractions import Fraction

import numpy as np
import pytest

import coarse_roe as cr
import groupoid_core as gc
from config import Config
from error_handling import BoundExceededError, FixtureError, PreconditionError

POINTS = ["x0", "x1", "x2", "x3"]


def _full(points):
    return cr.make_coarse_space(points, [cr.full_relation(points)], name="full")


def test_relations():
    e = {("a", "b"), ("b", "c")}
    assert cr.inverse(e) == {("b", "a"), ("c", "b")}
    assert cr.compose(e, e) == {("a", "c")}
    assert cr.is_bisection(e)
    assert not cr.is_bisection({("a", "b"), ("a", "c")})


def test_largest_entourage_is_transitive_closure(data_file):
    cs, _ = cr.load_coarse(data_file("coarse_full.json"))
    assert cs.classes == [("x0", "x1", "x2")]
    assert len(cs.largest) == 9
    assert cs.unital
    assert cs.contains({("x2", "x0")})


def test_unknown_points_are_rejected():
    with pytest.raises(FixtureError):
        cr.make_coarse_space(["x0"], [[("x0", "y")]])


def test_non_unital_space():
    cs = cr.make_coarse_space(["x0", "x1", "x2"], [[("x0", "x1")]])
    assert not cs.unital
    assert cs.classes == [("x0", "x1")]


def test_n_of_counts_neighbours():
    cs = _full(POINTS)
    assert cr.n_of(cs, cr.diagonal_relation(POINTS)) == 1
    assert cr.n_of(cs, cr.full_relation(POINTS)) == 4
    far = cr.make_coarse_space(POINTS, [cr.diagonal_relation(POINTS)])
    with pytest.raises(PreconditionError):
        cr.n_of(far, {("x0", "x1")})


def test_bisection_decomposition():
    cs = _full(POINTS)
    full = cr.full_relation(POINTS)
    pieces = cr.decompose_into_bisections(cs, full)
    assert len(pieces) == 4
    assert all(cr.is_bisection(p) for p in pieces)
    assert frozenset().union(*pieces) == full
    assert sum(len(p) for p in pieces) == len(full)


def test_random_decompositions_respect_n(rng):
    for _ in range(20):
        cs, e = cr.random_coarse_space(rng, max_points=8, density=0.3)
        pieces = cr.decompose_into_bisections(cs, e)
        assert all(cr.is_bisection(p) for p in pieces)
        assert frozenset().union(*pieces) == e
        assert len(pieces) <= cr.n_of(cs, e)


def test_ideals_of_separated_points(data_file):
    cs, _ = cr.load_coarse(data_file("coarse_diagonal.json"))
    ideals = cr.coarse_ideals(cs)
    assert len(ideals) == 8
    assert all(cr.is_ideal(cs, i.largest) for i in ideals)
    verdict = cr.is_simple_coarse(cs)
    assert not verdict
    assert verdict.witness == {"classes": [["x0"]]}


def test_single_class_is_simple(data_file):
    cs, _ = cr.load_coarse(data_file("coarse_full.json"))
    assert len(cr.coarse_ideals(cs)) == 2
    assert cr.is_simple_coarse(cs)
    assert not cr.is_ideal(cs, {("x0", "x0")})


def test_ideal_cap(data_file, monkeypatch):
    cs, _ = cr.load_coarse(data_file("coarse_diagonal.json"))
    monkeypatch.setattr(Config, "MAX_COARSE_CLASSES", 2)
    with pytest.raises(BoundExceededError):
        cr.coarse_ideals(cs)


def test_coarse_groupoid(data_file):
    cs, _ = cr.load_coarse(data_file("coarse_full.json"))
    g = cr.coarse_groupoid(cs, blockdim=2)
    assert len(g) == 36
    assert gc.is_minimal(g)
    far, _ = cr.load_coarse(data_file("coarse_diagonal.json"))
    h = cr.coarse_groupoid(far)
    assert len(h) == 3
    assert len(gc.orbits(h)) == 3


def test_norm_bound_on_fixture(data_file):
    cs, t = cr.load_coarse(data_file("coarse_full.json"))
    assert t.exact
    assert cr.validate_controlled(cs, t).ok
    assert cr.assemble(t).shape == (6, 6)
    one = cr.matrix_rep_norm_bound(cs, t, 1)
    assert one.exact == 4
    assert one.n == 3
    assert one.block_sup == 3
    assert one.bound == 30
    for p in ("2", "inf"):
        result = cr.matrix_rep_norm_bound(cs, t, p)
        assert result.exact <= result.bound


def test_norm_bound_on_diagonal(data_file):
    cs, t = cr.load_coarse(data_file("coarse_diagonal.json"))
    result = cr.matrix_rep_norm_bound(cs, t, 2)
    assert result.exact == pytest.approx(2.0)
    assert result.n == 1
    assert result.bound == pytest.approx(4.0)
    assert result.to_dict()["p"] == 2.0


def test_single_off_diagonal_block():
    cs = _full(POINTS)
    t = cr.controlled_matrix(POINTS, 1, {("x0", "x1"): [[3]]})
    result = cr.matrix_rep_norm_bound(cs, t, "inf")
    assert result.exact == 3
    assert result.n == 1
    assert result.bound == 6
    assert result.to_dict()["p"] == "inf"


def test_uncontrolled_support_is_rejected(data_file):
    cs, _ = cr.load_coarse(data_file("coarse_diagonal.json"))
    t = cr.controlled_matrix(cs.points, 1, {("x0", "x1"): [[1]]})
    assert "support_not_entourage" in cr.validate_controlled(cs, t).codes()
    with pytest.raises(PreconditionError):
        cr.matrix_rep_norm_bound(cs, t, 1)
    good = cr.controlled_matrix(cs.points, 1, {("x0", "x0"): [[1]]})
    with pytest.raises(PreconditionError):
        cr.matrix_rep_norm_bound(cs, good, 3)


def test_block_shapes_are_checked():
    with pytest.raises(FixtureError):
        cr.controlled_matrix(POINTS, 2, {("x0", "x0"): [[1, 0]]})


def test_products_match_assembled_matrices(data_file):
    _, t = cr.load_coarse(data_file("coarse_full.json"))
    product = cr.multiply_controlled(t, t)
    expected = cr.assemble(t) @ cr.assemble(t)
    assert (cr.assemble(product) == expected).all()


def test_decompose_and_reconstruct(data_file):
    cs, t = cr.load_coarse(data_file("coarse_full.json"))
    pieces = cr.decompose_matrix(cs, t)
    assert len(pieces) <= cr.n_of(cs, t.support)
    back = cr.reconstruct(cs.points, t.blockdim, pieces)
    assert (cr.assemble(back) == cr.assemble(t)).all()
    total = cr.translation_matrix(cs.points, t.blockdim, *pieces[0])
    assert total.support == pieces[0][1]


def test_compose_basic_elements():
    a = np.array([[Fraction(1), Fraction(2)], [Fraction(0), Fraction(1)]], dtype=object)
    b = np.array([[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]], dtype=object)
    e1, e2 = frozenset({("x0", "x1")}), frozenset({("x1", "x2")})
    f, e = cr.compose_basic({"x0": a}, e1, {"x1": b}, e2)
    assert e == {("x0", "x2")}
    assert (f["x0"] == a @ b).all()
    product = cr.multiply_controlled(cr.translation_matrix(POINTS, 2, {"x0": a}, e1),
                                     cr.translation_matrix(POINTS, 2, {"x1": b}, e2))
    assert (product.blocks[("x0", "x2")] == f["x0"]).all()
    with pytest.raises(PreconditionError):
        cr.compose_basic({"x0": a}, {("x0", "x1"), ("x0", "x2")}, {"x1": b}, e2)


def test_random_matrices_satisfy_the_bound(rng):
    for _ in range(10):
        cs, _ = cr.random_coarse_space(rng, max_points=6, density=0.3)
        t = cr.random_controlled_matrix(rng, cs, blockdim=2, exact=bool(rng.random() < 0.5))
        assert cr.validate_controlled(cs, t).ok
        if not t.blocks:
            continue
        for p in (1, 2, "inf"):
            result = cr.matrix_rep_norm_bound(cs, t, p)
            assert result.exact <= result.bound * (1 + 1e-9)
