"""Tests for inverse semigroups, tight filters and the tight groupoid"""

import pytest

import groupoid_core as gc
import inverse_semigroup as isg
from config import Config
from error_handling import BoundExceededError, FixtureError, PreconditionError, ValidationFailure


@pytest.fixture
def sym2(data_file):
    return isg.load_semigroup(data_file("semigroup_sym2.json"))


def test_fixtures_validate(data_file):
    for name in ("semigroup_sym2.json", "semigroup_semilattice.json", "semigroup_z2.json"):
        s = isg.load_semigroup(data_file(name))
        assert isg.validate_semigroup(s).ok, name


def test_broken_semigroup_is_reported(data_file):
    s = isg.load_semigroup(data_file("semigroup_broken.json"))
    codes = isg.validate_semigroup(s).codes()
    assert "idempotents_commute" in codes
    assert "inverse_not_unique" in codes
    with pytest.raises(ValidationFailure) as exc:
        isg.tight_groupoid(s)
    assert not exc.value.report.ok


def test_from_table_checks_shape():
    with pytest.raises(FixtureError):
        isg.from_table(["0", "e"], "0", [["0", "0"]])
    with pytest.raises(FixtureError):
        isg.from_table(["0", "e"], "z", [["0", "0"], ["0", "e"]])
    with pytest.raises(FixtureError):
        isg.from_table(["0", "e"], "0", [["0", "0"], ["0", "q"]])


def test_symmetric_inverse_monoid():
    i3 = isg.symmetric_inverse_monoid(3)
    assert len(i3) == 34
    assert i3.label(i3.zero) == "{}"
    assert isg.validate_semigroup(i3).ok
    assert len(i3.idempotents) == 8
    assert len(isg.symmetric_inverse_monoid(2)) == 7


def test_builders():
    s = isg.semilattice(["0", "e", "f", "1"], "0", {("e", "1"): "e", ("f", "1"): "f"})
    assert isg.validate_semigroup(s).ok
    assert len(s.idempotents) == 4
    g = isg.group_with_zero(["1", "g"], {("1", "1"): "1", ("1", "g"): "g", ("g", "1"): "g", ("g", "g"): "1"})
    assert isg.validate_semigroup(g).ok
    assert g.label(g.zero) == "zero"


def test_natural_order_and_star(sym2):
    a, b, e0, one = (sym2.index(x) for x in ("a", "b", "e0", "1"))
    assert sym2.star(a) == b
    assert sym2.leq(e0, one)
    assert not sym2.leq(one, e0)
    assert sorted(sym2.label(f) for f in sym2.below(one)) == ["0", "1", "e0", "e1"]


def test_cover_requires_elements_below(sym2):
    e0, e1, one = (sym2.index(x) for x in ("e0", "e1", "1"))
    assert isg.is_cover(sym2, [e0, e1], one)
    assert not isg.is_cover(sym2, [e0], one)
    with pytest.raises(PreconditionError):
        isg.is_cover(sym2, [one], e0)
    assert isg.is_cover(sym2, [one], e0, relaxed=True)


def test_filters(sym2):
    assert len(isg.filters(sym2)) == 3
    ultra = sorted(isg.filter_label(sym2, phi) for phi in isg.ultrafilters(sym2))
    tight = sorted(isg.filter_label(sym2, phi) for phi in isg.tight_filters(sym2))
    assert ultra == tight == ["up(e0)", "up(e1)"]


def test_filter_cap(sym2, monkeypatch):
    monkeypatch.setattr(Config, "MAX_IDEMPOTENTS", 2)
    with pytest.raises(BoundExceededError):
        isg.filters(sym2)


def test_canonical_action(sym2):
    family = isg.canonical_action(sym2)
    assert family.verify().ok
    assert family.maps[sym2.index("s")] == {0: 1, 1: 0}
    assert family.maps[sym2.index("a")] == {0: 1}
    assert family.maps[sym2.zero] == {}


def test_tight_groupoid_of_sym2(sym2):
    g = isg.tight_groupoid(sym2)
    assert gc.validate(g).ok
    assert sorted(g.labels) == ["[a|e0]", "[b|e1]", "[e0|e0]", "[e1|e1]"]
    assert len(g.units) == 2
    assert gc.is_hausdorff(g)
    assert gc.is_minimal(g)
    assert gc.is_topologically_free(g)


def test_sym2_conditions(sym2):
    assert isg.is_closed(sym2)
    assert isg.is_topologically_free_s(sym2)
    assert isg.is_minimal_s(sym2)
    assert not isg.is_locally_contracting_s(sym2)


def test_semilattice_is_not_minimal(data_file):
    s = isg.load_semigroup(data_file("semigroup_semilattice.json"))
    verdict = isg.is_minimal_s(s)
    assert not verdict
    assert verdict.witness == {"e": "e", "f": "f"}
    g = isg.tight_groupoid(s)
    assert len(g) == 2
    assert not gc.is_minimal(g)


def test_group_with_zero_is_not_free(data_file):
    s = isg.load_semigroup(data_file("semigroup_z2.json"))
    verdict = isg.is_topologically_free_s(s)
    assert not verdict
    assert verdict.witness == {"t": "g", "e": "1"}
    assert isg.is_closed(s)
    assert len(isg.tight_groupoid(s)) == 2
    g = s.index("g")
    assert isg.is_fixed(s, g, s.index("1"))
    assert isg.fixed_by_filters(s, g, s.index("1"))
    assert isg.trivially_fixed(s, g) == [s.zero]


@pytest.mark.parametrize("name", ["semigroup_sym2.json", "semigroup_semilattice.json", "semigroup_z2.json"])
def test_crosscheck_fixtures(data_file, name):
    out = isg.tight_groupoid_crosscheck(isg.load_semigroup(data_file(name)))
    assert out["tight_equals_ultra"]
    for key, value in out.items():
        if key.endswith("agrees"):
            assert value, key


def test_crosscheck_small_family():
    family = isg.small_inverse_semigroups(max_size=5)
    assert family
    for s in family:
        assert len(s) <= 5
        assert isg.validate_semigroup(s).ok, s.name
        if len(s) == 1:  # {0} has no tight filters
            continue
        out = isg.tight_groupoid_crosscheck(s)
        assert out["closed_agrees"], s.name
        assert out["topologically_free_agrees"], s.name
        assert out["minimal_agrees"], s.name


def _shapes(family):
    counts = {}
    for s in family:
        key = (len(s), len(s.idempotents))
        counts[key] = counts.get(key, 0) + 1
    return counts


def test_small_family_is_complete_up_to_size_four():
    family = isg.small_inverse_semigroups(max_size=4)
    sizes = [len(s) for s in family]
    assert [sizes.count(n) for n in range(1, 5)] == [1, 1, 3, 9]
    assert len({s.name for s in family}) == len(family)


def test_small_family_shapes():
    shapes = _shapes(isg.small_inverse_semigroups(max_size=6))
    # groups with zero: Z4 and Z2 x Z2, then Z5
    assert shapes[(5, 2)] == 2
    assert shapes[(6, 2)] == 1
    # semilattices with zero are the lattices with one more element
    assert shapes[(5, 5)] == 15
    assert shapes[(6, 6)] == 53


def test_small_family_contains_the_five_element_brandt_semigroup():
    family = isg.small_inverse_semigroups(max_size=5)
    brandt = [s for s in family if len(s) == 5 and len(s.idempotents) == 3
              and any(s.mul(x, s.star(x)) != s.mul(s.star(x), x) for x in s.elements)]
    assert len(brandt) == 1
    assert isg.tight_groupoid_crosscheck(brandt[0])["tight_equals_ultra"]


def test_generated_subsemigroup_of_rank_one_map():
    i2 = isg.symmetric_inverse_monoid(2)
    b2 = isg.generated_subsemigroup(i2, [i2.index("{0>1}")])
    assert len(b2) == 5
    assert isg.validate_semigroup(b2).ok
    assert len(b2.idempotents) == 3


def test_germ_groupoid_size_is_bounded(data_file):
    family = isg.small_inverse_semigroups(max_size=4)
    family += [isg.load_semigroup(data_file(n)) for n in ("semigroup_sym2.json", "semigroup_z2.json")]
    for s in family:
        if len(s) == 1:  # {0} has no tight filters
            continue
        g = isg.tight_groupoid(s)
        assert len(g) <= len(s) * len(isg.tight_filters(s)), s.name
