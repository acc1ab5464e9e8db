"""
Finite groupoids with an optional finite topology, and the dynamical property
checkers (topological freeness, effectiveness, principality, minimality,
Hausdorff points, regular-open sets, n-filling, local contraction).

Arrows are dense integer ids in sorted-label order; units are arrows. A missing
topology means the discrete one.
"""
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from error_handling import BoundExceededError, FixtureError, PreconditionError
from config import Config
from groupalg_utils import ValidationReport, Verdict, load_validated
from src.utils.json_validator import GROUPOID_SCHEMA
from utils.logging_utils import log_debug, log_verdict, log_warning

Arrow = int
ArrowSet = FrozenSet[int]


@dataclass(frozen=True, eq=False)
class TopologyBasis:
    basis_sets: Tuple[ArrowSet, ...]


@dataclass(frozen=True, eq=False)
class Bisection:
    arrows: ArrowSet
    open_flag: bool


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    labels: Tuple[str, ...]
    units: ArrowSet
    range_map: Tuple[Arrow, ...]
    domain_map: Tuple[Arrow, ...]
    compose_table: Mapping[Tuple[Arrow, Arrow], Arrow]
    inverse_map: Tuple[Arrow, ...]
    topology: Optional[TopologyBasis] = None
    name: str = "groupoid"

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def arrows(self) -> range:
        return range(len(self.labels))

    @cached_property
    def _index(self) -> Dict[str, Arrow]:
        return {label: i for i, label in enumerate(self.labels)}

    def index(self, label: str) -> Arrow:
        try:
            return self._index[label]
        except KeyError:
            raise PreconditionError(f"unknown arrow label {label!r} in {self.name}") from None

    def label(self, arrow: Arrow) -> str:
        return self.labels[arrow]

    def label_set(self, arrows: Iterable[Arrow]) -> List[str]:
        return sorted(self.labels[a] for a in arrows)

    def r(self, arrow: Arrow) -> Arrow:
        return self.range_map[arrow]

    def d(self, arrow: Arrow) -> Arrow:
        return self.domain_map[arrow]

    def inv(self, arrow: Arrow) -> Arrow:
        return self.inverse_map[arrow]

    def mul(self, a: Arrow, b: Arrow) -> Optional[Arrow]:
        return self.compose_table.get((a, b))

    def composable(self, a: Arrow, b: Arrow) -> bool:
        return self.domain_map[a] == self.range_map[b]

    @cached_property
    def unit_list(self) -> List[Arrow]:
        return sorted(self.units)

    @cached_property
    def by_range(self) -> Dict[Arrow, List[Arrow]]:
        out: Dict[Arrow, List[Arrow]] = {x: [] for x in self.unit_list}
        for a in self.arrows:
            out.setdefault(self.range_map[a], []).append(a)
        return out

    @cached_property
    def by_domain(self) -> Dict[Arrow, List[Arrow]]:
        out: Dict[Arrow, List[Arrow]] = {x: [] for x in self.unit_list}
        for a in self.arrows:
            out.setdefault(self.domain_map[a], []).append(a)
        return out

    @property
    def is_discrete(self) -> bool:
        return self.topology is None

    @cached_property
    def basis(self) -> Tuple[ArrowSet, ...]:
        if self.topology is None:
            return tuple(frozenset([a]) for a in self.arrows)
        return self.topology.basis_sets

    @cached_property
    def neighbourhoods(self) -> Tuple[ArrowSet, ...]:
        """Smallest open set around each arrow: the meet of the basis sets containing it."""
        everything = frozenset(self.arrows)
        out = []
        for a in self.arrows:
            hood = everything
            for b in self.basis:
                if a in b:
                    hood = hood & b
            out.append(hood)
        return tuple(out)


# --- Construction ---
def from_labels(
    arrows: Sequence[str],
    units: Iterable[str],
    r: Mapping[str, str],
    d: Mapping[str, str],
    compose: Iterable[Sequence[str]],
    inverse: Mapping[str, str],
    basis: Optional[Iterable[Iterable[str]]] = None,
    name: str = "groupoid",
) -> FiniteGroupoid:
    """Build a groupoid from string labels; ids follow sorted label order."""
    labels = tuple(sorted(arrows))
    if len(set(labels)) != len(labels):
        raise FixtureError(f"{name}: duplicate arrow labels")
    idx = {label: i for i, label in enumerate(labels)}

    def lookup(label: str) -> int:
        try:
            return idx[label]
        except KeyError:
            raise FixtureError(f"{name}: unknown arrow label {label!r}") from None

    missing = [a for a in labels if a not in r or a not in d or a not in inverse]
    if missing:
        raise FixtureError(f"{name}: r, d and inverse must be total; missing {missing[:5]}")
    table = {}
    for a, b, c in compose:
        key = (lookup(a), lookup(b))
        if key in table and table[key] != lookup(c):
            raise FixtureError(f"{name}: conflicting products for ({a}, {b})")
        table[key] = lookup(c)
    topology = None
    if basis is not None:
        topology = TopologyBasis(tuple(frozenset(lookup(x) for x in b) for b in basis))
    return FiniteGroupoid(
        labels=labels,
        units=frozenset(lookup(u) for u in units),
        range_map=tuple(lookup(r[a]) for a in labels),
        domain_map=tuple(lookup(d[a]) for a in labels),
        compose_table=table,
        inverse_map=tuple(lookup(inverse[a]) for a in labels),
        topology=topology,
        name=name,
    )


def _from_triples(name, arrow_triples, mul, inv, basis=None) -> FiniteGroupoid:
    """arrow_triples: label -> (range label, domain label); mul(label, label) -> label."""
    units = [a for a, (r, d) in arrow_triples.items() if a == r == d]
    compose = []
    for a, (_, da) in arrow_triples.items():
        for b, (rb, _) in arrow_triples.items():
            if da == rb:
                compose.append((a, b, mul(a, b)))
    return from_labels(
        list(arrow_triples),
        units,
        {a: rd[0] for a, rd in arrow_triples.items()},
        {a: rd[1] for a, rd in arrow_triples.items()},
        compose,
        {a: inv(a) for a in arrow_triples},
        basis=basis,
        name=name,
    )


def unit_groupoid(points: Sequence[str], name: str = "units") -> FiniteGroupoid:
    return _from_triples(name, {x: (x, x) for x in points}, lambda a, b: a, lambda a: a)


def pair_groupoid(points: Sequence[str], name: str = "pair") -> FiniteGroupoid:
    return transitive_groupoid(points, ["e"], {("e", "e"): "e"}, "e", name=name)


def group_groupoid(elements: Sequence[str], table: Mapping[Tuple[str, str], str], identity: str,
                   name: str = "group") -> FiniteGroupoid:
    """A finite group as a one-unit groupoid; the unit is labelled by the identity."""
    triples = {g: (identity, identity) for g in elements}
    inverse = {g: next(h for h in elements if table[(g, h)] == identity) for g in elements}
    return _from_triples(name, triples, lambda a, b: table[(a, b)], inverse.__getitem__)


def transitive_groupoid(points: Sequence[str], elements: Sequence[str], table: Mapping[Tuple[str, str], str],
                        identity: str, name: str = "transitive") -> FiniteGroupoid:
    """Pair groupoid on points times a group: arrows (y, g, x) with (z,g,y)(y,h,x) = (z,gh,x).

    The arrow (x, identity, x) is labelled x.
    """
    def lab(y, g, x):
        return x if (y == x and g == identity) else f"{y}|{g}|{x}"

    parts = {}
    for y in points:
        for x in points:
            for g in elements:
                parts[lab(y, g, x)] = (y, g, x)
    inverse_of = {g: next(h for h in elements if table[(g, h)] == identity) for g in elements}

    def mul(a, b):
        z, g, _ = parts[a]
        _, h, x = parts[b]
        return lab(z, table[(g, h)], x)

    def inv(a):
        y, g, x = parts[a]
        return lab(x, inverse_of[g], y)

    triples = {a: (lab(y, identity, y), lab(x, identity, x)) for a, (y, g, x) in parts.items()}
    return _from_triples(name, triples, mul, inv)


def cyclic_group(m: int) -> Tuple[List[str], Dict[Tuple[str, str], str], str]:
    elements = [str(k) for k in range(m)]
    table = {(str(a), str(b)): str((a + b) % m) for a in range(m) for b in range(m)}
    return elements, table, "0"


def disjoint_union(*groupoids: FiniteGroupoid, name: str = "union") -> FiniteGroupoid:
    """Labels are prefixed by the component index ("0:", "1:", ...)."""
    arrows, units, r, d, inverse, compose, basis = [], [], {}, {}, {}, [], []
    any_topology = any(g.topology is not None for g in groupoids)
    for k, g in enumerate(groupoids):
        p = f"{k}:"
        for a in g.arrows:
            la = p + g.label(a)
            arrows.append(la)
            r[la] = p + g.label(g.r(a))
            d[la] = p + g.label(g.d(a))
            inverse[la] = p + g.label(g.inv(a))
        units.extend(p + g.label(x) for x in g.units)
        compose.extend((p + g.label(a), p + g.label(b), p + g.label(c)) for (a, b), c in g.compose_table.items())
        if any_topology:
            basis.extend([p + g.label(a) for a in b] for b in g.basis)
    return from_labels(arrows, units, r, d, compose, inverse, basis=basis if any_topology else None, name=name)


def random_groupoid(rng, max_units: int = 6, max_arrows: int = 30, max_isotropy: int = 3) -> FiniteGroupoid:
    """Disjoint union of transitive groupoids with cyclic isotropy, within the size limits."""
    n_units = int(rng.integers(1, max_units + 1))
    components, used = [], 0
    remaining = n_units
    while remaining > 0:
        k = int(rng.integers(1, min(remaining, 5) + 1))
        m = int(rng.integers(1, max_isotropy + 1))
        while used + k * k * m > max_arrows and m > 1:
            m -= 1
        while used + k * k * m > max_arrows and k > 1:
            k -= 1
        if used + k * k * m > max_arrows:
            break
        elements, table, e = cyclic_group(m)
        points = [f"x{n_units - remaining + i}" for i in range(k)]
        components.append(transitive_groupoid(points, elements, table, e, name=f"orbit{len(components)}"))
        used += k * k * m
        remaining -= k
    if len(components) == 1:
        return components[0]
    return disjoint_union(*components, name="random")


def load_groupoid(path: str) -> FiniteGroupoid:
    data = load_validated(path, GROUPOID_SCHEMA)
    return groupoid_from_json(data, name=data.get("name", path))


def groupoid_from_json(data: dict, name: str = "groupoid") -> FiniteGroupoid:
    return from_labels(
        data["arrows"], data["units"], data["r"], data["d"], data["compose"], data["inverse"],
        basis=data.get("basis"), name=name,
    )


def groupoid_to_json(g: FiniteGroupoid) -> dict:
    out = {
        "name": g.name,
        "arrows": list(g.labels),
        "units": g.label_set(g.units),
        "r": {g.label(a): g.label(g.r(a)) for a in g.arrows},
        "d": {g.label(a): g.label(g.d(a)) for a in g.arrows},
        "compose": sorted([g.label(a), g.label(b), g.label(c)] for (a, b), c in g.compose_table.items()),
        "inverse": {g.label(a): g.label(g.inv(a)) for a in g.arrows},
    }
    if g.topology is not None:
        out["basis"] = [g.label_set(b) for b in g.basis]
    return out


# --- Validation ---
def validate(g: FiniteGroupoid) -> ValidationReport:
    report = ValidationReport(subject=g.name)
    L = g.label
    for x in g.units:
        if g.r(x) != x or g.d(x) != x:
            report.add("unit_not_fixed", "r(x) = d(x) = x fails", [L(x)])
    for a in g.arrows:
        if g.r(a) not in g.units or g.d(a) not in g.units:
            report.add("range_not_unit", "r or d lands outside the unit space", [L(a)])
            continue
        if g.mul(a, g.d(a)) != a or g.mul(g.r(a), a) != a:
            report.add("unit_law", "compose(a, d(a)) = a = compose(r(a), a) fails", [L(a)])
    for a in g.arrows:
        for b in g.arrows:
            c = g.mul(a, b)
            if g.composable(a, b) and c is None:
                report.add("missing_product", "composable pair without a product", [L(a), L(b)])
            elif not g.composable(a, b) and c is not None:
                report.add("spurious_product", "product defined on a non-composable pair", [L(a), L(b)])
            elif c is not None and (g.r(c) != g.r(a) or g.d(c) != g.d(b)):
                report.add("product_ends", "r(ab) = r(a), d(ab) = d(b) fails", [L(a), L(b)])
    for (a, b), ab in g.compose_table.items():
        for c in g.by_range.get(g.d(b), []):
            bc = g.mul(b, c)
            left = g.mul(ab, c)
            right = g.mul(a, bc) if bc is not None else None
            if left != right:
                report.add("associativity", "(ab)c != a(bc)", [L(a), L(b), L(c)])
    for a in g.arrows:
        i = g.inv(a)
        if g.inv(i) != a:
            report.add("inverse_involution", "inverse(inverse(a)) != a", [L(a)])
        if g.mul(a, i) != g.r(a) or g.mul(i, a) != g.d(a):
            report.add("inverse_law", "a a^-1 = r(a) and a^-1 a = d(a) fail", [L(a)])
    if g.topology is not None:
        _validate_topology(g, report)
    return report


def _validate_topology(g: FiniteGroupoid, report: ValidationReport) -> None:
    L = g.label
    covered = frozenset().union(*g.basis) if g.basis else frozenset()
    if covered != frozenset(g.arrows):
        report.add("basis_cover", "basis sets do not cover every arrow", g.label_set(frozenset(g.arrows) - covered))
    for b1, b2 in itertools.combinations(g.basis, 2):
        for a in b1 & b2:
            if not any(a in b3 and b3 <= b1 & b2 for b3 in g.basis):
                report.add("basis_condition", "no basis set inside an intersection", [L(a)])
    if not is_open(g, g.units):
        report.add("units_not_open", "the unit space is not open", g.label_set(g.units))
    for a in g.arrows:
        if not any(a in b and _is_bisection(g, b) for b in g.basis):
            report.add("not_etale", "no basic open bisection through the arrow", [L(a)])


# --- Topology ---
def _is_bisection(g: FiniteGroupoid, arrows: Iterable[Arrow]) -> bool:
    arrows = list(arrows)
    return (len({g.r(a) for a in arrows}) == len(arrows)
            and len({g.d(a) for a in arrows}) == len(arrows))


def bisection(g: FiniteGroupoid, arrows: Iterable[Arrow]) -> Bisection:
    arrows = frozenset(arrows)
    if not _is_bisection(g, arrows):
        raise PreconditionError("range or domain is not injective on the given set")
    return Bisection(arrows=arrows, open_flag=is_open(g, arrows))


def minimal_neighbourhood(g: FiniteGroupoid, arrow: Arrow) -> ArrowSet:
    return g.neighbourhoods[arrow]


def interior(g: FiniteGroupoid, s: Iterable[Arrow]) -> ArrowSet:
    s = frozenset(s)
    return frozenset(a for b in g.basis if b <= s for a in b)


def closure(g: FiniteGroupoid, s: Iterable[Arrow]) -> ArrowSet:
    """Arrows whose smallest open neighbourhood meets s."""
    s = frozenset(s)
    return frozenset(a for a in g.arrows if minimal_neighbourhood(g, a) & s)


def is_open(g: FiniteGroupoid, s: Iterable[Arrow]) -> bool:
    s = frozenset(s)
    return interior(g, s) == s


def is_regular_open(g: FiniteGroupoid, s: Iterable[Arrow]) -> bool:
    s = frozenset(s)
    return interior(g, closure(g, s)) == s


def open_subsets(g: FiniteGroupoid, within: Iterable[Arrow]) -> List[ArrowSet]:
    """All non-empty open subsets of `within`, smallest first."""
    within = frozenset(within)
    pieces = sorted({b for b in g.basis if b and b <= within}, key=lambda b: (len(b), sorted(b)))
    found: Set[ArrowSet] = set()
    frontier = set(pieces)
    while frontier:
        found |= frontier
        if len(found) > Config.MAX_BISECTION_SEARCH:
            raise BoundExceededError(f"more than {Config.MAX_BISECTION_SEARCH} open subsets")
        frontier = {s | b for s in frontier for b in pieces if not b <= s} - found
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def open_bisections(g: FiniteGroupoid) -> List[Bisection]:
    """Non-empty open bisections; these form the inverse semigroup S(G) under setwise product."""
    return [Bisection(arrows=s, open_flag=True) for s in open_subsets(g, g.arrows) if _is_bisection(g, s)]


# --- Orbits ---
class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in items}

    def find(self, x):
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x

    def classes(self) -> List[FrozenSet]:
        groups: Dict = {}
        for x in self.parent:
            groups.setdefault(self.find(x), set()).add(x)
        return sorted((frozenset(c) for c in groups.values()), key=lambda c: sorted(c))


def orbits(g: FiniteGroupoid) -> List[ArrowSet]:
    uf = UnionFind(g.unit_list)
    for a in g.arrows:
        uf.union(g.r(a), g.d(a))
    return uf.classes()


def isotropy(g: FiniteGroupoid, x: Arrow) -> List[Arrow]:
    return [a for a in g.by_domain.get(x, []) if g.r(a) == x]


def _saturate(g: FiniteGroupoid, units: ArrowSet) -> ArrowSet:
    return frozenset(g.r(a) for x in units for a in g.by_domain.get(x, []))


def is_invariant(g: FiniteGroupoid, units: Iterable[Arrow]) -> bool:
    """d(a) in U implies r(a) in U."""
    units = frozenset(units)
    return units <= g.units and _saturate(g, units) == units


# --- Freeness and principality ---
def _r_equals_d(g: FiniteGroupoid, b: ArrowSet) -> bool:
    return all(g.r(a) == g.d(a) for a in b)


def is_topologically_free(g: FiniteGroupoid) -> Verdict:
    for b in g.basis:
        if b and not (b & g.units) and _r_equals_d(g, b):
            verdict = Verdict(False, witness=g.label_set(b), reason="open set of isotropy outside the units")
            break
    else:
        verdict = Verdict(True, reason="no basic open set of non-unit isotropy")
    log_verdict("topologically_free", g.name, verdict.holds)
    return verdict


def is_effective(g: FiniteGroupoid) -> Verdict:
    for b in g.basis:
        if b and _r_equals_d(g, b) and not b <= g.units:
            verdict = Verdict(False, witness=g.label_set(b), reason="basic open isotropy set leaves the units")
            break
    else:
        verdict = Verdict(True, reason="interior of the isotropy is the unit space")
    log_verdict("effective", g.name, verdict.holds)
    return verdict


def is_principal(g: FiniteGroupoid) -> Verdict:
    for a in g.arrows:
        if a not in g.units and g.r(a) == g.d(a):
            return Verdict(False, witness=[g.label(a)], reason="non-trivial isotropy")
    return Verdict(True, reason="trivial isotropy everywhere")


def is_topologically_principal(g: FiniteGroupoid) -> Verdict:
    nontrivial = frozenset(g.d(a) for a in g.arrows if a not in g.units and g.r(a) == g.d(a))
    for b in g.basis:
        if b and b <= nontrivial:
            return Verdict(False, witness=g.label_set(b),
                           certificate={"units_with_isotropy": g.label_set(nontrivial)},
                           reason="open set of units with non-trivial isotropy")
    return Verdict(True, certificate={"units_with_isotropy": g.label_set(nontrivial)},
                   reason="units with isotropy have empty interior")


def is_minimal(g: FiniteGroupoid) -> Verdict:
    """Smallest invariant open set around every basic open set of units must be everything."""
    units = frozenset(g.units)
    for x in g.unit_list:
        current = g.neighbourhoods[x]
        while True:
            grown = _saturate(g, current) | current
            grown = frozenset(y for z in grown for y in g.neighbourhoods[z])
            if grown == current:
                break
            current = grown
        if current != units:
            verdict = Verdict(False, witness=g.label_set(current),
                              certificate={"orbits": [g.label_set(o) for o in orbits(g)]},
                              reason="proper invariant open set")
            break
    else:
        verdict = Verdict(True, certificate={"orbits": [g.label_set(o) for o in orbits(g)]},
                          reason="no proper invariant open set")
    log_verdict("minimal", g.name, verdict.holds)
    return verdict


# --- Hausdorff points ---
def hausdorff_points(g: FiniteGroupoid) -> ArrowSet:
    hoods = g.neighbourhoods
    points = frozenset(
        a for a in g.arrows
        if all(not (hoods[a] & hoods[b]) for b in g.arrows if b != a)
    )
    problems = singular_groupoid_problems(g, points)
    if problems:
        log_warning(f"Hausdorff points of {g.name} do not form a full subgroupoid: {problems}")
    return points


def singular_groupoid_problems(g: FiniteGroupoid, points: ArrowSet) -> List[str]:
    """Closure of the Hausdorff points under products/inverses and r, d onto its units."""
    problems = []
    for a in points:
        if g.inv(a) not in points:
            problems.append(f"inverse of {g.label(a)}")
        if g.r(a) not in points or g.d(a) not in points:
            problems.append(f"ends of {g.label(a)}")
        for b in points:
            c = g.mul(a, b)
            if c is not None and c not in points:
                problems.append(f"product {g.label(a)}*{g.label(b)}")
    return problems


def is_hausdorff(g: FiniteGroupoid) -> Verdict:
    hoods = g.neighbourhoods
    for a, b in itertools.combinations(g.arrows, 2):
        if hoods[a] & hoods[b]:
            return Verdict(False, witness=[g.label(a), g.label(b)], reason="points without disjoint neighbourhoods")
    return Verdict(True, reason="all points are Hausdorff points")


# --- Pure infiniteness conditions ---
def _is_infinite(cardinality) -> bool:
    return cardinality == float("inf")


def _achievable_ranges(g: FiniteGroupoid, u: ArrowSet) -> List[ArrowSet]:
    """r(W U) over open bisections W generated by neighbourhoods of arrows out of U."""
    out: Set[ArrowSet] = set()
    candidates = [a for x in sorted(u) for a in g.by_domain.get(x, [])]
    examined = 0
    for size in range(1, len(u) + 1):
        for choice in itertools.combinations(candidates, size):
            examined += 1
            if examined > Config.MAX_BISECTION_SEARCH:
                raise BoundExceededError("bisection search exceeded its cap")
            w = frozenset(b for a in choice for b in g.neighbourhoods[a])
            if not _is_bisection(g, w):
                continue
            out.add(frozenset(g.r(a) for a in w if g.d(a) in u))
    return sorted(out, key=lambda s: (-len(s), sorted(s)))


def _cover_condition(g: FiniteGroupoid, n: int) -> Tuple[bool, Optional[List[str]]]:
    units = frozenset(g.units)
    for x in g.unit_list:
        u = g.neighbourhoods[x]
        ranges = _achievable_ranges(g, u)
        maximal = [s for s in ranges if not any(s < t for t in ranges)]
        if not any(frozenset().union(*combo) == units
                   for combo in itertools.combinations(maximal, min(n, len(maximal)))):
            return False, g.label_set(u)
    return True, None


def is_n_filling(g: FiniteGroupoid, n: int) -> Verdict:
    if n < 1:
        raise PreconditionError("n-filling needs a positive integer n")
    cardinality = len(g.units)
    cover, failing = _cover_condition(g, n)
    holds = _is_infinite(cardinality) and cover
    verdict = Verdict(
        holds,
        witness=failing,
        certificate={"unit_space_cardinality": cardinality, "cover_condition": cover, "n": n},
        reason=f"unit space finite (|X| = {cardinality})" if not _is_infinite(cardinality) else "",
    )
    log_verdict(f"{n}-filling", g.name, verdict.holds)
    return verdict


def _section_image(g: FiniteGroupoid, section: Sequence[Arrow]) -> ArrowSet:
    return frozenset(g.r(a) for a in section)


def _contracting_sections(g: FiniteGroupoid, v: ArrowSet, budget: List[int]):
    """Injective arrow sections over cl(V) with ranges in V; yields (section, image)."""
    cl = sorted(closure(g, v) & g.units)
    choices = [[a for a in g.by_domain.get(x, []) if g.r(a) in v] for x in cl]

    def extend(i, chosen, used):
        if i == len(cl):
            budget[0] += 1
            if budget[0] > Config.MAX_BISECTION_SEARCH:
                raise BoundExceededError("local contraction search exceeded its cap")
            yield list(chosen), _section_image(g, chosen)
            return
        for a in choices[i]:
            if g.r(a) in used:
                continue
            chosen.append(a)
            used.add(g.r(a))
            yield from extend(i + 1, chosen, used)
            chosen.pop()
            used.discard(g.r(a))

    yield from extend(0, [], set())


def is_locally_contracting(g: FiniteGroupoid) -> Verdict:
    budget = [0]
    certificate = []
    units = frozenset(g.units)
    basic_unit_sets = sorted({b for b in g.basis if b and b <= units}, key=lambda b: (len(b), sorted(b)))
    for u in basic_unit_sets:
        found = None
        entry = {"U": g.label_set(u), "V_examined": 0, "sections": 0, "max_image_size": None}
        for v in open_subsets(g, u):
            entry["V_examined"] += 1
            cl_size = len(closure(g, v) & units)
            for section, image in _contracting_sections(g, v, budget):
                entry["sections"] += 1
                w = frozenset(b for a in section for b in g.neighbourhoods[a])
                if image < v and _is_bisection(g, w):
                    found = (v, section)
                    break
                entry["max_image_size"] = max(entry["max_image_size"] or 0, len(image))
            entry.setdefault("closure_sizes", []).append(cl_size)
            if found:
                break
        certificate.append(entry)
        if found is None:
            verdict = Verdict(False, witness=g.label_set(u), certificate={"searched": certificate},
                              reason="injective sections never shrink cl(V) strictly into V")
            log_verdict("locally_contracting", g.name, False)
            return verdict
    log_verdict("locally_contracting", g.name, True)
    return Verdict(True, certificate={"searched": certificate}, reason="every basic open set contracts")


# --- Subgroupoids ---
def generated_subgroupoid(g: FiniteGroupoid, seed: Iterable[Arrow]) -> FiniteGroupoid:
    members = set(g.units) | set(seed)
    members |= {g.inv(a) for a in members}
    changed = True
    while changed:
        changed = False
        for a in list(members):
            for b in g.by_range.get(g.d(a), []):
                if b in members:
                    c = g.mul(a, b)
                    if c is not None and c not in members:
                        members.add(c)
                        members.add(g.inv(c))
                        changed = True
    log_debug(f"generated subgroupoid of {g.name}: {len(members)} of {len(g)} arrows")
    return _subgroupoid(g, frozenset(members), f"{g.name}[generated]")


def restrict(g: FiniteGroupoid, units: Iterable[Arrow]) -> FiniteGroupoid:
    """Reduction G|_U to an invariant set of units, with the subspace topology."""
    units = frozenset(units)
    if not units <= g.units:
        raise PreconditionError(f"{g.name}: restriction needs a set of units")
    if not is_invariant(g, units):
        raise PreconditionError(f"{g.name}: {g.label_set(units)} is not invariant")
    keep = frozenset(a for a in g.arrows if g.d(a) in units)
    return _subgroupoid(g, keep, f"{g.name}|{','.join(g.label_set(units))}")


def _subgroupoid(g: FiniteGroupoid, keep: ArrowSet, name: str) -> FiniteGroupoid:
    basis = None
    if g.topology is not None:
        basis = sorted({frozenset(b & keep) for b in g.basis if b & keep}, key=sorted)
        basis = [[g.label(a) for a in b] for b in basis]
    L = g.label
    return from_labels(
        [L(a) for a in keep],
        [L(x) for x in g.units if x in keep],
        {L(a): L(g.r(a)) for a in keep},
        {L(a): L(g.d(a)) for a in keep},
        [(L(a), L(b), L(c)) for (a, b), c in g.compose_table.items() if a in keep and b in keep],
        {L(a): L(g.inv(a)) for a in keep},
        basis=basis,
        name=name,
    )
