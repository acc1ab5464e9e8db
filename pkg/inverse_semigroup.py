"""
Finite inverse semigroups with zero: the idempotent semilattice, covers,
filters (ultra and tight), the canonical action on tight filters, the tight
groupoid of germs, and the closed / topologically free / minimal / locally
contracting checkers.

Finite filters are principal, so a filter is stored with its minimum m and
germs [t, up(m)] are keyed by the element t*m.
"""
import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from config import Config
from error_handling import BoundExceededError, FixtureError, PreconditionError, handle_validation_error
from groupalg_utils import ValidationReport, Verdict, load_validated
from groupoid_core import (
    FiniteGroupoid,
    from_labels,
    is_hausdorff,
    is_locally_contracting,
    is_minimal,
    is_topologically_free,
    validate,
)
from src.utils.json_validator import SEMIGROUP_SCHEMA
from utils.logging_utils import log_debug, log_verdict, log_warning

Elem = int


@dataclass(frozen=True, eq=False)
class FiniteInverseSemigroup:
    labels: Tuple[str, ...]
    table: Tuple[Tuple[Elem, ...], ...]
    zero: Elem
    name: str = "semigroup"

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def elements(self) -> range:
        return range(len(self.labels))

    def label(self, s: Elem) -> str:
        return self.labels[s]

    def index(self, label: str) -> Elem:
        try:
            return self.labels.index(label)
        except ValueError:
            raise PreconditionError(f"unknown element {label!r} in {self.name}") from None

    def mul(self, s: Elem, t: Elem) -> Elem:
        return self.table[s][t]

    def mul_all(self, *items: Elem) -> Elem:
        out = items[0]
        for t in items[1:]:
            out = self.table[out][t]
        return out

    def _inverses_of(self, s: Elem) -> List[Elem]:
        m = self.mul
        return [t for t in self.elements if m(m(s, t), s) == s and m(m(t, s), t) == t]

    @cached_property
    def star_map(self) -> Tuple[Optional[Elem], ...]:
        out = []
        for s in self.elements:
            found = self._inverses_of(s)
            out.append(found[0] if found else None)
        return tuple(out)

    def star(self, s: Elem) -> Elem:
        t = self.star_map[s]
        if t is None:
            raise PreconditionError(f"{self.label(s)} has no generalized inverse in {self.name}")
        return t

    @cached_property
    def idempotents(self) -> List[Elem]:
        return [e for e in self.elements if self.mul(e, e) == e]

    @cached_property
    def nonzero_idempotents(self) -> List[Elem]:
        return [e for e in self.idempotents if e != self.zero]

    def leq(self, s: Elem, t: Elem) -> bool:
        """Natural order: s <= t iff s = t s*s (for idempotents, e = e f)."""
        return s == self.mul(t, self.mul(self.star(s), s))

    def below(self, e: Elem) -> List[Elem]:
        """Idempotents f <= e, i.e. the set eE."""
        return [f for f in self.idempotents if self.mul(e, f) == f]


# --- Construction ---
def from_table(elements: Sequence[str], zero: str, table: Sequence[Sequence[str]],
               name: str = "semigroup") -> FiniteInverseSemigroup:
    labels = tuple(elements)
    if len(set(labels)) != len(labels):
        raise FixtureError(f"{name}: duplicate element labels")
    idx = {x: i for i, x in enumerate(labels)}
    if zero not in idx:
        raise FixtureError(f"{name}: zero {zero!r} is not an element")
    if len(table) != len(labels) or any(len(row) != len(labels) for row in table):
        raise FixtureError(f"{name}: table must be {len(labels)} x {len(labels)}")
    try:
        rows = tuple(tuple(idx[x] for x in row) for row in table)
    except KeyError as e:
        raise FixtureError(f"{name}: unknown label {e.args[0]!r} in table") from None
    return FiniteInverseSemigroup(labels, rows, idx[zero], name=name)


def load_semigroup(path: str) -> FiniteInverseSemigroup:
    data = load_validated(path, SEMIGROUP_SCHEMA)
    return from_table(data["elements"], data["zero"], data["table"], name=data.get("name", path))


def _partial_map_label(pairs: Tuple[Tuple[int, int], ...]) -> str:
    return "{" + ",".join(f"{x}>{y}" for x, y in pairs) + "}"


def symmetric_inverse_monoid(n: int, name: Optional[str] = None) -> FiniteInverseSemigroup:
    """All partial bijections of {0..n-1}; st means apply t first. The empty map is the zero."""
    maps = []
    points = range(n)
    for k in range(n + 1):
        for dom in itertools.combinations(points, k):
            for img in itertools.permutations(points, k):
                maps.append(tuple(zip(dom, img)))
    maps.sort(key=lambda m: (len(m), m))
    pos = {m: i for i, m in enumerate(maps)}

    def compose(s, t):
        sd = dict(s)
        return tuple(sorted((x, sd[y]) for x, y in t if y in sd))

    table = tuple(tuple(pos[compose(s, t)] for t in maps) for s in maps)
    return FiniteInverseSemigroup(tuple(_partial_map_label(m) for m in maps), table, pos[()], name=name or f"I{n}")


def semilattice(elements: Sequence[str], zero: str, meet: Dict[Tuple[str, str], str],
                name: str = "semilattice") -> FiniteInverseSemigroup:
    """Commutative idempotent semigroup from a meet table (missing pairs fall back to x*x = x)."""
    def m(x, y):
        if x == y:
            return x
        return meet.get((x, y), meet.get((y, x), zero))

    return from_table(elements, zero, [[m(x, y) for y in elements] for x in elements], name=name)


def group_with_zero(elements: Sequence[str], table: Dict[Tuple[str, str], str],
                    name: str = "group0") -> FiniteInverseSemigroup:
    labels = list(elements) + ["zero"]
    rows = [[table[(x, y)] for y in elements] + ["zero"] for x in elements] + [["zero"] * len(labels)]
    return from_table(labels, "zero", rows, name=name)


def generated_subsemigroup(s: FiniteInverseSemigroup, gens: Iterable[Elem],
                           name: Optional[str] = None) -> FiniteInverseSemigroup:
    gens = list(gens)
    members = {s.zero}
    for g in gens:
        members.add(g)
        members.add(s.star(g))
    frontier = list(members)
    while frontier:
        new = []
        for a in frontier:
            for b in list(members):
                for c in (s.mul(a, b), s.mul(b, a)):
                    if c not in members:
                        members.add(c)
                        new.append(c)
        frontier = new
    keep = sorted(members)
    pos = {x: i for i, x in enumerate(keep)}
    table = tuple(tuple(pos[s.mul(a, b)] for b in keep) for a in keep)
    return FiniteInverseSemigroup(tuple(s.label(x) for x in keep), table, pos[s.zero],
                                  name=name or f"{s.name}<{','.join(s.label(g) for g in gens)}>")


# --- Enumeration of small inverse semigroups with zero ---
def _relabel_key(table: Sequence[Sequence[int]], perm: Sequence[int]) -> Tuple[int, ...]:
    n = len(table)
    key = [0] * (n * n)
    for a in range(n):
        for b in range(n):
            key[perm[a] * n + perm[b]] = perm[table[a][b]]
    return tuple(key)


def _canonical_key(table: Sequence[Sequence[int]], k: int) -> Tuple[int, ...]:
    """Least relabelling that keeps 0 fixed and idempotents 1..k-1 ahead of the rest."""
    n = len(table)
    return min(
        _relabel_key(table, (0,) + pe + px)
        for pe in itertools.permutations(range(1, k))
        for px in itertools.permutations(range(k, n))
    )


@lru_cache(maxsize=None)
def _semilattice_tables(k: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """Meet tables on {0..k-1} with 0 the bottom, one per isomorphism class."""
    if k == 1:
        return [((0,),)]
    pairs = list(itertools.combinations(range(1, k), 2))
    out, seen = [], set()
    for mask in range(1 << len(pairs)):
        below = {(a, a) for a in range(k)} | {(0, a) for a in range(k)}
        below |= {p for i, p in enumerate(pairs) if mask >> i & 1}
        if any((a, c) not in below for a, b in below for b2, c in below if b == b2):
            continue
        rows = []
        for a in range(k):
            row = []
            for b in range(k):
                lower = [c for c in range(k) if (c, a) in below and (c, b) in below]
                top = [c for c in lower if all((d, c) in below for d in lower)]
                if len(top) != 1:
                    break
                row.append(top[0])
            if len(row) != k:
                break
            rows.append(tuple(row))
        if len(rows) != k:
            continue
        key = _canonical_key(rows, k)
        if key not in seen:
            seen.add(key)
            out.append(tuple(rows))
    return out


def _involutions(items: Sequence[int]):
    if not items:
        yield {}
        return
    x, rest = items[0], list(items[1:])
    for sub in _involutions(rest):
        yield {x: x, **sub}
    for i, y in enumerate(rest):
        for sub in _involutions(rest[:i] + rest[i + 1:]):
            yield {x: y, y: x, **sub}


def _end_assignments(star: Dict[int, int], k: int):
    """(xx*, x*x) for every non-idempotent x, consistent with the involution."""
    orbits = sorted({min(x, y) for x, y in star.items()})
    choices = [
        [(e, e) for e in range(1, k)] if star[x] == x
        else list(itertools.product(range(1, k), repeat=2))
        for x in orbits
    ]
    for picked in itertools.product(*choices):
        left, right = {}, {}
        for x, (e, f) in zip(orbits, picked):
            left[x], right[x] = e, f
            left[star[x]], right[star[x]] = f, e
        yield left, right


def _assoc_ok(t: List[List[Optional[int]]], s: int, u: int) -> bool:
    """Every fully defined triple that looks up the cell (s, u) associates."""
    n, v = len(t), t[s][u]
    for x in range(n):
        a, b = t[v][x], t[u][x]
        if a is not None and b is not None and t[s][b] is not None and t[s][b] != a:
            return False
        a, b = t[x][s], t[x][v]
        if a is not None and b is not None and t[a][u] is not None and t[a][u] != b:
            return False
    for a in range(n):
        for b in range(n):
            if t[a][b] == s:
                bu = t[b][u]
                if bu is not None and t[a][bu] is not None and t[a][bu] != v:
                    return False
            if t[a][b] == u:
                sa = t[s][a]
                if sa is not None and t[sa][b] is not None and t[sa][b] != v:
                    return False
    return True


def _inverse_tables(n: int, k: int, meet, star: Dict[int, int], left: Dict[int, int], right: Dict[int, int]):
    """
    Tables on 0..n-1 with zero 0, idempotents 0..k-1 multiplying by `meet`, and
    x x* = left[x], x* x = right[x] for the rest. st is zero exactly when
    s*s tt* is, and st st* <= ss*, (st)* st <= t*t, (st)* = t* s*.
    """
    inv = {**{g: g for g in range(k)}, **star}
    r = {**{g: g for g in range(k)}, **left}
    d = {**{g: g for g in range(k)}, **right}
    t: List[List[Optional[int]]] = [[None] * n for _ in range(n)]

    def leq(e, f):
        return meet[e][f] == e

    def put(s, u, v, changed):
        if t[s][u] is None:
            t[s][u] = v
            changed.append((s, u))
            return True
        return t[s][u] == v

    fixed = []
    ok = True
    for s in range(n):
        for u in range(n):
            if meet[d[s]][r[u]] == 0:
                ok &= put(s, u, 0, fixed)
    for g in range(1, k):
        for h in range(1, k):
            ok &= put(g, h, meet[g][h], fixed)
        for x in range(k, n):
            if leq(r[x], g):
                ok &= put(g, x, x, fixed)
            if leq(d[x], g):
                ok &= put(x, g, x, fixed)
    for x in range(k, n):
        ok &= put(x, inv[x], r[x], fixed)
        ok &= put(inv[x], x, d[x], fixed)
    if not ok or not all(_assoc_ok(t, s, u) for s, u in fixed):
        return

    cells = [(s, u) for s in range(1, n) for u in range(1, n) if t[s][u] is None]
    candidates = {
        (s, u): [v for v in range(1, n)
                 if leq(r[v], r[s]) and leq(d[v], d[u]) and not (s == u == v and s >= k)]
        for s, u in cells
    }

    def search(i):
        while i < len(cells) and t[cells[i][0]][cells[i][1]] is not None:
            i += 1
        if i == len(cells):
            yield tuple(tuple(row) for row in t)
            return
        s, u = cells[i]
        for v in candidates[(s, u)]:
            changed = []
            if (put(s, u, v, changed) and put(inv[u], inv[s], inv[v], changed)
                    and all(_assoc_ok(t, a, b) for a, b in changed)):
                yield from search(i + 1)
            for a, b in changed:
                t[a][b] = None

    yield from search(0)


def small_inverse_semigroups(max_size: int = 6) -> List[FiniteInverseSemigroup]:
    """
    Every inverse semigroup with zero of at most max_size elements, one per
    isomorphism class, ordered by size then idempotent count.
    """
    out = [FiniteInverseSemigroup(("0",), ((0,),), 0, name="S1.1")]
    for n in range(2, max_size + 1):
        found = 0
        for k in range(2, n + 1):
            seen = set()
            labels = ("0",) + tuple(f"e{i}" for i in range(1, k)) + tuple(f"s{i}" for i in range(1, n - k + 1))
            for meet in _semilattice_tables(k):
                for star in _involutions(list(range(k, n))):
                    for left, right in _end_assignments(star, k):
                        for table in _inverse_tables(n, k, meet, star, left, right):
                            key = _canonical_key(table, k)
                            if key in seen:
                                continue
                            s = FiniteInverseSemigroup(labels, table, 0, name=f"S{n}.{found + 1}")
                            if validate_semigroup(s).ok and len(s.idempotents) == k:
                                seen.add(key)
                                found += 1
                                out.append(s)
        log_debug(f"{found} inverse semigroups with zero of size {n}")
    return out


# --- Validation ---
def validate_semigroup(s: FiniteInverseSemigroup) -> ValidationReport:
    report = ValidationReport(subject=s.name)
    L, m = s.label, s.mul
    for a, b, c in itertools.product(s.elements, repeat=3):
        if m(m(a, b), c) != m(a, m(b, c)):
            report.add("associativity", "(ab)c != a(bc)", [L(a), L(b), L(c)])
    for a in s.elements:
        if m(a, s.zero) != s.zero or m(s.zero, a) != s.zero:
            report.add("zero", "zero does not annihilate", [L(a)])
        inverses = s._inverses_of(a)
        if not inverses:
            report.add("inverse_missing", "no t with sts = s and tst = t", [L(a)])
        elif len(inverses) > 1:
            report.add("inverse_not_unique", "generalized inverse is not unique", [L(a)] + [L(t) for t in inverses])
    for e, f in itertools.combinations(s.idempotents, 2):
        if m(e, f) != m(f, e):
            report.add("idempotents_commute", "ef != fe", [L(e), L(f)])
    return report


def _require_valid(s: FiniteInverseSemigroup) -> None:
    handle_validation_error(validate_semigroup(s), s.name)


# --- Covers and filters ---
def is_cover(s: FiniteInverseSemigroup, family: Iterable[Elem], e: Elem, relaxed: bool = False) -> bool:
    """Every non-zero z <= e meets some member of the family.

    relaxed=False also requires family to lie in eE.
    """
    family = list(family)
    below_e = s.below(e)
    if not relaxed and any(f not in below_e for f in family):
        raise PreconditionError("a cover of e must consist of idempotents below e")
    return all(any(s.mul(z, f) != s.zero for f in family) for z in below_e if z != s.zero)


@dataclass(frozen=True)
class Filter:
    elements: FrozenSet[Elem]
    minimum: Elem


def _up(s: FiniteInverseSemigroup, m: Elem) -> Filter:
    return Filter(frozenset(f for f in s.idempotents if s.mul(m, f) == m), m)


def filters(s: FiniteInverseSemigroup) -> List[Filter]:
    """All filters of E; in a finite semilattice each is the up-set of its minimum."""
    if len(s.idempotents) > Config.MAX_IDEMPOTENTS:
        raise BoundExceededError(f"{s.name}: {len(s.idempotents)} idempotents exceed the filter cap "
                                 f"{Config.MAX_IDEMPOTENTS}")
    return [_up(s, m) for m in s.nonzero_idempotents]


def filter_label(s: FiniteInverseSemigroup, phi: Filter) -> str:
    return f"up({s.label(phi.minimum)})"


def ultrafilters(s: FiniteInverseSemigroup) -> List[Filter]:
    every = filters(s)
    return [phi for phi in every if not any(phi.elements < psi.elements for psi in every)]


def _is_tight(s: FiniteInverseSemigroup, phi: Filter) -> bool:
    """Tight iff no e in phi is covered by eE minus phi (covers are closed under supersets)."""
    for e in phi.elements:
        outside = [f for f in s.below(e) if f not in phi.elements and f != s.zero]
        if is_cover(s, outside, e):
            return False
    return True


def tight_filters(s: FiniteInverseSemigroup) -> List[Filter]:
    tight = [phi for phi in filters(s) if _is_tight(s, phi)]
    ultra = {phi.elements for phi in ultrafilters(s)}
    tight_sets = {phi.elements for phi in tight}
    if not ultra <= tight_sets:
        log_warning(f"{s.name}: an ultrafilter failed the tightness test")
    if tight_sets != ultra:
        log_warning(f"{s.name}: tight filters differ from ultrafilters on a finite semilattice")
    return tight


# --- Canonical action ---
@dataclass
class PartialBijectionFamily:
    """h_t : Z_{t*t} -> Z_{tt*} on tight filters, as index maps."""

    semigroup: FiniteInverseSemigroup
    spectrum: List[Filter]
    maps: Dict[Elem, Dict[int, int]]

    def verify(self) -> ValidationReport:
        s = self.semigroup
        report = ValidationReport(subject=f"canonical action of {s.name}")
        for t, h in self.maps.items():
            if len(set(h.values())) != len(h):
                report.add("not_injective", "h_t is not injective", [s.label(t)])
            back = self.maps[s.star(t)]
            if any(back.get(j) != i for i, j in h.items()):
                report.add("inverse", "h_{t*} does not invert h_t", [s.label(t)])
        for a, b in itertools.product(self.maps, repeat=2):
            ab = self.maps[s.mul(a, b)]
            for i, j in self.maps[b].items():
                k = self.maps[a].get(j)
                if k is not None and ab.get(i) != k:
                    report.add("composition", "h_a h_b is not contained in h_ab", [s.label(a), s.label(b)])
                    break
        return report


def _act(s: FiniteInverseSemigroup, t: Elem, phi: Filter) -> Filter:
    """h_t(phi) = {e : t* e t in phi} = up(t m t*)."""
    m = phi.minimum
    return _up(s, s.mul_all(t, m, s.star(t)))


def canonical_action(s: FiniteInverseSemigroup) -> PartialBijectionFamily:
    _require_valid(s)
    spectrum = tight_filters(s)
    pos = {phi.elements: i for i, phi in enumerate(spectrum)}
    maps: Dict[Elem, Dict[int, int]] = {}
    for t in s.elements:
        tt = s.mul(s.star(t), t)
        maps[t] = {i: pos[_act(s, t, phi).elements] for i, phi in enumerate(spectrum) if tt in phi.elements}
    family = PartialBijectionFamily(s, spectrum, maps)
    report = family.verify()
    if not report.ok:
        log_warning(f"canonical action of {s.name} fails: {report.codes()}")
    return family


# --- Tight groupoid ---
def _germ_label(s: FiniteInverseSemigroup, a: Elem, phi: Filter) -> str:
    return f"[{s.label(a)}|{s.label(phi.minimum)}]"


def tight_groupoid(s: FiniteInverseSemigroup) -> FiniteGroupoid:
    """Groupoid of germs of the canonical action; germ [t, phi] is keyed by t m with m = min phi."""
    _require_valid(s)
    spectrum = tight_filters(s)
    germs: Dict[Tuple[Elem, Elem], Tuple[Elem, Filter]] = {}
    basis_sets: Dict[Tuple[Elem, Elem], List[str]] = {}
    for t in s.elements:
        tt = s.mul(s.star(t), t)
        for phi in spectrum:
            if tt not in phi.elements:
                continue
            a = s.mul(t, phi.minimum)
            germs[(a, phi.minimum)] = (a, phi)
            for e in phi.elements:
                if s.mul(e, tt) == e:
                    basis_sets.setdefault((t, e), []).append(_germ_label(s, a, phi))
    labels, units, r, d, inverse = [], [], {}, {}, {}
    by_min = {phi.minimum: phi for phi in spectrum}
    for a, phi in germs.values():
        la = _germ_label(s, a, phi)
        labels.append(la)
        target = by_min[s.mul(a, s.star(a))]
        r[la] = _germ_label(s, target.minimum, target)
        d[la] = _germ_label(s, phi.minimum, phi)
        inverse[la] = _germ_label(s, s.star(a), target)
        if s.mul(a, a) == a:
            units.append(la)
    compose = []
    for b, psi in germs.values():
        for a, phi in germs.values():
            if s.mul(a, s.star(a)) == psi.minimum:
                compose.append((_germ_label(s, b, psi), _germ_label(s, a, phi), _germ_label(s, s.mul(b, a), phi)))
    basis = sorted({tuple(sorted(set(v))) for v in basis_sets.values()})
    g = from_labels(labels, units, r, d, compose, inverse, basis=[list(b) for b in basis],
                    name=f"tight({s.name})")
    report = validate(g)
    if not report.ok:
        log_warning(f"tight groupoid of {s.name} failed validation: {report.codes()}")
    log_debug(f"tight groupoid of {s.name}: {len(g)} germs over {len(spectrum)} tight filters")
    return g


# --- Property checkers ---
def trivially_fixed(s: FiniteInverseSemigroup, t: Elem) -> List[Elem]:
    """F_t = {e in E : e <= t}, i.e. e = t e."""
    return [e for e in s.idempotents if s.mul(t, e) == e]


def is_fixed(s: FiniteInverseSemigroup, t: Elem, e: Elem) -> bool:
    """f t* f != 0 for every non-zero idempotent f <= e."""
    ts = s.star(t)
    return all(s.mul_all(f, ts, f) != s.zero for f in s.below(e) if f != s.zero)


def fixed_by_filters(s: FiniteInverseSemigroup, t: Elem, e: Elem) -> bool:
    """Z_e inside the fixed points of h_t, computed on the tight spectrum."""
    tt = s.mul(s.star(t), t)
    for phi in tight_filters(s):
        if e in phi.elements:
            if tt not in phi.elements or _act(s, t, phi).elements != phi.elements:
                return False
    return True


def is_closed(s: FiniteInverseSemigroup) -> Verdict:
    _require_valid(s)
    for t in s.elements:
        ft = [e for e in trivially_fixed(s, t) if e != s.zero]
        for e in trivially_fixed(s, t):
            if not is_cover(s, ft, e, relaxed=True):
                log_verdict("closed", s.name, False)
                return Verdict(False, witness={"t": s.label(t), "e": s.label(e)},
                               reason="F_t does not cover one of its members")
    log_verdict("closed", s.name, True)
    return Verdict(True, reason="F_t covers every member of F_t for each t")


def is_topologically_free_s(s: FiniteInverseSemigroup) -> Verdict:
    _require_valid(s)
    for t in s.elements:
        ft = trivially_fixed(s, t)
        for e in s.nonzero_idempotents:
            if is_fixed(s, t, e) and not any(s.mul(f, e) != s.zero for f in ft):
                log_verdict("topologically_free_s", s.name, False)
                return Verdict(False, witness={"t": s.label(t), "e": s.label(e)},
                               reason="e is fixed by t but disjoint from F_t")
    log_verdict("topologically_free_s", s.name, True)
    return Verdict(True, reason="every fixed idempotent meets F_t")


def is_minimal_s(s: FiniteInverseSemigroup) -> Verdict:
    _require_valid(s)
    for e, f in itertools.product(s.nonzero_idempotents, repeat=2):
        conjugates = {s.mul_all(t, f, s.star(t)) for t in s.elements}
        if not is_cover(s, conjugates, e, relaxed=True):
            log_verdict("minimal_s", s.name, False)
            return Verdict(False, witness={"e": s.label(e), "f": s.label(f)},
                           reason="no conjugates of f cover e")
    log_verdict("minimal_s", s.name, True)
    return Verdict(True, reason="conjugates of every f cover every e")


def _contracting_family(s: FiniteInverseSemigroup, e: Elem, budget: List[int]) -> Optional[dict]:
    for t in s.elements:
        ts = s.star(t)
        bound = s.mul(e, s.mul(ts, t))
        candidates = [f for f in s.below(bound) if f != s.zero]
        for k in range(1, len(candidates) + 1):
            for family in itertools.combinations(candidates, k):
                budget[0] += 1
                if budget[0] > Config.MAX_SEMIGROUP_SUBSETS:
                    raise BoundExceededError(f"{s.name}: local contraction search exceeded its cap")
                if not all(is_cover(s, family, s.mul_all(t, f, ts), relaxed=True) for f in family):
                    continue
                for f0 in family:
                    # f0 s f = 0 iff f0 (s f s*) = 0
                    if all(s.mul(f0, s.mul_all(t, f, ts)) == s.zero for f in family):
                        return {"s": s.label(t), "F": [s.label(f) for f in family], "f0": s.label(f0)}
    return None


def is_locally_contracting_s(s: FiniteInverseSemigroup) -> Verdict:
    _require_valid(s)
    budget = [0]
    found = {}
    for e in s.nonzero_idempotents:
        family = _contracting_family(s, e, budget)
        if family is None:
            log_verdict("locally_contracting_s", s.name, False)
            return Verdict(False, witness={"e": s.label(e)}, certificate={"families_examined": budget[0]},
                           reason="no s and F contract e")
        found[s.label(e)] = family
    log_verdict("locally_contracting_s", s.name, True)
    return Verdict(True, witness=found, certificate={"families_examined": budget[0]},
                   reason="every non-zero idempotent is contracted")


def tight_groupoid_crosscheck(s: FiniteInverseSemigroup) -> Dict[str, object]:
    """The semigroup conditions next to the matching properties of the tight groupoid."""
    g = tight_groupoid(s)
    out: Dict[str, object] = {
        "tight_equals_ultra": {f.minimum for f in tight_filters(s)} == {f.minimum for f in ultrafilters(s)},
        "closed": bool(is_closed(s)),
        "hausdorff": bool(is_hausdorff(g)),
        "topologically_free_s": bool(is_topologically_free_s(s)),
        "topologically_free": bool(is_topologically_free(g)),
        "minimal_s": bool(is_minimal_s(s)),
        "minimal": bool(is_minimal(g)),
        "locally_contracting_s": bool(is_locally_contracting_s(s)),
        "locally_contracting": bool(is_locally_contracting(g)),
    }
    out["closed_agrees"] = out["closed"] == out["hausdorff"]
    out["topologically_free_agrees"] = out["topologically_free_s"] == out["topologically_free"]
    out["minimal_agrees"] = out["minimal_s"] == out["minimal"]
    out["locally_contracting_agrees"] = not out["locally_contracting_s"] or out["locally_contracting"]
    log_verdict("tight_crosscheck", s.name, all(v for k, v in out.items() if k.endswith("agrees")))
    return out
