"""
Twisted partial actions of finite groups on finite sets, their transformation
groupoids and induced 2-cocycles, and the freeness / minimality / filling /
local boundary checkers.
"""
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from algebra_analysis import complexify, detects_ideals, diagonal, from_groupoid
from config import Config
from error_handling import CocycleValueError, FixtureError, PreconditionError, handle_validation_error
from groupalg_utils import ValidationReport, Verdict, parse_scalar, load_validated, scalar_close
from groupoid_core import FiniteGroupoid, UnionFind, from_labels
from src.utils.json_validator import PACTION_SCHEMA
from twisted_convolution import TwoCocycle, make_cocycle, validate_cocycle
from utils.logging_utils import log_debug, log_verdict, log_warning

ONE = Fraction(1)


@dataclass(frozen=True, eq=False)
class PartialAction:
    """theta[t] maps X_{t^-1} onto X_t; group elements and points are dense ids."""

    group_labels: Tuple[str, ...]
    table: Tuple[Tuple[int, ...], ...]
    identity: int
    space_labels: Tuple[str, ...]
    theta: Tuple[Dict[int, int], ...]
    name: str = "paction"

    @property
    def group(self) -> range:
        return range(len(self.group_labels))

    @property
    def space(self) -> range:
        return range(len(self.space_labels))

    def mul(self, s: int, t: int) -> int:
        return self.table[s][t]

    @cached_property
    def inverse(self) -> Tuple[int, ...]:
        out = []
        for t in self.group:
            found = [s for s in self.group if self.mul(t, s) == self.identity]
            if not found:
                raise PreconditionError(f"{self.name}: {self.group_labels[t]} has no inverse")
            out.append(found[0])
        return tuple(out)

    def domain(self, t: int) -> FrozenSet[int]:
        """X_{t^-1}."""
        return frozenset(self.theta[t])

    def image(self, t: int) -> FrozenSet[int]:
        """X_t."""
        return frozenset(self.theta[t].values())

    def g(self, t: int) -> str:
        return self.group_labels[t]

    def x(self, p: int) -> str:
        return self.space_labels[p]


@dataclass(frozen=True, eq=False)
class ActionCocycle:
    """u(s, t) as a function on X_s ∩ X_st; entries absent from values are 1."""

    action: PartialAction
    values: Mapping[Tuple[int, int, int], object] = field(default_factory=dict)
    field_tag: str = "C"

    def __call__(self, s: int, t: int, p: int):
        return self.values.get((s, t, p), ONE)


# --- Construction ---
def partial_action(group_elements: Sequence[str], table: Mapping[Tuple[str, str], str], identity: str,
                   space: Sequence[str], theta: Mapping[str, Mapping[str, str]],
                   name: str = "paction") -> PartialAction:
    """Missing group elements in theta act by the empty map."""
    gl = tuple(group_elements)
    xl = tuple(space)
    gi = {g: i for i, g in enumerate(gl)}
    xi = {x: i for i, x in enumerate(xl)}
    if identity not in gi:
        raise FixtureError(f"{name}: identity {identity!r} is not a group element")
    try:
        rows = tuple(tuple(gi[table[(s, t)]] for t in gl) for s in gl)
        maps = tuple({xi[a]: xi[b] for a, b in theta.get(t, {}).items()} for t in gl)
    except KeyError as e:
        raise FixtureError(f"{name}: unknown label {e.args[0]!r}") from None
    unknown = set(theta) - set(gl)
    if unknown:
        raise FixtureError(f"{name}: theta names unknown group elements {sorted(unknown)}")
    return PartialAction(gl, rows, gi[identity], xl, maps, name=name)


def _table_from_rows(elements: Sequence[str], rows: Sequence[Sequence[str]]) -> Dict[Tuple[str, str], str]:
    if len(rows) != len(elements) or any(len(r) != len(elements) for r in rows):
        raise FixtureError("group table must be square over the listed elements")
    return {(s, t): rows[i][j] for i, s in enumerate(elements) for j, t in enumerate(elements)}


def load_action(path: str) -> Tuple[PartialAction, Optional[ActionCocycle]]:
    data = load_validated(path, PACTION_SCHEMA)
    group = data["group"]
    elements = group["elements"]
    identity = group.get("identity", elements[0])
    theta = partial_action(elements, _table_from_rows(elements, group["table"]), identity,
                           data["space"], data["theta"], name=data.get("name", path))
    if "u" not in data:
        return theta, None
    values = {}
    gi = {g: i for i, g in enumerate(theta.group_labels)}
    xi = {x: i for i, x in enumerate(theta.space_labels)}
    for entry in data["u"]:
        s, t, x = entry[:3]
        if s not in gi or t not in gi or x not in xi:
            raise FixtureError(f"{path}: unknown label in cocycle entry {entry}")
        values[(gi[s], gi[t], xi[x])] = parse_scalar(entry[3:])
    return theta, make_action_cocycle(theta, values)


def make_action_cocycle(theta: PartialAction, values: Mapping[Tuple[int, int, int], object],
                        field_tag: str = "C") -> ActionCocycle:
    for key, value in values.items():
        if abs(abs(complex(value)) - 1) > Config.FLOAT_TOL:
            s, t, p = key
            raise CocycleValueError(f"u({theta.g(s)}, {theta.g(t)})({theta.x(p)}) = {value} is not unimodular")
    clean = {k: v for k, v in values.items() if not scalar_close(v, ONE, Config.FLOAT_TOL)}
    return ActionCocycle(theta, clean, field_tag)


def restricted_global_action(elements: Sequence[str], table: Mapping[Tuple[str, str], str], identity: str,
                             act: Mapping[Tuple[str, str], str], keep: Iterable[str],
                             name: str = "restricted") -> PartialAction:
    """Restriction of a global action (act[(t, y)] = t.y) to the subset keep."""
    keep = list(keep)
    inside = set(keep)
    theta = {t: {y: act[(t, y)] for y in keep if act[(t, y)] in inside} for t in elements}
    return partial_action(elements, table, identity, keep, theta, name=name)


def random_partial_action(rng, max_order: int = 4, max_points: int = 5) -> PartialAction:
    """A cyclic group acting globally by a random permutation, restricted to a random subset."""
    m = int(rng.integers(1, max_order + 1))
    n = int(rng.integers(1, max_points + 1))
    divisors = [k for k in range(1, m + 1) if m % k == 0]
    perm, pending = {}, list(rng.permutation(n))
    while pending:
        k = min(int(rng.choice(divisors)), len(pending))
        while m % k:
            k -= 1
        cycle, pending = pending[:k], pending[k:]
        for i, y in enumerate(cycle):
            perm[int(y)] = int(cycle[(i + 1) % k])

    def power(y, k):
        for _ in range(k):
            y = perm[y]
        return y

    elements = [str(k) for k in range(m)]
    table = {(str(a), str(b)): str((a + b) % m) for a in range(m) for b in range(m)}
    points = [f"y{i}" for i in range(n)]
    act = {(str(k), f"y{i}"): f"y{power(i, k)}" for k in range(m) for i in range(n)}
    keep = [y for y in points if rng.random() < 0.7] or points[:1]
    return restricted_global_action(elements, table, "0", act, keep, name=f"random_Z{m}")


# --- Validation ---
def validate_action(theta: PartialAction) -> ValidationReport:
    report = ValidationReport(subject=theta.name)
    e, m, G = theta.identity, theta.mul, theta.group
    for s, t, r in itertools.product(G, repeat=3):
        if m(m(s, t), r) != m(s, m(t, r)):
            report.add("group_associativity", "group table is not associative", [theta.g(s), theta.g(t), theta.g(r)])
            break
    for t in G:
        if m(t, e) != t or m(e, t) != t:
            report.add("group_identity", "identity law fails", [theta.g(t)])
        if not any(m(t, s) == e and m(s, t) == e for s in G):
            report.add("group_inverse", "no two-sided inverse", [theta.g(t)])
    if not report.ok:
        return report
    if theta.theta[e] != {p: p for p in theta.space}:
        report.add("identity_map", "theta_1 is not the identity of X", [theta.g(e)])
    for t in G:
        h = theta.theta[t]
        if len(set(h.values())) != len(h):
            report.add("not_injective", "theta_t is not injective", [theta.g(t)])
        back = theta.theta[theta.inverse[t]]
        if any(back.get(q) != p for p, q in h.items()) or len(back) != len(h):
            report.add("inverse_map", "theta_{t^-1} is not the inverse of theta_t", [theta.g(t)])
    for s, t in itertools.product(G, repeat=2):
        ts = theta.theta[m(t, s)]
        for p, q in theta.theta[s].items():
            if q in theta.theta[t] and ts.get(p) != theta.theta[t][q]:
                report.add("extension", "theta_ts does not extend theta_t theta_s",
                           [theta.g(t), theta.g(s), theta.x(p)])
    return report


def validate_action_cocycle(theta: PartialAction, u: ActionCocycle) -> ValidationReport:
    report = ValidationReport(subject=f"cocycle on {theta.name}")
    e, m, tol = theta.identity, theta.mul, Config.FLOAT_TOL
    for (s, t, p), value in u.values.items():
        if abs(abs(complex(value)) - 1) > tol:
            raise CocycleValueError(f"u({theta.g(s)}, {theta.g(t)}) is not unimodular")
        if p not in theta.image(s) or p not in theta.image(m(s, t)):
            report.add("outside_domain", "u(s,t) is defined on X_s ∩ X_st only",
                       [theta.g(s), theta.g(t), theta.x(p)])
    for t in theta.group:
        for p in theta.space:
            if not scalar_close(u(e, t, p), ONE, tol) or not scalar_close(u(t, e, p), ONE, tol):
                report.add("normalization", "u(1,t) = u(t,1) = 1 fails", [theta.g(t), theta.x(p)])
                break
    for r, s, t in itertools.product(theta.group, repeat=3):
        # at x in X_{r^-1} ∩ X_s ∩ X_st with y = theta_r(x):
        # u(s,t)(x) u(r,st)(y) = u(r,s)(y) u(rs,t)(y)
        common = theta.domain(r) & theta.image(s) & theta.image(m(s, t))
        for p in common:
            y = theta.theta[r][p]
            lhs = u(s, t, p) * u(r, m(s, t), y)
            rhs = u(r, s, y) * u(m(r, s), t, y)
            if not scalar_close(lhs, rhs, tol):
                report.add("cocycle_identity", "twisted cocycle identity fails",
                           [theta.g(r), theta.g(s), theta.g(t), theta.x(p)])
    return report


# --- Transformation groupoid ---
def _arrow_label(theta: PartialAction, t: int, p: int) -> str:
    return theta.x(p) if t == theta.identity else f"{theta.g(t)}.{theta.x(p)}"


def transformation_groupoid(theta: PartialAction, u: Optional[ActionCocycle] = None
                            ) -> Tuple[FiniteGroupoid, Optional[TwoCocycle]]:
    """Arrows (t, x) for x in X_{t^-1}: r = theta_t(x), d = x, (s, theta_t x)(t, x) = (st, x)."""
    handle_validation_error(validate_action(theta), theta.name)
    arrows = [(t, p) for t in theta.group for p in sorted(theta.theta[t])]
    lab = {a: _arrow_label(theta, *a) for a in arrows}
    r = {lab[(t, p)]: theta.x(theta.theta[t][p]) for t, p in arrows}
    d = {lab[(t, p)]: theta.x(p) for t, p in arrows}
    inverse = {lab[(t, p)]: lab[(theta.inverse[t], theta.theta[t][p])] for t, p in arrows}
    pairs = []
    for t, p in arrows:
        q = theta.theta[t][p]
        pairs.extend(((s, q), (t, p)) for s in theta.group if q in theta.theta[s])
    compose = [(lab[a], lab[b], lab[(theta.mul(a[0], b[0]), b[1])]) for a, b in pairs]
    g = from_labels(list(lab.values()), [theta.x(p) for p in theta.space], r, d, compose, inverse,
                    name=f"{theta.name}_groupoid")
    if u is None:
        return g, None
    # sigma((s, theta_t x), (t, x)) = u(s, t)(theta_st(x))
    values = {}
    for (s, _), (t, p) in pairs:
        value = u(s, t, theta.theta[theta.mul(s, t)][p])
        if value != ONE:
            values[(g.index(lab[(s, theta.theta[t][p])]), g.index(lab[(t, p)]))] = value
    sigma = make_cocycle(g, values, field=u.field_tag)
    report = validate_cocycle(sigma)
    if not report.ok:
        log_warning(f"induced cocycle on {g.name} failed validation: {report.codes()}")
    return g, sigma


# --- Checkers ---
def is_topologically_free_pa(theta: PartialAction) -> Verdict:
    for t in theta.group:
        if t == theta.identity:
            continue
        fixed = [p for p, q in theta.theta[t].items() if p == q]
        if fixed:
            log_verdict("topologically_free_pa", theta.name, False)
            return Verdict(False, witness={"t": theta.g(t), "x": theta.x(fixed[0])},
                           reason="a non-identity element fixes a point (open in the discrete topology)")
    log_verdict("topologically_free_pa", theta.name, True)
    return Verdict(True, reason="no non-identity element has fixed points")


def action_orbits(theta: PartialAction) -> List[FrozenSet[int]]:
    uf = UnionFind(theta.space)
    for h in theta.theta:
        for p, q in h.items():
            uf.union(p, q)
    return sorted(uf.classes(), key=lambda c: sorted(c))


def is_minimal_pa(theta: PartialAction) -> Verdict:
    orbit_list = action_orbits(theta)
    holds = len(orbit_list) <= 1
    witness = None if holds else sorted(theta.x(p) for p in orbit_list[-1])
    log_verdict("minimal_pa", theta.name, holds)
    return Verdict(holds, witness=witness,
                   certificate={"orbits": [sorted(theta.x(p) for p in o) for o in orbit_list]},
                   reason="single orbit" if holds else "proper invariant subset")


def _is_infinite(cardinality) -> bool:
    return cardinality == float("inf")


def is_n_filling_pa(theta: PartialAction, n: int) -> Verdict:
    """Full verdict needs an infinite space; the cover condition is evaluated on singletons."""
    if n < 1:
        raise PreconditionError("n-filling needs a positive integer n")
    space = frozenset(theta.space)
    failing = None
    for p in theta.space:
        reach = frozenset(h[p] for h in theta.theta if p in h)
        if reach != space or len(space) > n:
            failing = theta.x(p)
            break
    cover = failing is None
    cardinality = len(space)
    holds = _is_infinite(cardinality) and cover
    log_verdict(f"{n}-filling_pa", theta.name, holds)
    return Verdict(holds, witness=failing,
                   certificate={"space_cardinality": cardinality, "cover_condition": cover, "n": n},
                   reason="" if holds else f"X is finite (|X| = {cardinality})")


def is_local_boundary_pa(theta: PartialAction) -> Verdict:
    """Some V in every open U and some t with cl(V) in X_{t^-1} and theta_t(cl V) strictly inside V."""
    for p in theta.space:
        v = frozenset([p])
        if not any(v <= theta.domain(t) and frozenset(theta.theta[t][q] for q in v) < v for t in theta.group):
            log_verdict("local_boundary_pa", theta.name, False)
            return Verdict(False, witness={"U": [theta.x(p)]},
                           certificate={"space_cardinality": len(theta.space_labels)},
                           reason="theta_t is injective, so |theta_t(V)| = |V| on a finite discrete space")
    log_verdict("local_boundary_pa", theta.name, True)
    return Verdict(True, certificate={"space_cardinality": 0}, reason="empty space (vacuous)")


# --- Cyclic subgroups ---
def subgroups_cyclic(theta: PartialAction) -> List[FrozenSet[int]]:
    out = []
    for t in theta.group:
        members, x = {theta.identity}, t
        while x not in members:
            members.add(x)
            x = theta.mul(x, t)
        h = frozenset(members)
        if h not in out:
            out.append(h)
    return sorted(out, key=lambda h: (len(h), sorted(h)))


def restrict_to_subgroup(theta: PartialAction, u: Optional[ActionCocycle], h: Iterable[int]
                         ) -> Tuple[PartialAction, Optional[ActionCocycle]]:
    keep = sorted(h)
    pos = {t: i for i, t in enumerate(keep)}
    if any(theta.mul(s, t) not in pos for s in keep for t in keep):
        raise PreconditionError("not a subgroup")
    sub = PartialAction(
        tuple(theta.g(t) for t in keep),
        tuple(tuple(pos[theta.mul(s, t)] for t in keep) for s in keep),
        pos[theta.identity],
        theta.space_labels,
        tuple(theta.theta[t] for t in keep),
        name=f"{theta.name}|<{','.join(theta.g(t) for t in keep)}>",
    )
    if u is None:
        return sub, None
    values = {(pos[s], pos[t], p): v for (s, t, p), v in u.values.items() if s in pos and t in pos}
    return sub, ActionCocycle(sub, values, u.field_tag)


def cyclic_subgroup_conditions(theta: PartialAction, u: Optional[ActionCocycle] = None) -> Verdict:
    """For every cyclic H the diagonal detects ideals in the algebra of the restricted action."""
    for h in subgroups_cyclic(theta):
        sub, sub_u = restrict_to_subgroup(theta, u, h)
        g, sigma = transformation_groupoid(sub, sub_u)
        a = complexify(from_groupoid(g, sigma))
        verdict = detects_ideals(a, diagonal(a, g))
        log_debug(f"{sub.name}: diagonal detects ideals = {verdict.holds}")
        if not verdict:
            log_verdict("cyclic_subgroup_conditions", theta.name, False)
            return Verdict(False, witness=[theta.g(t) for t in sorted(h)],
                           reason="an ideal of a cyclic restriction misses the diagonal")
    log_verdict("cyclic_subgroup_conditions", theta.name, True)
    return Verdict(True, reason="the diagonal detects ideals for every cyclic subgroup")
