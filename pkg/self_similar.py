"""
Self-similar group actions on finite graphs, given as automata.

Group elements are the declared states; two states are equal only when their
labels are. A state g acts on edges and vertices (sigma) and restricts along
edges (g|_e); both extend to paths left to right:

    sigma_g(e mu) = sigma_g(e) sigma_{g|_e}(mu),    g|_{e mu} = (g|_e)|_mu.

Paths follow graph_tools: s(mu_i) = r(mu_{i+1}); a path "ends in v" when
r(mu_1) = v, which is the only end an infinite path has.
"""
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from config import Config
from error_handling import BoundExceededError, FixtureError, PreconditionError
from groupalg_utils import SemiDecision, TriState, ValidationReport, Verdict, load_validated
from groupoid_core import UnionFind
from graph_tools import (
    NOT_SIMPLE,
    SIMPLE_PURELY_INFINITE,
    DirectedGraph,
    every_cycle_has_entry,
    graph_from_json,
    make_graph,
    reachability,
    singular_vertices,
)
from src.utils.json_validator import SELFSIM_SCHEMA
from utils.logging_utils import log_debug, log_verdict, log_warning

Path = Tuple[str, ...]
Node = Tuple[str, str]  # (state, vertex)

UNKNOWN_KIND = "unknown"
HYPOTHESES_REFUTED = "hypotheses_refuted"


@dataclass(frozen=True, eq=False)
class SelfSimilarAction:
    graph: DirectedGraph
    states: Tuple[str, ...]
    identity: str
    sigma: Dict[str, Dict[str, str]]
    restrict: Dict[str, Dict[str, str]]
    products: Dict[Tuple[str, str], str] = field(default_factory=dict)
    name: str = "selfsim"

    def act(self, g: str, letter: str) -> str:
        """sigma_g on a vertex or an edge."""
        return self.sigma[g][letter]

    def res(self, g: str, edge: str) -> str:
        return self.restrict[g][edge]

    def product(self, g: str, h: str) -> Optional[str]:
        if g == self.identity:
            return h
        if h == self.identity:
            return g
        return self.products.get((g, h))

    @property
    def is_trivial_group(self) -> bool:
        return self.states == (self.identity,)


def make_selfsim(graph: DirectedGraph, states: Sequence[str], sigma: Mapping[str, Mapping[str, str]],
                 restrict: Mapping[str, Mapping[str, str]], product: Sequence[Sequence[str]] = (),
                 identity: Optional[str] = None, name: str = "selfsim") -> SelfSimilarAction:
    """
    Build and label-check an action. The identity defaults to the first state and
    may be left out of sigma/restrict. Vertex images not given explicitly are read
    off r(sigma_g(e)) for the first edge e received by the vertex.
    """
    sources = sorted(singular_vertices(graph))
    if sources:
        raise PreconditionError(
            f"{name}: a self-similar action needs a finite directed graph without sources; "
            f"{', '.join(sources)} receive no edges")
    states = tuple(states)
    if len(set(states)) != len(states):
        raise FixtureError(f"{name}: duplicate states")
    identity = states[0] if identity is None else identity
    if identity not in states:
        raise FixtureError(f"{name}: identity {identity} is not a state")
    known = set(states)
    edges = [e for e, _, _ in graph.edges]
    letters = set(graph.vertices) | set(edges)

    full_sigma: Dict[str, Dict[str, str]] = {}
    full_restrict: Dict[str, Dict[str, str]] = {}
    for g in states:
        given = dict(sigma.get(g, {}))
        rest = dict(restrict.get(g, {}))
        if g == identity:
            given = {**{x: x for x in letters}, **given}
            rest = {**{e: identity for e in edges}, **rest}
        for letter, image in given.items():
            if letter not in letters or image not in letters:
                raise FixtureError(f"{name}: sigma[{g}] maps {letter} -> {image} outside the graph")
        missing = [e for e in edges if e not in given]
        if missing:
            raise FixtureError(f"{name}: sigma[{g}] has no image for edges {missing}")
        if any(given[e] not in graph.edge_map for e in edges):
            raise FixtureError(f"{name}: sigma[{g}] sends an edge to a vertex")
        for v in graph.vertices:
            if v not in given:
                given[v] = graph.r(given[graph.receiving[v][0]])
        unknown = [(e, h) for e, h in rest.items() if e not in edges or h not in known]
        if unknown:
            raise FixtureError(f"{name}: restrict[{g}] has unknown entries {unknown}")
        missing = [e for e in edges if e not in rest]
        if missing:
            raise FixtureError(f"{name}: restrict[{g}] has no state for edges {missing}")
        full_sigma[g] = given
        full_restrict[g] = rest

    products: Dict[Tuple[str, str], str] = {}
    for row in product:
        g, h, gh = row
        if not {g, h, gh} <= known:
            raise FixtureError(f"{name}: product row {list(row)} uses unknown states")
        if products.get((g, h), gh) != gh:
            raise FixtureError(f"{name}: product {g}*{h} declared twice")
        products[(g, h)] = gh
    return SelfSimilarAction(graph, states, identity, full_sigma, full_restrict, products, name=name)


def selfsim_from_json(data: dict, name: str = "selfsim") -> SelfSimilarAction:
    graph = graph_from_json(data["graph"], name=data["graph"].get("name", f"{name}.graph"))
    return make_selfsim(graph, data["states"], data["sigma"], data["restrict"], data.get("product", ()),
                        identity=data.get("identity"), name=name)


def load_selfsim(path: str) -> SelfSimilarAction:
    data = load_validated(path, SELFSIM_SCHEMA)
    return selfsim_from_json(data, name=data.get("name", path))


def selfsim_to_json(a: SelfSimilarAction) -> dict:
    edges = [e for e, _, _ in a.graph.edges]
    return {
        "name": a.name,
        "graph": {"name": a.graph.name, "vertices": list(a.graph.vertices), "edges": [list(e) for e in a.graph.edges]},
        "states": list(a.states),
        "identity": a.identity,
        "sigma": {g: {x: a.act(g, x) for x in list(a.graph.vertices) + edges} for g in a.states},
        "restrict": {g: {e: a.res(g, e) for e in edges} for g in a.states},
        "product": [[g, h, gh] for (g, h), gh in sorted(a.products.items())],
    }


# --- Fixtures ---
def odometer() -> SelfSimilarAction:
    """The binary adding machine on one vertex with loops 0 and 1."""
    graph = make_graph(["v"], [("0", "v", "v"), ("1", "v", "v")], name="two_loops")
    return make_selfsim(graph, ["1", "g"], {"g": {"0": "1", "1": "0"}}, {"g": {"0": "1", "1": "g"}},
                        name="odometer")


def trivial_action(graph: DirectedGraph) -> SelfSimilarAction:
    return make_selfsim(graph, ["1"], {}, {}, name=f"trivial({graph.name})")


# --- Identities ---
def validate_cocycle_identities(a: SelfSimilarAction) -> ValidationReport:
    """
    Checks that every sigma_g is a graph automorphism, that the identity state is
    trivial, and, for every edge, sigma_{g|_e}(s(e)) = sigma_g(s(e)) and, where the
    product table allows, gh|_e = g|_{sigma_h(e)} h|_e and sigma_{gh} = sigma_g sigma_h.
    """
    report = ValidationReport(a.name)
    q = a.graph
    edges = [e for e, _, _ in q.edges]
    checks = 0
    for g in a.states:
        images = [a.act(g, e) for e in edges]
        if len(set(images)) != len(images):
            report.add("not_automorphism", f"sigma_{g} is not injective on edges", {"state": g})
        vertex_images = [a.act(g, v) for v in q.vertices]
        if len(set(vertex_images)) != len(vertex_images) or not set(vertex_images) <= set(q.vertices):
            report.add("not_automorphism", f"sigma_{g} is not a bijection of the vertices", {"state": g})
        for e in edges:
            image = a.act(g, e)
            if image not in q.edge_map:
                report.add("not_automorphism", f"sigma_{g} sends edge {e} to a vertex", {"state": g, "edge": e})
                continue
            if q.r(image) != a.act(g, q.r(e)) or q.s(image) != a.act(g, q.s(e)):
                report.add("not_automorphism", f"sigma_{g} does not commute with r and s at {e}",
                           {"state": g, "edge": e, "image": image})
            checks += 1
            if a.act(a.res(g, e), q.s(e)) != a.act(g, q.s(e)):
                report.add("vertex_identity", f"sigma_({g}|{e})(s({e})) != sigma_{g}(s({e}))",
                           {"state": g, "edge": e, "restriction": a.res(g, e)})
    if any(a.act(a.identity, x) != x for x in list(q.vertices) + edges) or \
            any(a.res(a.identity, e) != a.identity for e in edges):
        report.add("identity_state", f"identity state {a.identity} acts or restricts non-trivially")

    for g in a.states:
        for h in a.states:
            gh = a.product(g, h)
            if gh is None:
                continue
            for e in edges:
                checks += 1
                if a.act(gh, e) != a.act(g, a.act(h, e)):
                    report.add("homomorphism", f"sigma_({g}{h})({e}) != sigma_{g}(sigma_{h}({e}))",
                               {"g": g, "h": h, "edge": e})
                left = a.res(g, a.act(h, e))
                right = a.res(h, e)
                composed = a.product(left, right)
                if composed is None:
                    report.add("product_missing", f"product {left}*{right} is needed for ({g}{h})|{e}",
                               {"g": g, "h": h, "edge": e})
                elif a.res(gh, e) != composed:
                    report.add("restriction_identity", f"({g}{h})|{e} != {g}|sigma_{h}({e}) {h}|{e}",
                               {"g": g, "h": h, "edge": e, "lhs": a.res(gh, e), "rhs": composed})
    log_debug(f"{a.name}: {checks} self-similarity checks, {len(report.violations)} violations")
    log_verdict("selfsim_identities", a.name, report.ok)
    return report


# --- Paths ---
def _check_path(a: SelfSimilarAction, mu: Sequence[str]) -> Path:
    q = a.graph
    mu = tuple(mu)
    unknown = [e for e in mu if e not in q.edge_map]
    if unknown:
        raise PreconditionError(f"{a.name}: unknown edges {unknown}")
    for left, right in zip(mu, mu[1:]):
        if q.s(left) != q.r(right):
            raise PreconditionError(f"{a.name}: {left}{right} is not a path (s({left}) != r({right}))")
    return mu


def multiply(a: SelfSimilarAction, word: Sequence[str]) -> str:
    """The state g_1 g_2 ... g_k, folded through the product table."""
    out = a.identity
    for g in word:
        nxt = a.product(out, g)
        if nxt is None:
            raise BoundExceededError(f"{a.name}: product table exhausted at {out}*{g}")
        out = nxt
    return out


def _act_state(a: SelfSimilarAction, g: str, mu: Path) -> Tuple[Path, str]:
    image = []
    for e in mu:
        image.append(a.act(g, e))
        g = a.res(g, e)
    return tuple(image), g


def act_on_path(a: SelfSimilarAction, g: Union[str, Sequence[str]], mu: Sequence[str]) -> Tuple[Path, str]:
    """
    (sigma_g(mu), g|_mu). g may be a state or a word g_1...g_k in the states, acting
    as g_1(g_2(...g_k(mu))); the restriction of a word is multiplied out in the
    product table and raises BoundExceededError when a needed product is missing.
    """
    mu = _check_path(a, mu)
    if isinstance(g, str):
        if g not in a.sigma:
            raise PreconditionError(f"{a.name}: unknown state {g}")
        return _act_state(a, g, mu)
    restrictions: List[str] = []
    path = mu
    for h in reversed(tuple(g)):
        path, rest = _act_state(a, h, path)
        restrictions.append(rest)
    return path, multiply(a, list(reversed(restrictions)))


def _extensions(a: SelfSimilarAction, mu: Path) -> List[Path]:
    """Paths mu e; every vertex receives an edge, so the list is never empty."""
    return [mu + (e,) for e in a.graph.receiving[a.graph.s(mu[-1])]]


@dataclass
class FixedPathSearch:
    paths: List[Path]
    exhausted: bool
    depth: int

    def to_dict(self) -> dict:
        return {"paths": ["/".join(p) for p in self.paths], "exhausted": self.exhausted, "depth": self.depth}


def strongly_fixed_paths(a: SelfSimilarAction, g: str, depth: int) -> FixedPathSearch:
    """
    Minimal strongly fixed paths of length <= depth, breadth first. A path that g
    moves has no fixed extension, and a strongly fixed path is not extended, so the
    frontier only holds fixed paths with a non-trivial restriction. exhausted means
    the frontier emptied: the list is then every minimal strongly fixed path.
    """
    if depth < 1:
        raise PreconditionError("depth must be at least 1")
    found: List[Path] = []
    frontier: List[Tuple[Path, str]] = [((e,), g) for e, _, _ in a.graph.edges]
    level = 1
    while frontier and level <= depth:
        survivors = []
        for mu, h in frontier:
            e = mu[-1]
            if a.act(h, e) != e:
                continue
            rest = a.res(h, e)
            if rest == a.identity:
                found.append(mu)
            else:
                survivors.append((mu, rest))
        frontier = [(nxt, h) for mu, h in survivors for nxt in _extensions(a, mu)]
        if len(frontier) > Config.MAX_PATHS_PER_LEVEL:
            raise BoundExceededError(f"{a.name}: strongly fixed path search exceeds its cap at level {level}")
        level += 1
    return FixedPathSearch(found, not frontier, depth)


# --- The (state, vertex) automaton ---
def automaton_graph(a: SelfSimilarAction) -> nx.MultiDiGraph:
    """(h, u) --e--> (h|_e, s(e)) for each edge e received by u; fixed marks sigma_h(e) = e."""
    aut = nx.MultiDiGraph()
    for h in a.states:
        for u in a.graph.vertices:
            aut.add_node((h, u))
            for e in a.graph.receiving[u]:
                aut.add_edge((h, u), (a.res(h, e), a.graph.s(e)), key=e, fixed=a.act(h, e) == e)
    return aut


def _edge_path(aut: nx.MultiDiGraph, nodes: Sequence[Node], fixed_only: bool = False) -> List[str]:
    out = []
    for u, w in zip(nodes, nodes[1:]):
        keys = sorted(k for k, data in aut[u][w].items() if data["fixed"] or not fixed_only)
        out.append(keys[0])
    return out


def _non_identity_view(a: SelfSimilarAction, aut: nx.MultiDiGraph, fixed_only: bool = False) -> nx.DiGraph:
    view = nx.DiGraph()
    view.add_nodes_from(n for n in aut.nodes if n[0] != a.identity)
    for u, w, data in aut.edges(data=True):
        if u[0] != a.identity and w[0] != a.identity and (data["fixed"] or not fixed_only):
            view.add_edge(u, w)
    return view


def _reachable_cycle(view: nx.DiGraph, start: Node) -> Optional[Tuple[List[Node], List[Node]]]:
    """(path from start to a cycle, the cycle) inside view, or None."""
    if start not in view:
        return None
    reach = view.subgraph(nx.descendants(view, start) | {start})
    try:
        cycle_edges = nx.find_cycle(reach, source=start)
    except nx.NetworkXNoCycle:
        return None
    cycle = [u for u, _ in cycle_edges]
    return nx.shortest_path(view, start, cycle[0]), cycle + [cycle[0]]


def _first_moved_path(a: SelfSimilarAction, aut: nx.MultiDiGraph, start: Node) -> Optional[List[str]]:
    """Shortest path ending at start's vertex that start's state moves."""
    parents: Dict[Node, Tuple[Node, str]] = {}
    queue = deque([start])
    seen = {start}
    while queue:
        node = queue.popleft()
        if node[0] == a.identity:
            continue
        for _, nxt, key, data in sorted(aut.out_edges(node, keys=True, data=True), key=lambda t: t[2]):
            if not data["fixed"]:
                path = [key]
                while node != start:
                    node, edge = parents[node]
                    path.append(edge)
                return list(reversed(path))
            if nxt not in seen:
                seen.add(nxt)
                parents[nxt] = (node, key)
                queue.append(nxt)
    return None


def fixes_all_paths(a: SelfSimilarAction, g: str, v: str) -> Verdict:
    """Does sigma_g fix every path ending in v? Exact: a moved path shows up as a reachable unfixed transition."""
    aut = automaton_graph(a)
    moved = _first_moved_path(a, aut, (g, v))
    holds = moved is None
    log_verdict("fixes_all_paths", f"{a.name}:{g}@{v}", holds)
    if holds:
        return Verdict(True, reason=f"{g} fixes every path ending in {v}")
    return Verdict(False, witness={"path": moved, "image": list(act_on_path(a, g, moved)[0])},
                   reason="a path ending in v is moved")


def is_slack(a: SelfSimilarAction, g: str, v: str, depth: int) -> SemiDecision:
    """
    yes(n): every path of length >= n ending in v is strongly fixed, with n minimal
    and n <= depth. No when the automaton shows arbitrarily long paths that are not
    strongly fixed: a cycle of non-identity states reachable from (g, v), reported
    first, or a moved path (whose extensions stay moved). Otherwise the non-identity
    part is acyclic and n is one more than its longest run; unknown if n > depth.
    """
    if depth < 1:
        raise PreconditionError("depth must be at least 1")
    subject = f"{a.name}:{g}@{v}"
    start = (g, v)
    if g == a.identity:
        log_verdict("slack", subject, "yes(1)")
        return SemiDecision(TriState.PROVEN, value=1, depth=depth, reason="identity state")
    aut = automaton_graph(a)
    view = _non_identity_view(a, aut)
    found = _reachable_cycle(view, start)
    if found is not None:
        prefix, cycle = found
        log_verdict("slack", subject, "no (state cycle)")
        return SemiDecision(TriState.REFUTED, depth=depth,
                            witness={"prefix": _edge_path(aut, prefix), "cycle": _edge_path(aut, cycle),
                                     "states": [n[0] for n in cycle]},
                            reason="a cycle of non-identity states keeps restrictions non-trivial")
    moved = _first_moved_path(a, aut, start)
    if moved is not None:
        log_verdict("slack", subject, "no (moved path)")
        return SemiDecision(TriState.REFUTED, witness={"path": moved}, depth=depth,
                            reason="a moved path has only moved extensions")
    reach = view.subgraph(nx.descendants(view, start) | {start})
    n = nx.dag_longest_path_length(reach) + 1
    if n <= depth:
        log_verdict("slack", subject, f"yes({n})")
        return SemiDecision(TriState.PROVEN, value=n, depth=depth,
                            reason=f"every path of length >= {n} ending in {v} is strongly fixed")
    log_verdict("slack", subject, f"unknown({depth})")
    return SemiDecision(TriState.UNKNOWN, depth=depth, reason=f"restrictions stay non-trivial up to length {n - 1}")


# --- Orbits and cofinality ---
def orbit_relation(a: SelfSimilarAction) -> List[List[str]]:
    """Partition of Q^0 into orbits of the group generated by the states."""
    uf = UnionFind(a.graph.vertices)
    for g in a.states:
        for v in a.graph.vertices:
            uf.union(v, a.act(g, v))
    return [sorted(c) for c in uf.classes()]


def ll_relation(a: SelfSimilarAction) -> Dict[str, frozenset]:
    """w -> {v : v << w}, with v << w iff v <= u ~ w for some vertex u."""
    reach = reachability(a.graph)
    orbit_of = {v: cls for cls in orbit_relation(a) for v in cls}
    return {w: frozenset().union(*(reach[u] for u in orbit_of[w])) for w in a.graph.vertices}


def _cyclic_components(q: DirectedGraph) -> List[List[str]]:
    out = []
    for comp in nx.strongly_connected_components(q.nx_graph):
        comp = sorted(comp)
        if len(comp) > 1 or q.nx_graph.has_edge(comp[0], comp[0]):
            out.append(comp)
    return sorted(out)


def is_cofinal_ss(a: SelfSimilarAction, depth: Optional[int] = None) -> SemiDecision:
    """
    Exact. With no sources every boundary path is infinite and eventually stays in
    one cyclic strongly connected component, where all vertices reach each other;
    since << is monotone along paths, cofinality means: every vertex is << a vertex
    of every cyclic component.
    """
    below = ll_relation(a)
    everything = frozenset(a.graph.vertices)
    for comp in _cyclic_components(a.graph):
        missing = sorted(everything - below[comp[0]])
        if missing:
            log_verdict("cofinal_selfsim", a.name, False)
            return SemiDecision(TriState.REFUTED, witness={"v": missing[0], "component": comp}, depth=depth,
                                reason="an infinite path in the component never dominates v")
    log_verdict("cofinal_selfsim", a.name, True)
    return SemiDecision(TriState.PROVEN, depth=depth, reason="every infinite path is cofinal for <<")


# --- Theorem hypotheses ---
def _combine(decisions: Sequence[SemiDecision]) -> TriState:
    statuses = {d.status for d in decisions}
    if TriState.REFUTED in statuses:
        return TriState.REFUTED
    if TriState.UNKNOWN in statuses:
        return TriState.UNKNOWN
    return TriState.PROVEN


def fixing_implies_slack(a: SelfSimilarAction, depth: int) -> SemiDecision:
    """For every state g and vertex v: g fixes all paths ending in v  =>  g is slack at v."""
    unknown = []
    for g in a.states:
        for v in a.graph.vertices:
            if not fixes_all_paths(a, g, v):
                continue
            slack = is_slack(a, g, v, depth)
            if slack.status is TriState.REFUTED:
                return SemiDecision(TriState.REFUTED, witness={"state": g, "vertex": v, "slack": slack.to_dict()},
                                    depth=depth, reason=f"{g} fixes every path ending in {v} but is not slack there")
            if slack.status is TriState.UNKNOWN:
                unknown.append({"state": g, "vertex": v})
    if unknown:
        return SemiDecision(TriState.UNKNOWN, witness=unknown, depth=depth, reason="slackness undecided at this depth")
    return SemiDecision(TriState.PROVEN, depth=depth, reason="every fixing state is slack")


def _pumpable_fixed_paths(a: SelfSimilarAction, g: str) -> Optional[dict]:
    """
    A state has infinitely many minimal strongly fixed paths iff, among fixed
    transitions between non-identity nodes, a cycle reachable from some (g, u)
    can still reach a fixed transition into the identity.
    """
    aut = automaton_graph(a)
    view = _non_identity_view(a, aut, fixed_only=True)
    exits = {u for u, w, data in aut.edges(data=True)
             if data["fixed"] and u[0] != a.identity and w[0] == a.identity}
    for u in sorted(a.graph.vertices):
        start = (g, u)
        if start not in view:
            continue
        reach = view.subgraph(nx.descendants(view, start) | {start})
        for comp in nx.strongly_connected_components(reach):
            node = next(iter(comp))
            if len(comp) == 1 and not reach.has_edge(node, node):
                continue
            onward = nx.descendants(reach, node) | {node}
            if onward & exits:
                return {"state": g, "start": u, "cycle_states": sorted(n[0] for n in comp)}
    return None


def hausdorff_condition(a: SelfSimilarAction, depth: int) -> SemiDecision:
    """Does every state admit only finitely many minimal strongly fixed paths?"""
    open_states = []
    for g in a.states:
        pumped = _pumpable_fixed_paths(a, g)
        if pumped is not None:
            log_verdict("hausdorff_condition", a.name, "refuted")
            return SemiDecision(TriState.REFUTED, witness=pumped, depth=depth,
                                reason=f"{g} has infinitely many minimal strongly fixed paths")
        if not strongly_fixed_paths(a, g, depth).exhausted:
            open_states.append(g)
    if open_states:
        log_warning(f"{a.name}: strongly fixed path search not exhausted at depth {depth} for {open_states}")
        log_verdict("hausdorff_condition", a.name, f"unknown({depth})")
        return SemiDecision(TriState.UNKNOWN, witness={"states": open_states}, depth=depth,
                            reason="search frontier not exhausted")
    log_verdict("hausdorff_condition", a.name, "proven")
    return SemiDecision(TriState.PROVEN, depth=depth, reason="every search for minimal strongly fixed paths ended")


@dataclass
class SelfSimilarVerdict:
    hypotheses: Dict[str, SemiDecision]
    essential: TriState
    reduced: TriState
    kind: str

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "essential": self.essential.value,
            "reduced": self.reduced.value,
            "hypotheses": {k: d.to_dict() for k, d in self.hypotheses.items()},
        }


def verdict(a: SelfSimilarAction, depth: Optional[int] = None) -> SelfSimilarVerdict:
    """
    Cofinality, cycle entries and fixing-implies-slack give a simple purely infinite
    essential algebra; the reduced algebra additionally needs the Hausdorff condition.
    For the trivial group the hypotheses are the graph conditions, so a refutation
    is reported as not simple.
    """
    depth = Config.DEFAULT_DEPTH if depth is None else depth
    entries = every_cycle_has_entry(a.graph)
    hypotheses = {
        "cofinal": is_cofinal_ss(a, depth),
        "every_cycle_has_entry": SemiDecision(TriState.PROVEN if entries else TriState.REFUTED,
                                              witness=entries.witness, depth=depth, reason=entries.reason),
        "fixing_implies_slack": fixing_implies_slack(a, depth),
        "hausdorff": hausdorff_condition(a, depth),
    }
    essential = _combine([hypotheses[k] for k in ("cofinal", "every_cycle_has_entry", "fixing_implies_slack")])
    reduced = _combine([hypotheses[k] for k in ("cofinal", "every_cycle_has_entry",
                                                "fixing_implies_slack", "hausdorff")])
    if essential is TriState.PROVEN:
        kind = SIMPLE_PURELY_INFINITE
    elif essential is TriState.REFUTED:
        kind = NOT_SIMPLE if a.is_trivial_group else HYPOTHESES_REFUTED
    else:
        kind = UNKNOWN_KIND
    log_verdict("selfsim_verdict", a.name, kind)
    return SelfSimilarVerdict(hypotheses, essential, reduced, kind)
