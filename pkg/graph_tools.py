"""
Directed graphs: cycle entries, cofinality, the simplicity verdict for graph
algebras, and the boundary-path groupoid of an acyclic graph.

Convention: an edge e goes from s(e) to r(e) (DOT "a -> b" has s = a, r = b),
paths mu_1 mu_2 ... satisfy s(mu_i) = r(mu_{i+1}), and v <= w iff some path
starts in w and ends in v, i.e. v is reachable from w along edges.
"""
import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import networkx as nx

from config import Config
from error_handling import BoundExceededError, FixtureError, FixtureValidator, PreconditionError
from groupalg_utils import Verdict, load_validated, read_text_file
from groupoid_core import FiniteGroupoid, disjoint_union, pair_groupoid
from src.utils.json_validator import GRAPH_SCHEMA
from utils.logging_utils import log_debug, log_verdict

Edge = Tuple[str, str, str]  # (name, source, range)

NOT_SIMPLE = "not_simple"
SIMPLE_AF = "simple_af"
SIMPLE_PURELY_INFINITE = "simple_purely_infinite"


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    name: str = "graph"

    @cached_property
    def nx_graph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for name, s, r in self.edges:
            g.add_edge(s, r, key=name)
        return g

    @cached_property
    def edge_map(self) -> Dict[str, Edge]:
        return {e[0]: e for e in self.edges}

    def s(self, edge: str) -> str:
        return self.edge_map[edge][1]

    def r(self, edge: str) -> str:
        return self.edge_map[edge][2]

    @cached_property
    def receiving(self) -> Dict[str, List[str]]:
        """r^{-1}(v) as edge names."""
        out: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for name, _, r in self.edges:
            out[r].append(name)
        return out


def make_graph(vertices: Sequence[str], edges: Sequence[Sequence[str]], name: str = "graph") -> DirectedGraph:
    verts = tuple(vertices)
    FixtureValidator.check(
        name,
        FixtureValidator.validate_unique(verts, "vertex"),
        FixtureValidator.validate_unique([e[0] for e in edges], "edge name"),
        FixtureValidator.validate_labels(verts, [v for _, s, r in edges for v in (s, r)], "edge endpoints"),
    )
    return DirectedGraph(verts, tuple((e, s, r) for e, s, r in edges), name=name)


_DOT_HEADER = re.compile(r"^\s*(?:strict\s+)?digraph\s*([\w\"]*)\s*\{(.*)\}\s*$", re.S)
_DOT_EDGE = re.compile(r'^"?([\w.]+)"?\s*->\s*"?([\w.]+)"?\s*(?:\[(.*)\])?$')
_DOT_NODE = re.compile(r'^"?([\w.]+)"?\s*(?:\[.*\])?$')
_DOT_LABEL = re.compile(r'label\s*=\s*"?([\w.]+)"?')


def load_dot(text: str, name: str = "graph") -> DirectedGraph:
    """Parse `digraph { a -> b; a -> b [label=e2]; c; }`. Unlabelled edges are named e0, e1, ..."""
    match = _DOT_HEADER.match(re.sub(r"//[^\n]*", "", text))
    if not match:
        raise FixtureError(f"{name}: not a digraph")
    graph_name = match.group(1).strip('"') or name
    vertices: List[str] = []
    edges: List[Tuple[str, str, str]] = []

    def vertex(v):
        if v not in vertices:
            vertices.append(v)

    for statement in re.split(r"[;\n]", match.group(2)):
        statement = statement.strip()
        if not statement or statement.split()[0] in ("graph", "node", "edge", "rankdir"):
            continue
        edge = _DOT_EDGE.match(statement)
        if edge:
            s, r, attrs = edge.groups()
            vertex(s)
            vertex(r)
            label = _DOT_LABEL.search(attrs or "")
            edges.append((label.group(1) if label else f"e{len(edges)}", s, r))
            continue
        node = _DOT_NODE.match(statement)
        if not node:
            raise FixtureError(f"{graph_name}: cannot parse DOT statement {statement!r}")
        vertex(node.group(1))
    return make_graph(vertices, edges, name=graph_name)


def load_graph(path: str) -> DirectedGraph:
    if path.endswith(".dot") or path.endswith(".gv"):
        return load_dot(read_text_file(path), name=path)
    data = load_validated(path, GRAPH_SCHEMA)
    return graph_from_json(data, name=data.get("name", path))


def graph_from_json(data: dict, name: str = "graph") -> DirectedGraph:
    return make_graph(data["vertices"], data["edges"], name=name)


def graph_to_json(q: DirectedGraph) -> dict:
    return {"name": q.name, "vertices": list(q.vertices), "edges": [list(e) for e in q.edges]}


def relabel(q: DirectedGraph, vertex_map: Dict[str, str], edge_map: Dict[str, str]) -> DirectedGraph:
    return make_graph([vertex_map[v] for v in q.vertices],
                      [(edge_map[e], vertex_map[s], vertex_map[r]) for e, s, r in q.edges],
                      name=f"{q.name}'")


# --- Reachability ---
def reachability(q: DirectedGraph) -> Dict[str, FrozenSet[str]]:
    """w -> {v : v <= w}."""
    g = q.nx_graph
    return {w: frozenset(nx.descendants(g, w)) | {w} for w in q.vertices}


def leq(q: DirectedGraph, v: str, w: str) -> bool:
    return v == w or nx.has_path(q.nx_graph, w, v)


def singular_vertices(q: DirectedGraph) -> FrozenSet[str]:
    """Vertices receiving no edges; infinite receivers cannot occur in a finite graph."""
    return frozenset(v for v in q.vertices if not q.receiving[v])


def simple_cycles(q: DirectedGraph) -> List[List[str]]:
    """Vertex cycles v_0 -> v_1 -> ... -> v_0, capped at Config.MAX_SIMPLE_CYCLES."""
    simple = nx.DiGraph(q.nx_graph)
    cycles = list(itertools.islice(nx.simple_cycles(simple), Config.MAX_SIMPLE_CYCLES + 1))
    if len(cycles) > Config.MAX_SIMPLE_CYCLES:
        raise BoundExceededError(f"{q.name}: more than {Config.MAX_SIMPLE_CYCLES} simple cycles")
    return cycles


def _cycle_edges(q: DirectedGraph, cycle: List[str]) -> List[str]:
    out = []
    for i, v in enumerate(cycle):
        nxt = cycle[(i + 1) % len(cycle)]
        out.append(sorted(k for k in q.nx_graph[v][nxt])[0])
    return out


def every_cycle_has_entry(q: DirectedGraph) -> Verdict:
    """A cycle lacks an entry iff each of its vertices receives exactly one edge."""
    for cycle in simple_cycles(q):
        if all(len(q.receiving[v]) == 1 for v in cycle):
            log_verdict("every_cycle_has_entry", q.name, False)
            return Verdict(False, witness={"vertices": cycle, "edges": _cycle_edges(q, cycle)},
                           reason="entryless cycle")
    log_verdict("every_cycle_has_entry", q.name, True)
    return Verdict(True, reason="every cycle has an entry")


def has_cycle(q: DirectedGraph) -> bool:
    return not nx.is_directed_acyclic_graph(q.nx_graph)


def is_cofinal(q: DirectedGraph) -> Verdict:
    """
    Every infinite path runs through a whole simple cycle and every finite boundary
    path starts at a singular vertex, so cofinality reduces to: every vertex lies
    below some vertex of each simple cycle, and below every singular vertex.
    """
    reach = reachability(q)
    for cycle in simple_cycles(q):
        below = frozenset().union(*(reach[u] for u in cycle))
        missing = [v for v in q.vertices if v not in below]
        if missing:
            log_verdict("cofinal", q.name, False)
            return Verdict(False, witness={"v": missing[0], "cycle": cycle},
                           reason="a vertex is not below the cycle")
    for w in sorted(singular_vertices(q)):
        missing = [v for v in q.vertices if v not in reach[w]]
        if missing:
            log_verdict("cofinal", q.name, False)
            return Verdict(False, witness={"v": missing[0], "singular": w},
                           reason="a vertex is not below the singular vertex")
    log_verdict("cofinal", q.name, True)
    return Verdict(True, reason="every boundary path is cofinal")


@dataclass
class GraphVerdict:
    kind: str
    reason: str = ""
    witness: object = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "reason": self.reason, "witness": self.witness}


def simplicity_verdict(q: DirectedGraph) -> GraphVerdict:
    cofinal = is_cofinal(q)
    entries = every_cycle_has_entry(q)
    if not entries:
        verdict = GraphVerdict(NOT_SIMPLE, "entryless cycle", entries.witness)
    elif not cofinal:
        verdict = GraphVerdict(NOT_SIMPLE, "not cofinal", cofinal.witness)
    elif has_cycle(q):
        verdict = GraphVerdict(SIMPLE_PURELY_INFINITE, "cofinal, every cycle has an entry, a cycle exists")
    else:
        verdict = GraphVerdict(SIMPLE_AF, "cofinal and acyclic")
    log_verdict("graph_simplicity", q.name, verdict.kind)
    return verdict


# --- Acyclic boundary-path groupoid ---
def _path_label(q: DirectedGraph, path: Tuple[str, ...], end: str) -> str:
    return "/".join(path) if path else f"@{end}"


def boundary_paths(q: DirectedGraph) -> Dict[str, List[Tuple[str, ...]]]:
    """Finite paths mu_1...mu_n with s(mu_n) singular, grouped by that singular vertex."""
    if has_cycle(q):
        raise PreconditionError(f"{q.name}: boundary paths are finite only for acyclic graphs")
    out: Dict[str, List[Tuple[str, ...]]] = {}
    for w in sorted(singular_vertices(q)):
        paths: List[Tuple[str, ...]] = []
        frontier: List[Tuple[Tuple[str, ...], str]] = [((), w)]
        while frontier:
            if len(frontier) > Config.MAX_PATHS_PER_LEVEL:
                raise BoundExceededError(f"{q.name}: boundary path level exceeds its cap")
            paths.extend(p for p, _ in frontier)
            # prepend edges leaving the current range vertex: s(e) = r(mu_1)
            frontier = [((e,) + p, r) for p, v in frontier for e, s, r in q.edges if s == v]
        out[w] = sorted(paths, key=lambda p: (len(p), p))
    return out


def boundary_path_groupoid_acyclic(q: DirectedGraph) -> FiniteGroupoid:
    """Pairs of boundary paths with the same singular source; principal, discrete."""
    components = []
    for w, paths in boundary_paths(q).items():
        points = [_path_label(q, p, w) for p in paths]
        components.append(pair_groupoid(points, name=f"{q.name}@{w}"))
    log_debug(f"boundary path groupoid of {q.name}: {sum(len(c) for c in components)} arrows")
    if len(components) == 1:
        return components[0]
    return disjoint_union(*components, name=f"{q.name}_boundary")


def random_acyclic_graph(rng, max_vertices: int = 8, max_arrows: int = 30) -> DirectedGraph:
    """Edges only go from lower to higher index; edges are dropped until the groupoid is small."""
    n = int(rng.integers(1, max_vertices + 1))
    vertices = [f"v{i}" for i in range(n)]
    edges = [(f"e{k}", vertices[i], vertices[j])
             for k, (i, j) in enumerate((i, j) for i in range(n) for j in range(i + 1, n))
             if rng.random() < 0.3]
    while True:
        q = make_graph(vertices, edges, name="random_dag")
        size = sum(len(p) ** 2 for p in boundary_paths(q).values())
        if size <= max_arrows or not edges:
            return q
        edges.pop(int(rng.integers(0, len(edges))))


# --- Brute-force simulation (independent of the cycle reduction) ---
def backward_walks(q: DirectedGraph, depth: int) -> List[Tuple[str, ...]]:
    """Vertex sequences r(mu_1), s(mu_1), s(mu_2), ... of boundary path prefixes of length depth.

    Walks stop early only at singular vertices.
    """
    walks = []
    frontier = [(v,) for v in q.vertices]
    for _ in range(depth):
        nxt = []
        for walk in frontier:
            edges = q.receiving[walk[-1]]
            if not edges:
                walks.append(walk)
            nxt.extend(walk + (q.s(e),) for e in edges)
        frontier = nxt
        if len(frontier) > Config.MAX_PATHS_PER_LEVEL:
            raise BoundExceededError(f"{q.name}: walk enumeration exceeds its cap")
    return walks + frontier


def brute_force_cofinal(q: DirectedGraph, depth: Optional[int] = None) -> bool:
    depth = len(q.vertices) + len(q.edges) if depth is None else depth
    reach = reachability(q)
    everything = frozenset(q.vertices)
    return all(frozenset().union(*(reach[u] for u in walk)) == everything for walk in backward_walks(q, depth))


def brute_force_cycle_entries(q: DirectedGraph) -> bool:
    """Enumerate closed edge paths with distinct vertices and look for an extra edge into them."""
    for start in q.vertices:
        stack: List[Tuple[str, Tuple[str, ...], Set[str]]] = [(start, (), {start})]
        while stack:
            v, path, seen = stack.pop()
            for e in q.receiving[v]:
                u = q.s(e)
                cycle = path + (e,)
                if u == start:
                    if all(len(q.receiving[q.r(f)]) == 1 for f in cycle):
                        return False
                elif u not in seen:
                    stack.append((u, cycle, seen | {u}))
    return True
