"""
Finite coarse spaces and controlled-propagation matrices.

A coarse structure here is generated by finitely many relations on a finite set
and closed under inverses, products, unions and subsets. Such a family is the
power set of its largest entourage M, the transitive closure of the generators
and their inverses; M is an equivalence relation on the points it touches.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from config import Config
from error_handling import BoundExceededError, FixtureError, FixtureValidator, PreconditionError
from groupalg_utils import ValidationReport, Verdict, parse_scalar, load_validated
from groupoid_core import FiniteGroupoid, disjoint_union, pair_groupoid
from src.utils.json_validator import COARSE_SCHEMA
from twisted_convolution import operator_norm, parse_p
from utils.linalg_utils import as_complex, exact_zeros, is_exact
from utils.logging_utils import log_debug, log_verdict

Pair = Tuple[str, str]
Relation = FrozenSet[Pair]


def inverse(e: Iterable[Pair]) -> Relation:
    return frozenset((y, x) for x, y in e)


def compose(e1: Iterable[Pair], e2: Iterable[Pair]) -> Relation:
    """E1 E2 = {(x, z) : (x, y) in E1, (y, z) in E2}."""
    by_source: Dict[str, List[str]] = {}
    for y, z in e2:
        by_source.setdefault(y, []).append(z)
    return frozenset((x, z) for x, y in e1 for z in by_source.get(y, ()))


def is_bisection(e: Iterable[Pair]) -> bool:
    e = list(e)
    return len({x for x, _ in e}) == len(e) == len({y for _, y in e})


@dataclass(frozen=True, eq=False)
class CoarseSpace:
    points: Tuple[str, ...]
    generators: Tuple[Relation, ...]
    name: str = "coarse"

    @cached_property
    def classes(self) -> List[Tuple[str, ...]]:
        """Equivalence classes of the largest entourage (touched points only)."""
        g = nx.Graph()
        for gen in self.generators:
            for x, y in gen:
                g.add_edge(x, y)
        classes = sorted(tuple(sorted(c)) for c in nx.connected_components(g))
        size = sum(len(c) ** 2 for c in classes)
        if size > Config.MAX_COARSE_PAIRS:
            raise BoundExceededError(f"{self.name}: largest entourage has {size} pairs, cap {Config.MAX_COARSE_PAIRS}")
        return classes

    @cached_property
    def largest(self) -> Relation:
        return frozenset((x, y) for c in self.classes for x in c for y in c)

    @property
    def unital(self) -> bool:
        return all((x, x) in self.largest for x in self.points)

    def contains(self, e: Iterable[Pair]) -> bool:
        return frozenset(e) <= self.largest


def make_coarse_space(points: Sequence[str], generators: Iterable[Iterable[Sequence[str]]],
                      name: str = "coarse") -> CoarseSpace:
    points = tuple(points)
    FixtureValidator.check(name, FixtureValidator.validate_unique(points, "point"))
    gens = []
    for gen in generators:
        rel = frozenset((x, y) for x, y in gen)
        FixtureValidator.check(name, FixtureValidator.validate_labels(points, [p for pair in rel for p in pair],
                                                                      "points in generator"))
        gens.append(rel)
    return CoarseSpace(points, tuple(gens), name=name)


def diagonal_relation(points: Iterable[str]) -> Relation:
    return frozenset((x, x) for x in points)


def full_relation(points: Sequence[str]) -> Relation:
    return frozenset((x, y) for x in points for y in points)


def _require_entourage(cs: CoarseSpace, e: Iterable[Pair]) -> Relation:
    e = frozenset(e)
    if not cs.contains(e):
        outside = sorted(e - cs.largest)
        raise PreconditionError(f"{cs.name}: {outside[:3]} ... is not controlled by the coarse structure")
    return e


def n_of(cs: CoarseSpace, e: Iterable[Pair]) -> int:
    """sup_x |{y : (x, y) in E or (y, x) in E}|."""
    e = _require_entourage(cs, e)
    neighbours: Dict[str, set] = {x: set() for x in cs.points}
    for x, y in e:
        neighbours[x].add(y)
        neighbours[y].add(x)
    return max((len(v) for v in neighbours.values()), default=0)


def decompose_into_bisections(cs: CoarseSpace, e: Iterable[Pair]) -> List[Relation]:
    """
    Proper edge colouring of the bipartite graph with an edge x -> y per pair of E;
    each colour class is a bisection. Colours are repaired along alternating paths,
    so the count is the maximal row/column degree, which is at most n(E).
    """
    e = _require_entourage(cs, e)
    rows: Dict[str, int] = {}
    cols: Dict[str, int] = {}
    for x, y in e:
        rows[x] = rows.get(x, 0) + 1
        cols[y] = cols.get(y, 0) + 1
    palette = range(max(list(rows.values()) + list(cols.values()), default=0))
    at_row: Dict[str, Dict[int, str]] = {x: {} for x in rows}
    at_col: Dict[str, Dict[int, str]] = {y: {} for y in cols}

    for x, y in sorted(e):
        a = next(c for c in palette if c not in at_row[x])
        b = next(c for c in palette if c not in at_col[y])
        if a in at_col[y]:
            # flip the a/b alternating path leaving y; it cannot end at x
            path: List[Tuple[str, str, int]] = []
            node, on_col, colour = y, True, a
            while True:
                table = at_col if on_col else at_row
                if colour not in table[node]:
                    break
                other = table[node][colour]
                path.append((other, node, colour) if on_col else (node, other, colour))
                node, on_col = other, not on_col
                colour = b if colour == a else a
            for px, py, c in path:
                del at_row[px][c]
                del at_col[py][c]
            for px, py, c in path:
                swapped = b if c == a else a
                at_row[px][swapped] = py
                at_col[py][swapped] = px
        at_row[x][a] = y
        at_col[y][a] = x

    pieces: Dict[int, set] = {}
    for x, coloured in at_row.items():
        for c, y in coloured.items():
            pieces.setdefault(c, set()).add((x, y))
    out = [frozenset(pieces[c]) for c in sorted(pieces)]
    log_debug(f"{cs.name}: {len(e)} pairs split into {len(out)} bisections")
    return out


# --- Coarse ideals ---
@dataclass
class CoarseIdeal:
    classes: Tuple[Tuple[str, ...], ...]

    @property
    def largest(self) -> Relation:
        return frozenset((x, y) for c in self.classes for x in c for y in c)

    def to_dict(self) -> dict:
        return {"classes": [list(c) for c in self.classes]}


def coarse_ideals(cs: CoarseSpace) -> List[CoarseIdeal]:
    """
    An ideal absorbs products with M on both sides, so with a pair (x, y) it holds
    the whole class of x squared. Ideals are the unions of class squares.
    """
    classes = cs.classes
    if len(classes) > Config.MAX_COARSE_CLASSES:
        raise BoundExceededError(f"{cs.name}: {len(classes)} classes give too many ideals to list")
    return [CoarseIdeal(tuple(chosen))
            for k in range(len(classes) + 1) for chosen in combinations(classes, k)]


def is_ideal(cs: CoarseSpace, m0: Iterable[Pair]) -> bool:
    """Is the family of subsets of m0 an ideal of cs? m0 must be closed itself."""
    m0 = frozenset(m0)
    if not cs.contains(m0) or inverse(m0) != m0 or not compose(m0, m0) <= m0:
        return False
    return compose(m0, cs.largest) <= m0 and compose(cs.largest, m0) <= m0


def is_simple_coarse(cs: CoarseSpace) -> Verdict:
    classes = cs.classes
    holds = len(classes) <= 1
    log_verdict("coarse_simple", cs.name, holds)
    if holds:
        return Verdict(True, certificate={"classes": len(classes)}, reason="only the trivial ideals")
    return Verdict(False, witness=CoarseIdeal((classes[0],)).to_dict(),
                   certificate={"classes": len(classes)}, reason="a single class generates a proper ideal")


def coarse_groupoid(cs: CoarseSpace, blockdim: int = 1) -> FiniteGroupoid:
    """M times the pair groupoid on block indices: a pair groupoid per class."""
    components = [pair_groupoid([f"{x}:{i}" for x in c for i in range(blockdim)], name=f"{cs.name}/{c[0]}")
                  for c in cs.classes]
    if not components:
        raise PreconditionError(f"{cs.name}: the coarse structure controls no pairs")
    if len(components) == 1:
        return components[0]
    return disjoint_union(*components, name=f"{cs.name}_translation")


# --- Controlled-propagation matrices ---
@dataclass(frozen=True, eq=False)
class ControlledMatrix:
    points: Tuple[str, ...]
    blockdim: int
    blocks: Dict[Pair, np.ndarray]

    @property
    def support(self) -> Relation:
        return frozenset(k for k, b in self.blocks.items() if np.any(as_complex(b) != 0))

    @property
    def exact(self) -> bool:
        return all(is_exact(b) for b in self.blocks.values())

    @cached_property
    def index(self) -> Dict[str, int]:
        return {x: i for i, x in enumerate(self.points)}


def _block(entries, k: int) -> np.ndarray:
    values = [[parse_scalar(v) for v in row] for row in entries]
    if len(values) != k or any(len(row) != k for row in values):
        raise FixtureError(f"block is not {k}x{k}")
    if all(isinstance(v, Fraction) for row in values for v in row):
        out = exact_zeros((k, k))
        for i, row in enumerate(values):
            for j, v in enumerate(row):
                out[i, j] = v
        return out
    return np.array([[complex(v) for v in row] for row in values], dtype=np.complex128)


def controlled_matrix(points: Sequence[str], blockdim: int, blocks: Mapping[Pair, object]) -> ControlledMatrix:
    """blocks maps (x, y) to a k-by-k array or nested list."""
    out = {}
    for (x, y), b in blocks.items():
        arr = b if isinstance(b, np.ndarray) else _block(b, blockdim)
        if arr.shape != (blockdim, blockdim):
            raise FixtureError(f"block at ({x}, {y}) has shape {arr.shape}, expected {blockdim}x{blockdim}")
        out[(x, y)] = arr
    return ControlledMatrix(tuple(points), blockdim, out)


def validate_controlled(cs: CoarseSpace, t: ControlledMatrix) -> ValidationReport:
    report = ValidationReport(f"{cs.name}/matrix")
    known = set(cs.points)
    for (x, y), b in t.blocks.items():
        if x not in known or y not in known:
            report.add("unknown_point", f"block at ({x}, {y}) is outside X", [x, y])
        if b.shape != (t.blockdim, t.blockdim):
            report.add("block_shape", f"block at ({x}, {y}) has shape {b.shape}", [x, y])
    outside = sorted(t.support - cs.largest)
    if outside:
        report.add("support_not_entourage", "the support is not an entourage", [list(p) for p in outside[:5]])
    return report


def assemble(t: ControlledMatrix) -> np.ndarray:
    """The (|X| k)-square operator matrix; rows and columns ordered (x, i)."""
    k = t.blockdim
    n = len(t.points) * k
    m = exact_zeros((n, n)) if t.exact else np.zeros((n, n), dtype=np.complex128)
    for (x, y), b in t.blocks.items():
        i, j = t.index[x] * k, t.index[y] * k
        m[i:i + k, j:j + k] = b if t.exact else as_complex(b)
    return m


def multiply_controlled(s: ControlledMatrix, t: ControlledMatrix) -> ControlledMatrix:
    if s.points != t.points or s.blockdim != t.blockdim:
        raise PreconditionError("controlled matrices over different points or block sizes")
    out: Dict[Pair, np.ndarray] = {}
    for (x, y), b in s.blocks.items():
        for (y2, z), c in t.blocks.items():
            if y2 != y:
                continue
            term = b @ c
            out[(x, z)] = out[(x, z)] + term if (x, z) in out else term
    return ControlledMatrix(s.points, s.blockdim, out)


@dataclass
class NormBound:
    p: float
    exact: object
    bound: object
    n: int
    block_sup: object

    def to_dict(self) -> dict:
        return {"p": "inf" if np.isinf(self.p) else self.p, "exact": str(self.exact), "bound": str(self.bound),
                "n": self.n, "block_sup": str(self.block_sup)}


def matrix_rep_norm_bound(cs: CoarseSpace, t: ControlledMatrix, p) -> NormBound:
    """||T_p|| next to sup ||T_xy|| (n(supp T)^2 + 1); raises if the bound fails."""
    p = parse_p(p)
    if p not in (1.0, 2.0) and not np.isinf(p):
        raise PreconditionError(f"norm bounds are computed for p in {{1, 2, inf}}, got {p}")
    report = validate_controlled(cs, t)
    if not report.ok:
        raise PreconditionError(f"{cs.name}: invalid controlled matrix ({', '.join(report.codes())})")
    exact = operator_norm(assemble(t), p)
    block_sup = max((operator_norm(b, p) for b in t.blocks.values()), default=Fraction(0))
    n = n_of(cs, t.support)
    bound = block_sup * (n * n + 1)
    slack = 0 if isinstance(exact, Fraction) and isinstance(bound, Fraction) else Config.NORM_REL_SLACK * float(bound)
    if exact > bound + slack:
        raise BoundExceededError(f"{cs.name}: ||T_p|| = {exact} exceeds {bound}")
    log_debug(f"{cs.name}: p={p} norm {exact} <= {bound} (n = {n})")
    return NormBound(p, exact, bound, n, block_sup)


# --- Partial translations ---
Translation = Tuple[Dict[str, np.ndarray], Relation]


def decompose_matrix(cs: CoarseSpace, t: ControlledMatrix) -> List[Translation]:
    """T = sum_k f_k E_k with E_k disjoint bisections and f_k(x) = T_xy for (x, y) in E_k."""
    return [({x: t.blocks[(x, y)] for x, y in piece}, piece)
            for piece in decompose_into_bisections(cs, t.support)]


def translation_matrix(points: Sequence[str], blockdim: int, f: Mapping[str, np.ndarray], e: Relation) -> ControlledMatrix:
    """f E: the block f(x) at (x, y) for (x, y) in the bisection E."""
    return ControlledMatrix(tuple(points), blockdim, {(x, y): f[x] for x, y in e})


def reconstruct(points: Sequence[str], blockdim: int, pieces: Sequence[Translation]) -> ControlledMatrix:
    blocks: Dict[Pair, np.ndarray] = {}
    for f, e in pieces:
        for x, y in e:
            blocks[(x, y)] = blocks[(x, y)] + f[x] if (x, y) in blocks else f[x]
    return ControlledMatrix(tuple(points), blockdim, blocks)


def compose_basic(f1: Mapping[str, np.ndarray], e1: Relation,
                  f2: Mapping[str, np.ndarray], e2: Relation) -> Translation:
    """(f1 E1)(f2 E2) = f1 (f2 o h_E1) (E1 E2), h_E1 sending x to the y with (x, y) in E1."""
    if not (is_bisection(e1) and is_bisection(e2)):
        raise PreconditionError("basic elements need bisection entourages")
    h = dict(e1)
    product = compose(e1, e2)
    return {x: f1[x] @ f2[h[x]] for x, _ in product}, product


# --- Ingestion and random corpora ---
def coarse_from_json(data: dict, name: str = "coarse") -> Tuple[CoarseSpace, Optional[ControlledMatrix]]:
    cs = make_coarse_space(data["points"], data["generators"], name=name)
    if "matrix" not in data:
        return cs, None
    k = data.get("blockdim", 1)
    blocks = {}
    for x, y, block in data["matrix"]:
        blocks[(x, y)] = block if isinstance(block, list) and block and isinstance(block[0], list) else [[block]]
    return cs, controlled_matrix(cs.points, k, blocks)


def load_coarse(path: str) -> Tuple[CoarseSpace, Optional[ControlledMatrix]]:
    data = load_validated(path, COARSE_SCHEMA)
    return coarse_from_json(data, name=data.get("name", path))


def random_entourage(rng, points: Sequence[str], density: float = 0.2) -> Relation:
    pairs = [(x, y) for x in points for y in points if rng.random() < density]
    if not pairs:
        x = points[int(rng.integers(0, len(points)))]
        pairs = [(x, x)]
    return frozenset(pairs)


def random_coarse_space(rng, max_points: int = 20, density: float = 0.2) -> Tuple[CoarseSpace, Relation]:
    """A coarse space generated by one random relation, returned with that relation."""
    n = int(rng.integers(1, max_points + 1))
    points = [f"x{i}" for i in range(n)]
    e = random_entourage(rng, points, density)
    return make_coarse_space(points, [e], name=f"random{n}"), e


def random_controlled_matrix(rng, cs: CoarseSpace, blockdim: int = 2, density: float = 0.3,
                             exact: bool = True) -> ControlledMatrix:
    support = [pair for pair in sorted(cs.largest) if rng.random() < density]
    blocks = {}
    for pair in support:
        raw = rng.integers(-3, 4, size=(blockdim, blockdim))
        if exact:
            block = exact_zeros((blockdim, blockdim))
            for (i, j), v in np.ndenumerate(raw):
                block[i, j] = Fraction(int(v))
        else:
            block = raw.astype(np.complex128) + 1j * rng.normal(size=(blockdim, blockdim))
        blocks[pair] = block
    return ControlledMatrix(cs.points, blockdim, blocks)
