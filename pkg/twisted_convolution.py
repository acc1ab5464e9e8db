"""
Twisted convolution algebra of a finite groupoid: 2-cocycles, elements,
convolution and involution, Hahn norms, the regular and trivial representations,
operator norms for p in {1, 2, inf}, the Holder-type norm bound and conditional
expectations onto bisections.

Scalars are exact (int/Fraction) whenever every input is real rational; any
complex input switches to Python complex with tolerance Config.FLOAT_TOL.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from config import Config
from error_handling import CocycleValueError, PreconditionError
from groupalg_utils import ValidationReport, parse_scalar, load_validated, scalar_close
from groupoid_core import Bisection, FiniteGroupoid, bisection
from src.utils.json_validator import COCYCLE_SCHEMA, CONV_ELEMENT_SCHEMA
from utils.linalg_utils import as_complex, exact_zeros
from utils.logging_utils import log_debug, log_warning

Scalar = Union[int, Fraction, complex]
ONE = Fraction(1)
ZERO = Fraction(0)
FIELDS = ("R", "C")


def _is_exact(value) -> bool:
    return isinstance(value, (int, Fraction))


def _conj(value: Scalar) -> Scalar:
    return value.conjugate()


def _snap(part: float) -> float:
    if not math.isfinite(part):
        return part
    nearest = round(part)
    return float(nearest) if abs(part - nearest) <= Config.FLOAT_TOL else part


def _normalize(value: Scalar) -> Scalar:
    """
    Snap complex parts lying within FLOAT_TOL of an integer, so Gaussian integers
    (the fourth roots of unity among them) are held exactly; a value that is then
    a real integer folds back to Fraction.
    """
    if not isinstance(value, complex):
        return value
    re, im = _snap(value.real), _snap(value.imag)
    if im == 0 and re.is_integer():
        return Fraction(int(re))
    return complex(re, im)


def parse_p(p) -> float:
    if isinstance(p, str):
        p = math.inf if p.strip().lower() in ("inf", "infinity", "∞") else float(p)
    p = float(p)
    if not (p >= 1):
        raise PreconditionError(f"p must lie in [1, inf], got {p}")
    return p


# --- Cocycles ---
@dataclass(frozen=True, eq=False)
class TwoCocycle:
    groupoid: FiniteGroupoid
    field: str
    values: Mapping[Tuple[int, int], Scalar]

    def __call__(self, a: int, b: int) -> Scalar:
        return self.values.get((a, b), ONE)

    @property
    def exact(self) -> bool:
        return all(_is_exact(v) for v in self.values.values())


def make_cocycle(g: FiniteGroupoid, values: Mapping[Tuple[int, int], Scalar], field: str = "C") -> TwoCocycle:
    """Check unimodularity (and reality over R) before building the cocycle."""
    if field not in FIELDS:
        raise PreconditionError(f"field must be one of {FIELDS}")
    clean = {}
    for (a, b), raw in values.items():
        value = _normalize(raw)
        if abs(abs(complex(value)) - 1) > Config.FLOAT_TOL:
            raise CocycleValueError(f"sigma({g.label(a)}, {g.label(b)}) = {raw} is not unimodular")
        if field == "R":
            if not _is_exact(value):
                if abs(complex(value).imag) > Config.FLOAT_TOL:
                    raise CocycleValueError(f"sigma({g.label(a)}, {g.label(b)}) = {raw} is not real")
                value = Fraction(round(complex(value).real))
        if value != ONE:
            clean[(a, b)] = value
    return TwoCocycle(groupoid=g, field=field, values=clean)


def trivial_cocycle(g: FiniteGroupoid, field: str = "C") -> TwoCocycle:
    return TwoCocycle(groupoid=g, field=field, values={})


def coboundary_cocycle(g: FiniteGroupoid, b: Mapping[int, Scalar], field: str = "C") -> TwoCocycle:
    """sigma(x, y) = b(x) b(y) / b(xy); b must be 1 on units."""
    def at(a):
        return ONE if a in g.units else b.get(a, ONE)

    values = {(x, y): at(x) * at(y) / at(z) for (x, y), z in g.compose_table.items()}
    return make_cocycle(g, values, field=field)


def is_trivial(sigma: TwoCocycle) -> bool:
    return all(scalar_close(v, ONE, Config.FLOAT_TOL) for v in sigma.values.values())


def validate_cocycle(sigma: TwoCocycle) -> ValidationReport:
    g = sigma.groupoid
    report = ValidationReport(subject=f"cocycle on {g.name}")
    tol = Config.FLOAT_TOL
    L = g.label
    for (a, b), value in sigma.values.items():
        if abs(abs(complex(value)) - 1) > tol:
            raise CocycleValueError(f"sigma({L(a)}, {L(b)}) = {value} is not unimodular")
        if not g.composable(a, b):
            report.add("not_composable", "value given on a non-composable pair", [L(a), L(b)])
    for a in g.arrows:
        if not scalar_close(sigma(g.r(a), a), ONE, tol) or not scalar_close(sigma(a, g.d(a)), ONE, tol):
            report.add("normalization", "sigma(r(a), a) = 1 = sigma(a, d(a)) fails", [L(a)])
    for (a, b), ab in g.compose_table.items():
        for c in g.by_range.get(g.d(b), []):
            bc = g.mul(b, c)
            lhs = sigma(a, b) * sigma(ab, c)
            rhs = sigma(b, c) * sigma(a, bc)
            if not scalar_close(lhs, rhs, tol):
                report.add("cocycle_identity", "sigma(a,b)sigma(ab,c) != sigma(b,c)sigma(a,bc)", [L(a), L(b), L(c)])
    return report


def load_cocycle(path: str, g: FiniteGroupoid) -> TwoCocycle:
    data = load_validated(path, COCYCLE_SCHEMA)
    values = {}
    for entry in data["values"]:
        a, b = g.index(entry[0]), g.index(entry[1])
        values[(a, b)] = parse_scalar(entry[2:])
    return make_cocycle(g, values, field=data.get("field", "C"))


def cocycle_to_json(sigma: TwoCocycle) -> dict:
    g = sigma.groupoid
    values = []
    for (a, b), value in sorted(sigma.values.items()):
        scalar = [int(value)] if _is_exact(value) else [complex(value).real, complex(value).imag]
        values.append([g.label(a), g.label(b)] + scalar)
    return {"field": sigma.field, "values": values}


# --- Elements ---
@dataclass(frozen=True, eq=False)
class ConvElement:
    groupoid: FiniteGroupoid
    coeffs: Tuple[Scalar, ...]

    def __getitem__(self, arrow: int) -> Scalar:
        return self.coeffs[arrow]

    @property
    def exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs)

    @property
    def support(self) -> frozenset:
        return frozenset(a for a, c in enumerate(self.coeffs) if c != 0)

    def __add__(self, other: "ConvElement") -> "ConvElement":
        _same_groupoid(self, other)
        return ConvElement(self.groupoid, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ConvElement") -> "ConvElement":
        _same_groupoid(self, other)
        return ConvElement(self.groupoid, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def scale(self, c: Scalar) -> "ConvElement":
        return ConvElement(self.groupoid, tuple(c * x for x in self.coeffs))

    def close_to(self, other: "ConvElement", tol: Optional[float] = None) -> bool:
        tol = Config.FLOAT_TOL if tol is None else tol
        return all(scalar_close(x, y, tol) for x, y in zip(self.coeffs, other.coeffs))

    def as_dict(self) -> dict:
        return {self.groupoid.label(a): c for a, c in enumerate(self.coeffs) if c != 0}


def _same_groupoid(f: ConvElement, h: ConvElement) -> None:
    if f.groupoid is not h.groupoid:
        raise PreconditionError(f"elements live on different groupoids ({f.groupoid.name}, {h.groupoid.name})")


def element(g: FiniteGroupoid, coeffs: Mapping) -> ConvElement:
    """coeffs keyed by arrow id or label."""
    out = [ZERO] * len(g)
    for key, value in coeffs.items():
        out[g.index(key) if isinstance(key, str) else key] = value
    return ConvElement(g, tuple(out))


def zero(g: FiniteGroupoid) -> ConvElement:
    return ConvElement(g, (ZERO,) * len(g))


def delta(g: FiniteGroupoid, arrow: int) -> ConvElement:
    return element(g, {arrow: ONE})


def indicator(g: FiniteGroupoid, arrows: Iterable[int]) -> ConvElement:
    return element(g, {a: ONE for a in arrows})


def unit_element(g: FiniteGroupoid) -> ConvElement:
    """1_X, the unit of the algebra of a groupoid with finite unit space."""
    return indicator(g, g.units)


def random_element(g: FiniteGroupoid, rng, exact: bool = True, density: float = 0.6) -> ConvElement:
    coeffs = []
    for _ in g.arrows:
        if rng.random() > density:
            coeffs.append(ZERO)
        elif exact:
            coeffs.append(Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5))))
        else:
            coeffs.append(complex(rng.normal(), rng.normal()))
    return ConvElement(g, tuple(coeffs))


def load_element(path: str, g: FiniteGroupoid) -> ConvElement:
    data = load_validated(path, CONV_ELEMENT_SCHEMA)
    return element(g, {label: parse_scalar(raw) for label, raw in data["coeffs"].items()})


# --- Algebra operations ---
def convolve(f: ConvElement, h: ConvElement, sigma: Optional[TwoCocycle] = None) -> ConvElement:
    """(f*h)(c) = sum over a b = c of sigma(a, b) f(a) h(b)."""
    _same_groupoid(f, h)
    g = f.groupoid
    sigma = sigma or trivial_cocycle(g)
    if sigma.groupoid is not g:
        raise PreconditionError("cocycle and elements live on different groupoids")
    out = [ZERO] * len(g)
    for (a, b), c in g.compose_table.items():
        fa, hb = f.coeffs[a], h.coeffs[b]
        if fa != 0 and hb != 0:
            out[c] = out[c] + sigma(a, b) * fa * hb
    return ConvElement(g, tuple(_normalize(x) for x in out))


def involute(f: ConvElement, sigma: Optional[TwoCocycle] = None) -> ConvElement:
    """f*(c) = conj(sigma(c, c^-1)) conj(f(c^-1))."""
    g = f.groupoid
    sigma = sigma or trivial_cocycle(g)
    return ConvElement(g, tuple(
        _normalize(_conj(sigma(a, g.inv(a))) * _conj(f.coeffs[g.inv(a)])) for a in g.arrows
    ))


def _abs(value: Scalar):
    return abs(value)


def norm(f: ConvElement, kind: str = "I"):
    """sup, star_d, star_r, I (max of the two star norms) or L1."""
    g = f.groupoid
    if kind == "sup":
        return max((_abs(c) for c in f.coeffs), default=ZERO)
    if kind == "L1":
        return sum((_abs(c) for c in f.coeffs), ZERO)
    if kind == "star_d":
        return max((sum((_abs(f.coeffs[a]) for a in g.by_domain[x]), ZERO) for x in g.unit_list), default=ZERO)
    if kind == "star_r":
        return max((sum((_abs(f.coeffs[a]) for a in g.by_range[x]), ZERO) for x in g.unit_list), default=ZERO)
    if kind == "I":
        return max(norm(f, "star_d"), norm(f, "star_r"))
    raise PreconditionError(f"unknown norm kind {kind!r}")


# --- Representations ---
@dataclass(frozen=True, eq=False)
class RepMatrix:
    matrix: np.ndarray
    index: Tuple[str, ...]
    kind: str
    p: float

    @property
    def exact(self) -> bool:
        return self.matrix.dtype == object


def _new_matrix(n: int, exact: bool) -> np.ndarray:
    return exact_zeros((n, n)) if exact else np.zeros((n, n), dtype=np.complex128)


def regular_rep(f: ConvElement, sigma: Optional[TwoCocycle] = None, p=2) -> RepMatrix:
    """A[c, e] = sigma(c e^-1, e) f(c e^-1) when d(c) = d(e); the matrix of xi -> f * xi."""
    g = f.groupoid
    sigma = sigma or trivial_cocycle(g)
    exact = f.exact and sigma.exact
    m = _new_matrix(len(g), exact)
    for c in g.arrows:
        for e in g.by_domain[g.d(c)]:
            a = g.mul(c, g.inv(e))
            value = sigma(a, e) * f.coeffs[a]
            m[c, e] = value if exact else complex(value)
    return RepMatrix(matrix=m, index=g.labels, kind="regular", p=parse_p(p))


def j_map(rep: RepMatrix, g: FiniteGroupoid) -> ConvElement:
    """Read f back from its regular representation: f(c) = A[c, d(c)]."""
    if rep.kind != "regular":
        raise PreconditionError("j-map reads a regular representation")
    return ConvElement(g, tuple(_normalize(rep.matrix[c, g.d(c)]) for c in g.arrows))


def trivial_rep(f: ConvElement, p=2, sigma: Optional[TwoCocycle] = None) -> RepMatrix:
    """B[x, y] = sum of f(c) over arrows c from y to x (untwisted only)."""
    g = f.groupoid
    if sigma is not None and not is_trivial(sigma):
        raise PreconditionError("the trivial representation needs an untwisted algebra")
    units = g.unit_list
    pos = {x: i for i, x in enumerate(units)}
    m = _new_matrix(len(units), f.exact)
    for a in g.arrows:
        value = f.coeffs[a]
        if value != 0:
            m[pos[g.r(a)], pos[g.d(a)]] += value if f.exact else complex(value)
    return RepMatrix(matrix=m, index=tuple(g.label(x) for x in units), kind="trivial", p=parse_p(p))


def operator_norm(rep: Union[RepMatrix, np.ndarray], p) -> Union[Fraction, float]:
    m = rep.matrix if isinstance(rep, RepMatrix) else np.asarray(rep)
    p = parse_p(p)
    if m.size == 0:
        return ZERO
    if p == 1:
        if m.dtype == object:
            return max(sum((abs(x) for x in m[:, j]), ZERO) for j in range(m.shape[1]))
        return float(np.max(np.sum(np.abs(m), axis=0)))
    if math.isinf(p):
        if m.dtype == object:
            return max(sum((abs(x) for x in m[i, :]), ZERO) for i in range(m.shape[0]))
        return float(np.max(np.sum(np.abs(m), axis=1)))
    if p == 2:
        return float(scipy.linalg.svdvals(as_complex(m))[0])
    raise PreconditionError(f"exact operator norms only for p in {{1, 2, inf}}, got {p}")


def lp_norm_bound(f: ConvElement, p) -> Union[Fraction, float]:
    """||f||_{*d}^{1/p} ||f||_{*r}^{1/q} with 1/p + 1/q = 1."""
    p = parse_p(p)
    star_d, star_r = norm(f, "star_d"), norm(f, "star_r")
    if p == 1:
        return star_d
    if math.isinf(p):
        return star_r
    return float(star_d) ** (1 / p) * float(star_r) ** (1 - 1 / p)


# --- Expectations ---
def expectation_restrict(f: ConvElement, u: Union[Bisection, Iterable[int]]) -> ConvElement:
    """E_U(f) = f restricted to the bisection U."""
    g = f.groupoid
    arrows = u.arrows if isinstance(u, Bisection) else bisection(g, u).arrows
    log_debug(f"restricting element on {g.name} to {len(arrows)} arrows")
    return ConvElement(g, tuple(c if a in arrows else ZERO for a, c in enumerate(f.coeffs)))


def diagonal_sup(f: ConvElement):
    """||E_X(f)||_inf."""
    return norm(expectation_restrict(f, f.groupoid.units), "sup")


def check_faithfulness(f: ConvElement, sigma: Optional[TwoCocycle] = None) -> dict:
    """||E_X(f)||_inf <= ||Lambda_p(f)|| for p in {1, 2, inf}; returns the numbers."""
    rep = regular_rep(f, sigma)
    lhs = float(diagonal_sup(f))
    out = {"diagonal_sup": lhs}
    for p in (1, 2, math.inf):
        rhs = float(operator_norm(rep, p))
        out[str(p)] = rhs
        if lhs > rhs * (1 + Config.NORM_REL_SLACK) + Config.FLOAT_TOL:
            log_warning(f"faithfulness inequality fails at p={p}: {lhs} > {rhs}")
    return out
