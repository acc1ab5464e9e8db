"""
Finite-dimensional algebra oracles, independent of the dynamical checkers:
Burnside simplicity, generated ideals, centres, commutants, idempotent
analysis and the intersection property. Used to cross-check the groupoid
verdicts on the convolution algebra.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import Config
from error_handling import PreconditionError, UnitalityError, UnsupportedFieldError
from groupalg_utils import ValidationReport, Verdict, scalar_close
from groupoid_core import FiniteGroupoid, is_minimal, is_principal, is_topologically_free, orbits
from twisted_convolution import ConvElement, TwoCocycle, delta, is_trivial, trivial_cocycle, trivial_rep
from utils.linalg_utils import (
    as_complex,
    exact_zeros,
    in_span,
    intersection_dim,
    is_exact,
    null_space,
    rank,
    row_basis,
    stack,
)
from utils.logging_utils import log_debug, log_verdict, log_warning

Products = Dict[Tuple[int, int], List[Tuple[int, object]]]


@dataclass(frozen=True, eq=False)
class FiniteDimAlgebra:
    """Structure constants stored sparsely: (i, j) -> [(k, c)] for e_i e_j = sum c e_k."""

    labels: Tuple[str, ...]
    products: Products
    field: str = "C"
    exact: bool = True
    unit: Optional[np.ndarray] = None
    name: str = "algebra"

    @property
    def dim(self) -> int:
        return len(self.labels)

    def zero_vector(self) -> np.ndarray:
        return exact_zeros(self.dim) if self.exact else np.zeros(self.dim, dtype=np.complex128)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.zero_vector()
        v[i] = Fraction(1) if self.exact else 1.0
        return v

    def _mult_matrices(self, side: str) -> List[np.ndarray]:
        n = self.dim
        mats = [exact_zeros((n, n)) if self.exact else np.zeros((n, n), dtype=np.complex128) for _ in range(n)]
        for (i, j), terms in self.products.items():
            for k, c in terms:
                if side == "left":
                    mats[i][k, j] += c
                else:
                    mats[j][k, i] += c
        return mats

    @cached_property
    def left(self) -> List[np.ndarray]:
        """left[i][k, j] = coefficient of e_k in e_i e_j."""
        return self._mult_matrices("left")

    @cached_property
    def right(self) -> List[np.ndarray]:
        """right[j][k, i] = coefficient of e_k in e_i e_j."""
        return self._mult_matrices("right")

    @cached_property
    def _complex_ops(self) -> Tuple[List[np.ndarray], List[np.ndarray]]:
        return [as_complex(m) for m in self.left], [as_complex(m) for m in self.right]

    def ops(self, exact: bool) -> Tuple[List[np.ndarray], List[np.ndarray]]:
        """Left and right multiplication matrices, complex unless both sides are exact."""
        if exact and self.exact:
            return self.left, self.right
        return self._complex_ops


def matrix_algebra(n: int, name: Optional[str] = None) -> FiniteDimAlgebra:
    """M_n with the matrix units as basis."""
    labels = tuple(f"e{i}{j}" for i in range(n) for j in range(n))
    products: Products = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                products[(i * n + j, j * n + k)] = [(i * n + k, Fraction(1))]
    unit = exact_zeros(n * n)
    for i in range(n):
        unit[i * n + i] = Fraction(1)
    return FiniteDimAlgebra(labels, products, unit=unit, name=name or f"M{n}")


def from_groupoid(g: FiniteGroupoid, sigma: Optional[TwoCocycle] = None) -> FiniteDimAlgebra:
    """Point masses as basis: delta_a delta_b = sigma(a, b) delta_ab when composable."""
    sigma = sigma or trivial_cocycle(g)
    exact = sigma.exact
    products: Products = {}
    for (a, b), c in g.compose_table.items():
        value = sigma(a, b)
        products[(a, b)] = [(c, value if exact else complex(value))]
    unit = exact_zeros(len(g)) if exact else np.zeros(len(g), dtype=np.complex128)
    for x in g.units:
        unit[x] = Fraction(1) if exact else 1.0
    return FiniteDimAlgebra(g.labels, products, field=sigma.field, exact=exact, unit=unit, name=g.name)


def element_vector(a: FiniteDimAlgebra, f: ConvElement) -> np.ndarray:
    if a.exact and f.exact:
        v = a.zero_vector()
        for i, c in enumerate(f.coeffs):
            v[i] = Fraction(c)
        return v
    return np.array([complex(c) for c in f.coeffs], dtype=np.complex128)


def multiply(a: FiniteDimAlgebra, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    exact = is_exact(v) and is_exact(w) and a.exact
    out = a.zero_vector() if exact else np.zeros(a.dim, dtype=np.complex128)
    for (i, j), terms in a.products.items():
        vi, wj = v[i], w[j]
        if vi != 0 and wj != 0:
            for k, c in terms:
                out[k] += vi * wj * c
    return out


def _vectors_close(v: np.ndarray, w: np.ndarray, tol: float) -> bool:
    return all(scalar_close(x, y, tol) for x, y in zip(v.tolist(), w.tolist()))


def validate_algebra(a: FiniteDimAlgebra) -> ValidationReport:
    report = ValidationReport(subject=a.name)
    tol = Config.FLOAT_TOL
    basis = [a.basis_vector(i) for i in range(a.dim)]
    for i in range(a.dim):
        for j in range(a.dim):
            ij = multiply(a, basis[i], basis[j])
            for k in range(a.dim):
                lhs = multiply(a, ij, basis[k])
                rhs = multiply(a, basis[i], multiply(a, basis[j], basis[k]))
                if not _vectors_close(lhs, rhs, tol):
                    report.add("associativity", "(e_i e_j) e_k != e_i (e_j e_k)",
                               [a.labels[i], a.labels[j], a.labels[k]])
    if a.unit is not None:
        for i, e in enumerate(basis):
            if not (_vectors_close(multiply(a, a.unit, e), e, tol) and _vectors_close(multiply(a, e, a.unit), e, tol)):
                report.add("unit_law", "1 e_i = e_i = e_i 1 fails", [a.labels[i]])
    return report


def _mult_matrix(a: FiniteDimAlgebra, v: np.ndarray, side: str) -> np.ndarray:
    """Matrix of x -> v x (side "left") or x -> x v (side "right")."""
    exact = is_exact(v)
    left, right = a.ops(exact)
    mats = left if side == "left" else right
    out = exact_zeros((a.dim, a.dim)) if exact and a.exact else np.zeros((a.dim, a.dim), dtype=np.complex128)
    for i in range(a.dim):
        if v[i] != 0:
            out = out + v[i] * mats[i]
    return out


# --- Ideals ---
def generated_ideal(a: FiniteDimAlgebra, v: np.ndarray) -> np.ndarray:
    """Row basis of the two-sided ideal generated by v (rank-stabilizing fixpoint)."""
    current = row_basis(np.atleast_2d(v))
    if rank(current) == 0:
        return current[:0]
    left, right = a.ops(is_exact(current))
    while True:
        images = [current]
        for i in range(a.dim):
            images.append((left[i] @ current.T).T)
            images.append((right[i] @ current.T).T)
        grown = row_basis(stack(*images))
        if grown.shape[0] == current.shape[0]:
            return grown
        current = grown


def _contains(big: np.ndarray, small: np.ndarray) -> bool:
    if small.shape[0] == 0:
        return True
    return rank(stack(big, small)) == rank(big)


def centre(a: FiniteDimAlgebra) -> np.ndarray:
    """Row basis of {z : z e_i = e_i z for all i}."""
    left, right = a.ops(a.dim * a.dim <= Config.EXACT_RANK_MAX_DIM)
    return null_space(stack(*[right[i] - left[i] for i in range(a.dim)]))


def _require_unital_complex(a: FiniteDimAlgebra) -> None:
    if a.field != "C":
        raise UnsupportedFieldError(f"{a.name}: the simplicity oracle needs an algebraically closed field; complexify first")
    if a.unit is None:
        raise UnitalityError(f"{a.name}: the simplicity oracle needs a unital algebra")


def _proper_central_ideal(a: FiniteDimAlgebra, z_basis: np.ndarray) -> Optional[np.ndarray]:
    """(z - lambda) A for a central z that is not a scalar and an eigenvalue lambda of L_z."""
    for z in z_basis:
        if in_span(np.atleast_2d(a.unit), z):
            continue
        lam = complex(np.linalg.eigvals(as_complex(_mult_matrix(a, z, "left")))[0])
        if is_exact(z) and abs(lam.imag) < 1e-9:
            shifted = z - Fraction(lam.real).limit_denominator(1000) * a.unit
            if rank(_mult_matrix(a, shifted, "left")) < a.dim:
                return generated_ideal(a, shifted)
        return generated_ideal(a, as_complex(z) - lam * as_complex(a.unit))
    return None


def _trace_radical(a: FiniteDimAlgebra) -> np.ndarray:
    """{x : tr(L_{x y}) = 0 for all y}; the Jacobson radical in characteristic zero."""
    n = a.dim
    form = exact_zeros((n, n)) if a.exact else np.zeros((n, n), dtype=np.complex128)
    traces = [np.trace(a.left[k]) for k in range(n)]
    for (i, j), terms in a.products.items():
        for k, c in terms:
            form[i, j] += c * traces[k]
    return null_space(form)


def is_simple_burnside(a: FiniteDimAlgebra) -> Verdict:
    """Simple iff the operators L_{e_i} R_{e_j} span End(A) (Burnside, over C)."""
    _require_unital_complex(a)
    n = a.dim
    if n == 0:
        return Verdict(False, reason="zero algebra")
    left, right = a.ops(n * n <= Config.EXACT_RANK_MAX_DIM)
    achieved = rank(stack(*[(left[i] @ right[j]).reshape(-1) for i in range(n) for j in range(n)]))
    certificate = {"rank": achieved, "target": n * n, "dim": n}
    if achieved == n * n:
        log_verdict("simple_burnside", a.name, True)
        return Verdict(True, certificate=certificate, reason="multiplication algebra is all of End(A)")
    z_basis = centre(a)
    certificate["centre_dim"] = int(z_basis.shape[0])
    ideal = _proper_central_ideal(a, z_basis) if z_basis.shape[0] > 1 else None
    method = "central"
    if ideal is None:
        ideal = _trace_radical(a)
        method = "radical"
    ideal_dim = int(ideal.shape[0])
    crosscheck = 0 < ideal_dim < n and _contains(ideal, generated_ideal(a, ideal[0]))
    if not crosscheck:
        log_warning(f"{a.name}: ideal witness failed its generated_ideal cross-check")
    certificate.update({"ideal_dim": ideal_dim, "method": method, "crosscheck": crosscheck})
    log_verdict("simple_burnside", a.name, False)
    return Verdict(False, witness=ideal, certificate=certificate, reason="proper non-zero ideal")


def complexify(a: FiniteDimAlgebra) -> FiniteDimAlgebra:
    return FiniteDimAlgebra(a.labels, a.products, field="C", exact=a.exact, unit=a.unit, name=f"{a.name}_C")


def is_simple_complexified(a: FiniteDimAlgebra) -> Verdict:
    if a.field == "C":
        return is_simple_burnside(a)
    verdict = is_simple_burnside(complexify(a))
    verdict.reason = f"{verdict.reason} (decided over C after complexification of a real algebra)"
    return verdict


# --- Commutants ---
def _check_abelian(a: FiniteDimAlgebra, s: np.ndarray) -> None:
    tol = Config.FLOAT_TOL
    for v in s:
        for w in s:
            if not _vectors_close(multiply(a, v, w), multiply(a, w, v), tol):
                raise PreconditionError(f"{a.name}: subspace is not abelian")


def commutant(a: FiniteDimAlgebra, s: np.ndarray) -> np.ndarray:
    """Row basis of {x : v x = x v for every v in s}."""
    s = np.atleast_2d(s)
    _check_abelian(a, s)
    blocks = [_mult_matrix(a, v, "left") - _mult_matrix(a, v, "right") for v in s]
    if not blocks:
        return row_basis(np.eye(a.dim, dtype=object if a.exact else np.complex128))
    return null_space(stack(*blocks))


def is_maximal_abelian(a: FiniteDimAlgebra, s: np.ndarray) -> Verdict:
    s = row_basis(np.atleast_2d(s))
    comm = commutant(a, s)
    holds = comm.shape[0] == s.shape[0]
    witness = None
    if not holds:
        witness = next((c for c in comm if not in_span(s, c)), None)
    log_verdict("maximal_abelian", a.name, holds)
    return Verdict(holds, witness=witness,
                   certificate={"subspace_dim": int(s.shape[0]), "commutant_dim": int(comm.shape[0])},
                   reason="commutant equals the subspace" if holds else "commutant is larger")


def diagonal(a: FiniteDimAlgebra, g: FiniteGroupoid) -> np.ndarray:
    """Span of the unit point masses, as rows."""
    if a.labels != g.labels:
        raise PreconditionError("algebra was not built from this groupoid")
    return stack(*[a.basis_vector(x) for x in g.unit_list])


# --- Idempotents ---
def _image_dim(a: FiniteDimAlgebra, e: np.ndarray) -> int:
    """dim(eA), the rank of left multiplication by e."""
    return rank(_mult_matrix(a, e, "left"))


def _check_idempotent(a: FiniteDimAlgebra, e: np.ndarray) -> None:
    e2 = multiply(a, e, e)
    if is_exact(e2) and is_exact(e):
        ok = all(x == y for x, y in zip(e2.tolist(), e.tolist()))
    else:
        ok = float(np.linalg.norm(as_complex(e2) - as_complex(e))) <= Config.IDEMPOTENT_TOL
    if not ok:
        raise PreconditionError(f"{a.name}: element is not idempotent")


def is_infinite_idempotent(a: FiniteDimAlgebra, e: np.ndarray) -> Verdict:
    """
    e ~ f < e would force dim(fA) = dim(eA) and fA strictly inside eA at once,
    so a finite value of dim(eA) rules out infiniteness.
    """
    _check_idempotent(a, e)
    dim_ea = _image_dim(a, e)
    holds = math.isinf(dim_ea)
    certificate = {"dim_eA": dim_ea, "dim_A": a.dim}
    reason = "" if holds else f"e ~ f forces dim(fA) = {dim_ea} while f < e forces dim(fA) < {dim_ea}"
    log_verdict("infinite_idempotent", a.name, holds)
    return Verdict(holds, certificate=certificate, reason=reason)


# --- Intersection property ---
def minimal_ideals(a: FiniteDimAlgebra) -> List[np.ndarray]:
    """Minimal two-sided ideals A eps_i of a semisimple algebra over C, split by a generic central element."""
    _require_unital_complex(a)
    z_basis = as_complex(centre(a))
    rng = np.random.default_rng(Config.DEFAULT_SEED)
    weights = rng.normal(size=z_basis.shape[0]) + 1j * rng.normal(size=z_basis.shape[0])
    c = weights @ z_basis
    lc = as_complex(_mult_matrix(a, c, "left"))
    eigenvalues: List[complex] = []
    for lam in np.linalg.eigvals(lc):
        if all(abs(lam - mu) > 1e-6 * max(1.0, abs(mu)) for mu in eigenvalues):
            eigenvalues.append(complex(lam))
    ideals = [null_space(lc - lam * np.eye(a.dim)) for lam in eigenvalues]
    log_debug(f"{a.name}: {len(ideals)} minimal ideals of dims {[i.shape[0] for i in ideals]}")
    return ideals


def detects_ideals(a: FiniteDimAlgebra, s: np.ndarray) -> Verdict:
    """Every non-zero ideal meets s; for semisimple A it suffices to test the minimal ideals."""
    s = np.atleast_2d(s)
    for k, ideal in enumerate(minimal_ideals(a)):
        if intersection_dim(ideal, s) == 0:
            log_verdict("detects_ideals", a.name, False)
            return Verdict(False, witness=ideal, certificate={"ideal_index": k, "ideal_dim": int(ideal.shape[0])},
                           reason="a minimal ideal misses the subalgebra")
    log_verdict("detects_ideals", a.name, True)
    return Verdict(True, reason="every minimal ideal meets the subalgebra")


# --- Cross-checks against the groupoid verdicts ---
def trivial_rep_kernel(g: FiniteGroupoid) -> Verdict:
    """Injectivity of f -> trivial_rep(f) on the untwisted algebra; witness a kernel element."""
    columns = [trivial_rep(delta(g, a)).matrix.reshape(-1) for a in g.arrows]
    m = stack(*columns).T if columns else exact_zeros((0, 0))
    kernel = null_space(m) if columns else m
    holds = kernel.shape[0] == 0
    witness = None
    if not holds:
        witness = {g.label(a): c for a, c in enumerate(kernel[0].tolist()) if c != 0}
    log_verdict("trivial_rep_injective", g.name, holds)
    return Verdict(holds, witness=witness, certificate={"kernel_dim": int(kernel.shape[0])},
                   reason="trivial representation is injective" if holds else "non-zero kernel")


def crosscheck(g: FiniteGroupoid, sigma: Optional[TwoCocycle] = None) -> Dict[str, object]:
    """Compare the algebra oracle with the groupoid checkers; every agreement flag should be True."""
    sigma = sigma or trivial_cocycle(g)
    a = complexify(from_groupoid(g, sigma)) if sigma.field == "R" else from_groupoid(g, sigma)
    simple = bool(is_simple_burnside(a))
    maxab = bool(is_maximal_abelian(a, diagonal(a, g)))
    topfree = bool(is_topologically_free(g))
    minimal = bool(is_minimal(g))
    out: Dict[str, object] = {
        "discrete": g.is_discrete,
        "simple": simple,
        "diagonal_maximal_abelian": maxab,
        "topologically_free": topfree,
        "minimal": minimal,
    }
    if not g.is_discrete:
        # finite non-discrete groupoids are outside the theorem hypotheses
        log_verdict("crosscheck", g.name, "skipped (non-discrete)")
        return out
    out["theorem_agrees"] = (simple and maxab) == (topfree and minimal)
    if is_trivial(sigma):
        transitive = len(orbits(g)) <= 1
        out["untwisted_agrees"] = simple == (bool(is_principal(g)) and transitive)
        out["trivial_rep_agrees"] = bool(trivial_rep_kernel(g)) == topfree
    log_verdict("crosscheck", g.name, all(v for k, v in out.items() if k.endswith("agrees")))
    return out
