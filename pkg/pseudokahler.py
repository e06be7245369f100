"""
The pseudo-Kahler form

    omega = i dx ^ dx* + dy ^ dz* + dy* ^ dz

on the non-nilpotent group, in real coordinates (Re x, Im x, Re y, Im y, Re z, Im z):
compatibility with J, the metric g(u, v) = omega(u, Jv) and its signature,
invariance under lattice translations, and the Maurer-Cartan description
omega_1 = dx, omega_2 = e^x dy, omega_3 = e^-x dz.
"""

import cmath

from dataclasses import dataclass
from itertools import combinations
from typing import Union

import numpy as np
import scipy.linalg
import sympy

from loguru import logger
from pydantic import BaseModel, ConfigDict

from algebra_kernel import exact_matrix, is_exact, to_rational
from complex_structures import AlmostComplexStructure, j0
from config import DEFAULT_TOL, SIGNATURE_TOL
from errors import CompatibilityError, DimensionError, SpecError
from lattices import Classification, LatticeSpecSolv, classify, log_generators
from lie_core import AlgebraKind, StructureAlgebra, bracket, catalog


@dataclass(frozen=True, eq=False)
class ConstantTwoForm:
    """Skew coefficient matrix S: omega(u, v) = u^T S v."""

    S: Union[sympy.Matrix, np.ndarray]

    def __post_init__(self):
        exact = not isinstance(self.S, np.ndarray) and is_exact(self.S)
        S = exact_matrix(self.S) if exact else np.asarray(self.S, dtype=float)
        if len(S.shape) != 2 or S.shape[0] != S.shape[1]:
            raise DimensionError(f"two-form matrix must be square, got {S.shape}")
        if not (S.T == -S if exact else np.allclose(S.T, -S)):
            raise SpecError("two-form matrix is not skew")
        object.__setattr__(self, "S", S)

    @property
    def exact(self) -> bool:
        return isinstance(self.S, sympy.MatrixBase)

    def to_numpy(self) -> np.ndarray:
        return np.array(self.S.tolist(), dtype=float) if self.exact else self.S

    def evaluate(self, u, v):
        if self.exact and is_exact(u) and is_exact(v):
            return (sympy.Matrix([list(u)]) * self.S * sympy.Matrix(list(v)))[0, 0]
        return float(np.asarray(u, dtype=float) @ self.to_numpy() @ np.asarray(v, dtype=float))

    def is_closed(self) -> bool:
        """Constant coefficients in linear coordinates, so d omega = 0."""
        return True

    def is_nondegenerate(self, tol: float = SIGNATURE_TOL) -> bool:
        if self.exact:
            return self.S.det() != 0
        return abs(np.linalg.det(self.S)) > tol


def omega_standard() -> ConstantTwoForm:
    S = sympy.zeros(6, 6)
    S[0, 1] = 2  # i dx ^ dx* = 2 d(Re x) ^ d(Im x)
    S[2, 4] = 2
    S[3, 5] = 2
    S = S - S.T
    form = ConstantTwoForm(S)
    assert form.is_closed()
    return form


def coordinate_j0() -> AlmostComplexStructure:
    return j0(3)


def _pair_up(S: ConstantTwoForm, J: AlmostComplexStructure):
    if J.size != S.S.shape[0]:
        raise DimensionError(f"J of size {J.size} against a two-form on dimension {S.S.shape[0]}")
    if S.exact and J.exact:
        return S.S, J.J
    return S.to_numpy(), J.to_numpy()


def compatibility_check(S: ConstantTwoForm, J: AlmostComplexStructure, tol: float = DEFAULT_TOL) -> bool:
    """omega(Ju, Jv) = omega(u, v), i.e. J^T S J = S."""
    Sm, Jm = _pair_up(S, J)
    if isinstance(Sm, sympy.MatrixBase):
        return Jm.T * Sm * Jm == Sm
    return bool(np.max(np.abs(Jm.T @ Sm @ Jm - Sm)) <= tol * max(1.0, np.max(np.abs(Sm))))


class FormCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    metric: list[list[float]]
    signature: tuple[int, int]
    nondegenerate: bool

    @property
    def definite(self) -> bool:
        return self.nondegenerate and 0 in self.signature


def metric_and_signature(S: ConstantTwoForm, J: AlmostComplexStructure, tol: float = SIGNATURE_TOL) -> FormCheck:
    """G = S J, the matrix of g(u, v) = omega(u, Jv); signature by eigenvalue signs."""
    Sm, Jm = _pair_up(S, J)
    G = np.array((Sm * Jm).tolist(), dtype=float) if isinstance(Sm, sympy.MatrixBase) else Sm @ Jm
    if not np.allclose(G, G.T, atol=tol * max(1.0, np.max(np.abs(G)))):
        raise CompatibilityError("omega(., J.) is not symmetric; omega and J are not compatible")
    values = scipy.linalg.eigvalsh((G + G.T) / 2)
    p = int(np.sum(values > tol))
    q = int(np.sum(values < -tol))
    check = FormCheck(metric=G.tolist(), signature=(p, q), nondegenerate=p + q == len(values))
    if not check.nondegenerate:
        logger.debug(f"degenerate metric, eigenvalues {values}")
    return check


def translation_pullback_factor(lam: complex) -> complex:
    """Factor picked up by dy ^ dz* under left translation by x = lam: e^lam * conj(e^-lam)."""
    return cmath.exp(2j * complex(lam).imag)


def invariance_factors(spec: LatticeSpecSolv) -> list:
    return [translation_pullback_factor(x) for x in log_generators(spec)]


def pk_exists(classification: Classification) -> bool:
    return Classification(classification) in (Classification.TYPE1, Classification.TYPE3B)


def ce_differential(g: StructureAlgebra, alpha) -> sympy.Matrix:
    """d alpha(e_i, e_j) = -alpha([e_i, e_j]) for an invariant 1-form alpha."""
    if len(alpha) != g.dim:
        raise DimensionError(f"covector of length {len(alpha)} on an algebra of dimension {g.dim}")
    alpha = [to_rational(a) for a in alpha]
    D = sympy.zeros(g.dim, g.dim)
    for i, j in combinations(range(g.dim), 2):
        image = bracket(g, g.basis_vector(i), g.basis_vector(j))
        D[i, j] = -sum(a * c for a, c in zip(alpha, image))
        D[j, i] = -D[i, j]
    return D


def ce_differential_2form(g: StructureAlgebra, beta) -> dict:
    """
    d beta(e_i, e_j, e_k) = -beta([e_i,e_j], e_k) + beta([e_i,e_k], e_j) - beta([e_j,e_k], e_i)
    for a skew matrix beta, keyed by i < j < k.
    """
    B = exact_matrix(beta)
    if B.shape != (g.dim, g.dim):
        raise DimensionError(f"2-form of shape {B.shape} on an algebra of dimension {g.dim}")

    def value(u, v):
        return (sympy.Matrix([list(u)]) * B * sympy.Matrix(list(v)))[0, 0]

    e = [g.basis_vector(k) for k in range(g.dim)]
    out = {}
    for i, j, k in combinations(range(g.dim), 3):
        out[(i, j, k)] = (
            -value(bracket(g, e[i], e[j]), e[k])
            + value(bracket(g, e[i], e[k]), e[j])
            - value(bracket(g, e[j], e[k]), e[i])
        )
    return out


# -- Maurer-Cartan forms ----------------------------------------------------

x, y, z = sympy.symbols("x y z")
COORDS = (x, y, z)


@dataclass(frozen=True)
class InvariantCoframe:
    """Holomorphic 1-forms as coefficient tuples over (dx, dy, dz)."""

    forms: tuple

    def d(self, k: int) -> sympy.Matrix:
        return exterior_derivative(self.forms[k])


def maurer_cartan_coframe() -> InvariantCoframe:
    return InvariantCoframe(
        (
            (sympy.Integer(1), 0, 0),
            (0, sympy.exp(x), 0),
            (0, 0, sympy.exp(-x)),
        )
    )


def exterior_derivative(form, coords=COORDS) -> sympy.Matrix:
    """d(sum f_k dc_k) as a skew coefficient matrix over the coordinate differentials."""
    n = len(coords)
    D = sympy.zeros(n, n)
    for i, j in combinations(range(n), 2):
        D[i, j] = sympy.diff(form[j], coords[i]) - sympy.diff(form[i], coords[j])
        D[j, i] = -D[i, j]
    return D


def wedge(a, b) -> sympy.Matrix:
    """a ^ b as a skew coefficient matrix: entry (i, j) is a_i b_j - a_j b_i."""
    n = len(a)
    return sympy.Matrix(n, n, lambda i, j: a[i] * b[j] - a[j] * b[i])


def structure_equations_hold() -> bool:
    """d omega_k = sum_{i<j} c^k_ij omega_i ^ omega_j with c^k_ij = -omega_k([e_i, e_j])."""
    coframe = maurer_cartan_coframe()
    g = catalog()[AlgebraKind.NON_NILPOTENT].complex_algebra
    for k in range(3):
        dual = [1 if m == k else 0 for m in range(3)]
        ce = ce_differential(g, dual)
        expected = sympy.zeros(3, 3)
        for i, j in combinations(range(3), 2):
            expected += ce[i, j] * wedge(coframe.forms[i], coframe.forms[j])
        if sympy.simplify(coframe.d(k) - expected) != sympy.zeros(3, 3):
            logger.debug(f"structure equation fails for omega_{k + 1}")
            return False
    return True


def omega_maurer_cartan_matches() -> bool:
    """
    i w1 ^ w1* + e^{-2i Im x} w2 ^ w3* + e^{2i Im x} w2* ^ w3 equals the coordinate
    expression, with forms written over (dx, dy, dz, dx*, dy*, dz*).
    """
    x1, x2 = sympy.symbols("x1 x2", real=True)
    X = x1 + sympy.I * x2
    Xbar = x1 - sympy.I * x2

    def basis(k):
        return [1 if m == k else 0 for m in range(6)]

    w1, w1b = basis(0), basis(3)
    w2 = [sympy.exp(X) * c for c in basis(1)]
    w2b = [sympy.exp(Xbar) * c for c in basis(4)]
    w3 = [sympy.exp(-X) * c for c in basis(2)]
    w3b = [sympy.exp(-Xbar) * c for c in basis(5)]

    twisted = (
        sympy.I * wedge(w1, w1b)
        + sympy.exp(-2 * sympy.I * x2) * wedge(w2, w3b)
        + sympy.exp(2 * sympy.I * x2) * wedge(w2b, w3)
    )
    coordinate = sympy.I * wedge(basis(0), basis(3)) + wedge(basis(1), basis(5)) + wedge(basis(4), basis(2))
    return sympy.simplify(twisted - coordinate) == sympy.zeros(6, 6)


def pk_summary(spec, tol: float = DEFAULT_TOL) -> dict:
    """Classification, existence, per-generator invariance factors and the metric signature of omega."""
    kind = classify(spec, tol)
    omega = omega_standard()
    J = coordinate_j0()
    summary = {
        "classification": kind.value,
        "pk_exists": pk_exists(kind),
        "compatible": compatibility_check(omega, J, tol),
        "signature": list(metric_and_signature(omega, J).signature),
    }
    if isinstance(spec, LatticeSpecSolv):
        factors = invariance_factors(spec)
        invariant = all(abs(f - 1) <= max(tol, SIGNATURE_TOL) for f in factors)
        summary["invariance_factors"] = [[f.real, f.imag] for f in factors]
        summary["omega_invariant"] = invariant
        if invariant != summary["pk_exists"]:
            logger.warning(f"translation invariance {invariant} disagrees with existence for {kind.value}")
    return summary
