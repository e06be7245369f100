"""
Almost complex structures on real Lie algebras, the Nijenhuis tensor, and the
correspondence J <-> h_J = {u + i*Ju} between integrable structures and
complex subalgebras h with g_C = h + conj(h).
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Union

import numpy as np
import sympy

from loguru import logger
from pydantic import BaseModel, ConfigDict

from algebra_kernel import (
    GaussianVector,
    complex_rank,
    exact_matrix,
    independent_subset,
    is_exact,
)
from config import DEFAULT_TOL
from errors import DecompositionError, DimensionError, SpecError
from lie_core import ComplexifiedAlgebra, StructureAlgebra, bracket


@dataclass(frozen=True, eq=False)
class AlmostComplexStructure:
    """J with J^2 = -I, exact (sympy) when built from rationals, numpy otherwise."""

    J: Union[sympy.Matrix, np.ndarray]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        J = self.J
        if is_exact(J) and not isinstance(J, np.ndarray):
            J = exact_matrix(J)
            n = J.rows
            if J.rows != J.cols or n % 2:
                raise DimensionError(f"almost complex structure must be square of even size, got {J.shape}")
            if J * J != -sympy.eye(n):
                raise SpecError("J^2 != -I")
        else:
            J = np.asarray(J, dtype=float)
            if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 2:
                raise DimensionError(f"almost complex structure must be square of even size, got {J.shape}")
            if not np.allclose(J @ J, -np.eye(J.shape[0]), atol=self.tol * max(1.0, np.abs(J).max()) ** 2):
                raise SpecError("J^2 != -I")
        object.__setattr__(self, "J", J)

    @property
    def exact(self) -> bool:
        return isinstance(self.J, sympy.MatrixBase)

    @property
    def size(self) -> int:
        return self.J.shape[0]

    def apply(self, u):
        if self.exact and is_exact(u):
            return tuple(self.J * sympy.Matrix(list(u)))
        return np.asarray(self.J, dtype=float) @ np.asarray(u, dtype=float)

    def to_numpy(self) -> np.ndarray:
        return np.array(self.J.tolist(), dtype=float) if self.exact else self.J

    def __eq__(self, other):
        if not isinstance(other, AlmostComplexStructure):
            return NotImplemented
        if self.exact and other.exact:
            return self.J == other.J
        return np.allclose(self.to_numpy(), other.to_numpy(), atol=self.tol)


def j0(m: int) -> AlmostComplexStructure:
    """Multiplication by i on C^m in coordinates (Re z_1, Im z_1, ...): e_{2k} -> e_{2k+1}."""
    J = sympy.zeros(2 * m, 2 * m)
    for k in range(m):
        J[2 * k + 1, 2 * k] = 1
        J[2 * k, 2 * k + 1] = -1
    return AlmostComplexStructure(J)


class StructureFile(BaseModel):
    """JSON almost complex structure: a row-major matrix, optionally naming its algebra."""

    model_config = ConfigDict(frozen=True)

    matrix: list[list[Union[int, str, float]]]
    algebra: str = "catalog:non_nilpotent:real"

    def to_structure(self) -> AlmostComplexStructure:
        if any(isinstance(x, float) for row in self.matrix for x in row):
            return AlmostComplexStructure(np.array(self.matrix, dtype=float))
        return AlmostComplexStructure(exact_matrix(self.matrix))


@dataclass(frozen=True)
class ComplexSubalgebra:
    """C-basis of a subspace of the complexified real algebra."""

    basis: tuple

    @property
    def exact(self) -> bool:
        return all(isinstance(w, GaussianVector) for w in self.basis)

    def conjugate(self) -> "ComplexSubalgebra":
        return ComplexSubalgebra(tuple(ComplexifiedAlgebra.conjugate(w) for w in self.basis))

    def to_pairs(self) -> list:
        if self.exact:
            return [w.to_pairs() for w in self.basis]
        return [[[float(c.real), float(c.imag)] for c in np.asarray(w, dtype=complex)] for w in self.basis]


def _check(g: StructureAlgebra, J: AlmostComplexStructure):
    if J.size != g.dim:
        raise DimensionError(f"J of size {J.size} on an algebra of dimension {g.dim}")


def _sub(a, b):
    if isinstance(a, tuple) and isinstance(b, tuple):
        return tuple(x - y for x, y in zip(a, b))
    return np.asarray(a) - np.asarray(b)


def nijenhuis(g: StructureAlgebra, J: AlmostComplexStructure, u, v):
    """N_J(u, v) = [Ju, Jv] - J[Ju, v] - J[u, Jv] - [u, v]."""
    _check(g, J)
    Ju, Jv = J.apply(u), J.apply(v)
    out = _sub(bracket(g, Ju, Jv), J.apply(bracket(g, Ju, v)))
    out = _sub(out, J.apply(bracket(g, u, Jv)))
    return _sub(out, bracket(g, u, v))


def _is_zero(vec, tol: float) -> bool:
    if isinstance(vec, tuple) and is_exact(vec):
        return not any(vec)
    return bool(np.max(np.abs(np.asarray(vec, dtype=float)), initial=0.0) < tol)


def nijenhuis_witness(g: StructureAlgebra, J: AlmostComplexStructure, tol: float = DEFAULT_TOL) -> Optional[tuple]:
    """First basis pair (i, j, N_J(e_i, e_j)) with nonzero value, or None."""
    _check(g, J)
    for i, j in combinations(range(g.dim), 2):
        value = nijenhuis(g, J, g.basis_vector(i), g.basis_vector(j))
        if not _is_zero(value, tol):
            logger.debug(f"N_J({g.basis_labels[i]}, {g.basis_labels[j]}) = {value}")
            return i, j, value
    return None


def is_integrable(g: StructureAlgebra, J: AlmostComplexStructure, tol: float = DEFAULT_TOL) -> bool:
    return nijenhuis_witness(g, J, tol) is None


def h_from_j(g: StructureAlgebra, J: AlmostComplexStructure, tol: float = DEFAULT_TOL) -> ComplexSubalgebra:
    """C-basis of {u + i*Ju}, from the standard basis images."""
    _check(g, J)
    if J.exact:
        candidates = [GaussianVector(g.basis_vector(k), J.apply(g.basis_vector(k))) for k in range(g.dim)]
    else:
        candidates = [np.eye(g.dim)[k] + 1j * J.to_numpy()[:, k] for k in range(g.dim)]
    basis = independent_subset(candidates, tol)
    if len(basis) != g.dim // 2:
        raise AssertionError(f"h_J has dimension {len(basis)}, expected {g.dim // 2}")
    return ComplexSubalgebra(tuple(basis))


def j_from_subspace(W: ComplexSubalgebra, dim: int, tol: float = DEFAULT_TOL) -> AlmostComplexStructure:
    """
    The unique J with W = {u + i*Ju}: J acts by -i on W and by +i on conj(W).

    For w_k = a_k + i*b_k this is J a_k = b_k, J b_k = -a_k, which needs the
    real vectors a_1..a_m, b_1..b_m to form a basis.
    """
    m = dim // 2
    if dim % 2 or len(W.basis) != m:
        raise DimensionError(f"need {m} vectors for a structure on dimension {dim}, got {len(W.basis)}")
    if complex_rank(list(W.basis), tol) != m:
        raise DimensionError("subspace basis is not independent over C")

    if W.exact:
        a = [list(w.re) for w in W.basis]
        b = [list(w.im) for w in W.basis]
        frame = sympy.Matrix(a + b).T
        if frame.det() == 0:
            raise DecompositionError("W meets its conjugate")
        image = sympy.Matrix(b + [[-x for x in row] for row in a]).T
        return AlmostComplexStructure(image * frame.inv())

    vecs = np.array([np.asarray(w, dtype=complex) for w in W.basis])
    frame = np.column_stack([vecs.real.T, vecs.imag.T])
    if np.linalg.cond(frame) > 1.0 / tol:
        raise DecompositionError("W meets its conjugate")
    image = np.column_stack([vecs.imag.T, -vecs.real.T])
    J = np.linalg.solve(frame.T, image.T).T
    return AlmostComplexStructure(J, tol)


def is_subalgebra(gC, W: ComplexSubalgebra, tol: float = DEFAULT_TOL) -> bool:
    """Rank test: every [w_a, w_b] lies in span(W)."""
    if isinstance(gC, StructureAlgebra):
        gC = ComplexifiedAlgebra(gC)
    basis = list(W.basis)
    if len(basis) < 2:
        return True
    if not W.exact:
        basis = [np.asarray(w, dtype=complex) for w in basis]
    rank = complex_rank(basis, tol)
    for a, b in combinations(range(len(basis)), 2):
        image = gC.bracket(basis[a], basis[b])
        if complex_rank(basis + [image], tol) > rank:
            logger.debug(f"bracket of basis vectors {a}, {b} leaves the subspace")
            return False
    return True
