"""
Frames (U, U') = (X, X') Q and (V, V', W, W') = (Y, Y', Z, Z') P on the real
form of the non-nilpotent algebra, the bracket matrix A defined by

    [u, v] = 2 alpha v + 2 beta w,    [u, w] = 2 gamma v + 2 delta w

for u = U + iU', v = V + iV', w = W + iW', the operator
S = (ad X + ad X' o T) / 2 and the conjugacy check A ~ q diag(-1, 1),
q = (q11 + q22) / 2.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.linalg
import sympy

from loguru import logger
from pydantic import BaseModel, ConfigDict, computed_field

from algebra_kernel import GaussianVector, exact_matrix, gaussian_solve, is_exact
from complex_structures import AlmostComplexStructure, j0
from config import DEFAULT_TOL
from errors import DimensionError, NotSubalgebraError, SingularityError
from lie_core import AlgebraKind, ComplexifiedAlgebra, ad_matrix, catalog


def _real_form():
    return catalog()[AlgebraKind.NON_NILPOTENT].real_form


def _has_float(M) -> bool:
    return any(isinstance(x, float) for row in M for x in row)


@dataclass(frozen=True, eq=False)
class FramePair:
    Q: Union[sympy.Matrix, np.ndarray]
    P: Union[sympy.Matrix, np.ndarray]

    def __post_init__(self):
        exact = not isinstance(self.Q, np.ndarray) and not isinstance(self.P, np.ndarray)
        exact = exact and is_exact(self.Q) and is_exact(self.P)
        if exact:
            Q, P = exact_matrix(self.Q), exact_matrix(self.P)
            shapes = (Q.shape, P.shape)
            singular = shapes == ((2, 2), (4, 4)) and (Q.det() == 0 or P.det() == 0)
        else:
            Q, P = np.asarray(self.Q, dtype=float), np.asarray(self.P, dtype=float)
            shapes = (Q.shape, P.shape)
            singular = shapes == ((2, 2), (4, 4)) and (
                np.linalg.cond(Q) > 1e12 or np.linalg.cond(P) > 1e12
            )
        if shapes != ((2, 2), (4, 4)):
            raise DimensionError(f"frame pair needs Q 2x2 and P 4x4, got {shapes}")
        if singular:
            raise SingularityError("frame matrices must be invertible")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "P", P)

    @property
    def exact(self) -> bool:
        return isinstance(self.Q, sympy.MatrixBase)

    @property
    def q(self):
        """(q11 + q22) / 2."""
        return (self.Q[0, 0] + self.Q[1, 1]) / 2

    def to_json(self) -> dict:
        def rows(M):
            if isinstance(M, sympy.MatrixBase):
                return [[str(x) for x in M.row(i)] for i in range(M.rows)]
            return M.tolist()

        return {"Q": rows(self.Q), "P": rows(self.P)}


class FrameInput(BaseModel):
    """JSON frame pair; integer or "p/q" entries give exact arithmetic."""

    model_config = ConfigDict(frozen=True)

    Q: list[list[Union[int, str, float]]]
    P: list[list[Union[int, str, float]]]

    def to_frame(self) -> FramePair:
        if _has_float(self.Q) or _has_float(self.P):
            return FramePair(np.array(self.Q, dtype=float), np.array(self.P, dtype=float))
        return FramePair(exact_matrix(self.Q), exact_matrix(self.P))


def frame_vectors(fp: FramePair) -> tuple:
    """u, v, w in coordinates of the complexified real form (X, X', Y, Y', Z, Z')."""
    Q, P = fp.Q, fp.P
    u_re = [Q[0, 0], Q[1, 0], 0, 0, 0, 0]
    u_im = [Q[0, 1], Q[1, 1], 0, 0, 0, 0]
    parts = [[0, 0] + [P[r, c] for r in range(4)] for c in range(4)]
    if fp.exact:
        return (
            GaussianVector(u_re, u_im),
            GaussianVector(parts[0], parts[1]),
            GaussianVector(parts[2], parts[3]),
        )
    as_complex = lambda re, im: np.array(re, dtype=float) + 1j * np.array(im, dtype=float)
    return as_complex(u_re, u_im), as_complex(parts[0], parts[1]), as_complex(parts[2], parts[3])


@dataclass(frozen=True, eq=False)
class BracketMatrix:
    """A = [[alpha, beta], [gamma, delta]]."""

    A: Union[sympy.Matrix, np.ndarray]

    def to_numpy(self) -> np.ndarray:
        if isinstance(self.A, sympy.MatrixBase):
            return np.array([[complex(x) for x in row] for row in self.A.tolist()], dtype=complex)
        return np.asarray(self.A, dtype=complex)

    def to_pairs(self) -> list:
        return [[[float(c.real), float(c.imag)] for c in row] for row in self.to_numpy()]


def _coefficients(target, v, w, tol: float) -> list:
    if isinstance(target, GaussianVector):
        coef = gaussian_solve([v, w], target)
        if coef is None:
            raise NotSubalgebraError("bracket leaves span(v, w)")
        return coef
    basis = np.column_stack([v, w])
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    residual = np.max(np.abs(basis @ coef - target))
    if residual > tol * (1.0 + np.max(np.abs(target))):
        raise NotSubalgebraError(f"bracket leaves span(v, w), residual {residual:.3e}")
    return list(coef)


def bracket_matrix(fp: FramePair, tol: float = DEFAULT_TOL) -> BracketMatrix:
    gC = ComplexifiedAlgebra(_real_form())
    u, v, w = frame_vectors(fp)
    cv = _coefficients(gC.bracket(u, v), v, w, tol)
    cw = _coefficients(gC.bracket(u, w), v, w, tol)
    if fp.exact:
        return BracketMatrix(sympy.Matrix([[cv[0], cv[1]], [cw[0], cw[1]]]) / 2)
    return BracketMatrix(np.array([[cv[0], cv[1]], [cw[0], cw[1]]], dtype=complex) / 2)


def _block_t() -> sympy.Matrix:
    """T on span(Y, Y', Z, Z'): Y -> -Y', Y' -> Y, Z -> -Z', Z' -> Z."""
    J = sympy.Matrix([[0, 1], [-1, 0]])
    return sympy.diag(J, J)


def s_operator(fp: Optional[FramePair] = None):
    """
    S = (ad X + ad X' o T) / 2 on span(Y, Y', Z, Z'), exact. Given a frame pair,
    S is returned in the frame basis (V, V', W, W'), i.e. P^-1 S P.
    """
    g = _real_form()
    ad_x = ad_matrix(g, g.basis_vector(0))
    ad_xp = ad_matrix(g, g.basis_vector(1))
    if any(x != 0 for x in ad_x[:2, 2:]) or any(x != 0 for x in ad_xp[:2, 2:]):
        raise AssertionError("span(Y, Y', Z, Z') is not ad X-invariant")
    S = (ad_x[2:, 2:] + ad_xp[2:, 2:] * _block_t()) / 2
    if fp is None:
        return S
    if fp.exact:
        return fp.P.inv() * S * fp.P
    S = np.array(S.tolist(), dtype=float)
    return np.linalg.solve(fp.P, S @ fp.P)


def realify_complex(C: np.ndarray) -> np.ndarray:
    """Complex n x n matrix -> real 2n x 2n, c -> [[Re c, Im c], [-Im c, Re c]]."""
    C = np.asarray(C, dtype=complex)
    n = C.shape[0]
    R = np.zeros((2 * n, 2 * n))
    for i in range(n):
        for j in range(n):
            c = C[i, j]
            R[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = [[c.real, c.imag], [-c.imag, c.real]]
    return R


def frame_relation_residual(fp: FramePair, bm: BracketMatrix) -> float:
    """max |S P - P realify(A^T / q)|."""
    q = float(fp.q)
    S = np.array(s_operator().tolist(), dtype=float)
    P = np.array(fp.P.tolist(), dtype=float) if fp.exact else fp.P
    return float(np.max(np.abs(S @ P - P @ realify_complex(bm.to_numpy().T / q))))


class Lemma2Report(BaseModel):
    model_config = ConfigDict(frozen=True)

    q_symmetric: bool
    trace_nonzero: bool
    eigenvalues_match: bool
    eigenvalues: list[list[float]]
    A: list[list[list[float]]]
    conjugator: Optional[list[list[float]]] = None
    frame_relation_residual: float
    frame_relation_holds: bool

    @computed_field
    @property
    def valid(self) -> bool:
        return (
            self.q_symmetric
            and self.trace_nonzero
            and self.eigenvalues_match
            and self.conjugator is not None
            and self.frame_relation_holds
        )


def _conjugator(A: np.ndarray, tol: float) -> Optional[np.ndarray]:
    """Real K with K^-1 A K diagonal (ascending), for real A with distinct real eigenvalues."""
    if np.max(np.abs(A.imag)) > tol:
        return None
    values, vectors = np.linalg.eig(A.real)
    if np.max(np.abs(values.imag)) > tol or abs(values[0] - values[1]) <= tol:
        return None
    order = np.argsort(values.real)
    K = vectors[:, order].real
    K = K / np.linalg.norm(K, axis=0)
    signs = np.sign(K[np.argmax(np.abs(K), axis=0), [0, 1]])
    return K * signs


def lemma2_verify(fp: FramePair, tol: float = DEFAULT_TOL) -> Lemma2Report:
    bm = bracket_matrix(fp, tol)
    A = bm.to_numpy()
    Q = np.array(fp.Q.tolist(), dtype=float) if fp.exact else fp.Q
    q = (Q[0, 0] + Q[1, 1]) / 2

    values = np.linalg.eigvals(A)
    values = values[np.lexsort((values.imag, values.real))]
    expected = np.array([-abs(q), abs(q)])
    match = bool(np.max(np.abs(values - expected)) <= tol * (1.0 + abs(q)))

    K = _conjugator(A, tol)
    trace_nonzero = bool(abs(2 * q) > tol)
    residual = frame_relation_residual(fp, bm) if trace_nonzero else float("inf")
    report = Lemma2Report(
        q_symmetric=bool(abs(Q[0, 1] - Q[1, 0]) < tol),
        trace_nonzero=trace_nonzero,
        eigenvalues_match=match,
        eigenvalues=[[float(v.real), float(v.imag)] for v in values],
        A=bm.to_pairs(),
        conjugator=K.tolist() if K is not None else None,
        frame_relation_residual=residual,
        frame_relation_holds=bool(residual <= max(tol, 1e-8) * (1.0 + float(np.max(np.abs(A))))),
    )
    if not report.valid:
        logger.debug(f"frame fails the conjugacy conditions: {report}")
    return report


def random_frame_pair(rng: np.random.Generator, exact: bool = False) -> FramePair:
    """
    Q symmetric with nonzero trace, P = K (x) I_2 for invertible real K: v and w
    are real combinations of Y + iY' and Z + iZ'.
    """
    while True:
        if exact:
            q11, q12, q22 = (int(x) for x in rng.integers(-4, 5, size=3))
            K = rng.integers(-4, 5, size=(2, 2))
            ok = q11 + q22 != 0 and q11 * q22 != q12 * q12 and round(np.linalg.det(K)) != 0
        else:
            q11, q12, q22 = rng.uniform(-2.0, 2.0, size=3)
            K = rng.uniform(-2.0, 2.0, size=(2, 2))
            ok = abs(q11 + q22) > 0.25 and abs(q11 * q22 - q12 * q12) > 0.25 and abs(np.linalg.det(K)) > 0.25
        if not ok:
            continue
        Q = [[q11, q12], [q12, q22]]
        P = np.kron(K, np.eye(2, dtype=K.dtype))
        if exact:
            return FramePair(sympy.Matrix(Q), sympy.Matrix(P.tolist()))
        return FramePair(np.array(Q), P)


def frame_structure(fp: FramePair) -> AlmostComplexStructure:
    """J = G J0 G^-1 with G = diag(Q, P): J U = U', J V = V', J W = W'."""
    J = j0(3).J
    if fp.exact:
        G = sympy.diag(fp.Q, fp.P)
        return AlmostComplexStructure(G * J * G.inv())
    G = scipy.linalg.block_diag(fp.Q, fp.P)
    return AlmostComplexStructure(G @ np.array(J.tolist(), dtype=float) @ np.linalg.inv(G))
