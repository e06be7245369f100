"""
h^1 = dim H^1(M, O) of a three-dimensional complex solvmanifold via Winkelmann's formula

    dim H^1(M, O) = dim H^1(g, C) + dim W,

where W is the largest subspace of [g,g]/[n,n] on which every Ad(xi), xi in
the lattice, is real semisimple.
"""

import numpy as np
import scipy.linalg

from loguru import logger
from pydantic import BaseModel, ConfigDict

from config import DEFAULT_TOL, EIGVEC_COND_MAX, IMAG_TOL
from errors import ClassificationError
from lattices import (
    Classification,
    LatticeSpecSolv,
    classify,
    complete_eigendata,
    log_generators,
    spec_kind,
    verify_spec,
)
from lie_core import AlgebraKind, StructureAlgebra, ad_matrix, catalog, derived_algebra


class H1Report(BaseModel):
    model_config = ConfigDict(frozen=True)

    dim_h1_lie: int
    dim_W: int
    h1: int
    kind: Classification


def h1_lie(g: StructureAlgebra) -> int:
    """dim g - dim [g, g]."""
    return g.dim - len(derived_algebra(g))


def quotient_dimension(kind: AlgebraKind) -> int:
    """Complex dimension of [g,g]/[n,n] for a catalog algebra."""
    entry = catalog()[AlgebraKind(kind)]
    g = entry.complex_algebra
    nilradical = [g.basis_vector(k) for k in entry.complex_nilradical_indices]
    return len(derived_algebra(g)) - len(derived_algebra(g, nilradical))


def _translations_act_trivially(g: StructureAlgebra) -> bool:
    """ad of Y, Y', Z, Z' vanishes on span(Y, Y', Z, Z'), so Ad of a translation is the identity there."""
    for k in range(2, 6):
        block = ad_matrix(g, g.basis_vector(k))[2:, 2:]
        if any(x != 0 for x in block):
            return False
    return True


def adjoint_on_quotient(x: complex) -> np.ndarray:
    """Real 4x4 matrix of Ad(exp(x X)) on span(Y, Y', Z, Z')."""
    g = catalog()[AlgebraKind.NON_NILPOTENT].real_form
    generator = np.array([x.real, x.imag, 0.0, 0.0, 0.0, 0.0])
    M = scipy.linalg.expm(ad_matrix(g, generator))
    if np.max(np.abs(M[:2, 2:])) > IMAG_TOL * max(1.0, np.max(np.abs(M))):
        raise AssertionError("span(Y, Y', Z, Z') is not Ad-invariant")
    return M[2:, 2:]


def _distinct(values: np.ndarray, scale: float) -> list:
    out = []
    for v in sorted(values):
        if not out or v - out[-1] > 1e-6 * scale:
            out.append(v)
    return out


def real_semisimple(M: np.ndarray) -> bool:
    """
    Diagonalizable over R: every eigenvalue real and the product of (M - l I)
    over the distinct eigenvalues vanishes. A well-conditioned real eigenbasis
    is checked alongside.
    """
    values = np.linalg.eigvals(M)
    scale = max(1.0, float(np.max(np.abs(values))))
    all_real = bool(np.all(np.abs(values.imag) < IMAG_TOL * scale))

    primary = all_real
    if all_real:
        P = np.eye(M.shape[0])
        distinct = _distinct(values.real, scale)
        for v in distinct:
            P = P @ (M - v * np.eye(M.shape[0]))
        primary = bool(np.max(np.abs(P)) < IMAG_TOL * scale ** len(distinct))

    _, vectors = np.linalg.eig(M)
    cross = all_real and bool(np.linalg.cond(vectors) < EIGVEC_COND_MAX)
    if cross != primary:
        logger.warning(f"semisimplicity checks disagree: minimal polynomial {primary}, eigenbasis {cross}")
    return primary


def dim_W_shortcut(spec: LatticeSpecSolv, tol: float = DEFAULT_TOL) -> int:
    spec = complete_eigendata(spec, tol)
    return 2 if abs(spec.gamma.imag) <= tol and abs(spec.delta.imag) <= tol else 0


def dim_W(spec_or_kind, tol: float = DEFAULT_TOL) -> int:
    """Complex dimension of W, counted over the Ad-invariant Y and Z lines of the quotient."""
    if isinstance(spec_or_kind, (AlgebraKind, str)):
        kind = AlgebraKind(spec_or_kind)
        if kind is AlgebraKind.NON_NILPOTENT:
            raise ClassificationError("dim W of the non-nilpotent type depends on the lattice")
        return quotient_dimension(kind)

    report = verify_spec(spec_or_kind, tol)
    if not report.valid:
        raise ClassificationError(f"invalid lattice spec, failed checks: {report.failed()}")
    kind = spec_kind(spec_or_kind)
    if kind is not AlgebraKind.NON_NILPOTENT:
        return quotient_dimension(kind)

    if not _translations_act_trivially(catalog()[AlgebraKind.NON_NILPOTENT].real_form):
        raise AssertionError("translations act nontrivially on [g,g]/[n,n]")
    actions = [adjoint_on_quotient(x) for x in log_generators(spec_or_kind)]
    dim = 0
    for line in (slice(0, 2), slice(2, 4)):
        if all(real_semisimple(M[line, line]) for M in actions):
            dim += 1
    logger.debug(f"dim W = {dim}")
    return dim


def h1(spec_or_kind, tol: float = DEFAULT_TOL) -> H1Report:
    kind = classify(spec_or_kind, tol)
    algebra_kind = AlgebraKind(spec_or_kind) if isinstance(spec_or_kind, (AlgebraKind, str)) else spec_kind(spec_or_kind)
    lie = h1_lie(catalog()[algebra_kind].complex_algebra)
    w = dim_W(spec_or_kind, tol)
    report = H1Report(dim_h1_lie=lie, dim_W=w, h1=lie + w, kind=kind)
    if report.h1 != report.dim_h1_lie + report.dim_W or report.h1 not in (1, 2, 3):
        raise AssertionError(f"inconsistent h1 report {report}")
    return report
