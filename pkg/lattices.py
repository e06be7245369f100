"""
Group laws of the nilpotent and non-nilpotent types (C^2 x| C), lattice
specifications Gamma = Delta x| Lambda given by integer matrices and eigen-data,
and their verification and classification.
"""

import cmath
import json
import math

from dataclasses import dataclass
from enum import Enum
from typing import Annotated, Any, Literal, Optional, Union

import numpy as np
import scipy.linalg
import sympy

from loguru import logger
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    TypeAdapter,
    computed_field,
    field_validator,
)

from algebra_kernel import char_poly, integer_recover, min_poly_squarefree, poly_roots
from config import DEFAULT_SEED, DEFAULT_TOL, LATTICE_TOL
from errors import ClassificationError, SingularityError, SpecError
from lie_core import AlgebraKind


def _parse_complex(value) -> complex:
    if isinstance(value, bool):
        raise ValueError(f"not a complex number: {value!r}")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ValueError(f"complex numbers are [re, im] pairs, got {value!r}")


Complex = Annotated[
    complex,
    PlainValidator(_parse_complex),
    PlainSerializer(lambda c: [c.real, c.imag], return_type=list),
]


def pair(c: complex) -> list:
    return [float(c.real), float(c.imag)]


class Classification(str, Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    TYPE3A = "Type3a"
    TYPE3B = "Type3b"


# -- group law --------------------------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    x: complex = 0j
    y: complex = 0j
    z: complex = 0j

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = complex(getattr(self, name))
            if not cmath.isfinite(value):
                raise SpecError(f"group element coordinate {name} is not finite")
            object.__setattr__(self, name, value)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def isclose(self, other: "GroupElement", rel: float = 1e-10) -> bool:
        a, b = self.as_array(), other.as_array()
        return bool(np.max(np.abs(a - b)) <= rel * max(1.0, np.max(np.abs(a)), np.max(np.abs(b))))


def group_identity() -> GroupElement:
    return GroupElement()


def group_mul(kind: AlgebraKind, g1: GroupElement, g2: GroupElement) -> GroupElement:
    kind = AlgebraKind(kind)
    if kind is AlgebraKind.NILPOTENT:
        return GroupElement(g1.x + g2.x, g1.y + g2.y, g1.z + g2.z + g1.x * g2.y)
    if kind is AlgebraKind.NON_NILPOTENT:
        return GroupElement(
            g1.x + g2.x,
            g1.y + cmath.exp(g1.x) * g2.y,
            g1.z + cmath.exp(-g1.x) * g2.z,
        )
    return GroupElement(g1.x + g2.x, g1.y + g2.y, g1.z + g2.z)


def group_inverse(kind: AlgebraKind, g: GroupElement) -> GroupElement:
    kind = AlgebraKind(kind)
    if kind is AlgebraKind.NILPOTENT:
        return GroupElement(-g.x, -g.y, -g.z + g.x * g.y)
    if kind is AlgebraKind.NON_NILPOTENT:
        return GroupElement(-g.x, -cmath.exp(-g.x) * g.y, -cmath.exp(g.x) * g.z)
    return GroupElement(-g.x, -g.y, -g.z)


def to_matrix(kind: AlgebraKind, g: GroupElement) -> np.ndarray:
    """3x3 unipotent form (nilpotent type) or 4x4 affine form (non-nilpotent type)."""
    kind = AlgebraKind(kind)
    if kind is AlgebraKind.NILPOTENT:
        return np.array([[1, g.x, g.z], [0, 1, g.y], [0, 0, 1]], dtype=complex)
    if kind is AlgebraKind.NON_NILPOTENT:
        return np.array(
            [
                [cmath.exp(g.x), 0, 0, g.y],
                [0, cmath.exp(-g.x), 0, g.z],
                [0, 0, 1, g.x],
                [0, 0, 0, 1],
            ],
            dtype=complex,
        )
    raise SpecError("the abelian group has no matrix form here")


# -- specifications ---------------------------------------------------------


def _square_int(rows: list, n: int, name: str) -> list:
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"{name} must be {n}x{n}")
    return rows


class _Spec(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: Optional[str] = None


class AbelianLatticeSpec(_Spec):
    """Six R-independent vectors of C^3; the default is Z[i]^3."""

    kind: Literal["abelian"] = "abelian"
    generators: Optional[list[list[Complex]]] = None

    @field_validator("generators")
    @classmethod
    def _six_vectors(cls, v):
        if v is not None and (len(v) != 6 or any(len(g) != 3 for g in v)):
            raise ValueError("an abelian lattice needs six vectors of C^3")
        return v


class IwasawaLatticeSpec(_Spec):
    """The Gaussian-integer lattice of the complex Heisenberg group."""

    kind: Literal["iwasawa"] = "iwasawa"


class LatticeSpecNil(_Spec):
    kind: Literal["nilpotent"] = "nilpotent"
    A: list[list[int]]
    lam: Complex = Field(alias="lambda")
    alpha: list[Complex]
    beta: list[Complex]

    @field_validator("A")
    @classmethod
    def _a_shape(cls, v):
        return _square_int(v, 2, "A")

    @field_validator("alpha", "beta")
    @classmethod
    def _pair_shape(cls, v):
        if len(v) != 2:
            raise ValueError("alpha and beta are complex 2-vectors")
        return v


class LatticeSpecSolv(_Spec):
    """Eigen-data may be omitted and is then completed from A and B."""

    kind: Literal["non_nilpotent"] = "non_nilpotent"
    A: list[list[int]]
    B: list[list[int]]
    gamma: Optional[Complex] = None
    delta: Optional[Complex] = None
    alpha: Optional[list[Complex]] = None
    beta: Optional[list[Complex]] = None
    k_mu: Optional[int] = None

    @field_validator("A", "B")
    @classmethod
    def _ab_shape(cls, v):
        return _square_int(v, 4, "A and B")

    @field_validator("alpha", "beta")
    @classmethod
    def _quad_shape(cls, v):
        if v is not None and len(v) != 4:
            raise ValueError("alpha and beta are complex 4-vectors")
        return v


LatticeSpec = Annotated[
    Union[AbelianLatticeSpec, IwasawaLatticeSpec, LatticeSpecNil, LatticeSpecSolv],
    Field(discriminator="kind"),
]
LatticeSpecAdapter = TypeAdapter(LatticeSpec)


def parse_spec(data: dict):
    return LatticeSpecAdapter.validate_python(data)


def load_spec(path: str):
    with open(path) as f:
        data = json.load(f)
    spec = parse_spec(data)
    logger.debug(f"loaded {spec.kind} lattice spec from {path}")
    return spec


def spec_kind(spec) -> AlgebraKind:
    if isinstance(spec, AbelianLatticeSpec):
        return AlgebraKind.ABELIAN
    if isinstance(spec, (IwasawaLatticeSpec, LatticeSpecNil)):
        return AlgebraKind.NILPOTENT
    return AlgebraKind.NON_NILPOTENT


# -- reports ----------------------------------------------------------------


class LatticeReport(BaseModel):
    kind: str
    checks: dict[str, bool]
    details: dict[str, Any] = {}
    subtype: Optional[str] = None

    @computed_field
    @property
    def valid(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> list:
        return [name for name, ok in self.checks.items() if not ok]


def _real_rows(pairs) -> np.ndarray:
    """Rows (Re y, Im y, Re z, Im z) for points (y, z) of C^2."""
    return np.array([[y.real, y.imag, z.real, z.imag] for y, z in pairs], dtype=float)


def _preserved(images, generators: np.ndarray) -> bool:
    try:
        return all(integer_recover(v, generators.T, LATTICE_TOL) is not None for v in _real_rows(images))
    except SingularityError:
        return False


def _close(a, b, tol: float) -> bool:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    return bool(np.max(np.abs(a - b)) <= tol * (1.0 + np.max(np.abs(b))))


def verify_abelian(spec: AbelianLatticeSpec, tol: float = DEFAULT_TOL) -> LatticeReport:
    if spec.generators is None:
        gens = np.vstack([np.eye(3), 1j * np.eye(3)])
    else:
        gens = np.array(spec.generators, dtype=complex)
    real = np.column_stack([gens.real, gens.imag])
    det = float(np.linalg.det(real))
    return LatticeReport(
        kind=spec.kind,
        checks={"generators_independent": abs(det) > tol},
        details={"generator_determinant": det},
    )


def verify_iwasawa(spec: IwasawaLatticeSpec = None, tol: float = DEFAULT_TOL, seed: int = DEFAULT_SEED) -> LatticeReport:
    """Closure of Z[i]^3 under the nilpotent group law and inversion."""
    kind = AlgebraKind.NILPOTENT
    units = [1, 1j, -1, -1j]
    gens = [GroupElement(*(u if k == m else 0 for m in range(3))) for k in range(3) for u in units]

    def gaussian(g: GroupElement) -> bool:
        c = g.as_array()
        return bool(np.all(np.abs(c.real - np.rint(c.real)) < tol) and np.all(np.abs(c.imag - np.rint(c.imag)) < tol))

    closed_mul = all(gaussian(group_mul(kind, a, b)) for a in gens for b in gens)
    closed_inv = all(gaussian(group_inverse(kind, a)) for a in gens)

    rng = np.random.default_rng(seed)
    words_ok = True
    for _ in range(100):
        g = group_identity()
        for k in rng.integers(len(gens), size=8):
            g = group_mul(kind, g, gens[k])
        words_ok = words_ok and gaussian(g) and gaussian(group_inverse(kind, g))

    return LatticeReport(
        kind=spec.kind if spec is not None else "iwasawa",
        checks={
            "closed_under_mul": closed_mul,
            "closed_under_inverse": closed_inv,
            "random_words_gaussian": words_ok,
        },
        details={"lambda": pair(1j), "alpha": [pair(0), pair(0)], "beta": [pair(1), pair(1j)]},
    )


def verify_lattice_nil(spec: LatticeSpecNil, tol: float = DEFAULT_TOL) -> LatticeReport:
    """Delta generated by (a1, b1), (a2, b2), (0, a1), (0, a2), preserved by phi(1) and phi(lambda)."""
    A = np.array(spec.A, dtype=float)
    alpha = np.array(spec.alpha, dtype=complex)
    beta = np.array(spec.beta, dtype=complex)
    lam = spec.lam

    det = int(sympy.Matrix(spec.A).det())
    generators = [(alpha[0], beta[0]), (alpha[1], beta[1]), (0j, alpha[0]), (0j, alpha[1])]
    G = _real_rows(generators)
    gen_det = float(np.linalg.det(G))
    independent = abs(gen_det) > tol

    def phi(x, point):
        y, z = point
        return y, z + x * y

    checks = {
        "det_unit": det in (1, -1),
        "eigen_ok": _close(A @ alpha, lam * alpha, tol),
        "lambda_nonreal": abs(lam.imag) > tol,
        "delta_generators_independent_over_R": independent,
        "preserved_by_phi1": independent and _preserved([phi(1, p) for p in generators], G),
        "preserved_by_phiLambda": independent and _preserved([phi(lam, p) for p in generators], G),
    }
    logger.debug(f"nilpotent lattice checks: {checks}")
    return LatticeReport(kind=spec.kind, checks=checks, details={"det_A": det, "generator_determinant": gen_det})


def _eigenvector(M: np.ndarray, value: complex) -> np.ndarray:
    N = scipy.linalg.null_space(M - value * np.eye(M.shape[0]), rcond=1e-8)
    if N.shape[1] == 0:
        raise SpecError(f"{value} is not an eigenvalue")
    v = N[:, 0] + 1j * N[:, 1] if N.shape[1] > 1 else N[:, 0].astype(complex)
    pivot = next(c for c in v if abs(c) > 1e-8)
    return v / pivot


def complete_eigendata(spec: LatticeSpecSolv, tol: float = DEFAULT_TOL) -> LatticeSpecSolv:
    """
    Fill in omitted gamma, delta, alpha, beta: gamma is the root of det(tI - A)
    of largest modulus (ties by larger imaginary part), alpha and beta span
    the gamma^-1 and gamma eigenspaces of A, and delta is exp(k_mu*pi*i) or the
    eigenvalue of B on beta.
    """
    if None not in (spec.gamma, spec.delta, spec.alpha, spec.beta):
        return spec
    A = np.array(spec.A, dtype=float)
    B = np.array(spec.B, dtype=float)

    gamma = spec.gamma
    if gamma is None:
        roots = poly_roots(char_poly(spec.A), tol)
        gamma = max(roots, key=lambda r: (round(abs(r), 9), r.imag))
    alpha = np.array(spec.alpha, dtype=complex) if spec.alpha is not None else _eigenvector(A, 1 / gamma)
    beta = np.array(spec.beta, dtype=complex) if spec.beta is not None else _eigenvector(A, gamma)

    delta = spec.delta
    if delta is None:
        if spec.k_mu is not None:
            delta = cmath.exp(spec.k_mu * math.pi * 1j)
        else:
            delta = complex(np.vdot(beta, B @ beta) / np.vdot(beta, beta))
    logger.debug(f"eigen-data: gamma={gamma}, delta={delta}")
    return spec.model_copy(update={"gamma": gamma, "delta": delta, "alpha": list(alpha), "beta": list(beta)})


def log_generators(spec: LatticeSpecSolv) -> tuple:
    """(lambda, mu): principal log of gamma, and k_mu*pi*i or the principal log of delta."""
    spec = complete_eigendata(spec)
    lam = cmath.log(spec.gamma)
    mu = spec.k_mu * math.pi * 1j if spec.k_mu is not None else cmath.log(spec.delta)
    return lam, mu


def _in_pi_z(value: float, tol: float) -> bool:
    k = value / math.pi
    return abs(k - round(k)) < tol


def verify_lattice_solv(spec: LatticeSpecSolv, tol: float = DEFAULT_TOL) -> LatticeReport:
    spec = complete_eigendata(spec, tol)
    A_exact, B_exact = sympy.Matrix(spec.A), sympy.Matrix(spec.B)
    A = np.array(spec.A, dtype=float)
    B = np.array(spec.B, dtype=float)
    gamma, delta = spec.gamma, spec.delta
    alpha = np.array(spec.alpha, dtype=complex)
    beta = np.array(spec.beta, dtype=complex)
    lam, mu = log_generators(spec)

    generators = list(zip(alpha, beta))
    G = _real_rows(generators)
    gen_det = float(np.linalg.det(G))
    independent = abs(gen_det) > tol

    def phi(x, point):
        y, z = point
        return cmath.exp(x) * y, cmath.exp(-x) * z

    checks = {
        "commute": A_exact * B_exact == B_exact * A_exact,
        "semisimple_A": min_poly_squarefree(A_exact),
        "semisimple_B": min_poly_squarefree(B_exact),
        "det_one": A_exact.det() == 1 and B_exact.det() == 1,
        "eigen_relations_ok": all(
            (
                _close(A @ alpha, alpha / gamma, tol),
                _close(A @ beta, gamma * beta, tol),
                _close(B @ alpha, alpha / delta, tol),
                _close(B @ beta, delta * beta, tol),
            )
        ),
        "lambda_mu_independent": abs((lam * mu.conjugate()).imag) > tol,
        "generators_independent": independent,
        "preserved_by_phiLambda": independent and _preserved([phi(lam, p) for p in generators], G),
        "preserved_by_phiMu": independent and _preserved([phi(mu, p) for p in generators], G),
    }
    if spec.k_mu is not None:
        checks["delta_matches_k_mu"] = abs(cmath.exp(mu) - delta) < tol * (1 + abs(delta))

    subtype = "3a" if abs(gamma.imag) > tol or abs(delta.imag) > tol else "3b"
    logs_on_pi_lattice = _in_pi_z(lam.imag, tol) and _in_pi_z(mu.imag, tol)
    if logs_on_pi_lattice != (subtype == "3b"):
        logger.warning(f"subtype {subtype} disagrees with Im(lambda), Im(mu) in pi*Z")

    details = {
        "gamma": pair(gamma),
        "delta": pair(delta),
        "lambda": pair(lam),
        "mu": pair(mu),
        "generator_determinant": gen_det,
        "logs_in_pi_z": logs_on_pi_lattice,
    }
    if spec.k_mu is not None and B_exact == sympy.eye(4):
        details["interpretation"] = "B = I acting through mu = k_mu*pi*i"
    logger.debug(f"non-nilpotent lattice checks: {checks}")
    return LatticeReport(kind=spec.kind, checks=checks, details=details, subtype=subtype)


def verify_spec(spec, tol: float = DEFAULT_TOL) -> LatticeReport:
    if isinstance(spec, AbelianLatticeSpec):
        return verify_abelian(spec, tol)
    if isinstance(spec, IwasawaLatticeSpec):
        return verify_iwasawa(spec, tol)
    if isinstance(spec, LatticeSpecNil):
        return verify_lattice_nil(spec, tol)
    if isinstance(spec, LatticeSpecSolv):
        return verify_lattice_solv(spec, tol)
    raise SpecError(f"not a lattice spec: {spec!r}")


def classify(spec_or_kind, tol: float = DEFAULT_TOL) -> Classification:
    if isinstance(spec_or_kind, (AlgebraKind, str)):
        kind = AlgebraKind(spec_or_kind)
        if kind is AlgebraKind.ABELIAN:
            return Classification.TYPE1
        if kind is AlgebraKind.NILPOTENT:
            return Classification.TYPE2
        raise ClassificationError("the non-nilpotent type splits into 3a/3b only given lattice data")

    report = verify_spec(spec_or_kind, tol)
    if not report.valid:
        raise ClassificationError(f"invalid lattice spec, failed checks: {report.failed()}")
    kind = spec_kind(spec_or_kind)
    if kind is AlgebraKind.ABELIAN:
        return Classification.TYPE1
    if kind is AlgebraKind.NILPOTENT:
        return Classification.TYPE2
    return Classification.TYPE3A if report.subtype == "3a" else Classification.TYPE3B


# -- builders ---------------------------------------------------------------


def direct_sum_spec(A0, eps: complex = 1j, k_mu: int = 2, name: Optional[str] = None) -> LatticeSpecSolv:
    """
    Spec for A = A0 + A0 with A0 hyperbolic in SL(2, Z): real eigenvectors a, b
    of A0 for gamma^-1, gamma, lifted to (a1, a2, a1*eps, a2*eps) and likewise b.
    B is I for even k_mu and -I for odd k_mu.
    """
    A0 = np.array(A0, dtype=int)
    if A0.shape != (2, 2) or round(np.linalg.det(A0)) != 1 or abs(np.trace(A0)) <= 2:
        raise SpecError(f"need a hyperbolic matrix in SL(2, Z), got {A0.tolist()}")
    if abs(complex(eps).imag) == 0:
        raise SpecError("eps must be non-real")
    values, vectors = np.linalg.eig(A0.astype(float))
    small, big = np.argsort(np.abs(values))
    gamma = float(values[big].real)
    a = vectors[:, small].real / vectors[0, small].real
    b = vectors[:, big].real / vectors[0, big].real

    A = np.zeros((4, 4), dtype=int)
    A[:2, :2] = A0
    A[2:, 2:] = A0
    sign = 1 if k_mu % 2 == 0 else -1
    return LatticeSpecSolv(
        name=name,
        A=A.tolist(),
        B=(sign * np.eye(4, dtype=int)).tolist(),
        gamma=complex(gamma),
        alpha=[complex(a[0]), complex(a[1]), a[0] * eps, a[1] * eps],
        beta=[complex(b[0]), complex(b[1]), b[0] * eps, b[1] * eps],
        k_mu=k_mu,
    )


_ELEMENTARY = [
    np.array([[1, 1], [0, 1]]),
    np.array([[1, -1], [0, 1]]),
    np.array([[1, 0], [1, 1]]),
    np.array([[1, 0], [-1, 1]]),
]


def random_hyperbolic_sl2(rng: np.random.Generator, max_length: int = 6) -> list:
    """A random word in the elementary matrices with |trace| > 2."""
    while True:
        M = np.eye(2, dtype=int)
        for k in rng.integers(len(_ELEMENTARY), size=int(rng.integers(2, max_length + 1))):
            M = M @ _ELEMENTARY[k]
        if abs(int(np.trace(M))) > 2:
            return M.tolist()
