"""
Exact rational/integer linear algebra and polynomial root machinery.

Exact work goes through sympy (rationals, Berkowitz characteristic
polynomials, ranks, null spaces); floating work goes through numpy.
"""

import numbers

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import sympy

from loguru import logger
from numpy.polynomial import polynomial as npoly

from config import DEFAULT_TOL, ROOT_MAX_ITER, ROOT_STEP_TOL
from errors import ConvergenceError, DimensionError, SingularityError, SpecError

T = sympy.Symbol("t")


def to_rational(value) -> sympy.Rational:
    """Parse an int, Fraction, sympy number or a "p/q" string into a reduced rational."""
    if isinstance(value, sympy.Rational):
        return value
    if isinstance(value, bool):
        raise SpecError(f"not a rational: {value!r}")
    if isinstance(value, numbers.Integral):
        return sympy.Integer(int(value))
    if isinstance(value, numbers.Rational):
        return sympy.Rational(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        try:
            parsed = sympy.Rational(value.strip())
        except (TypeError, ValueError, sympy.SympifyError) as e:
            raise SpecError(f"not a rational: {value!r}") from e
        return parsed
    raise SpecError(f"not a rational: {value!r}")


def is_exact(values) -> bool:
    """True when every entry is an exact rational (ints, Fractions, sympy rationals)."""
    if isinstance(values, sympy.MatrixBase):
        return all(isinstance(x, sympy.Rational) for x in values)
    if isinstance(values, np.ndarray) and values.dtype.kind in "fc":
        return False
    if isinstance(values, GaussianVector):
        return True
    try:
        flat = list(values)
    except TypeError:
        return isinstance(values, (numbers.Rational, sympy.Rational))
    return all(
        is_exact(x) if isinstance(x, (list, tuple)) else isinstance(x, (numbers.Rational, sympy.Rational))
        for x in flat
    )


def exact_matrix(M) -> sympy.Matrix:
    if isinstance(M, sympy.MatrixBase):
        return sympy.Matrix(M)
    return sympy.Matrix([[to_rational(x) for x in row] for row in M])


def _square_exact(M) -> sympy.Matrix:
    try:
        S = exact_matrix(M)
    except SpecError:
        raise
    except (TypeError, ValueError) as e:
        raise DimensionError(f"not a matrix: {M!r}") from e
    if S.rows == 0 or S.rows != S.cols:
        raise DimensionError(f"expected a square matrix, got {S.rows}x{S.cols}")
    return S


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients lowest degree first."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = [int(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def __call__(self, x):
        return npoly.polyval(x, np.asarray(self.coefficients, dtype=float))

    def to_sympy(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coefficients)) or [0], T)

    @classmethod
    def from_sympy(cls, poly: sympy.Poly) -> "IntPolynomial":
        coeffs = poly.all_coeffs()
        if any(not c.is_integer for c in coeffs):
            raise SpecError(f"non-integral coefficients in {poly}")
        return cls(tuple(int(c) for c in reversed(coeffs)))

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(k * c for k, c in enumerate(self.coefficients) if k > 0))

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mag = abs(c)
            body = "t" if k == 1 else f"t^{k}" if k > 1 else ""
            text = body if mag == 1 and body else f"{mag} {body}".strip()
            sign = "-" if c < 0 else "+"
            terms.append((sign, text))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in terms[1:]:
            out += f" {sign} {text}"
        return out


def companion(p: IntPolynomial) -> sympy.Matrix:
    """Companion matrix with ones on the superdiagonal and -a_0..-a_{n-1} on the last row."""
    if p.leading != 1 or p.degree < 1:
        raise SpecError(f"companion matrix needs a monic polynomial of degree >= 1, got {p}")
    n = p.degree
    C = sympy.zeros(n, n)
    for i in range(n - 1):
        C[i, i + 1] = 1
    for j in range(n):
        C[n - 1, j] = -p.coefficients[j]
    return C


def char_poly(M) -> IntPolynomial:
    """det(tI - M), computed exactly (Berkowitz, division free)."""
    S = _square_exact(M)
    poly = S.charpoly(T)
    result = IntPolynomial.from_sympy(poly)
    logger.debug(f"char_poly: {result}")
    return result


def minimal_polynomial(M) -> IntPolynomial:
    """Monic minimal polynomial over Q: first linear dependency among I, M, M^2, ..."""
    S = _square_exact(M)
    n = S.rows
    powers = [sympy.eye(n)]
    for k in range(1, n + 1):
        powers.append(powers[-1] * S)
        stacked = sympy.Matrix.hstack(*[P.reshape(n * n, 1) for P in powers])
        kernel = stacked.nullspace()
        if kernel:
            v = kernel[0] / kernel[0][k]
            return IntPolynomial.from_sympy(sympy.Poly(list(reversed(list(v))), T))
    raise AssertionError("Cayley-Hamilton violated")


def min_poly_squarefree(M) -> bool:
    """True iff the minimal polynomial is squarefree, i.e. M is semisimple."""
    m = minimal_polynomial(M)
    g = sympy.gcd(m.to_sympy(), m.derivative().to_sympy())
    return sympy.Poly(g, T).degree() == 0


def is_reciprocal(p: IntPolynomial) -> bool:
    return p.coefficients == tuple(reversed(p.coefficients))


def poly_roots(p: IntPolynomial, tol: float = DEFAULT_TOL) -> list:
    """All complex roots by Durand-Kerner on the monic normalization, sorted by (re, im)."""
    if p.degree < 1:
        raise DimensionError(f"poly_roots needs degree >= 1, got {p}")
    coeffs = np.asarray(p.coefficients, dtype=complex)
    monic = coeffs / coeffs[-1]
    n = p.degree
    bound = 1.0 + np.max(np.abs(monic[:-1]))
    z = bound * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))

    converged = False
    for iteration in range(ROOT_MAX_ITER):
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        step = npoly.polyval(z, monic) / np.prod(diff, axis=1)
        z = z - step
        if not np.all(np.isfinite(z)):
            raise ConvergenceError(f"Durand-Kerner diverged on {p}", best_iterate=z)
        if np.max(np.abs(step)) < ROOT_STEP_TOL:
            converged = True
            break

    scale = np.sum(np.abs(coeffs))
    residuals = np.abs(npoly.polyval(z, coeffs)) / scale
    if np.max(residuals) >= tol:
        raise ConvergenceError(
            f"Durand-Kerner did not converge on {p}: residual {np.max(residuals):.3e}",
            best_iterate=z,
        )
    if not converged:
        logger.debug(f"poly_roots: movement criterion not met for {p}, residuals accepted")

    roots = sorted((complex(r) for r in z), key=lambda r: (r.real, r.imag))
    logger.debug(f"poly_roots({p}) after {iteration + 1} iterations: {roots}")
    return roots


def integer_recover(v, basis, tol: float = DEFAULT_TOL) -> Optional[tuple]:
    """Solve basis @ c = v and return round(c) when c is within tol of an integer vector."""
    B = np.asarray(basis, dtype=float)
    target = np.asarray(v, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1] or target.shape != (B.shape[0],):
        raise DimensionError(f"basis {B.shape} and vector {target.shape} do not match")
    try:
        if np.linalg.cond(B) > 1e12:
            raise SingularityError("basis is numerically singular")
        c = np.linalg.solve(B, target)
    except np.linalg.LinAlgError as e:
        raise SingularityError("basis is singular") from e
    rounded = np.rint(c)
    if np.max(np.abs(c - rounded), initial=0.0) < tol:
        return tuple(int(x) for x in rounded)
    return None


def exact_rank(vectors: Sequence) -> int:
    """Rank of a list of rational vectors."""
    vectors = list(vectors)
    if not vectors:
        return 0
    return sympy.Matrix([[to_rational(x) for x in v] for v in vectors]).rank()


def span_basis(vectors: Sequence) -> list:
    """An independent subset of rational vectors spanning the same space."""
    vectors = [tuple(to_rational(x) for x in v) for v in vectors]
    if not vectors:
        return []
    _, pivots = sympy.Matrix(vectors).T.rref()
    return [vectors[k] for k in pivots]


@dataclass(frozen=True)
class GaussianVector:
    """Exact element of a complexification g + i*g, stored by real and imaginary parts."""

    re: tuple
    im: tuple

    def __post_init__(self):
        if len(self.re) != len(self.im):
            raise DimensionError("real and imaginary parts differ in length")
        object.__setattr__(self, "re", tuple(to_rational(x) for x in self.re))
        object.__setattr__(self, "im", tuple(to_rational(x) for x in self.im))

    @classmethod
    def real(cls, v) -> "GaussianVector":
        return cls(tuple(v), tuple(0 for _ in v))

    def __len__(self):
        return len(self.re)

    def conjugate(self) -> "GaussianVector":
        return GaussianVector(self.re, tuple(-x for x in self.im))

    def __add__(self, other: "GaussianVector") -> "GaussianVector":
        return GaussianVector(
            tuple(a + b for a, b in zip(self.re, other.re)),
            tuple(a + b for a, b in zip(self.im, other.im)),
        )

    def __neg__(self) -> "GaussianVector":
        return GaussianVector(tuple(-x for x in self.re), tuple(-x for x in self.im))

    def __sub__(self, other: "GaussianVector") -> "GaussianVector":
        return self + (-other)

    def scale(self, a, b=0) -> "GaussianVector":
        """Multiply by the Gaussian rational a + i*b."""
        a, b = to_rational(a), to_rational(b)
        return GaussianVector(
            tuple(a * x - b * y for x, y in zip(self.re, self.im)),
            tuple(a * y + b * x for x, y in zip(self.re, self.im)),
        )

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for x in self.re) and all(x == 0 for x in self.im)

    def to_numpy(self) -> np.ndarray:
        return np.array([float(x) for x in self.re]) + 1j * np.array([float(y) for y in self.im])

    def to_pairs(self) -> list:
        return [[str(x), str(y)] for x, y in zip(self.re, self.im)]


def _realified_columns(vectors) -> sympy.Matrix:
    """Columns (re; im) and (-im; re) per vector: the real image of the C-span."""
    cols = []
    for v in vectors:
        cols.append(list(v.re) + list(v.im))
        cols.append([-y for y in v.im] + list(v.re))
    return sympy.Matrix(cols).T


def complex_rank(vectors: Sequence, tol: Optional[float] = None) -> int:
    """Rank over C; exact for GaussianVectors, else singular-value threshold tol * max entry."""
    vectors = list(vectors)
    if not vectors:
        return 0
    if all(isinstance(v, GaussianVector) for v in vectors):
        return _realified_columns(vectors).rank() // 2
    M = np.column_stack([_as_complex(v) for v in vectors])
    tol = DEFAULT_TOL if tol is None else tol
    threshold = tol * max(1.0, float(np.max(np.abs(M))))
    return int(np.linalg.matrix_rank(M, tol=threshold))


def independent_subset(vectors: Sequence, tol: Optional[float] = None) -> list:
    """Greedy C-independent subset, in order."""
    vectors = list(vectors)
    if vectors and all(isinstance(v, GaussianVector) for v in vectors):
        _, pivots = _realified_columns(vectors).rref()
        return [vectors[k // 2] for k in pivots if k % 2 == 0]
    chosen = []
    for v in vectors:
        if complex_rank(chosen + [v], tol) > len(chosen):
            chosen.append(v)
    return chosen


def gaussian_solve(basis: Sequence, target: GaussianVector) -> Optional[list]:
    """Exact coefficients c with sum c_k basis_k = target, or None when target is outside the span."""
    M = _realified_columns(basis)
    rhs = sympy.Matrix(list(target.re) + list(target.im))
    try:
        sol, params = M.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    if params.shape[0]:
        sol = sol.subs({p: 0 for p in params})
    return [sol[2 * k] + sympy.I * sol[2 * k + 1] for k in range(len(basis))]


def _as_complex(v) -> np.ndarray:
    if isinstance(v, GaussianVector):
        return v.to_numpy()
    return np.asarray(v, dtype=complex)
