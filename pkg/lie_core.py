"""
Structure-constant Lie algebras, complexifications, ad operators and the
catalog of three-dimensional unimodular complex solvable Lie algebras.
"""

import json

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Mapping, Optional, Union

import numpy as np
import sympy

from loguru import logger
from pydantic import BaseModel, ConfigDict, PositiveInt

from algebra_kernel import GaussianVector, is_exact, span_basis, to_rational
from errors import DimensionError, SpecError


class AlgebraKind(str, Enum):
    ABELIAN = "abelian"
    NILPOTENT = "nilpotent"
    NON_NILPOTENT = "non_nilpotent"


@dataclass(frozen=True)
class StructureAlgebra:
    """
    A Lie algebra given by rational structure constants.

    ``constants[(i, j)]`` is the coordinate vector of [e_i, e_j] for i < j;
    omitted pairs bracket to zero.
    """

    dim: int
    constants: Mapping = field(default_factory=dict)
    basis_labels: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError(f"dimension must be positive, got {self.dim}")
        labels = tuple(self.basis_labels) or tuple(f"e{k}" for k in range(self.dim))
        if len(labels) != self.dim or len(set(labels)) != self.dim:
            raise SpecError(f"need {self.dim} distinct basis labels, got {labels}")
        object.__setattr__(self, "basis_labels", labels)

        cleaned = {}
        for (i, j), vec in dict(self.constants).items():
            if not (0 <= i < j < self.dim):
                raise SpecError(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < {self.dim}")
            if len(vec) != self.dim:
                raise DimensionError(f"bracket [{i}, {j}] has length {len(vec)}, expected {self.dim}")
            vec = tuple(to_rational(c) for c in vec)
            if any(vec):
                cleaned[(i, j)] = vec
        object.__setattr__(self, "constants", cleaned)

    @classmethod
    def from_brackets(cls, dim: int, brackets, labels=()) -> "StructureAlgebra":
        """Build from (i, j, vector) triples in any order; [e_j, e_i] entries are negated."""
        constants = {}
        for i, j, vec in brackets:
            if i == j:
                raise SpecError(f"bracket [{i}, {i}] is zero by antisymmetry and cannot be given")
            vec = tuple(to_rational(c) for c in vec)
            if i > j:
                i, j, vec = j, i, tuple(-c for c in vec)
            if (i, j) in constants and constants[(i, j)] != vec:
                raise SpecError(f"conflicting values for bracket [{i}, {j}]")
            constants[(i, j)] = vec
        return cls(dim, constants, tuple(labels))

    @cached_property
    def structure_tensor(self) -> np.ndarray:
        c = np.zeros((self.dim, self.dim, self.dim))
        for (i, j), vec in self.constants.items():
            c[i, j] = [float(x) for x in vec]
            c[j, i] = -c[i, j]
        return c

    @cached_property
    def sparse_constants(self) -> tuple:
        return tuple(
            (i, j, tuple((k, ck) for k, ck in enumerate(vec) if ck != 0))
            for (i, j), vec in sorted(self.constants.items())
        )

    def basis_vector(self, k: int) -> tuple:
        return tuple(sympy.Integer(1 if m == k else 0) for m in range(self.dim))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "labels": list(self.basis_labels),
            "brackets": [[i, j, [str(c) for c in vec]] for (i, j), vec in sorted(self.constants.items())],
        }


class AlgebraFile(BaseModel):
    """JSON algebra format, 0-based indices, rationals as ints or "p/q" strings."""

    model_config = ConfigDict(frozen=True)

    dim: PositiveInt
    brackets: list[tuple[int, int, list[Union[int, str]]]] = []
    labels: Optional[list[str]] = None

    def to_algebra(self) -> StructureAlgebra:
        return StructureAlgebra.from_brackets(self.dim, self.brackets, tuple(self.labels or ()))


def load_algebra(source: str) -> StructureAlgebra:
    """Load an algebra from a JSON file or a ``catalog:<kind>[:real]`` reference."""
    if source.startswith("catalog:"):
        parts = source.split(":")
        try:
            entry = catalog()[AlgebraKind(parts[1])]
        except (IndexError, ValueError) as e:
            raise SpecError(f"unknown catalog reference {source!r}") from e
        return entry.real_form if parts[2:] == ["real"] else entry.complex_algebra
    with open(source) as f:
        data = json.load(f)
    return AlgebraFile.model_validate(data).to_algebra()


def _check_length(g: StructureAlgebra, u):
    if len(u) != g.dim:
        raise DimensionError(f"vector of length {len(u)} on an algebra of dimension {g.dim}")


def _numeric(u) -> np.ndarray:
    if isinstance(u, GaussianVector):
        return u.to_numpy()
    arr = np.asarray(u)
    if arr.dtype == object:
        arr = arr.astype(complex)
    return arr


def _exact_bracket(g: StructureAlgebra, u, v) -> tuple:
    u = [to_rational(x) for x in u]
    v = [to_rational(x) for x in v]
    out = [sympy.Integer(0)] * g.dim
    for i, j, terms in g.sparse_constants:
        coef = u[i] * v[j] - u[j] * v[i]
        if coef:
            for k, ck in terms:
                out[k] += coef * ck
    return tuple(out)


def bracket(g: StructureAlgebra, u, v):
    """[u, v]; exact for rational or GaussianVector inputs, numpy otherwise."""
    _check_length(g, u)
    _check_length(g, v)
    if isinstance(u, GaussianVector) or isinstance(v, GaussianVector):
        return ComplexifiedAlgebra(g).bracket(u, v)
    if is_exact(u) and is_exact(v):
        return _exact_bracket(g, u, v)
    return np.einsum("i,j,ijk->k", _numeric(u), _numeric(v), g.structure_tensor)


@dataclass(frozen=True)
class ComplexifiedAlgebra:
    """g_C = g + i*g with the complex-bilinear extension of the bracket."""

    base: StructureAlgebra

    @property
    def dim(self) -> int:
        return self.base.dim

    def bracket(self, u, v):
        if isinstance(u, GaussianVector) and isinstance(v, GaussianVector):
            g = self.base
            rr = _exact_bracket(g, u.re, v.re)
            ii = _exact_bracket(g, u.im, v.im)
            ri = _exact_bracket(g, u.re, v.im)
            ir = _exact_bracket(g, u.im, v.re)
            return GaussianVector(
                tuple(a - b for a, b in zip(rr, ii)),
                tuple(a + b for a, b in zip(ri, ir)),
            )
        return np.einsum(
            "i,j,ijk->k",
            _numeric(u).astype(complex),
            _numeric(v).astype(complex),
            self.base.structure_tensor,
        )

    @staticmethod
    def conjugate(u):
        if isinstance(u, GaussianVector):
            return u.conjugate()
        return np.conj(u)


def ad_matrix(g: StructureAlgebra, u):
    """Matrix of ad(u) in the basis: column k is [u, e_k]."""
    _check_length(g, u)
    if is_exact(u) and not isinstance(u, GaussianVector):
        cols = [_exact_bracket(g, u, g.basis_vector(k)) for k in range(g.dim)]
        return sympy.Matrix(cols).T
    return np.einsum("i,ijk->kj", _numeric(u), g.structure_tensor)


def jacobi_check(g: StructureAlgebra) -> bool:
    basis = [g.basis_vector(k) for k in range(g.dim)]
    for i, j, k in combinations(range(g.dim), 3):
        a, b, c = basis[i], basis[j], basis[k]
        total = [
            x + y + z
            for x, y, z in zip(
                _exact_bracket(g, _exact_bracket(g, a, b), c),
                _exact_bracket(g, _exact_bracket(g, b, c), a),
                _exact_bracket(g, _exact_bracket(g, c, a), b),
            )
        ]
        if any(total):
            logger.debug(f"Jacobi identity fails on ({g.basis_labels[i]}, {g.basis_labels[j]}, {g.basis_labels[k]})")
            return False
    return True


def is_unimodular(g: StructureAlgebra) -> bool:
    return all(ad_matrix(g, g.basis_vector(k)).trace() == 0 for k in range(g.dim))


@dataclass(frozen=True)
class SeriesDims:
    derived: tuple
    lower_central: tuple

    @property
    def is_solvable(self) -> bool:
        return self.derived[-1] == 0

    @property
    def is_nilpotent(self) -> bool:
        return self.lower_central[-1] == 0


def _iterate_series(g: StructureAlgebra, step) -> tuple:
    current = [g.basis_vector(k) for k in range(g.dim)]
    dims = [g.dim]
    while current:
        nxt = span_basis(step(current))
        if len(nxt) == dims[-1]:
            break
        dims.append(len(nxt))
        current = nxt
    return tuple(dims)


def derived_algebra(g: StructureAlgebra, vectors=None) -> list:
    """A basis of [V, V] for V spanned by vectors (default: all of g)."""
    vectors = vectors if vectors is not None else [g.basis_vector(k) for k in range(g.dim)]
    return span_basis([_exact_bracket(g, a, b) for a, b in combinations(vectors, 2)])


def derived_and_central_series(g: StructureAlgebra) -> SeriesDims:
    """Dimensions of the derived and lower central series, stopping when they stabilize."""
    basis = [g.basis_vector(k) for k in range(g.dim)]
    derived = _iterate_series(g, lambda cur: [_exact_bracket(g, a, b) for a, b in combinations(cur, 2)])
    lower = _iterate_series(g, lambda cur: [_exact_bracket(g, e, c) for e in basis for c in cur])
    return SeriesDims(derived, lower)


def is_nilpotent_ideal(g: StructureAlgebra, indices) -> bool:
    """The span of the given basis vectors is an ideal whose lower central series reaches 0."""
    indices = set(indices)
    span = [g.basis_vector(k) for k in sorted(indices)]
    for k in range(g.dim):
        for n in span:
            image = _exact_bracket(g, g.basis_vector(k), n)
            if any(image[m] != 0 for m in range(g.dim) if m not in indices):
                return False
    current = span
    for _ in range(len(span) + 1):
        if not current:
            return True
        current = span_basis([_exact_bracket(g, a, c) for a in span for c in current])
    return not current


def realify(g: StructureAlgebra, labels=()) -> StructureAlgebra:
    """
    Underlying real algebra of a complex algebra with real structure constants,
    basis (e_0, i*e_0, e_1, i*e_1, ...).
    """
    brackets = []
    for (i, j), vec in g.constants.items():
        real_part = [0] * (2 * g.dim)
        imag_part = [0] * (2 * g.dim)
        for k, c in enumerate(vec):
            real_part[2 * k] = c
            imag_part[2 * k + 1] = c
        brackets.append((2 * i, 2 * j, real_part))
        brackets.append((2 * i, 2 * j + 1, imag_part))
        brackets.append((2 * i + 1, 2 * j, imag_part))
        brackets.append((2 * i + 1, 2 * j + 1, [-c for c in real_part]))
    if not labels:
        labels = tuple(x for name in g.basis_labels for x in (name, name + "'"))
    return StructureAlgebra.from_brackets(2 * g.dim, brackets, labels)


def _term(c, label: str) -> str:
    if c == 1:
        return label
    if c == -1:
        return f"-{label}"
    return f"{c}*{label}"


@dataclass(frozen=True)
class CatalogEntry:
    kind: AlgebraKind
    complex_algebra: StructureAlgebra
    real_form: StructureAlgebra
    nilradical_indices: tuple

    @property
    def complex_nilradical_indices(self) -> tuple:
        return tuple(sorted({k // 2 for k in self.nilradical_indices}))

    def describe(self) -> dict:
        g = self.complex_algebra
        brackets = []
        for (i, j), vec in sorted(g.constants.items()):
            terms = " + ".join(_term(c, g.basis_labels[k]) for k, c in enumerate(vec) if c != 0)
            brackets.append(f"[{g.basis_labels[i]}, {g.basis_labels[j]}] = {terms.replace('+ -', '- ')}")
        return {
            "kind": self.kind.value,
            "brackets": brackets,
            "nilradical": [self.real_form.basis_labels[k] for k in self.nilradical_indices],
        }


@lru_cache(maxsize=None)
def catalog() -> dict:
    """The abelian, nilpotent and non-nilpotent types, basis X, Y, Z."""
    labels = ("X", "Y", "Z")
    complex_algebras = {
        AlgebraKind.ABELIAN: StructureAlgebra(3, {}, labels),
        AlgebraKind.NILPOTENT: StructureAlgebra.from_brackets(3, [(0, 1, (0, 0, 1))], labels),
        AlgebraKind.NON_NILPOTENT: StructureAlgebra.from_brackets(
            3, [(0, 1, (0, -1, 0)), (0, 2, (0, 0, 1))], labels
        ),
    }
    nilradicals = {
        AlgebraKind.ABELIAN: (0, 1, 2, 3, 4, 5),
        AlgebraKind.NILPOTENT: (0, 1, 2, 3, 4, 5),
        AlgebraKind.NON_NILPOTENT: (2, 3, 4, 5),
    }
    entries = {}
    for kind, g in complex_algebras.items():
        entry = CatalogEntry(kind, g, realify(g), nilradicals[kind])
        if not is_nilpotent_ideal(entry.real_form, entry.nilradical_indices):
            raise AssertionError(f"nilradical metadata of {kind.value} is not a nilpotent ideal")
        entries[kind] = entry
    return entries
