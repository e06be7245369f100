import numpy as np
import pytest
import sympy

from hypothesis import given, settings
from hypothesis import strategies as st

from errors import DimensionError, SpecError
from lie_core import (
    AlgebraFile,
    AlgebraKind,
    StructureAlgebra,
    ad_matrix,
    bracket,
    catalog,
    derived_algebra,
    derived_and_central_series,
    is_nilpotent_ideal,
    is_unimodular,
    jacobi_check,
    load_algebra,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
KINDS = list(AlgebraKind)


def vectors(n):
    return st.lists(rationals, min_size=n, max_size=n).map(tuple)


def test_nilpotent_bracket():
    g = catalog()[AlgebraKind.NILPOTENT].complex_algebra
    assert bracket(g, (1, 0, 0), (0, 1, 0)) == (0, 0, 1)


def test_real_form_bracket(real_form):
    x_prime = (0, 1, 0, 0, 0, 0)
    y_prime = (0, 0, 0, 1, 0, 0)
    assert bracket(real_form, x_prime, y_prime) == (0, 0, 1, 0, 0, 0)


def test_bracket_self_is_zero(real_form):
    u = (1, 2, 3, 4, 5, 6)
    assert not any(bracket(real_form, u, u))


def test_bracket_length_mismatch(real_form):
    with pytest.raises(DimensionError):
        bracket(real_form, (1, 0), (0, 1))


def test_numeric_bracket_matches_exact(real_form):
    rng = np.random.default_rng(2)
    u, v = rng.integers(-3, 4, size=(2, 6))
    exact = bracket(real_form, tuple(int(x) for x in u), tuple(int(x) for x in v))
    numeric = bracket(real_form, u.astype(float), v.astype(float))
    assert np.allclose(numeric, [float(c) for c in exact])


def test_real_form_file_matches_realification(data_dir, real_form):
    loaded = load_algebra(str(data_dir / "nonnilpotent_real.json"))
    assert loaded.constants == real_form.constants
    assert loaded.basis_labels == ("X", "X'", "Y", "Y'", "Z", "Z'")


@pytest.mark.parametrize("kind", KINDS)
def test_catalog_is_jacobi_and_unimodular(kind):
    entry = catalog()[kind]
    assert jacobi_check(entry.complex_algebra)
    assert jacobi_check(entry.real_form)
    assert is_unimodular(entry.complex_algebra)
    assert is_unimodular(entry.real_form)
    assert is_nilpotent_ideal(entry.real_form, entry.nilradical_indices)


def test_jacobi_failure():
    g = StructureAlgebra.from_brackets(3, [(0, 1, (0, 0, 1)), (0, 2, (0, 1, 0)), (1, 2, (0, 1, 0))])
    assert not jacobi_check(g)


def test_not_unimodular():
    g = StructureAlgebra.from_brackets(2, [(0, 1, (0, 1))])
    assert not is_unimodular(g)


@pytest.mark.parametrize(
    "kind, derived, lower",
    [
        (AlgebraKind.ABELIAN, (3, 0), (3, 0)),
        (AlgebraKind.NILPOTENT, (3, 1, 0), (3, 1, 0)),
        (AlgebraKind.NON_NILPOTENT, (3, 2, 0), (3, 2)),
    ],
)
def test_series(kind, derived, lower):
    series = derived_and_central_series(catalog()[kind].complex_algebra)
    assert series.derived == derived
    assert series.lower_central == lower
    assert series.is_solvable
    assert series.is_nilpotent == (kind is not AlgebraKind.NON_NILPOTENT)


@pytest.mark.parametrize("kind, expected", list(zip(KINDS, (3, 2, 1))))
def test_dim_h1_from_derived_algebra(kind, expected):
    g = catalog()[kind].complex_algebra
    assert g.dim - len(derived_algebra(g)) == expected


def test_ad_matrix_examples(real_form):
    g = catalog()[AlgebraKind.NON_NILPOTENT].complex_algebra
    assert ad_matrix(g, (1, 0, 0)) == sympy.diag(0, -1, 1)
    assert ad_matrix(g, (0, 0, 0)) == sympy.zeros(3, 3)

    expected = sympy.zeros(6, 6)
    expected[3, 2] = -1  # Y -> -Y'
    expected[2, 3] = 1  # Y' -> Y
    expected[5, 4] = 1  # Z -> Z'
    expected[4, 5] = -1  # Z' -> -Z
    assert ad_matrix(real_form, (0, 1, 0, 0, 0, 0)) == expected


@pytest.mark.parametrize("kind", KINDS)
@given(data=st.data())
@settings(max_examples=100, deadline=None)
def test_bracket_antisymmetric(kind, data):
    g = catalog()[kind].real_form
    u, v = data.draw(vectors(6)), data.draw(vectors(6))
    assert bracket(g, u, v) == tuple(-c for c in bracket(g, v, u))


@pytest.mark.parametrize("kind", KINDS)
@given(data=st.data())
@settings(max_examples=50, deadline=None)
def test_ad_is_homomorphism(kind, data):
    g = catalog()[kind].real_form
    u, v = data.draw(vectors(6)), data.draw(vectors(6))
    A, B = ad_matrix(g, u), ad_matrix(g, v)
    assert ad_matrix(g, bracket(g, u, v)) == A * B - B * A


def test_complex_nilradical_indices():
    assert catalog()[AlgebraKind.NON_NILPOTENT].complex_nilradical_indices == (1, 2)
    assert catalog()[AlgebraKind.NILPOTENT].complex_nilradical_indices == (0, 1, 2)


def test_describe_lists_brackets():
    described = catalog()[AlgebraKind.NON_NILPOTENT].describe()
    assert described["brackets"] == ["[X, Y] = -Y", "[X, Z] = Z"]
    assert described["nilradical"] == ["Y", "Y'", "Z", "Z'"]


def test_json_round_trip(real_form):
    again = AlgebraFile.model_validate(real_form.to_json()).to_algebra()
    assert again.constants == real_form.constants


def test_bad_algebra_input():
    with pytest.raises(SpecError):
        StructureAlgebra.from_brackets(2, [(0, 0, (1, 0))])
    with pytest.raises(SpecError):
        StructureAlgebra.from_brackets(2, [(0, 1, (1, 0)), (1, 0, (1, 0))])
    with pytest.raises(DimensionError):
        StructureAlgebra.from_brackets(2, [(0, 1, (1, 0, 0))])
    with pytest.raises(SpecError):
        load_algebra("catalog:solvable")
