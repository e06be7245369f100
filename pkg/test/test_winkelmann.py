import math

import numpy as np
import pytest

from conftest import read_json
from errors import ClassificationError
from lattices import Classification, direct_sum_spec, log_generators, parse_spec, random_hyperbolic_sl2
from lie_core import AlgebraKind, catalog
from winkelmann import (
    adjoint_on_quotient,
    dim_W,
    dim_W_shortcut,
    h1,
    h1_lie,
    quotient_dimension,
    real_semisimple,
)


@pytest.mark.parametrize("kind, expected", [("abelian", 3), ("nilpotent", 2), ("non_nilpotent", 1)])
def test_h1_lie(kind, expected):
    assert h1_lie(catalog()[AlgebraKind(kind)].complex_algebra) == expected


def test_quotient_dimensions():
    assert quotient_dimension(AlgebraKind.ABELIAN) == 0
    assert quotient_dimension(AlgebraKind.NILPOTENT) == 0
    assert quotient_dimension(AlgebraKind.NON_NILPOTENT) == 2


def test_dim_w_by_kind():
    assert dim_W(AlgebraKind.ABELIAN) == 0
    assert dim_W("nilpotent") == 0
    with pytest.raises(ClassificationError):
        dim_W(AlgebraKind.NON_NILPOTENT)


def test_h1_by_kind():
    assert h1("abelian").h1 == 3
    report = h1(AlgebraKind.NILPOTENT)
    assert (report.dim_h1_lie, report.dim_W, report.h1) == (2, 0, 2)
    assert report.kind is Classification.TYPE2


def test_example2(example2):
    assert dim_W(example2) == 0
    report = h1(example2)
    assert report.h1 == 1
    assert report.kind is Classification.TYPE3A


def test_example3(example3):
    assert dim_W(example3) == 2
    report = h1(example3)
    assert (report.dim_h1_lie, report.dim_W, report.h1) == (1, 2, 3)
    assert report.kind is Classification.TYPE3B


def test_lattice_specs_of_other_kinds(iwasawa):
    assert h1(iwasawa).h1 == 2
    assert h1(parse_spec(read_json("abelian.json"))).h1 == 3


def test_invalid_spec_raises():
    data = read_json("example3.json")
    data["B"] = [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    with pytest.raises(ClassificationError):
        dim_W(parse_spec(data))


def test_random_direct_sums_match_shortcut():
    rng = np.random.default_rng(7)
    for k in range(50):
        A0 = random_hyperbolic_sl2(rng, max_length=4)
        spec = direct_sum_spec(A0, eps=complex(1, 1 + k % 3), k_mu=(2, 4, -2)[k % 3])
        assert dim_W(spec) == dim_W_shortcut(spec) == 2


@pytest.mark.parametrize("k_mu", [2, 4, -2])
def test_example2_variants_match_shortcut(k_mu):
    data = read_json("example2.json")
    data["k_mu"] = k_mu
    spec = parse_spec(data)
    assert dim_W(spec) == dim_W_shortcut(spec) == 0
    assert h1(spec).h1 == 1


def test_adjoint_on_quotient():
    M = adjoint_on_quotient(1.0 + 0j)
    assert np.allclose(M, np.diag([math.exp(-1), math.exp(-1), math.e, math.e]))
    assert np.allclose(adjoint_on_quotient(math.pi * 1j), -np.eye(4))
    assert np.allclose(adjoint_on_quotient(2 * math.pi * 1j), np.eye(4))


def test_adjoint_is_multiplicative(example2):
    lam, mu = log_generators(example2)
    assert np.allclose(
        adjoint_on_quotient(lam + mu),
        adjoint_on_quotient(lam) @ adjoint_on_quotient(mu),
    )
    assert np.allclose(adjoint_on_quotient(lam) @ adjoint_on_quotient(-lam), np.eye(4))


@pytest.mark.parametrize(
    "M, expected",
    [
        (np.array([[0.0, -1.0], [1.0, 0.0]]), False),
        (2.0 * np.eye(2), True),
        (np.array([[1.0, 1.0], [0.0, 1.0]]), False),
        (np.diag([1.0, 2.0]), True),
        (np.array([[2.0, 1.0], [1.0, 1.0]]), True),
    ],
)
def test_real_semisimple(M, expected):
    assert real_semisimple(M) is expected
