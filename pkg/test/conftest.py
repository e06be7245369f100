import json

from pathlib import Path

import pytest

from lattices import load_spec
from lie_core import AlgebraKind, catalog

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def real_form():
    return catalog()[AlgebraKind.NON_NILPOTENT].real_form


@pytest.fixture
def example2():
    return load_spec(str(DATA / "example2.json"))


@pytest.fixture
def example3():
    return load_spec(str(DATA / "example3.json"))


@pytest.fixture
def iwasawa():
    return load_spec(str(DATA / "iwasawa.json"))


def read_json(name):
    with open(DATA / name) as f:
        return json.load(f)
