"""Pytest configuration and fixtures for knroots tests."""

import numpy as np
import pytest

from knroots.config import (
    ANGLE_TOL_ENV,
    ARCHIVE_URL_ENV,
    ENUMERATION_LIMIT_ENV,
    LOG_TOL_ENV,
    TOL_ENV,
    Settings,
)
from knroots.monoid import AffineMonoid, parse_monoid_spec
from tests.test_utils import SHARP_CORPUS


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Run every test with default settings, whatever the shell exports."""
    for name in (
        TOL_ENV,
        ANGLE_TOL_ENV,
        LOG_TOL_ENV,
        ENUMERATION_LIMIT_ENV,
        ARCHIVE_URL_ENV,
    ):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def settings():
    return Settings()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def N():
    return parse_monoid_spec("N")


@pytest.fixture
def N2():
    return parse_monoid_spec("N2")


@pytest.fixture
def N3():
    return parse_monoid_spec("N3")


@pytest.fixture
def A1():
    return parse_monoid_spec("A1")


@pytest.fixture
def cusp():
    """The numerical semigroup <2, 3>."""
    return parse_monoid_spec("numsemigroup:2,3")


@pytest.fixture(params=sorted(SHARP_CORPUS))
def corpus_monoid(request):
    """Each corpus monoid, with its name."""
    return request.param, AffineMonoid.from_generators(SHARP_CORPUS[request.param])
