"""Shared fixtures: reference parameter sets and the (expensive) lemma
catalog run, computed once per session."""

import pytest

from drchm.catalog import lemma_catalog_check
from drchm.model import ModelParams
from drchm.sampler import SamplerConfig


@pytest.fixture(scope="session")
def params_g() -> ModelParams:
    """Gaussian-regime reference parameters."""
    return ModelParams(beta=0.25, gamma=0.2, gamma_prime=0.2, n=100.0)


@pytest.fixture(scope="session")
def params_s() -> ModelParams:
    """Stable-regime reference parameters."""
    return ModelParams(beta=0.25, gamma=0.7, gamma_prime=0.2, n=100.0)


@pytest.fixture()
def scfg() -> SamplerConfig:
    return SamplerConfig(master_seed=12345)


@pytest.fixture(scope="session")
def catalog_records():
    """The full 20-draw catalog run, shared between the unit test and the
    acceptance criterion."""
    return lemma_catalog_check(draws=20)
