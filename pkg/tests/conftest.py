import numpy as np
import pytest

from oees import ModelSpec, Qwz, Sticlet


@pytest.fixture(scope="session")
def fig2_qwz_spec():
    return ModelSpec(normal_state=Qwz(mu=0.5), delta0=1.0, d_vector="perp_inplane")


@pytest.fixture(scope="session")
def fig2_sticlet_spec():
    return ModelSpec(normal_state=Sticlet(alpha=-1.0, t_s=-1.0), delta0=0.1, d_vector="perp_inplane")


@pytest.fixture(scope="session")
def fig3_spec():
    return ModelSpec(normal_state=Qwz(mu=0.2), delta0=1.0, d_vector="zero", hprime_enabled=True)


@pytest.fixture(scope="session")
def fig3_mirror_spec():
    return ModelSpec(normal_state=Qwz(mu=-0.2), delta0=1.0, d_vector="zero", hprime_enabled=True)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
