import pytest

from sshscatter import CouplingConfig, EmitterParams, Variant, WaveguideParams


@pytest.fixture
def trivial_chain():
    """delta > 0 chain used throughout the figures: t1 = 1.5, t2 = 0.5."""
    return WaveguideParams(delta=0.5)


@pytest.fixture
def topological_chain():
    return WaveguideParams(delta=-0.5)


@pytest.fixture
def resonant_emitter():
    """Emitter at omega_e = 1.5 J inside the upper band, g = 0.2 J."""
    return EmitterParams(omega_e=1.5, g=0.2, x1=7)


@pytest.fixture
def config_a():
    return CouplingConfig(Variant.A)


@pytest.fixture
def config_b():
    return CouplingConfig(Variant.B)


@pytest.fixture
def config_ab():
    return CouplingConfig(Variant.AB, 0.5)
