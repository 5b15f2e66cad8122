import os

import numpy as np
import pytest

from quantobs import fixtures as fx

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


@pytest.fixture
def fixture_dir():
    return os.path.abspath(FIXTURE_DIR)


@pytest.fixture
def example1():
    return fx.example1()


@pytest.fixture
def e1():
    return fx.e1()


@pytest.fixture
def e2():
    return fx.e2()


@pytest.fixture
def dfm_nzi():
    return fx.dfm_nzi()


@pytest.fixture
def example5():
    return fx.example5()


def random_stable_system(rng, n_max=3, n_inputs_max=3):
    """Random Schur-stable single-output system over a small input alphabet.

    Always includes the zero input so the distance search preconditions hold.
    """
    from quantobs.plant import QuantizedLtiSystem
    from quantobs.quantizer import IntervalQuantizer, ProductQuantizer

    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, 3))
    A = rng.normal(size=(n, n))
    # scale to a spectral radius comfortably inside the unit disk
    rho = max(abs(np.linalg.eigvals(A)))
    A = A * (rng.uniform(0.2, 0.8) / max(rho, 1e-6))
    B = rng.normal(size=(n, m))
    C = rng.normal(size=(1, n))
    D = rng.normal(size=(1, m))
    n_extra = int(rng.integers(1, n_inputs_max))
    inputs = np.vstack([np.zeros((1, m))] +
                       [rng.normal(size=(1, m)) for _ in range(n_extra)])
    bps = np.sort(rng.uniform(0.3, 2.0, size=2) * np.array([-1.0, 1.0]))
    quant = ProductQuantizer(dims=(IntervalQuantizer(
        breakpoints=tuple(bps), levels=(-1.0, 0.0, 1.0)),))
    return QuantizedLtiSystem(A=A, B=B, C=C, D=D, inputs=inputs, quantizer=quant)
