import numpy as np
import pytest

from quantobs.errors import (
    BudgetError,
    DimensionError,
    DomainError,
    PlantOverflowError,
)
from quantobs.plant import (
    QuantizedLtiSystem,
    forced_response,
    forced_response_set,
    markov_parameters,
    resolve_budget,
    simulate,
)
from quantobs.quantizer import IntervalQuantizer, ProductQuantizer, unit_grid_quantizer


def _scalar_system(a=0.5, b=1.0, c=1.0, d=0.0, inputs=((0.0,), (1.0,), (-1.0,))):
    return QuantizedLtiSystem(
        A=np.array([[a]]), B=np.array([[b]]), C=np.array([[c]]),
        D=np.array([[d]]), inputs=np.array(inputs),
        quantizer=ProductQuantizer(dims=(unit_grid_quantizer(1),)))


def test_system_properties():
    sys = _scalar_system()
    assert (sys.n, sys.m, sys.p) == (1, 1, 1)
    assert sys.input_count == 3
    assert sys.zero_input_index() == 0
    assert sys.input_vector(2).tolist() == [-1.0]
    assert sys.max_input_drive == pytest.approx(1.0)


def test_system_arrays_read_only():
    sys = _scalar_system()
    with pytest.raises(ValueError):
        sys.A[0, 0] = 2.0


def test_system_validation():
    quant = ProductQuantizer(dims=(unit_grid_quantizer(1),))
    with pytest.raises(DimensionError):
        QuantizedLtiSystem(A=np.zeros((2, 1)), B=np.zeros((2, 1)),
                           C=np.zeros((1, 2)), D=np.zeros((1, 1)),
                           inputs=np.zeros((1, 1)), quantizer=quant)
    with pytest.raises(DomainError):
        QuantizedLtiSystem(A=np.array([[np.inf]]), B=np.zeros((1, 1)),
                           C=np.zeros((1, 1)), D=np.zeros((1, 1)),
                           inputs=np.zeros((1, 1)), quantizer=quant)
    with pytest.raises(DomainError):
        # duplicate input vectors
        QuantizedLtiSystem(A=np.zeros((1, 1)), B=np.zeros((1, 1)),
                           C=np.zeros((1, 1)), D=np.zeros((1, 1)),
                           inputs=np.zeros((2, 1)), quantizer=quant)


def test_simulate_scalar_closed_form():
    sys = _scalar_system(a=0.5, d=1.0)
    idx = [1, 0, 0, 2]
    traj = simulate(sys, [0.25], idx)
    assert len(traj) == 4
    # x: 0.25, 1.125, 0.5625, 0.28125 ; raw = x + u
    assert traj.states[:, 0].tolist() == pytest.approx([0.25, 1.125, 0.5625, 0.28125])
    assert traj.raw_outputs[:, 0].tolist() == pytest.approx([1.25, 1.125, 0.5625, -0.71875])
    assert traj.outputs[:, 0].tolist() == [1.0, 1.0, 1.0, -1.0]


def test_simulate_rejects_bad_indices():
    sys = _scalar_system()
    with pytest.raises(DomainError):
        simulate(sys, [0.0], [0, 3])
    with pytest.raises(DomainError):
        simulate(sys, [0.0], [-1])


def test_simulate_empty_inputs():
    traj = simulate(_scalar_system(), [0.0], [])
    assert len(traj) == 0


def test_simulate_overflow():
    sys = _scalar_system(a=1e200, d=0.0)
    with pytest.raises(PlantOverflowError) as err:
        simulate(sys, [1e200], [0, 0, 0])
    assert err.value.time >= 1


def test_markov_parameters_scalar():
    sys = _scalar_system(a=0.5, b=2.0, c=3.0)
    mk = markov_parameters(sys, 4)
    # C A^{tau-1} B = 3 * 0.5^{tau-1} * 2
    want = [6.0, 3.0, 1.5, 0.75]
    assert [m[0, 0] for m in mk] == pytest.approx(want)


def test_forced_response_direct_sum():
    sys = _scalar_system(a=0.5, b=1.0, c=1.0, d=1.0)
    # t = 2, u = (1, -1, 1): F = CABu0 + CBu1 + Du2 = 0.5 - 1 + 1
    val = forced_response(sys, [1, 2, 1], 2)
    assert val[0] == pytest.approx(0.5)


def test_forced_response_set_enumeration():
    sys = _scalar_system(a=0.5, d=1.0)
    frs = forced_response_set(sys, 2)
    assert len(frs) == 9
    # brute force over all pairs: F = CB u0 + D u1 = u0 + u1
    want = sorted(u0 + u1
                  for u0 in (0.0, 1.0, -1.0) for u1 in (0.0, 1.0, -1.0))
    assert sorted(frs.values[:, 0].tolist()) == pytest.approx(want)
    # tuple_at decodes lexicographic order with position 0 most significant
    flat = 5
    tup = frs.tuple_at(flat)
    assert tup == (1, 2)
    u0, u1 = (sys.input_vector(i)[0] for i in tup)
    assert frs.values[flat, 0] == pytest.approx(u0 + u1)


def test_forced_response_set_budget():
    sys = _scalar_system()
    with pytest.raises(BudgetError):
        forced_response_set(sys, 20, budget=1000)


def test_resolve_budget_env(monkeypatch):
    assert resolve_budget() == 10**6
    assert resolve_budget(123) == 123
    monkeypatch.setenv("QUANTOBS_BUDGET", "777")
    assert resolve_budget() == 777
    assert resolve_budget(5) == 5
    monkeypatch.setenv("QUANTOBS_BUDGET", "not-a-number")
    with pytest.raises(DomainError):
        resolve_budget()


def test_two_state_simulation_matches_manual():
    A = np.array([[0.25, -0.05], [0.0, 0.2]])
    B = np.array([[2.0], [1.0]])
    C = np.array([[0.5, 0.0]])
    D = np.array([[1.0]])
    sys = QuantizedLtiSystem(A=A, B=B, C=C, D=D,
                             inputs=np.array([[0.0], [1.0], [-1.0]]),
                             quantizer=ProductQuantizer(dims=(unit_grid_quantizer(5),)))
    rng = np.random.default_rng(42)
    x0 = rng.normal(size=2)
    idx = rng.integers(0, 3, 10)
    traj = simulate(sys, x0, idx)
    x = x0.copy()
    for t in range(10):
        u = sys.input_vector(idx[t])
        raw = C @ x + D @ u
        assert traj.raw_outputs[t] == pytest.approx(raw)
        x = A @ x + B @ u
