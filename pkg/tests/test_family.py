import numpy as np
import pytest

from quantobs import family
from quantobs.analysis import find_adversarial_certificate
from quantobs.errors import (
    BudgetError,
    DomainError,
    HorizonSearchError,
    InapplicableError,
)
from quantobs.observer import ConstantObserver, build_finite_input_observer
from quantobs.plant import QuantizedLtiSystem, simulate
from quantobs.quantizer import IntervalQuantizer, ProductQuantizer


def _expander(lam, du=0.0):
    """Scalar plant x+ = lam x + u with threshold labels and resets.

    The third input is sized to cancel A^2 x* exactly at the breakpoint
    state x* = 0.5, which is what the certificate search requires.
    """
    return QuantizedLtiSystem(
        A=np.array([[lam]]), B=np.array([[1.0]]), C=np.array([[1.0]]),
        D=np.array([[du]]),
        inputs=np.array([[0.0], [2.0], [-0.5 * lam ** 2]]),
        quantizer=ProductQuantizer(dims=(IntervalQuantizer(
            breakpoints=(0.5,), levels=(0.0, 1.0)),)))


def test_stage_length_small_eigenvalue_needs_long_stages(example5):
    cert5 = find_adversarial_certificate(example5.system)
    assert family.choose_stage_length(example5.system, cert5) == 2

    slow = _expander(1.1)
    cert = find_adversarial_certificate(slow)
    T = family.choose_stage_length(slow, cert)
    assert T == 26
    # the pinned stage inequalities hold at T and fail at T - 1
    lam = 1.1
    assert lam ** T > lam / (lam - 1.0)
    assert not (lam ** (T - 1) > lam / (lam - 1.0)
                and lam ** (T - 1) - 1.0 > lam)


def test_stage_length_fast_eigenvalue():
    fast = _expander(3.0)
    cert = find_adversarial_certificate(fast)
    assert family.choose_stage_length(fast, cert) == 2


def test_family_parameters(example5):
    params = family.family_parameters(example5.system)
    assert params.eigenvalue == pytest.approx(2.0)
    assert params.stage_length == 2
    assert params.breakpoint == pytest.approx(0.5)
    assert params.seed_state == pytest.approx((0.125,))
    assert params.decay == pytest.approx(0.25)
    assert params.reset_input_index == 2


def test_family_parameters_inapplicable(e1):
    with pytest.raises(InapplicableError):
        family.family_parameters(e1.system)


def test_family_parameters_rejects_bad_stage_length(example5):
    with pytest.raises(DomainError):
        family.family_parameters(example5.system, stage_length=1)


def test_branch_bits_and_index_round_trip():
    assert family.branch_bits(1, 1) == (0,)
    assert family.branch_bits(1, 2) == (1,)
    assert family.branch_bits(2, 3) == (1, 0)
    assert family.branch_bits(3, 8) == (1, 1, 1)
    for k in range(1, 7):
        for j in range(1, 2 ** k + 1):
            bits = family.branch_bits(k, j)
            assert family.branch_index(bits) == (k, j)
    with pytest.raises(DomainError):
        family.branch_bits(2, 5)
    with pytest.raises(DomainError):
        family.branch_bits(2, 0)


def test_initial_state_closed_form(example5):
    params = family.family_parameters(example5.system)
    s_o, q = params.seed_state[0], params.decay
    # leftmost branch starts at rest; each taken right turn at depth l
    # contributes s_o q^{l-1}
    assert family.initial_state(params, 1, 1) == pytest.approx((0.0,))
    assert family.initial_state(params, 1, 2) == pytest.approx((s_o,))
    assert family.initial_state(params, 2, 4) == pytest.approx((s_o + s_o * q,))
    assert family.initial_state(params, 3, 6) == pytest.approx(
        (s_o * 1 + s_o * q * 0 + s_o * q * q * 1,))


def test_initial_state_sibling_recursion(example5):
    # oracle: s(1,1) = 0, s(1,2) = s_o, s(k,2j-1) = s(k-1,j),
    # s(k,2j) = s(k-1,j) + q^{k-1} s_o
    params = family.family_parameters(example5.system)
    s_o, q = params.seed_state[0], params.decay

    def oracle(k, j):
        if k == 1:
            return 0.0 if j == 1 else s_o
        parent = oracle(k - 1, (j + 1) // 2)
        if j % 2 == 1:
            return parent
        return parent + q ** (k - 1) * s_o

    for k in range(1, 7):
        for j in range(1, 2 ** k + 1):
            assert family.initial_state(params, k, j)[0] == pytest.approx(
                oracle(k, j), abs=1e-15)


def test_input_segment_structure(example5):
    sys = example5.system
    params = family.family_parameters(sys)
    T = params.stage_length
    k = 3
    for j in range(1, 9):
        seg = family.input_segment(sys, params, k, j)
        assert len(seg) == k * T + 1
        bits = family.branch_bits(k, j)
        for l in range(1, k):
            want = params.reset_input_index if bits[l - 1] else 0
            assert seg[l * T + 1] == want
        # everything else is the zero input
        others = [seg[t] for t in range(len(seg))
                  if t not in {l * T + 1 for l in range(1, k)}]
        assert all(i == 0 for i in others)


def test_input_segment_prefix_recursion(example5):
    # a child's segment extends its parent's by exactly one stage
    sys = example5.system
    params = family.family_parameters(sys)
    T = params.stage_length
    for k in range(2, 7):
        for j in range(1, 2 ** k + 1):
            child = family.input_segment(sys, params, k, j)
            parent = family.input_segment(sys, params, k - 1, (j + 1) // 2)
            assert np.array_equal(child[: (k - 1) * T + 1], parent)
            assert len(child) == len(parent) + T


def test_build_family_counts(example5):
    fam = family.build_family(example5.system, depth=4)
    assert len(fam) == 30
    assert fam.depth == 4
    assert {k for k, _ in fam.nodes} == {1, 2, 3, 4}
    for k in range(1, 5):
        assert sum(1 for kk, _ in fam.nodes if kk == k) == 2 ** k


def test_build_family_budget(example5):
    with pytest.raises(BudgetError):
        family.build_family(example5.system, depth=4, budget=10)


def test_family_nodes_match_simulation(example5):
    sys = example5.system
    fam = family.build_family(sys, depth=3)
    for (k, j), node in fam.nodes.items():
        traj = simulate(sys, node.initial_state, list(node.input_indices))
        assert np.allclose(traj.raw_outputs, node.raw_outputs)
        assert np.array_equal(traj.outputs, node.outputs)


def test_verify_family_passes(example5):
    fam = family.build_family(example5.system, depth=4)
    ver = family.verify_family(example5.system, fam)
    assert ver.ok
    assert ver.sibling_divergence == ()
    assert ver.prefix_extension == ()
    assert ver.limit_consistency == ()
    assert ver.limit_margin == pytest.approx(1.0 / 6.0, abs=1e-9)


def test_verify_family_catches_tampering(example5):
    fam = family.build_family(example5.system, depth=3)
    node = fam.node(2, 3)
    bad = family.FamilyNode(
        k=node.k, j=node.j, initial_state=node.initial_state,
        input_indices=node.input_indices,
        raw_outputs=node.raw_outputs,
        outputs=np.where(node.outputs == 0.0, 1.0, 0.0),
    )
    nodes = dict(fam.nodes)
    nodes[(2, 3)] = bad
    tampered = family.AdversarialFamily(params=fam.params, depth=fam.depth,
                                        nodes=nodes)
    ver = family.verify_family(example5.system, tampered)
    assert not ver.ok


def test_sibling_pairs_diverge_exactly_at_stage_boundary(example5):
    sys = example5.system
    fam = family.build_family(sys, depth=4)
    T = fam.params.stage_length
    for k in range(1, 5):
        for j in range(1, 2 ** k, 2):
            left, right = fam.node(k, j), fam.node(k, j + 1)
            assert np.array_equal(left.input_indices, right.input_indices)
            mism = np.flatnonzero(
                (left.outputs != right.outputs).any(axis=1))
            assert mism.size > 0 and mism[0] == k * T


def test_adversarial_walk_settles_nothing(example5):
    sys = example5.system
    fam = family.build_family(sys, depth=4)
    T = fam.params.stage_length
    for window in (1, 3, 5):
        atk = family.adversarial_walk(
            sys, fam, lambda w=window: build_finite_input_observer(sys, w))
        assert atk.error_times == (2, 4, 6, 8)
        assert len(atk.path) == 4
    atk = family.adversarial_walk(sys, fam, lambda: ConstantObserver([0.0]))
    assert atk.error_times == tuple(k * T for k in range(1, 5))
    assert atk.final_record.last_error_time is not None


def test_walk_error_count_equals_depth_for_random_observer(example5):
    # a stateful but arbitrary predictor cannot dodge: one error per stage
    import numpy as np

    class RandomMachine:
        def __init__(self, seed):
            self.rng = np.random.default_rng(seed)

        def reset(self):
            pass

        def predict(self, input_index):
            return np.array([float(self.rng.integers(0, 2))])

        def update(self, input_index, output=None):
            pass

    sys = example5.system
    for depth in (3, 5):
        fam = family.build_family(sys, depth=depth)
        atk = family.adversarial_walk(sys, fam, lambda: RandomMachine(99))
        assert len(atk.error_times) == depth
