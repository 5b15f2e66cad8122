import numpy as np
import pytest

from quantobs import _kernels
from quantobs._kernels import _ref


def _both_backends():
    impls = [("python", _ref)]
    try:
        from quantobs._kernels import _speedups
        impls.append(("compiled", _speedups))
    except ImportError:
        pass
    return impls


def test_backend_selected():
    assert _kernels.backend() in ("compiled", "python")
    assert "python" in _kernels.available_backends()


def test_lti_recursion_agreement():
    rng = np.random.default_rng(0)
    for _ in range(25):
        n = int(rng.integers(1, 6))
        A = np.ascontiguousarray(rng.normal(size=(n, n)) * 0.4)
        x0 = np.ascontiguousarray(rng.normal(size=n))
        bu = np.ascontiguousarray(rng.normal(size=(int(rng.integers(0, 50)), n)))
        ref_states, ref_bad = _ref.lti_recursion(A, x0, bu)
        for name, impl in _both_backends():
            states, bad = impl.lti_recursion(A, x0, bu)
            assert bad == ref_bad, name
            np.testing.assert_allclose(states, ref_states, rtol=1e-12,
                                       atol=1e-12, err_msg=name)


def test_lti_recursion_overflow_step():
    A = np.array([[1e200]])
    x0 = np.array([1e200])
    bu = np.zeros((3, 1))
    for name, impl in _both_backends():
        states, bad = impl.lti_recursion(A, x0, bu)
        assert bad == 1, name
        assert states.shape[0] == 2


def test_lti_recursion_nonfinite_x0():
    for name, impl in _both_backends():
        states, bad = impl.lti_recursion(np.eye(1), np.array([np.nan]),
                                         np.zeros((2, 1)))
        assert bad == 0, name


def test_forced_sums_agreement_and_order():
    rng = np.random.default_rng(3)
    for _ in range(20):
        k = int(rng.integers(1, 6))
        n_u = int(rng.integers(1, 4))
        p = int(rng.integers(1, 3))
        tables = np.ascontiguousarray(rng.normal(size=(k, n_u, p)))
        ref_vals = _ref.forced_sums(tables)
        assert ref_vals.shape == (n_u ** k, p)
        # independent oracle: explicit nested iteration
        import itertools
        rows = [sum(tables[j, i] for j, i in enumerate(combo))
                for combo in itertools.product(range(n_u), repeat=k)]
        np.testing.assert_allclose(ref_vals, np.array(rows), rtol=1e-12,
                                   atol=1e-14)
        for name, impl in _both_backends():
            np.testing.assert_allclose(impl.forced_sums(tables), ref_vals,
                                       rtol=1e-12, atol=1e-14, err_msg=name)


def test_hyperplane_distances_agreement():
    rng = np.random.default_rng(5)
    for _ in range(20):
        p = int(rng.integers(1, 4))
        m = int(rng.integers(1, 6))
        values = np.ascontiguousarray(rng.normal(size=(int(rng.integers(1, 200)), p)) * 3)
        rows = [np.sort(rng.normal(size=m)) for _ in range(p)]
        padded = np.zeros((p, m))
        for i, row in enumerate(rows):
            padded[i] = row
        lengths = np.full(p, m, dtype=np.int64)
        # oracle: dense min over all dimension/breakpoint pairs
        want = np.min(
            np.stack([np.min(np.abs(values[:, i][:, None] - rows[i][None, :]),
                             axis=1) for i in range(p)]), axis=0)
        for name, impl in _both_backends():
            got = impl.hyperplane_distances(values, padded, lengths)
            np.testing.assert_allclose(got, want, rtol=0, atol=1e-14,
                                       err_msg=name)


def test_wrapper_handles_readonly_and_noncontiguous():
    A = np.asarray(np.diag([0.5, 0.25]))
    A.setflags(write=False)
    x0 = np.arange(4.0)[::2]  # non-contiguous view
    bu = np.zeros((3, 2))
    states, bad = _kernels.lti_recursion(A, x0, bu)
    assert bad == -1
    assert states.shape == (4, 2)
    np.testing.assert_allclose(states[1], [0.0, 0.5])


def test_pure_env_forces_python_backend():
    import os
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c",
         "import quantobs; print(quantobs.backend())"],
        capture_output=True, text=True,
        env={**os.environ, "QUANTOBS_PURE": "1"})
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "python"
