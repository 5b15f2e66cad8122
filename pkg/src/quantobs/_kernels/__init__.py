"""Kernel backend selection.

The compiled Cython extension is preferred when it imported cleanly;
otherwise the numpy reference backend is used. QUANTOBS_PURE=1 forces the
reference backend regardless (useful for benchmarking and debugging).
"""

import os

import numpy as np

from . import _ref

_impl = _ref
if os.environ.get("QUANTOBS_PURE", "") != "1":
    try:
        from . import _speedups

        _impl = _speedups
    except ImportError:
        pass


def backend():
    """Name of the active backend: 'compiled' or 'python'."""
    return _impl.BACKEND_NAME


def available_backends():
    names = ["python"]
    try:
        from . import _speedups  # noqa: F401

        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


def _c64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def lti_recursion(A, x0, bu):
    """States of x[t+1] = A x[t] + bu[t]; see _ref.lti_recursion."""
    return _impl.lti_recursion(_c64(A), _c64(x0), _c64(bu).reshape(-1, A.shape[0]))


def forced_sums(tables):
    """All position-wise sums of (k, n_u, p) tables; see _ref.forced_sums."""
    return _impl.forced_sums(_c64(tables))


def hyperplane_distances(values, breakpoint_rows):
    """Distances to the breakpoint hyperplane union.

    breakpoint_rows is a sequence of p sorted 1-D arrays (one per output
    dimension); this wrapper pads them into the rectangular layout the
    backends consume.
    """
    values = _c64(values)
    p = values.shape[1]
    if len(breakpoint_rows) != p:
        raise ValueError("one breakpoint row required per output dimension")
    lengths = np.array([len(r) for r in breakpoint_rows], dtype=np.int64)
    if (lengths < 1).any():
        raise ValueError("each dimension needs at least one breakpoint")
    padded = np.zeros((p, int(lengths.max())), dtype=np.float64)
    for i, row in enumerate(breakpoint_rows):
        padded[i, : lengths[i]] = np.asarray(row, dtype=np.float64)
    return _impl.hyperplane_distances(values, padded, lengths)
