"""Pure-numpy reference implementations of the hot kernels.

Used as the fallback backend when the compiled extension is unavailable
(or when QUANTOBS_PURE=1), and as the ground truth the compiled backend
is tested against. Signatures and accumulation order match _speedups.pyx.
"""

import numpy as np

BACKEND_NAME = "python"


def lti_recursion(A, x0, bu):
    """Run the state recursion x[t+1] = A x[t] + bu[t].

    Parameters
    ----------
    A : (n, n) float64 array
    x0 : (n,) float64 array
    bu : (L-1, n) float64 array of precomputed B @ u_t terms, t = 0..L-2

    Returns
    -------
    states : (L, n) array with states[0] = x0
    bad_t : int, first step index whose state is non-finite, or -1
    """
    L = bu.shape[0] + 1
    n = x0.shape[0]
    states = np.empty((L, n), dtype=np.float64)
    states[0] = x0
    bad_t = -1
    if not np.all(np.isfinite(x0)):
        return states[:1], 0
    x = x0
    # overflow to inf is the detection mechanism here, not an error
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(1, L):
            x = A @ x + bu[t - 1]
            states[t] = x
            if not np.all(np.isfinite(x)):
                bad_t = t
                return states[: t + 1], bad_t
    return states, bad_t


def forced_sums(tables):
    """Enumerate all position-wise sums of per-position value tables.

    tables has shape (k, n_u, p): tables[j, i] is the output contribution
    of choosing input i at tuple position j. The result has shape
    (n_u**k, p), ordered lexicographically by index tuple with position 0
    most significant. Accumulation order is position 0 first, matching the
    compiled kernel bit for bit.
    """
    k, n_u, p = tables.shape
    vals = tables[0]
    for j in range(1, k):
        vals = (vals[:, None, :] + tables[j][None, :, :]).reshape(-1, p)
    return np.ascontiguousarray(vals)


def hyperplane_distances(values, breakpoints, lengths):
    """Distance from each point to the union of breakpoint hyperplanes.

    values : (N, p) array of points.
    breakpoints : (p, m_max) array, row i holding the sorted breakpoints of
        output dimension i in its first lengths[i] entries (rest ignored).
    lengths : (p,) int array of per-dimension breakpoint counts (>= 1).

    Returns (N,) array: min over dimensions i and breakpoints b of
    |values[:, i] - b|, which is the exact Euclidean distance to the
    axis-aligned hyperplane union.
    """
    N, p = values.shape
    dists = np.full(N, np.inf, dtype=np.float64)
    for i in range(p):
        bps = breakpoints[i, : lengths[i]]
        col = values[:, i]
        idx = np.searchsorted(bps, col)
        lo = np.where(idx > 0, np.abs(col - bps[np.maximum(idx - 1, 0)]), np.inf)
        hi = np.where(idx < lengths[i], np.abs(bps[np.minimum(idx, lengths[i] - 1)] - col), np.inf)
        np.minimum(dists, np.minimum(lo, hi), out=dists)
    return dists
