"""Numerical linear algebra helpers for the observability analysis.

Everything here works on plain numpy arrays in the induced 2-norm.
Eigenvalue magnitude comparisons use a relative tolerance band
(EIG_TOL) so that boundary eigenvalues are classified consistently.
"""

import numpy as np
import scipy.linalg

from .errors import DimensionError, HorizonSearchError, InstabilityError

EIG_TOL = 1e-10
RANK_TOL = 1e-9
KERNEL_TOL = 1e-9

_NEUMANN_CAP = 10_000


def _square(A):
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"square matrix expected, got shape {A.shape}")
    return A


def matrix_2norm(M):
    """Induced 2-norm (largest singular value); 0.0 for empty matrices."""
    M = np.asarray(M, dtype=np.float64)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def spectral_radius(A):
    """Largest eigenvalue magnitude of a square matrix."""
    A = _square(A)
    if A.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(A))))


def neumann_sum_bound(A, tol=1e-9):
    """Finite upper bound on sum_{t>=0} ||A^t||.

    Requires rho(A) < 1. Uses the block inequality
    total <= S_M / (1 - ||A^M||) valid whenever ||A^M|| < 1, where S_M is
    the exact partial sum of the first M norms, and extends M until the
    bound stabilizes to within a relative tol. Every iterate is a valid
    upper bound, so early stopping stays sound.
    """
    A = _square(A)
    if spectral_radius(A) >= 1.0:
        raise InstabilityError("neumann_sum_bound requires rho(A) < 1")
    partial = 1.0  # ||A^0||
    P = A.copy()
    bound = None
    for _ in range(_NEUMANN_CAP):
        q = matrix_2norm(P)
        if q < 1.0:
            new_bound = partial / (1.0 - q)
            if bound is not None and abs(bound - new_bound) <= tol * new_bound:
                return new_bound
            bound = new_bound
        partial += q
        P = P @ A
    if bound is not None:
        return bound
    raise HorizonSearchError("||A^t|| did not drop below 1 within the cap")


def _schur_basis(A, selector):
    A = _square(A)
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    _, Z, sdim = scipy.linalg.schur(A, output="real", sort=selector)
    return np.ascontiguousarray(Z[:, :sdim])


def invariant_subspace_basis(A, threshold, mode="ge"):
    """Orthonormal basis of the invariant subspace selected by |eigenvalue|.

    mode 'ge' selects eigenvalues with |lambda| >= threshold, 'gt' selects
    |lambda| > threshold, both with an EIG_TOL relative band so that
    boundary eigenvalues land on the inclusive side for 'ge' and on the
    exclusive side for 'gt'. Returns an (n, s) matrix with orthonormal
    columns; s may be 0.
    """
    if mode == "ge":
        cut = threshold * (1.0 - EIG_TOL)
        return _schur_basis(A, lambda re, im: np.hypot(re, im) >= cut)
    if mode == "gt":
        cut = threshold * (1.0 + EIG_TOL)
        return _schur_basis(A, lambda re, im: np.hypot(re, im) > cut)
    raise ValueError("mode must be 'ge' or 'gt'")


def stable_complement_basis(A, threshold=1.0):
    """Orthonormal basis of the invariant subspace with |eigenvalue| < threshold.

    Complementary selection to invariant_subspace_basis(A, threshold, 'ge'):
    the same tolerance band is used with the opposite sign so the two
    selections partition the spectrum.
    """
    cut = threshold * (1.0 - EIG_TOL)
    return _schur_basis(A, lambda re, im: np.hypot(re, im) < cut)


def kernel_containment(C, basis, tol=KERNEL_TOL):
    """Whether the span of basis columns lies in ker C (up to tol).

    True when ||C @ basis|| <= tol * max(1, ||C||); vacuously true for an
    empty basis.
    """
    C = np.asarray(C, dtype=np.float64)
    basis = np.asarray(basis, dtype=np.float64)
    if basis.size == 0:
        return True
    return matrix_2norm(C @ basis) <= tol * max(1.0, matrix_2norm(C))


def rank_sequence(C, A, upto=None):
    """Ranks of C A^l for l = 1..upto (default upto = n).

    Rank per matrix is the number of singular values above
    RANK_TOL * sigma_max. Multiplying on the right by A cannot increase
    rank, so the sequence must be non-increasing; a violation means the
    tolerance misclassified a matrix and is raised rather than returned.
    """
    A = _square(A)
    C = np.asarray(C, dtype=np.float64)
    if C.ndim != 2 or C.shape[1] != A.shape[0]:
        raise DimensionError("C must be p x n with n matching A")
    n = A.shape[0]
    if upto is None:
        upto = n
    ranks = []
    M = C
    for _ in range(upto):
        M = M @ A
        if M.size == 0:
            ranks.append(0)
            continue
        sv = np.linalg.svd(M, compute_uv=False)
        top = sv[0] if sv.size else 0.0
        ranks.append(int(np.count_nonzero(sv > RANK_TOL * top)) if top > 0 else 0)
    for prev, cur in zip(ranks, ranks[1:]):
        if cur > prev:
            raise ArithmeticError(f"rank sequence increased: {ranks}")
    return ranks


def real_unstable_eigenpairs(A, tol=EIG_TOL):
    """Real eigenpairs with eigenvalue > 1, ordered by eigenvalue descending.

    Eigenvectors are returned real, unit norm, with the largest-magnitude
    component positive (a deterministic sign convention). Pairs whose
    residual ||A v - lambda v|| exceeds tol * max(1, ||A||) are dropped.
    """
    A = _square(A)
    if A.shape[0] == 0:
        return []
    w, V = np.linalg.eig(A)
    scale = max(1.0, matrix_2norm(A))
    pairs = []
    for lam, v in zip(w, V.T):
        if abs(lam.imag) > tol * max(1.0, abs(lam)):
            continue
        lam_r = float(lam.real)
        if lam_r <= 1.0:
            continue
        vec = np.real(v)
        norm = np.linalg.norm(vec)
        if norm <= tol:
            continue
        vec = vec / norm
        pivot = np.argmax(np.abs(vec))
        if vec[pivot] < 0:
            vec = -vec
        if np.linalg.norm(A @ vec - lam_r * vec) > tol * scale:
            continue
        pairs.append((lam_r, vec))
    pairs.sort(key=lambda pair: -pair[0])
    return pairs
