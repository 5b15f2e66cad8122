"""Observability analysis for quantized-output plants.

The central question: can any causal predictor driven by the input
sequence alone eventually reproduce the plant's quantized output labels?
Everything here reduces to the geometry of two sets, the forced-response
values the plant can emit from zero state and the quantizer's breakpoint
hyperplanes. A certified gap between them yields a finite prediction
window; a forced response landing exactly on a breakpoint yields
obstruction certificates of increasing strength.

All checkers are pure and deterministic. Results carry their evidence
(stage indices, witnesses, precondition tables) so reports can be
serialized and audited.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    BudgetError,
    DomainError,
    HorizonSearchError,
    InstabilityError,
    PreconditionError,
)
from .numlin import (
    EIG_TOL,
    KERNEL_TOL,
    invariant_subspace_basis,
    kernel_containment,
    matrix_2norm,
    neumann_sum_bound,
    rank_sequence,
    real_unstable_eigenpairs,
    spectral_radius,
    stable_complement_basis,
)
from .plant import QuantizedLtiSystem, forced_response_set, resolve_budget

HORIZON_CAP = 10_000


# ---------------------------------------------------------------------------
# distance between forced responses and the breakpoint set


class DistanceResult:
    """Base class for outcomes of the forced-response distance search."""

    kind = "abstract"

    def to_payload(self):
        raise NotImplementedError


@dataclass(frozen=True)
class LowerBound(DistanceResult):
    """Certified positive lower bound on the forced-response gap.

    value bounds the distance from every forced response (at any time,
    any input sequence) to the nearest breakpoint hyperplane. k is the
    lookback depth whose enumeration closed the bound.
    """

    value: float
    k: int

    kind = "lower_bound"

    def to_payload(self):
        return {"kind": self.kind, "value": self.value, "k": self.k}


@dataclass(frozen=True)
class Witness(DistanceResult):
    """A forced response lying (numerically) on a breakpoint hyperplane.

    y is the raw output value, input_indices the chronological input
    tuple producing it at time k (so the tuple has length k+1).
    """

    y: tuple
    input_indices: tuple
    k: int

    kind = "witness"

    def to_payload(self):
        return {
            "kind": self.kind,
            "y": list(self.y),
            "input_indices": list(self.input_indices),
            "k": self.k,
        }


@dataclass(frozen=True)
class Inconclusive(DistanceResult):
    """Search exhausted without a certificate either way."""

    k_max: int
    note: Optional[str] = None

    kind = "inconclusive"

    def to_payload(self):
        return {"kind": self.kind, "k_max": self.k_max, "note": self.note}


def forced_response_distance(sys, *, max_k=12, witness_tol=None, budget=None):
    """Certified search for the gap between forced responses and breakpoints.

    Enumerates forced responses by lookback depth k = 0, 1, ..., max_k
    (all input tuples of length k+1, response read at time k). At each
    stage the running minimum distance to the breakpoint set is compared
    against a tail bound on how much any longer history could still move
    a response:

        tail_k = max||Bu|| * neumann_sum_bound(A) * ||C|| * ||A^k||

    Exits with Witness as soon as a response lands within witness_tol of
    a breakpoint, with LowerBound once running_min - tail_k > 0, and
    Inconclusive when max_k stages decide neither.
    """
    max_k = int(max_k)
    if max_k < 0:
        raise DomainError("max_k must be >= 0")
    rho = spectral_radius(sys.A)
    if rho >= 1.0 - EIG_TOL:
        raise InstabilityError(
            f"distance search needs spectral radius < 1, got {rho:.6g}"
        )
    if sys.zero_input_index() is None:
        raise PreconditionError("distance search needs the zero input available")
    if witness_tol is None:
        witness_tol = 1e-12 * (1.0 + sys.quantizer.max_abs_breakpoint)
    # neumann_sum_bound >= sum ||A^t||, so tail_k bounds the influence of
    # every input more than k steps old on any raw output.
    s = neumann_sum_bound(sys.A)
    h = sys.max_input_drive
    c_norm = matrix_2norm(sys.C)
    a_power = np.eye(sys.n)
    running_min = math.inf
    for k in range(max_k + 1):
        frs = forced_response_set(sys, k + 1, budget=budget)
        dists = sys.quantizer.breakpoint_distances(frs.values)
        hits = np.flatnonzero(dists <= witness_tol)
        if hits.size:
            i = int(hits[0])
            return Witness(
                y=tuple(float(v) for v in frs.values[i]),
                input_indices=frs.tuple_at(i),
                k=k,
            )
        running_min = min(running_min, float(dists.min()))
        tail = h * s * c_norm * matrix_2norm(a_power)
        if running_min - tail > 0.0:
            return LowerBound(value=running_min - tail, k=k)
        a_power = a_power @ sys.A
    return Inconclusive(k_max=max_k)


# ---------------------------------------------------------------------------
# output nilpotency


@dataclass(frozen=True)
class OutputNilpotency:
    """Smallest power l with C A^l = 0 (within tolerance), if any exists.

    When it exists, every raw output at time t >= l is a function of the
    last l+1 inputs only, so a window observer of length max(l, 1)
    predicts exactly once its register has filled.
    """

    nilpotent: bool
    index: Optional[int]
    norms: tuple

    def to_payload(self):
        return {
            "nilpotent": self.nilpotent,
            "index": self.index,
            "norms": list(self.norms),
        }


def check_nilpotent_output(sys, tol=1e-10):
    """Find the smallest l <= n with ||C A^l|| vanishing relative to scale."""
    c_norm = matrix_2norm(sys.C)
    a_norm = matrix_2norm(sys.A)
    M = np.asarray(sys.C, dtype=np.float64)
    norms = []
    index = None
    for l in range(sys.n + 1):
        norms.append(matrix_2norm(M))
        # <= rather than < so exact zeros pass even when the scale is 0
        if index is None and norms[l] <= tol * c_norm * a_norm**l:
            index = l
        M = M @ sys.A
    return OutputNilpotency(nilpotent=index is not None, index=index,
                            norms=tuple(norms))


# ---------------------------------------------------------------------------
# prediction-window selection


def choose_horizon_stable(sys, d_lower, x0_bound, cap=HORIZON_CAP):
    """Smallest window T making the forgotten-history error < d_lower/2.

    Requires spectral radius < 1. The window-T observer's raw prediction
    differs from the true raw output by C A^T x_{t-T}; with states bounded
    by b0 = neumann_sum_bound(A) * max(sqrt(n)*x0_bound, max||Bu||), any T
    with ||A^T|| * ||C|| * b0 < d_lower/2 keeps the perturbation inside
    the certified breakpoint gap, so labels match for all t >= T.
    """
    d_lower = float(d_lower)
    if d_lower <= 0.0:
        raise PreconditionError("horizon selection needs a positive distance bound")
    rho = spectral_radius(sys.A)
    if rho >= 1.0 - EIG_TOL:
        raise InstabilityError(
            f"stable horizon selection needs spectral radius < 1, got {rho:.6g}"
        )
    c_norm = matrix_2norm(sys.C)
    if c_norm == 0.0:
        return 1
    # x0_bound is an infinity-ball radius; sqrt(n) converts to Euclidean.
    b0 = neumann_sum_bound(sys.A) * max(
        math.sqrt(sys.n) * float(x0_bound), sys.max_input_drive
    )
    target = d_lower / (2.0 * b0 * c_norm)
    power = np.asarray(sys.A, dtype=np.float64).copy()
    for T in range(1, cap + 1):
        if matrix_2norm(power) < target:
            return T
        power = power @ sys.A
    raise HorizonSearchError(f"no window up to {cap} meets the error target")


def _stable_oblique_split(sys):
    """Bases and coordinates splitting the state space at the unit circle.

    Returns (W, M_S, A_S) where W is an orthonormal basis of the stable
    invariant subspace, M_S maps a state to its stable coordinates in the
    oblique decomposition along the unstable invariant subspace, and
    A_S = W^T A W drives those coordinates. W may have zero columns.
    """
    A = np.asarray(sys.A, dtype=np.float64)
    W = stable_complement_basis(A, 1.0)
    r = W.shape[1]
    if r == 0:
        return W, np.zeros((0, sys.n)), np.zeros((0, 0))
    if r == sys.n:
        return W, W.T, W.T @ A @ W
    V = invariant_subspace_basis(A, 1.0, mode="ge")
    M = np.hstack([W, V])
    if M.shape[1] != sys.n:
        raise PreconditionError(
            "stable and unstable subspace dimensions do not add up; "
            "eigenvalues too close to the unit circle"
        )
    M_S = np.linalg.solve(M, np.eye(sys.n))[:r]
    return W, M_S, W.T @ A @ W


def choose_horizon_general(sys, d_lower, x0_bound, cap=HORIZON_CAP):
    """Window selection when unstable modes exist but are output-invisible.

    Splits the state into stable coordinates a_t (driven by A_S = W^T A W)
    and an unstable part that C must annihilate for the caller's distance
    certificate to be meaningful. The forgotten-history error is then
    (C W) A_S^T a_{t-T} with ||a_t|| <= b_S, and the smallest T with
    ||(C W) A_S^T|| * b_S < d_lower / 2 is returned.
    """
    d_lower = float(d_lower)
    if d_lower <= 0.0:
        raise PreconditionError("horizon selection needs a positive distance bound")
    if matrix_2norm(sys.C) == 0.0:
        return 1
    W, M_S, A_S = _stable_oblique_split(sys)
    if W.shape[1] == 0:
        # no stable dynamics: nothing is forgotten, the window-1 observer
        # already sees everything the output depends on
        return 1
    b_S = neumann_sum_bound(A_S) * max(
        matrix_2norm(M_S) * math.sqrt(sys.n) * float(x0_bound),
        float(np.max(np.linalg.norm(sys.inputs @ (M_S @ sys.B).T, axis=1))),
    )
    CW = sys.C @ W
    power = A_S.copy()
    for T in range(1, cap + 1):
        if matrix_2norm(CW @ power) * b_S < d_lower / 2.0:
            return T
        power = power @ A_S
    raise HorizonSearchError(f"no window up to {cap} meets the error target")


# ---------------------------------------------------------------------------
# reduction to the output-visible stable part


def stable_part_system(sys):
    """Equivalent forced-response system built on the stable subspace only.

    Applicable when the unstable invariant subspace lies inside ker C:
    then C A^k B factors through the stable coordinates for every k >= 0,
    so the reduced system has exactly the same forced-response sets (same
    input tuples, same raw values) while its dynamics matrix is stable.
    """
    A = np.asarray(sys.A, dtype=np.float64)
    V = invariant_subspace_basis(A, 1.0, mode="ge")
    if V.shape[1] == 0:
        raise PreconditionError("system is already stable; no reduction needed")
    if not kernel_containment(sys.C, V):
        raise PreconditionError(
            "unstable modes are visible in the output; reduction is unsound"
        )
    W, M_S, A_S = _stable_oblique_split(sys)
    if W.shape[1] == 0:
        # every mode is unstable and invisible: outputs are D u_t exactly
        return QuantizedLtiSystem(
            A=np.zeros((1, 1)),
            B=np.zeros((1, sys.m)),
            C=np.zeros((sys.p, 1)),
            D=sys.D,
            inputs=sys.inputs,
            quantizer=sys.quantizer,
        )
    return QuantizedLtiSystem(
        A=A_S,
        B=M_S @ sys.B,
        C=sys.C @ W,
        D=sys.D,
        inputs=sys.inputs,
        quantizer=sys.quantizer,
    )


# ---------------------------------------------------------------------------
# obstruction checkers


@dataclass(frozen=True)
class ObstructionCheck:
    """Outcome of a necessary-condition test for finite-memory prediction.

    preconditions records each hypothesis by name; the verdict is
    'inapplicable' unless all hold. With hypotheses satisfied, a witness
    on the breakpoint set upgrades the verdict to 'not_finite_memory'.
    """

    preconditions: dict
    verdict: str
    witness: Optional[DistanceResult] = None

    def to_payload(self):
        return {
            "preconditions": dict(self.preconditions),
            "verdict": self.verdict,
            "witness": self.witness.to_payload() if self.witness else None,
        }


def _zero_not_on_breakpoint(quantizer):
    return bool(quantizer.breakpoint_distance(np.zeros(quantizer.p)) > 0.0)


def check_stable_obstruction(sys, distance=None, *, max_k=12, budget=None):
    """Stable-plant obstruction: a breakpoint witness rules out any window.

    Hypotheses (all recorded): spectral radius < 1, the zero input is
    available, zero is off the breakpoint set, and C A^l has full row
    rank for l = 1..n. Under these, a forced response on a breakpoint
    can be approached from initial states on both sides forever, so no
    finite input window predicts labels exactly from some time on.
    """
    ranks = rank_sequence(sys.C, sys.A)
    pre = {
        "spectral_radius_lt_1": bool(spectral_radius(sys.A) < 1.0 - EIG_TOL),
        "zero_input_available": sys.zero_input_index() is not None,
        "zero_not_on_breakpoint": _zero_not_on_breakpoint(sys.quantizer),
        "full_rank_output_powers": bool(all(r == sys.p for r in ranks)),
    }
    if not all(pre.values()):
        return ObstructionCheck(preconditions=pre, verdict="inapplicable")
    if distance is None:
        try:
            distance = forced_response_distance(sys, max_k=max_k, budget=budget)
        except BudgetError as err:
            distance = Inconclusive(k_max=max_k, note=str(err))
    if isinstance(distance, Witness):
        verdict = "not_finite_memory"
    elif isinstance(distance, LowerBound):
        verdict = "no_obstruction"
    else:
        verdict = "inconclusive"
    return ObstructionCheck(preconditions=pre, verdict=verdict, witness=distance)


def check_unstable_obstruction(sys):
    """Unstable-plant obstruction from a visible expanding mode.

    Hypotheses (all recorded): spectral radius >= 1, the zero input is
    available, zero is off the breakpoint set, some eigenvector with
    |eigenvalue| > 1 is visible in the output, and the quantizer cell
    containing zero is bounded. Under these, zero-input trajectories from
    arbitrarily small states eventually escape the zero cell at
    unpredictable times, so no finite input window suffices.
    """
    c_scale = max(1.0, matrix_2norm(sys.C))
    visible = False
    eigvals, eigvecs = np.linalg.eig(np.asarray(sys.A, dtype=np.float64))
    for lam, v in zip(eigvals, eigvecs.T):
        if abs(lam) > 1.0 + EIG_TOL:
            if np.linalg.norm(sys.C @ v) > KERNEL_TOL * c_scale:
                visible = True
                break
    pre = {
        "spectral_radius_ge_1": bool(spectral_radius(sys.A) >= 1.0 - EIG_TOL),
        "zero_input_available": sys.zero_input_index() is not None,
        "zero_not_on_breakpoint": _zero_not_on_breakpoint(sys.quantizer),
        "unstable_mode_visible": visible,
        "zero_cell_bounded": sys.quantizer.zero_cell_bounded(),
    }
    verdict = "not_finite_memory" if all(pre.values()) else "inapplicable"
    return ObstructionCheck(preconditions=pre, verdict=verdict)


# ---------------------------------------------------------------------------
# adversarial certificate (breakpoint-riding expanding mode)


@dataclass(frozen=True)
class AdversarialCertificate:
    """Data making the plant's output unpredictable even in the limit.

    breakpoint_state x* satisfies C x* = breakpoint along a real
    expanding eigenvector; the reset input drives A^2 x* (+ B u) back to
    the origin, letting adversarial trajectories re-approach the
    breakpoint forever. residual = ||A^2 x* + B u*||.
    """

    eigenvalue: float
    eigenvector: tuple
    breakpoint_state: tuple
    reset_input_index: int
    breakpoint: float
    residual: float

    def to_payload(self):
        return {
            "eigenvalue": self.eigenvalue,
            "eigenvector": list(self.eigenvector),
            "breakpoint_state": list(self.breakpoint_state),
            "reset_input_index": self.reset_input_index,
            "breakpoint": self.breakpoint,
            "residual": self.residual,
        }


def find_adversarial_certificate(sys, tol=1e-9):
    """Search for a breakpoint-riding expanding mode with an exact reset.

    Scalar-output construction: needs p = 1, a positive breakpoint beta,
    the zero input, a real eigenvalue > 1 whose eigenvector v has
    C v != 0 (then x* = (beta / C v) v sits on the breakpoint), and an
    alphabet input u* with ||A^2 x* + B u*|| <= tol. Returns None when
    any ingredient is missing.
    """
    if sys.p != 1:
        return None
    if sys.zero_input_index() is None:
        return None
    bps = np.asarray(sys.quantizer.dims[0].breakpoints, dtype=np.float64)
    positive = bps[bps > 0.0]
    if positive.size == 0:
        return None
    beta = float(positive[0])
    A = np.asarray(sys.A, dtype=np.float64)
    bu = sys.inputs @ sys.B.T
    c_scale = max(1.0, matrix_2norm(sys.C))
    for lam, v in real_unstable_eigenpairs(A):
        cv = float((sys.C @ v)[0])
        if abs(cv) <= KERNEL_TOL * c_scale:
            continue
        x_star = (beta / cv) * v
        residuals = np.linalg.norm(A @ (A @ x_star) + bu, axis=1)
        best = int(np.argmin(residuals))
        if residuals[best] <= tol:
            return AdversarialCertificate(
                eigenvalue=float(lam),
                eigenvector=tuple(float(x) for x in v),
                breakpoint_state=tuple(float(x) for x in x_star),
                reset_input_index=best,
                breakpoint=beta,
                residual=float(residuals[best]),
            )
    return None


# ---------------------------------------------------------------------------
# combined report


@dataclass(frozen=True)
class ObservabilityReport:
    """Everything the analyzers could establish about one plant.

    The three observability fields are trivalent: True/False when
    certified, None when unknown. finite_memory=True implies the weaker
    two; asymptotically=False implies the stronger two are False.
    """

    x0_bound: float
    nilpotency: OutputNilpotency
    unstable_in_kernel: Optional[bool]
    distance: Optional[DistanceResult]
    distance_source: Optional[str]
    stable_obstruction: Optional[ObstructionCheck]
    unstable_obstruction: Optional[ObstructionCheck]
    adversarial_certificate: Optional[AdversarialCertificate]
    chosen_T: Optional[int]
    finite_memory: Optional[bool]
    weakly: Optional[bool]
    asymptotically: Optional[bool]
    verdict: str
    notes: tuple

    def to_payload(self):
        def opt(x):
            return x.to_payload() if x is not None else None

        return {
            "x0_bound": self.x0_bound,
            "nilpotency": self.nilpotency.to_payload(),
            "unstable_in_kernel": self.unstable_in_kernel,
            "distance": opt(self.distance),
            "distance_source": self.distance_source,
            "stable_obstruction": opt(self.stable_obstruction),
            "unstable_obstruction": opt(self.unstable_obstruction),
            "adversarial_certificate": opt(self.adversarial_certificate),
            "chosen_T": self.chosen_T,
            "finite_memory": self.finite_memory,
            "weakly": self.weakly,
            "asymptotically": self.asymptotically,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def _assert_consistent(finite_memory, weakly, asymptotically):
    if finite_memory is True:
        assert weakly is True and asymptotically is True
    if weakly is True:
        assert asymptotically is True
    if asymptotically is False:
        assert weakly is False and finite_memory is False
    if weakly is False:
        assert finite_memory is False


def _feasible_lookback(sys, max_k, budget):
    """Largest lookback whose enumeration fits the budget, capped at max_k."""
    total = sys.input_count
    k = -1
    while k + 1 <= max_k and total <= budget:
        k += 1
        total *= sys.input_count
    return min(k, max_k)


def full_report(sys, x0_bound=1.0, *, max_k=12, budget=None):
    """Run every applicable checker and combine verdicts.

    Priority: output nilpotency certifies finite memory outright; next a
    positive forced-response gap (computed directly for stable dynamics,
    or on the visible stable part when unstable modes hide in ker C)
    certifies finite memory with an explicit window; next an adversarial
    certificate refutes even asymptotic predictability; finally the
    obstruction checkers can refute finite memory alone. Anything else
    is inconclusive. Budget exhaustion degrades to Inconclusive with a
    note instead of raising.
    """
    x0_bound = float(x0_bound)
    if x0_bound <= 0.0 or not math.isfinite(x0_bound):
        raise DomainError("x0_bound must be positive and finite")
    notes = []

    nil = check_nilpotent_output(sys)
    if nil.nilpotent:
        T = max(nil.index, 1)
        notes.append(
            f"output influence of the state vanishes after {nil.index} steps; "
            f"window {T} predicts exactly once filled"
        )
        report = ObservabilityReport(
            x0_bound=x0_bound,
            nilpotency=nil,
            unstable_in_kernel=None,
            distance=None,
            distance_source=None,
            stable_obstruction=None,
            unstable_obstruction=None,
            adversarial_certificate=None,
            chosen_T=T,
            finite_memory=True,
            weakly=True,
            asymptotically=True,
            verdict="finite_memory",
            notes=tuple(notes),
        )
        _assert_consistent(report.finite_memory, report.weakly,
                           report.asymptotically)
        return report

    budget_eff = resolve_budget(budget)
    rho = spectral_radius(sys.A)
    stable = rho < 1.0 - EIG_TOL
    unstable_in_kernel = None
    distance = None
    distance_source = None

    def run_distance(target_sys):
        k_feasible = _feasible_lookback(target_sys, max_k, budget_eff)
        if k_feasible < 0:
            return Inconclusive(
                k_max=-1,
                note=f"even lookback 0 exceeds enumeration budget {budget_eff}",
            )
        result = forced_response_distance(
            target_sys, max_k=k_feasible, budget=budget_eff
        )
        if isinstance(result, Inconclusive) and k_feasible < max_k:
            return Inconclusive(
                k_max=k_feasible,
                note=f"stopped at lookback {k_feasible}: enumeration budget "
                f"{budget_eff} caps deeper stages",
            )
        return result

    if stable:
        if sys.zero_input_index() is None:
            notes.append("zero input unavailable; distance search skipped")
        else:
            distance = run_distance(sys)
            distance_source = "direct"
    else:
        V = invariant_subspace_basis(np.asarray(sys.A, dtype=np.float64), 1.0,
                                     mode="ge")
        unstable_in_kernel = bool(kernel_containment(sys.C, V))
        if unstable_in_kernel and sys.zero_input_index() is not None:
            reduced = stable_part_system(sys)
            distance = run_distance(reduced)
            distance_source = "stable_part"
            notes.append(
                "unstable modes invisible in the output; distance computed "
                "on the stable part (identical forced responses)"
            )
        else:
            notes.append(
                "unstable modes visible in the output; no distance certificate"
            )

    if isinstance(distance, LowerBound):
        try:
            if stable:
                chosen_T = choose_horizon_stable(sys, distance.value, x0_bound)
            else:
                chosen_T = choose_horizon_general(sys, distance.value, x0_bound)
        except HorizonSearchError as err:
            notes.append(str(err))
            report = ObservabilityReport(
                x0_bound=x0_bound,
                nilpotency=nil,
                unstable_in_kernel=unstable_in_kernel,
                distance=distance,
                distance_source=distance_source,
                stable_obstruction=None,
                unstable_obstruction=None,
                adversarial_certificate=None,
                chosen_T=None,
                finite_memory=None,
                weakly=None,
                asymptotically=None,
                verdict="inconclusive",
                notes=tuple(notes),
            )
            return report
        report = ObservabilityReport(
            x0_bound=x0_bound,
            nilpotency=nil,
            unstable_in_kernel=unstable_in_kernel,
            distance=distance,
            distance_source=distance_source,
            stable_obstruction=None,
            unstable_obstruction=None,
            adversarial_certificate=None,
            chosen_T=chosen_T,
            finite_memory=True,
            weakly=True,
            asymptotically=True,
            verdict="finite_memory",
            notes=tuple(notes),
        )
        _assert_consistent(report.finite_memory, report.weakly,
                           report.asymptotically)
        return report

    cert = find_adversarial_certificate(sys)
    stable_obs = check_stable_obstruction(sys, distance=distance, max_k=max_k,
                                          budget=budget_eff)
    unstable_obs = check_unstable_obstruction(sys)

    if cert is not None:
        finite_memory, weakly, asymptotically = False, False, False
        verdict = "not_asymptotically_observable"
    elif (stable_obs.verdict == "not_finite_memory"
          or unstable_obs.verdict == "not_finite_memory"):
        finite_memory, weakly, asymptotically = False, None, None
        verdict = "not_finite_memory"
    else:
        finite_memory, weakly, asymptotically = None, None, None
        verdict = "inconclusive"

    report = ObservabilityReport(
        x0_bound=x0_bound,
        nilpotency=nil,
        unstable_in_kernel=unstable_in_kernel,
        distance=distance,
        distance_source=distance_source,
        stable_obstruction=stable_obs,
        unstable_obstruction=unstable_obs,
        adversarial_certificate=cert,
        chosen_T=None,
        finite_memory=finite_memory,
        weakly=weakly,
        asymptotically=asymptotically,
        verdict=verdict,
        notes=tuple(notes),
    )
    _assert_consistent(report.finite_memory, report.weakly, report.asymptotically)
    return report
