"""Plant/observer interconnection, error traces, and Monte-Carlo sweeps.

The loop per step: the plant emits its label, the observer first commits
a prediction from the input alone, then sees the label. Records keep
inputs, labels, predictions and prediction-error norms side by side so
gain functionals and settling statistics read off one structure.

Monte-Carlo runs draw independent per-trial RNG streams from a single
seed, so summaries are bit-identical for a given (seed, trials, horizon,
x0_bound) regardless of thread count.
"""

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, PlantOverflowError
from .plant import simulate


@dataclass(frozen=True)
class RunRecord:
    """One interconnection run; truncated at overflow_time if not None."""

    input_indices: np.ndarray
    input_vectors: np.ndarray
    outputs: np.ndarray
    predictions: np.ndarray
    errors: np.ndarray
    overflow_time: Optional[int] = None

    def __len__(self):
        return self.errors.shape[0]

    @property
    def last_error_time(self):
        hits = np.flatnonzero(self.errors > 0.0)
        return int(hits[-1]) if hits.size else None

    def to_payload(self):
        return {
            "input_indices": [int(i) for i in self.input_indices],
            "outputs": [[float(x) for x in row] for row in self.outputs],
            "predictions": [[float(x) for x in row] for row in self.predictions],
            "errors": [float(e) for e in self.errors],
            "overflow_time": self.overflow_time,
            "last_error_time": self.last_error_time,
        }


def record_to_csv(record):
    """CSV text with one row per step: t, input, label, prediction, error."""
    buf = io.StringIO()
    buf.write("t,u_index,u,y,yhat,e\n")
    for t in range(len(record)):
        u = ";".join(repr(float(x)) for x in record.input_vectors[t])
        y = ";".join(repr(float(x)) for x in record.outputs[t])
        yhat = ";".join(repr(float(x)) for x in record.predictions[t])
        buf.write(f"{t},{int(record.input_indices[t])},{u},{y},{yhat},"
                  f"{float(record.errors[t])!r}\n")
    return buf.getvalue()


def interconnect(sys, observer, x0, input_indices):
    """Run plant and observer in lockstep over an input-index sequence.

    Per step t: the plant's label y_t is computed, the observer predicts
    from the input alone, then is updated with (input, label). A plant
    overflow truncates the record at the offending time instead of
    raising, with overflow_time set.
    """
    idx = np.asarray(input_indices, dtype=np.int64).reshape(-1)
    overflow_time = None
    try:
        traj = simulate(sys, x0, idx)
    except PlantOverflowError as err:
        overflow_time = err.time
        traj = simulate(sys, x0, idx[: err.time])
    L = len(traj)
    predictions = np.zeros((L, sys.p))
    errors = np.zeros(L)
    for t in range(L):
        u = int(traj.input_indices[t])
        predictions[t] = observer.predict(u)
        observer.update(u, traj.outputs[t])
        errors[t] = float(np.linalg.norm(traj.outputs[t] - predictions[t]))
    return RunRecord(
        input_indices=traj.input_indices,
        input_vectors=sys.inputs[traj.input_indices],
        outputs=traj.outputs,
        predictions=predictions,
        errors=errors,
        overflow_time=overflow_time,
    )


@dataclass(frozen=True)
class GainEstimate:
    """Running supremum of the cumulative error-minus-gain functional."""

    gamma: float
    running_sup: float
    sup_time: Optional[int]
    horizon: int
    violated: bool

    def to_payload(self):
        return {
            "gamma": self.gamma,
            "running_sup": self.running_sup,
            "sup_time": self.sup_time,
            "horizon": self.horizon,
            "violated": self.violated,
        }


def gain_functional(record, gamma, threshold=None):
    """Evaluate sup over prefixes of sum_t (||e_t|| - gamma * ||u_t||).

    A candidate gain gamma is consistent with the record when the
    supremum stays bounded; `violated` flags (heuristically, never as
    proof) a supremum beyond `threshold` that is still being attained in
    the last quarter of the horizon, i.e. showing no sign of a plateau.
    """
    gamma = float(gamma)
    if gamma < 0.0:
        raise DomainError("gamma must be >= 0")
    L = len(record)
    if L == 0:
        return GainEstimate(gamma=gamma, running_sup=0.0, sup_time=None,
                            horizon=-1, violated=False)
    terms = record.errors - gamma * np.linalg.norm(record.input_vectors, axis=1)
    partial = np.cumsum(terms)
    sup_time = int(np.argmax(partial))
    running_sup = float(partial[sup_time])
    violated = bool(
        threshold is not None
        and running_sup > threshold
        and sup_time >= 3 * (L - 1) / 4
    )
    return GainEstimate(gamma=gamma, running_sup=running_sup,
                        sup_time=sup_time, horizon=L - 1, violated=violated)


@dataclass(frozen=True)
class TrialResult:
    trial: int
    last_error_time: Optional[int]
    error_count: int
    overflow_time: Optional[int]

    def to_payload(self):
        return {
            "trial": self.trial,
            "last_error_time": self.last_error_time,
            "error_count": self.error_count,
            "overflow_time": self.overflow_time,
        }


@dataclass(frozen=True)
class MonteCarloSummary:
    trials: int
    horizon: int
    x0_bound: float
    seed: int
    max_last_error_time: Optional[int]
    error_trials: int
    overflow_trials: int
    settle_by: Optional[int]
    violations: Optional[int]
    trial_results: tuple

    def to_payload(self):
        return {
            "trials": self.trials,
            "horizon": self.horizon,
            "x0_bound": self.x0_bound,
            "seed": self.seed,
            "max_last_error_time": self.max_last_error_time,
            "error_trials": self.error_trials,
            "overflow_trials": self.overflow_trials,
            "settle_by": self.settle_by,
            "violations": self.violations,
            "trial_results": [t.to_payload() for t in self.trial_results],
        }


def _draw_trial(rng, sys, horizon, x0_bound):
    x0 = rng.uniform(-x0_bound, x0_bound, sys.n)
    idx = rng.integers(0, sys.input_count, horizon)
    return x0, idx


def trial_record(sys, observer_factory, *, horizon, x0_bound, seed, trial=0):
    """Re-create the exact RunRecord of one Monte-Carlo trial."""
    trial = int(trial)
    streams = np.random.SeedSequence(seed).spawn(trial + 1)
    rng = np.random.default_rng(streams[trial])
    x0, idx = _draw_trial(rng, sys, int(horizon), float(x0_bound))
    return interconnect(sys, observer_factory(), x0, idx)


def monte_carlo_settling(sys, observer_factory, *, trials, horizon, x0_bound,
                         seed, settle_by=None, threads=1):
    """Random-trial settling study for an observer design.

    Each trial draws x0 uniformly from the infinity-ball of radius
    x0_bound and an i.i.d. uniform input-index sequence, runs the
    interconnection, and records when prediction errors stop. Per-trial
    RNG streams are spawned from `seed`, so results do not depend on
    `threads`. With settle_by given, `violations` counts trials whose
    last error occurs at t >= settle_by.
    """
    trials = int(trials)
    horizon = int(horizon)
    x0_bound = float(x0_bound)
    if trials < 0 or horizon < 0:
        raise DomainError("trials and horizon must be >= 0")
    if x0_bound <= 0.0:
        raise DomainError("x0_bound must be positive")
    streams = np.random.SeedSequence(seed).spawn(trials)

    def run_trial(i):
        rng = np.random.default_rng(streams[i])
        x0, idx = _draw_trial(rng, sys, horizon, x0_bound)
        record = interconnect(sys, observer_factory(), x0, idx)
        return TrialResult(
            trial=i,
            last_error_time=record.last_error_time,
            error_count=int(np.count_nonzero(record.errors)),
            overflow_time=record.overflow_time,
        )

    if threads and int(threads) > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            results = tuple(pool.map(run_trial, range(trials)))
    else:
        results = tuple(run_trial(i) for i in range(trials))

    error_times = [r.last_error_time for r in results
                   if r.last_error_time is not None]
    violations = None
    if settle_by is not None:
        violations = sum(1 for t in error_times if t >= int(settle_by))
    return MonteCarloSummary(
        trials=trials,
        horizon=horizon,
        x0_bound=x0_bound,
        seed=int(seed),
        max_last_error_time=max(error_times) if error_times else None,
        error_trials=len(error_times),
        overflow_trials=sum(1 for r in results if r.overflow_time is not None),
        settle_by=None if settle_by is None else int(settle_by),
        violations=violations,
        trial_results=results,
    )
