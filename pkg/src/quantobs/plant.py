"""Quantized-output LTI plants over finite input alphabets.

The plant is x[t+1] = A x[t] + B u[t], with raw output
ytilde[t] = C x[t] + D u[t] and emitted label y[t] = Q(ytilde[t]) for a
saturating product quantizer Q. Inputs are drawn from a finite list and
referenced by index everywhere, so trajectories and enumeration results
stay exactly reproducible.
"""

import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import BudgetError, DimensionError, DomainError, PlantOverflowError
from .quantizer import ProductQuantizer

DEFAULT_BUDGET = 10**6
BUDGET_ENV_VAR = "QUANTOBS_BUDGET"


def resolve_budget(budget=None):
    """Effective enumeration budget: explicit arg, else env var, else default."""
    if budget is not None:
        return int(budget)
    env = os.environ.get(BUDGET_ENV_VAR)
    if env:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"{BUDGET_ENV_VAR} must be an integer, got {env!r}")
    return DEFAULT_BUDGET


def _matrix(M, name):
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise DimensionError(f"{name} must be a 2-D matrix")
    if not np.all(np.isfinite(M)):
        raise DomainError(f"{name} must be finite")
    return M


@dataclass(frozen=True)
class QuantizedLtiSystem:
    """Discrete-time LTI system with finite input list and quantized output."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    inputs: np.ndarray
    quantizer: ProductQuantizer

    def __post_init__(self):
        A = _matrix(self.A, "A")
        B = _matrix(self.B, "B")
        C = _matrix(self.C, "C")
        D = _matrix(self.D, "D")
        inputs = np.asarray(self.inputs, dtype=np.float64)
        if inputs.ndim != 2 or inputs.shape[0] < 1:
            raise DimensionError("inputs must be a non-empty (count, m) array")
        if not np.all(np.isfinite(inputs)):
            raise DomainError("input vectors must be finite")
        n = A.shape[0]
        if A.shape != (n, n):
            raise DimensionError("A must be square")
        m = B.shape[1]
        p = C.shape[0]
        if B.shape != (n, m):
            raise DimensionError("B must be n x m")
        if C.shape != (p, n):
            raise DimensionError("C must be p x n")
        if D.shape != (p, m):
            raise DimensionError("D must be p x m")
        if inputs.shape[1] != m:
            raise DimensionError("input vectors must have length m")
        seen = {tuple(row) for row in inputs}
        if len(seen) != inputs.shape[0]:
            raise DomainError("input vectors must be pairwise distinct")
        if not isinstance(self.quantizer, ProductQuantizer):
            raise DimensionError("quantizer must be a ProductQuantizer")
        if self.quantizer.p != p:
            raise DimensionError("quantizer dimension count must equal p")
        for name, M in (("A", A), ("B", B), ("C", C), ("D", D), ("inputs", inputs)):
            M.setflags(write=False)
            object.__setattr__(self, name, M)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]

    @property
    def p(self):
        return self.C.shape[0]

    @property
    def input_count(self):
        return self.inputs.shape[0]

    def input_vector(self, index):
        return self.inputs[int(index)]

    def zero_input_index(self):
        """Index of the all-zero input vector, or None if absent."""
        for i, row in enumerate(self.inputs):
            if np.all(row == 0.0):
                return i
        return None

    @cached_property
    def max_input_drive(self):
        """max over the alphabet of ||B u|| (Euclidean)."""
        return float(np.max(np.linalg.norm(self.inputs @ self.B.T, axis=1)))


@dataclass(frozen=True)
class Trajectory:
    """One simulated run: equal-length state, raw output and label arrays."""

    input_indices: np.ndarray
    states: np.ndarray
    raw_outputs: np.ndarray
    outputs: np.ndarray

    def __len__(self):
        return self.input_indices.shape[0]


def _check_indices(sys, input_indices):
    idx = np.asarray(input_indices, dtype=np.int64).reshape(-1)
    if idx.size and (idx.min() < 0 or idx.max() >= sys.input_count):
        raise DomainError("input index out of range")
    return idx


def simulate(sys, x0, input_indices):
    """Simulate from x0 under an index sequence; one step per input.

    The trajectory has the same length as the input sequence: entry t
    records the state before applying input t along with the raw and
    quantized outputs at time t. A non-finite state or raw output raises
    PlantOverflowError carrying the offending time.
    """
    idx = _check_indices(sys, input_indices)
    x0 = np.asarray(x0, dtype=np.float64).reshape(-1)
    if x0.shape[0] != sys.n:
        raise DimensionError(f"x0 must have length {sys.n}")
    L = idx.shape[0]
    if L == 0:
        empty = np.zeros((0, sys.p))
        return Trajectory(idx, np.zeros((0, sys.n)), empty, empty.copy())
    u = sys.inputs[idx]
    bu = u[:-1] @ sys.B.T
    states, bad_t = _kernels.lti_recursion(sys.A, x0, bu)
    if bad_t >= 0:
        raise PlantOverflowError(bad_t)
    raw = states @ sys.C.T + u @ sys.D.T
    if not np.all(np.isfinite(raw)):
        raise PlantOverflowError(int(np.argmax(~np.isfinite(raw).all(axis=1))))
    outputs = sys.quantizer.quantize_array(raw)
    return Trajectory(idx, states, raw, outputs)


def forced_response(sys, input_indices, t):
    """Raw output at time t of the zero-initial-state response to the inputs.

    Requires t < len(input_indices). Equals
    sum_{tau < t} C A^{t-1-tau} B u[tau] + D u[t].
    """
    idx = _check_indices(sys, input_indices)
    t = int(t)
    if not 0 <= t < idx.shape[0]:
        raise DomainError("t must index into the input sequence")
    traj = simulate(sys, np.zeros(sys.n), idx[: t + 1])
    return traj.raw_outputs[t]


def markov_parameters(sys, upto):
    """Input-to-output impulse terms C A^{tau-1} B for tau = 1..upto."""
    upto = int(upto)
    if upto < 0:
        raise DomainError("upto must be non-negative")
    out = []
    M = sys.C
    for _ in range(upto):
        out.append(M @ sys.B)
        M = M @ sys.A
    return out


@dataclass(frozen=True)
class ForcedResponseSet:
    """All zero-state responses at time k-1 over input tuples of length k.

    values[i] is the raw output for the i-th tuple in lexicographic order
    of chronological index tuples (position 0 = earliest input, most
    significant). Tuples are recovered on demand from the flat index to
    keep memory linear in the value count.
    """

    k: int
    input_count: int
    values: np.ndarray

    def __len__(self):
        return self.values.shape[0]

    def tuple_at(self, flat_index):
        """Chronological input-index tuple generating values[flat_index]."""
        flat_index = int(flat_index)
        if not 0 <= flat_index < len(self):
            raise IndexError(flat_index)
        digits = []
        for _ in range(self.k):
            flat_index, r = divmod(flat_index, self.input_count)
            digits.append(r)
        return tuple(reversed(digits))


def forced_response_set(sys, k, budget=None):
    """Enumerate the depth-k forced-response set.

    The set holds D u1 + CB u2 + ... + C A^{k-2} B uk over all |U|^k input
    combinations, i.e. every zero-state response observable at time k-1.
    Duplicate values are retained so each entry keeps its generating tuple.
    Raises BudgetError when |U|^k exceeds the enumeration budget.
    """
    k = int(k)
    if k < 1:
        raise DomainError("k must be >= 1")
    budget = resolve_budget(budget)
    required = sys.input_count**k
    if required > budget:
        raise BudgetError(
            f"|U|^k = {required} tuples exceed budget {budget}",
            required=required,
            budget=budget,
        )
    # position j (chronological) contributes C A^{k-2-j} B u for j < k-1
    # and D u for the final position.
    mk = markov_parameters(sys, k - 1)
    tables = np.empty((k, sys.input_count, sys.p))
    for j in range(k - 1):
        tables[j] = sys.inputs @ mk[k - 2 - j].T
    tables[k - 1] = sys.inputs @ sys.D.T
    values = _kernels.forced_sums(tables)
    return ForcedResponseSet(k=k, input_count=sys.input_count, values=values)
