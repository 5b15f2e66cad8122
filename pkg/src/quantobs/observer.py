"""Observers that predict quantized plant outputs from inputs alone.

The central class keeps a sliding register of the most recent input
indices and predicts the label the plant will emit by running the
impulse-response sum over that window. Until the register has filled it
emits a fixed default label. Predictions never look at plant outputs;
the update hook accepts the measured label only so callers can drive
any observer through the same two-phase loop:

    yhat = obs.predict(u_index)   # before the plant output is known
    obs.update(u_index, y)        # advance the register
"""

import abc
from collections import deque

import numpy as np

from .errors import DimensionError, DomainError
from .plant import markov_parameters


class Observer(abc.ABC):
    """Interface for causal output predictors driven by input indices."""

    @abc.abstractmethod
    def reset(self):
        """Forget all history."""

    @abc.abstractmethod
    def predict(self, input_index):
        """Label forecast for the current step, given the current input."""

    @abc.abstractmethod
    def update(self, input_index, output=None):
        """Advance internal state after the step completes."""


class FiniteInputObserver(Observer):
    """Window observer: predicts from the last ``window`` inputs.

    markov[tau-1] must equal C A^{tau-1} B for tau = 1..window, matching
    the plant being observed. With a full register holding the indices of
    u[t-1], ..., u[t-window] (most recent first), the prediction at time t is

        Q( sum_tau markov[tau-1] @ u[t-tau] + D @ u[t] )

    which coincides with the plant label whenever the state window behind
    it carries no residual influence.
    """

    def __init__(self, window, markov, D, inputs, quantizer, default_label=None):
        window = int(window)
        if window < 1:
            raise DomainError("window must be >= 1")
        if len(markov) < window:
            raise DimensionError("need one markov term per register slot")
        D = np.asarray(D, dtype=np.float64)
        inputs = np.asarray(inputs, dtype=np.float64)
        p, m = D.shape
        if inputs.ndim != 2 or inputs.shape[1] != m:
            raise DimensionError("inputs must be (count, m)")
        self.window = window
        self.quantizer = quantizer
        # Finite alphabet: tabulate every per-slot contribution once.
        self._direct = inputs @ D.T
        self._lagged = np.empty((window, inputs.shape[0], p))
        for tau in range(1, window + 1):
            Mk = np.asarray(markov[tau - 1], dtype=np.float64)
            if Mk.shape != (p, m):
                raise DimensionError("markov terms must be p x m")
            self._lagged[tau - 1] = inputs @ Mk.T
        if default_label is None:
            default_label = quantizer.quantize(np.zeros(p))
        self.default_label = np.asarray(default_label, dtype=np.float64)
        if self.default_label.shape != (p,):
            raise DimensionError("default_label must have length p")
        self._register = deque(maxlen=window)

    def reset(self):
        self._register.clear()

    def predict(self, input_index):
        input_index = int(input_index)
        if len(self._register) < self.window:
            return self.default_label.copy()
        raw = self._direct[input_index].copy()
        for tau, past_index in enumerate(self._register, start=1):
            raw += self._lagged[tau - 1][past_index]
        return self.quantizer.quantize(raw)

    def update(self, input_index, output=None):
        self._register.appendleft(int(input_index))

    def state(self):
        """Snapshot of the register, most recent past input first."""
        return {
            "window": self.window,
            "register": tuple(self._register),
            "filled": len(self._register) == self.window,
        }


class ConstantObserver(Observer):
    """Predicts one fixed label forever; useful as a worst-case baseline."""

    def __init__(self, label):
        self.label = np.asarray(label, dtype=np.float64).reshape(-1)

    def reset(self):
        pass

    def predict(self, input_index):
        return self.label.copy()

    def update(self, input_index, output=None):
        pass


def build_finite_input_observer(sys, window, default_label=None):
    """Window observer matched to a plant's impulse response and quantizer."""
    return FiniteInputObserver(
        window=window,
        markov=markov_parameters(sys, int(window)),
        D=sys.D,
        inputs=sys.inputs,
        quantizer=sys.quantizer,
        default_label=default_label,
    )
