"""Programmatic builders for the shipped demonstration systems.

These mirror the JSON files in the repository's fixtures/ directory;
write_fixture_files regenerates those files from this module, which is
the single source of truth for the numbers.
"""

import json
import os

import numpy as np

from .fileio import SystemDescription, description_to_payload
from .plant import QuantizedLtiSystem
from .quantizer import IntervalQuantizer, ProductQuantizer, unit_grid_quantizer

_PM1 = [[0.0], [1.0], [-1.0]]


def _system(A, B, C, D, inputs, quantizer):
    return QuantizedLtiSystem(
        A=np.asarray(A, dtype=np.float64),
        B=np.asarray(B, dtype=np.float64),
        C=np.asarray(C, dtype=np.float64),
        D=np.asarray(D, dtype=np.float64),
        inputs=np.asarray(inputs, dtype=np.float64),
        quantizer=quantizer,
    )


def _threshold_quantizer():
    return ProductQuantizer(dims=(IntervalQuantizer(breakpoints=(0.5,),
                                                    levels=(0.0, 1.0)),))


def _grid(radius):
    return ProductQuantizer(dims=(unit_grid_quantizer(radius),))


def example1():
    """Scalar stable plant whose output recalls the initial state forever."""
    sys = _system([[0.5]], [[1.0]], [[1.0]], [[1.0]], _PM1,
                  _grid(1))
    return SystemDescription(system=sys, x0_bound=2.0, name="example1",
                             source=None)


def e1():
    """Stable two-state plant with a certified forced-response gap."""
    sys = _system([[0.25, -0.05], [0.0, 0.2]], [[2.0], [1.0]], [[0.5, 0.0]],
                  [[1.0]], _PM1, _grid(5))
    return SystemDescription(system=sys, x0_bound=2.0, name="e1", source=None)


def e2():
    """Unstable plant whose state influence on the output dies in one step."""
    sys = _system([[2.0, 2.0], [0.0, 0.0]], [[1.0], [1.0]], [[0.0, 1.0]],
                  [[1.0]], _PM1, _grid(5))
    return SystemDescription(system=sys, x0_bound=2.0, name="e2", source=None)


def dfm_nzi():
    """Stable scalar plant whose forced responses hit the threshold exactly."""
    sys = _system([[0.5]], [[1.0]], [[1.0]], [[0.0]], _PM1,
                  _threshold_quantizer())
    return SystemDescription(system=sys, x0_bound=2.0, name="dfm_nzi",
                             source=None)


def example5():
    """Expanding scalar plant admitting the full adversarial construction."""
    sys = _system([[2.0]], [[1.0]], [[1.0]], [[0.0]],
                  [[0.0], [2.0], [-2.0]], _threshold_quantizer())
    return SystemDescription(system=sys, x0_bound=1.0, name="example5",
                             source=None)


BUILDERS = {
    "example1": example1,
    "e1": e1,
    "e2": e2,
    "dfm_nzi": dfm_nzi,
    "example5": example5,
}


def write_fixture_files(directory):
    """Regenerate the JSON fixture files; returns the paths written."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, builder in BUILDERS.items():
        desc = builder()
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(description_to_payload(desc), fh, indent=2)
            fh.write("\n")
        paths.append(path)
    return paths
