"""Superposed parameterised quantum circuits on a dense statevector simulator.

The reference path (:mod:`spqc.statevector`, :mod:`spqc.ffqram`,
:mod:`spqc.model`) builds every circuit gate by gate; :mod:`spqc.engine`
evaluates the same models batched over inputs for training.
"""
from .errors import (
    ConfigurationError,
    DimensionError,
    EstimationError,
    ForwardError,
    MetricError,
    PostSelectionError,
    QubitIndexError,
    SpqcError,
    StateError,
    TrainingDivergedError,
)
from .model import (
    BranchAmplitudes,
    PqcModelSpec,
    ReadoutSpec,
    SpqcModelSpec,
    depth_matched,
    depth_matched_pqc_forward,
    forward,
    pqc_forward,
)
from .statevector import StateVector, apply_gate, new_zero_state, project_postselect

__version__ = "0.1.0"

__all__ = [
    "BranchAmplitudes",
    "ConfigurationError",
    "DimensionError",
    "EstimationError",
    "ForwardError",
    "MetricError",
    "PostSelectionError",
    "PqcModelSpec",
    "QubitIndexError",
    "ReadoutSpec",
    "SpqcError",
    "SpqcModelSpec",
    "StateError",
    "StateVector",
    "TrainingDivergedError",
    "apply_gate",
    "depth_matched",
    "depth_matched_pqc_forward",
    "forward",
    "new_zero_state",
    "pqc_forward",
    "project_postselect",
]
