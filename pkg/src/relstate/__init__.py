"""Collapse and relative-state descriptions of multipartite quantum states.

The collapse side (:mod:`relstate.collapse`) projects the composite state
with the Lüders rule and then reduces it; the relative-state side
(:mod:`relstate.relative`) conditions the reduced state on the subject event
without touching the composite state. :mod:`relstate.oracles` checks
numerically that both give the same object state.
"""

from .collapse import (
    CollapseOutcome,
    collapse_mixed,
    collapse_pure,
    collapsed_object_state,
    event_probability,
)
from .errors import (
    DegenerateSlit,
    DegenerateTrace,
    InvalidState,
    NonUnitary,
    NotAPartition,
    ParseError,
    QStateError,
    StructureMismatch,
    SubjectObjectOverlap,
    ZeroProbabilityEvent,
)
from .relative import (
    RelevantDecomposition,
    everett_relative_ket,
    relative_state,
    relative_state_direct,
    relative_state_via_pair,
    relevant_decomposition,
)
from .tensor_core import (
    DensityOperator,
    HilbertStructure,
    RawVector,
    StateVector,
    SubsystemEvent,
    apply_subsystem_unitary,
    embed,
    partial_scalar_product,
    partial_trace,
    tensor_product,
)

__version__ = "0.1.0"
