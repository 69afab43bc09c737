"""Collapse side: event probabilities and the Lüders change of state.

Only normalized :class:`StateVector` and :class:`DensityOperator` inputs are
accepted; a bare :class:`RawVector` has no probabilistic meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import StructureMismatch, SubjectObjectOverlap, ZeroProbabilityEvent
from .tensor_core import (
    AnyState,
    DensityOperator,
    StateVector,
    SubsystemEvent,
    embed,
    partial_trace,
)
from .tolerances import EPS_PROB


@dataclass(frozen=True, eq=False)
class CollapseOutcome:
    probability: float
    post_state: Union[StateVector, DensityOperator]


def _check_state(state) -> None:
    if not isinstance(state, (StateVector, DensityOperator)):
        raise TypeError(
            f"probabilities need a StateVector or DensityOperator, got {type(state).__name__}"
        )


def _clamp(p: float) -> float:
    if -EPS_PROB <= p < 0.0:
        return 0.0
    if 1.0 < p <= 1.0 + EPS_PROB:
        return 1.0
    return p


def event_probability(state: AnyState, event: SubsystemEvent) -> float:
    """Probability of ``event`` in ``state``: ``<Psi|Q|Psi>`` or ``tr(rho Q)``."""
    _check_state(state)
    q = embed(event, state.structure)
    if isinstance(state, StateVector):
        psi = state.amplitudes
        p = np.vdot(psi, q @ psi).real
    else:
        p = np.trace(state.matrix @ q).real
    return _clamp(float(p))


def _require_positive(p: float) -> None:
    if p <= EPS_PROB:
        raise ZeroProbabilityEvent(f"subject event has zero probability (p = {p:.3g})")


def collapse_pure(psi: StateVector, event: SubsystemEvent) -> CollapseOutcome:
    """Lüders projection of a pure state: ``Q Psi / sqrt(<Psi|Q|Psi>)``."""
    if not isinstance(psi, StateVector):
        raise TypeError("collapse_pure needs a StateVector")
    p = event_probability(psi, event)
    _require_positive(p)
    q = embed(event, psi.structure)
    post = q @ psi.amplitudes / np.sqrt(p)
    return CollapseOutcome(p, StateVector(psi.structure, post))


def collapse_mixed(rho: DensityOperator, event: SubsystemEvent) -> CollapseOutcome:
    """Lüders projection of a density operator: ``Q rho Q / tr(Q rho Q)``.

    ``Q rho Q`` is formed explicitly; the shortcut through ``tr(rho Q)`` is
    what the relative-state side uses, and keeping the two apart lets the
    oracles compare them.
    """
    if not isinstance(rho, DensityOperator):
        raise TypeError("collapse_mixed needs a DensityOperator")
    p = event_probability(rho, event)
    _require_positive(p)
    q = embed(event, rho.structure)
    qrq = q @ rho.matrix @ q
    norm = np.trace(qrq).real
    _require_positive(norm)
    post = qrq / norm
    post = (post + post.conj().T) / 2
    return CollapseOutcome(p, DensityOperator(rho.structure, post))


def collapse(state: AnyState, event: SubsystemEvent) -> CollapseOutcome:
    if isinstance(state, StateVector):
        return collapse_pure(state, event)
    return collapse_mixed(state, event)


def check_object(structure, event: SubsystemEvent, obj: int) -> int:
    obj = structure.check_index(obj)
    subject = structure.check_index(event.subsystem)
    if obj == subject:
        raise SubjectObjectOverlap(f"object subsystem {obj} is also the subject subsystem")
    if event.dim != structure.dims[subject]:
        raise StructureMismatch(
            f"projector of dimension {event.dim} does not fit subsystem {subject}"
        )
    return obj


def collapsed_object_state(state: AnyState, event: SubsystemEvent, obj: int) -> DensityOperator:
    """State of subsystem ``obj`` after ``event`` has occurred on its partner."""
    _check_state(state)
    obj = check_object(state.structure, event, obj)
    post = collapse(state, event).post_state
    return partial_trace(post, [obj])
