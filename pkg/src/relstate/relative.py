"""No-collapse side: relative states and relevant decompositions.

The relative state of an object subsystem with respect to a subject event
``Q`` is ``tr_rest(rho Q) / tr(rho Q)``. Nothing here modifies the composite
state; the collapse module computes the same object states by projecting
first and tracing afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .collapse import check_object, collapse_pure, event_probability
from .errors import NotAPartition, StructureMismatch, ZeroProbabilityEvent
from .tensor_core import (
    AnyState,
    DensityOperator,
    StateVector,
    SubsystemEvent,
    as_density,
    embed,
    partial_scalar_product,
    partial_trace,
)
from .tolerances import EPS_CMP, EPS_PROB


def _conditioned_object_state(rho: DensityOperator, event: SubsystemEvent, obj: int) -> DensityOperator:
    q = embed(event, rho.structure)
    rq = rho.matrix @ q
    p = float(np.trace(rq).real)
    if p <= EPS_PROB:
        raise ZeroProbabilityEvent(f"subject event has zero probability (p = {p:.3g})")
    reduced = partial_trace(DensityOperator(rho.structure, rq), [obj]).matrix / p
    # tr_rest(rho Q) is Hermitian only up to rounding
    return DensityOperator(rho.structure.sub([obj]), (reduced + reduced.conj().T) / 2)


def relative_state_direct(state: AnyState, subject: SubsystemEvent, obj: int) -> DensityOperator:
    """Trace ``rho Q`` over every subsystem except ``obj`` in one step."""
    rho = as_density(state)
    obj = check_object(rho.structure, subject, obj)
    return _conditioned_object_state(rho, subject, obj)


def relative_state_via_pair(state: AnyState, subject: SubsystemEvent, obj: int) -> DensityOperator:
    """Reduce to the {object, subject} pair first, then condition on the pair state."""
    rho = as_density(state)
    obj = check_object(rho.structure, subject, obj)
    s = subject.subsystem
    if rho.structure.n_subsystems == 2:
        pair = rho
    else:
        pair = partial_trace(rho, [obj, s])
    # positions of object and subject inside the pair keep their original order
    pair_obj, pair_subj = (0, 1) if obj < s else (1, 0)
    return _conditioned_object_state(
        pair, SubsystemEvent(pair_subj, subject.projector), pair_obj
    )


def relative_state(
    state: AnyState, subject: SubsystemEvent, obj: int, path: str = "direct"
) -> DensityOperator:
    """Relative state of subsystem ``obj`` with respect to the subject event.

    Parameters
    ----------
    state : StateVector or DensityOperator
        Composite state over any number of subsystems.
    subject : SubsystemEvent
        Subject subsystem and subject event.
    obj : int
        Object subsystem (0-based), different from ``subject.subsystem``.
    path : {"direct", "pair"}
        ``"direct"`` traces out all other subsystems at once; ``"pair"``
        first reduces to the object/subject pair. Both give the same result.
    """
    if path == "direct":
        return relative_state_direct(state, subject, obj)
    if path == "pair":
        return relative_state_via_pair(state, subject, obj)
    raise ValueError(f"unknown path {path!r}")


def everett_relative_ket(psi: StateVector, phi, subject: int = 1) -> StateVector:
    """Normalized ``<phi|_subject Psi>`` for a bipartite pure state."""
    if psi.structure.n_subsystems != 2:
        raise StructureMismatch("the relative ket is defined for bipartite states")
    raw = partial_scalar_product(phi, psi, subject)
    if raw.norm ** 2 <= EPS_PROB:
        raise ZeroProbabilityEvent("subject event has zero probability")
    return raw.normalized()


@dataclass(frozen=True, eq=False)
class RelevantDecomposition:
    """Branches of a pure composite state induced by an event partition.

    ``components[k]`` and ``object_components[k]`` are ``None`` for branches
    whose probability is at or below the zero-probability threshold; those
    are flagged in ``degenerate``.
    """

    weights: tuple[float, ...]
    components: tuple[Optional[StateVector], ...]
    object_components: tuple[Optional[DensityOperator], ...]
    degenerate: tuple[bool, ...]
    events: tuple[SubsystemEvent, ...]
    obj: int

    def reconstruct(self) -> np.ndarray:
        """Weighted sum of the object branch states."""
        out = None
        for w, comp in zip(self.weights, self.object_components):
            if comp is None:
                continue
            term = w * comp.matrix
            out = term if out is None else out + term
        return out


def check_partition(events: Sequence[SubsystemEvent], tol: float = EPS_CMP) -> None:
    if not events:
        raise NotAPartition("empty list of events")
    subsystems = {e.subsystem for e in events}
    if len(subsystems) != 1:
        raise NotAPartition(f"events act on different subsystems {sorted(subsystems)}")
    dims = {e.dim for e in events}
    if len(dims) != 1:
        raise NotAPartition("events have different dimensions")
    for e in events:
        e.validate()
    d = dims.pop()
    total = sum(e.projector for e in events)
    if np.max(np.abs(total - np.eye(d))) > tol:
        raise NotAPartition("projectors do not sum to the identity")
    for i, a in enumerate(events):
        for b in events[i + 1:]:
            if np.max(np.abs(a.projector @ b.projector)) > tol:
                raise NotAPartition("projectors are not mutually orthogonal")


def relevant_decomposition(
    psi: StateVector, events: Sequence[SubsystemEvent], obj: int
) -> RelevantDecomposition:
    events = tuple(events)
    check_partition(events)
    for e in events:
        check_object(psi.structure, e, obj)
    weights, comps, obj_comps, degenerate = [], [], [], []
    for e in events:
        p = event_probability(psi, e)
        if p <= EPS_PROB:
            weights.append(0.0)
            comps.append(None)
            obj_comps.append(None)
            degenerate.append(True)
            continue
        weights.append(p)
        comps.append(collapse_pure(psi, e).post_state)
        obj_comps.append(relative_state(psi, e, obj))
        degenerate.append(False)
    return RelevantDecomposition(
        tuple(weights), tuple(comps), tuple(obj_comps), tuple(degenerate), events, obj
    )
