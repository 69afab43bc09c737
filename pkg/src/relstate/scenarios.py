"""One-slit preparation and the Mach-Zehnder interferometer.

Both experiments build a pure quanton/apparatus state, decompose it along
the apparatus events and report the object (quanton) state for every branch
twice: once by collapse and once as a relative state.

Mach-Zehnder conventions. Photon modes are ``|u> = (1, 0)`` and
``|l> = (0, 1)``; the detector system is a 2-level pointer with
``|D_H> = (1, 0)`` and ``|D_V> = (0, 1)``. The first beam splitter prepares
``cos(theta)|u> + sin(theta)|l>``. The second one maps
``|u> -> (|D_H> + |D_V>)/sqrt(2)`` and ``|l> -> (|D_H> - |D_V>)/sqrt(2)`` in
the output-port basis, which sends every photon to ``D_H`` at 45 degrees.
Detection is a controlled flip of the pointer (initially ``|D_H>``) by the
photon mode reaching it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .collapse import collapsed_object_state
from .errors import DegenerateSlit, InvalidState
from .relative import relevant_decomposition
from .tensor_core import (
    DensityOperator,
    HilbertStructure,
    StateVector,
    SubsystemEvent,
    apply_subsystem_unitary,
    max_deviation,
    partial_trace,
    tensor_product,
)
from .tolerances import EPS_CMP, EPS_NORM, EPS_PROB

SQRT_HALF = 1 / np.sqrt(2)

FIRST_BS_INPUT = np.array([1.0, 0.0], dtype=complex)
SECOND_BEAM_SPLITTER = SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=complex)
# |mode>|pointer>: pointer flips from D_H to D_V when the lower/V mode arrives
DETECTION = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]],
    dtype=complex,
)
D_H = np.array([1.0, 0.0], dtype=complex)
D_V = np.array([0.0, 1.0], dtype=complex)


@dataclass(frozen=True, eq=False)
class ScenarioReport:
    """Side-by-side collapse / relative-state account of one run.

    Branch lists are aligned with ``branch_labels``; entries for branches of
    zero probability are ``None``.
    """

    name: str
    composite_state: StateVector
    branch_labels: tuple[str, ...]
    branch_weights: tuple[float, ...]
    cqm_object_states: tuple[Optional[DensityOperator], ...]
    rsqm_object_states: tuple[Optional[DensityOperator], ...]
    detector_distribution: dict
    equivalence_verdict: bool
    max_deviation: float
    object_state: DensityOperator
    reconstruction_deviation: float
    timeline: tuple[str, ...] = ()
    parameters: dict = field(default_factory=dict)


def _branches(name, psi, events, labels, obj, tol, timeline=(), parameters=None):
    dec = relevant_decomposition(psi, events, obj)
    cqm, worst = [], 0.0
    for event, rs in zip(events, dec.object_components):
        if rs is None:
            cqm.append(None)
            continue
        c = collapsed_object_state(psi, event, obj)
        worst = max(worst, max_deviation(c, rs))
        cqm.append(c)
    reduced = partial_trace(psi, [obj])
    recon = max_deviation(dec.reconstruct(), reduced)
    return ScenarioReport(
        name=name,
        composite_state=psi,
        branch_labels=tuple(labels),
        branch_weights=dec.weights,
        cqm_object_states=tuple(cqm),
        rsqm_object_states=dec.object_components,
        detector_distribution=dict(zip(labels, dec.weights)),
        equivalence_verdict=worst <= tol,
        max_deviation=worst,
        object_state=reduced,
        reconstruction_deviation=recon,
        timeline=tuple(timeline),
        parameters=dict(parameters or {}),
    )


# -- one slit -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OneSlitModel:
    """Quanton over ``n_cells`` transverse cells hitting a screen with a slit."""

    n_cells: int
    slit_cells: tuple[int, ...]
    initial_amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "slit_cells", tuple(sorted({int(c) for c in self.slit_cells})))
        amps = np.array(self.initial_amplitudes, dtype=complex)
        amps.flags.writeable = False
        object.__setattr__(self, "initial_amplitudes", amps)

    def validate(self) -> "OneSlitModel":
        if self.n_cells < 2:
            raise DegenerateSlit("need at least two cells")
        if any(not 0 <= c < self.n_cells for c in self.slit_cells):
            raise DegenerateSlit(f"slit cells {self.slit_cells} outside 0..{self.n_cells - 1}")
        if not self.slit_cells or len(self.slit_cells) == self.n_cells:
            raise DegenerateSlit("the slit must be a non-empty proper part of the screen")
        if self.initial_amplitudes.shape != (self.n_cells,):
            raise InvalidState("initial amplitudes do not match n_cells")
        if abs(np.linalg.norm(self.initial_amplitudes) - 1) > EPS_NORM:
            raise InvalidState("initial amplitudes are not normalized")
        return self

    @classmethod
    def uniform(cls, n_cells, slit_cells):
        return cls(n_cells, tuple(slit_cells), np.full(n_cells, 1 / np.sqrt(n_cells), dtype=complex))

    @classmethod
    def random(cls, rng, max_cells=6):
        n = int(rng.integers(2, max_cells + 1))
        k = int(rng.integers(1, n))
        slit = rng.choice(n, size=k, replace=False)
        amps = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        return cls(n, tuple(int(c) for c in slit), amps / np.linalg.norm(amps))


def one_slit_state(model: OneSlitModel) -> StateVector:
    """Quanton x screen register: ``|0>`` = passed the slit, ``|1>`` = hit the rest."""
    psi = np.zeros((model.n_cells, 2), dtype=complex)
    in_slit = np.zeros(model.n_cells, dtype=bool)
    in_slit[list(model.slit_cells)] = True
    psi[in_slit, 0] = model.initial_amplitudes[in_slit]
    psi[~in_slit, 1] = model.initial_amplitudes[~in_slit]
    return StateVector(HilbertStructure((model.n_cells, 2)), psi.reshape(-1))


def run_one_slit(model: OneSlitModel, tol: float = EPS_CMP) -> ScenarioReport:
    model.validate()
    psi = one_slit_state(model)
    passed = SubsystemEvent(1, np.diag([1.0, 0.0]))
    events = [passed, passed.complement()]
    weights = np.abs(model.initial_amplitudes) ** 2
    p_slit = weights[list(model.slit_cells)].sum()
    if min(p_slit, weights.sum() - p_slit) <= EPS_PROB:
        raise DegenerateSlit("both passing the slit and hitting the screen need positive probability")
    return _branches(
        "one-slit",
        psi,
        events,
        ("slit", "screen"),
        obj=0,
        tol=tol,
        timeline=("t_i",),
        parameters={"n_cells": model.n_cells, "slit_cells": model.slit_cells},
    )


# -- Mach-Zehnder ---------------------------------------------------------------


@dataclass(frozen=True)
class MachZehnderModel:
    """Interferometer configuration.

    ``second_bs_present`` is the configuration at preparation time. With
    ``delayed_choice`` set, the configuration is flipped at an instant after
    the photon has left the first beam splitter and before detection.
    """

    theta: float = 45.0
    second_bs_present: bool = True
    delayed_choice: bool = False

    def validate(self) -> "MachZehnderModel":
        if not 0.0 <= self.theta <= 180.0:
            raise ValueError(f"theta must lie in [0, 180] degrees, got {self.theta}")
        return self

    @property
    def final_second_bs(self) -> bool:
        return self.second_bs_present != self.delayed_choice

    @property
    def final_mode(self) -> str:
        return "interference" if self.final_second_bs else "which-way"


def prepared_photon(theta_deg: float) -> StateVector:
    t = np.deg2rad(theta_deg)
    first = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]], dtype=complex)
    return StateVector(HilbertStructure((2,)), first @ FIRST_BS_INPUT)


def run_mach_zehnder(model: MachZehnderModel, tol: float = EPS_CMP) -> ScenarioReport:
    model.validate()
    timeline = ["t_i: photon leaves the first beam splitter"]
    photon = prepared_photon(model.theta)
    second_bs = model.second_bs_present
    if model.delayed_choice:
        second_bs = not second_bs
        timeline.append(
            "t_bar: second beam splitter " + ("inserted" if second_bs else "removed")
        )
    composite = tensor_product(photon, StateVector(HilbertStructure((2,)), D_H))
    if second_bs:
        composite = apply_subsystem_unitary(composite, SECOND_BEAM_SPLITTER, 0)
        timeline.append("t_f: photon leaves the second beam splitter")
    else:
        timeline.append("t_f: photon passes the empty second beam splitter position")
    composite = StateVector(composite.structure, DETECTION @ composite.amplitudes)
    timeline.append("t: photon reaches a detector")
    events = [SubsystemEvent.ray(1, D_H), SubsystemEvent.ray(1, D_V)]
    return _branches(
        "mach-zehnder",
        composite,
        events,
        ("D_H", "D_V"),
        obj=0,
        tol=tol,
        timeline=timeline,
        parameters={
            "theta": model.theta,
            "mode": model.final_mode,
            "delayed_choice": model.delayed_choice,
        },
    )


def expected_distribution(theta_deg: float, interference: bool) -> tuple[float, float]:
    """Closed-form detector probabilities ``(P(D_H), P(D_V))``."""
    t = np.deg2rad(theta_deg)
    if interference:
        p = (1 + np.sin(2 * t)) / 2
    else:
        p = np.cos(t) ** 2
    return float(p), float(1 - p)
