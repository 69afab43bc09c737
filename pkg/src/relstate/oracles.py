"""Randomized oracles for the operator identities linking the two descriptions.

Each ``check_*`` function draws ``trials`` independent random instances,
computes both sides of an identity by separate code paths and reports the
largest absolute element-wise deviation. Trial ``i`` uses the generator
``default_rng(seed + i)``, so a failing trial is reproduced from
``CheckReport.failing_seed`` alone, and serial and threaded runs agree.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .collapse import collapse_pure, collapsed_object_state, event_probability
from .errors import ZeroProbabilityEvent
from .random_states import (
    random_event,
    random_mixed_state,
    random_pure_state,
    random_unit_vector,
    random_unitary,
)
from .relative import relative_state_direct, relative_state_via_pair
from .tensor_core import (
    DensityOperator,
    HilbertStructure,
    RawVector,
    StateVector,
    SubsystemEvent,
    embed,
    expansion_coefficients,
    max_deviation,
    partial_scalar_product,
    partial_trace,
)
from .tolerances import EPS_CMP, EPS_PROB

DEFAULT_DIMS_POOL = ((2, 2), (2, 3), (3, 3), (2, 2, 2), (2, 3, 2))

# resample cap for subject events that come out with (near) zero probability
MAX_RESAMPLES = 100


@dataclass(frozen=True)
class CheckReport:
    name: str
    trials: int
    max_deviation: float
    passed: bool
    tolerance: float
    failing_seed: Optional[int] = None


@dataclass(frozen=True, eq=False)
class DistinguishabilityReport:
    rsqm_subject_state: DensityOperator
    cqm_subject_state: DensityOperator
    rsqm_purity: float
    cqm_purity: float
    correlation_norm_rsqm: float
    correlation_norm_cqm: float


def _structures(dims_pool) -> list[HilbertStructure]:
    pool = DEFAULT_DIMS_POOL if dims_pool is None else dims_pool
    out = [d if isinstance(d, HilbertStructure) else HilbertStructure(tuple(d)) for d in pool]
    if not out:
        raise ValueError("dims_pool is empty")
    return out


def _pick(rng, pool):
    return pool[int(rng.integers(len(pool)))]


def _two_subsystems(rng, structure):
    obj, subj = rng.choice(structure.n_subsystems, size=2, replace=False)
    return int(obj), int(subj)


def _positive_event(state, subsystem, rng) -> SubsystemEvent:
    d = state.structure.dims[subsystem]
    for _ in range(MAX_RESAMPLES):
        event = random_event(subsystem, d, rng)
        if event_probability(state, event) > EPS_PROB:
            return event
    raise ZeroProbabilityEvent("could not draw a subject event of positive probability")


def _run(name, trial: Callable, trials: int, seed: int, tol: float, workers: int) -> CheckReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seeds = [seed + i for i in range(trials)]

    def one(s):
        return trial(np.random.default_rng(s))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            devs = list(pool.map(one, seeds))
    else:
        devs = [one(s) for s in seeds]
    devs = np.asarray(devs, dtype=float)
    worst = float(devs.max())
    failing = None
    bad = np.flatnonzero(~(devs <= tol))
    if bad.size:
        failing = seeds[int(bad[0])]
    return CheckReport(name, trials, worst, failing is None, tol, failing)


def _bipartite_view(psi: StateVector, subject: int) -> np.ndarray:
    """Amplitudes as a matrix: rows = all other subsystems, columns = subject."""
    t = np.moveaxis(psi.amplitudes.reshape(psi.structure.dims), subject, -1)
    return t.reshape(-1, psi.structure.dims[subject])


# -- central identity ---------------------------------------------------------


def rs_collapse_deviation(state, event: SubsystemEvent, obj: int) -> float:
    """Max deviation between the relative states (both paths) and the collapsed state."""
    collapsed = collapsed_object_state(state, event, obj)
    direct = relative_state_direct(state, event, obj)
    pair = relative_state_via_pair(state, event, obj)
    return max(max_deviation(direct, collapsed), max_deviation(pair, collapsed))


def check_rs_equals_collapse(
    trials, dims_pool=None, seed=0, tol=EPS_CMP, workers=1, kinds="both"
) -> CheckReport:
    """``kinds`` is ``"pure"``, ``"mixed"`` or ``"both"`` (a fair coin per trial)."""
    if kinds not in ("pure", "mixed", "both"):
        raise ValueError(f"unknown kinds {kinds!r}")
    pool = _structures(dims_pool)

    def trial(rng):
        structure = _pick(rng, pool)
        pure = rng.random() < 0.5 if kinds == "both" else kinds == "pure"
        if pure:
            state = random_pure_state(structure, rng)
        else:
            state = random_mixed_state(structure, rng)
        obj, subj = _two_subsystems(rng, structure)
        event = _positive_event(state, subj, rng)
        return rs_collapse_deviation(state, event, obj)

    return _run("rs_equals_collapse", trial, trials, seed, tol, workers)


# -- partial scalar product vs partial trace ----------------------------------


def psp_route(psi: StateVector, phi, subject: int):
    """Nominator operator and denominator via the partial scalar product."""
    phi = np.asarray(phi, dtype=complex)
    raw = partial_scalar_product(RawVector(psi.structure.dims[subject], phi), psi, subject)
    nominator = np.outer(raw.amplitudes, raw.amplitudes.conj())
    q = embed(SubsystemEvent(subject, np.outer(phi, phi.conj())), psi.structure)
    denominator = np.vdot(psi.amplitudes, q @ psi.amplitudes)
    return nominator, denominator


def ptrace_route(psi: StateVector, phi, subject: int):
    """Nominator operator and denominator via the partial trace of ``|phi><phi| rho``."""
    phi = np.asarray(phi, dtype=complex)
    q = embed(SubsystemEvent(subject, np.outer(phi, phi.conj())), psi.structure)
    m = q @ np.outer(psi.amplitudes, psi.amplitudes.conj())
    rest = [k for k in range(psi.structure.n_subsystems) if k != subject]
    nominator = partial_trace(DensityOperator(psi.structure, m), rest).matrix
    return nominator, np.trace(m)


def psp_ptrace_deviation(psi: StateVector, phi, subject: int = 1) -> float:
    n1, d1 = psp_route(psi, phi, subject)
    n2, d2 = ptrace_route(psi, phi, subject)
    return max(max_deviation(n1, n2), abs(d1 - d2))


def check_psp_vs_ptrace(trials, dims_pool=None, seed=0, tol=EPS_CMP, workers=1) -> CheckReport:
    pool = _structures(dims_pool)

    def trial(rng):
        structure = _pick(rng, pool)
        psi = random_pure_state(structure, rng)
        subj = int(rng.integers(structure.n_subsystems))
        phi = random_unit_vector(structure.dims[subj], rng)
        return psp_ptrace_deviation(psi, phi, subj)

    return _run("psp_vs_ptrace", trial, trials, seed, tol, workers)


# -- basis independence of the partial scalar product -------------------------


def basis_deviation(psi: StateVector, phi, object_basis, subject_basis, subject: int = 1) -> float:
    """Compare the expansion in the computational bases with one in rotated bases.

    Coefficients found in the rotated bases are mapped back to the
    computational basis before comparison. The direct contraction is
    compared as well.
    """
    m = _bipartite_view(psi, subject)
    d_obj, d_subj = m.shape
    reference = expansion_coefficients(phi, m, np.eye(d_obj), np.eye(d_subj))
    rotated = object_basis @ expansion_coefficients(phi, m, object_basis, subject_basis)
    direct = partial_scalar_product(
        RawVector(d_subj, np.asarray(phi, dtype=complex)), psi, subject
    ).amplitudes
    return max(max_deviation(reference, rotated), max_deviation(reference, direct))


def check_basis_independence(trials, dims_pool=None, seed=0, tol=EPS_CMP, workers=1) -> CheckReport:
    pool = _structures(dims_pool)

    def trial(rng):
        structure = _pick(rng, pool)
        psi = random_pure_state(structure, rng)
        subj = int(rng.integers(structure.n_subsystems))
        d_subj = structure.dims[subj]
        # unnormalized bra: the expansion is linear, barred vectors allowed
        phi = rng.standard_normal(d_subj) + 1j * rng.standard_normal(d_subj)
        u_obj = random_unitary(structure.total_dim // d_subj, rng)
        u_subj = random_unitary(d_subj, rng)
        return basis_deviation(psi, phi, u_obj, u_subj, subj)

    return _run("basis_independence", trial, trials, seed, tol, workers)


# -- succession vs coincidence -----------------------------------------------


def succession_coincidence_deviation(rho, first: SubsystemEvent, second: SubsystemEvent) -> float:
    """``first`` acts on the object side, ``second`` is the event that occurs first in time.

    Coincidence probability ``tr(rho P1 P2)`` against the succession
    probability ``tr(rho P2) * tr(P1 rho1')`` with ``rho1'`` the Lüders state.
    """
    e1 = embed(first, rho.structure)
    e2 = embed(second, rho.structure)
    coincidence = np.trace(rho.matrix @ e1 @ e2)
    after = collapsed_object_state(rho, second, first.subsystem)
    succession = event_probability(rho, second) * np.trace(first.projector @ after.matrix)
    return float(abs(coincidence - succession))


def check_succession_vs_coincidence(trials, dims_pool=None, seed=0, tol=EPS_CMP, workers=1) -> CheckReport:
    pool = _structures(dims_pool)

    def trial(rng):
        structure = _pick(rng, pool)
        rho = random_mixed_state(structure, rng)
        obj, subj = _two_subsystems(rng, structure)
        p1 = random_event(obj, structure.dims[obj], rng)
        p2 = _positive_event(rho, subj, rng)
        return succession_coincidence_deviation(rho, p1, p2)

    return _run("succession_vs_coincidence", trial, trials, seed, tol, workers)


# -- distinguishability -------------------------------------------------------


def _correlation_norm(rho12: DensityOperator) -> float:
    rho1 = partial_trace(rho12, [0]).matrix
    rho2 = partial_trace(rho12, [1]).matrix
    return max_deviation(rho12.matrix, np.kron(rho1, rho2))


def distinguishability_report(psi: StateVector, phi) -> DistinguishabilityReport:
    """Subject-subsystem state and object/subject correlations in both descriptions.

    Without collapse the composite state is untouched; with collapse of the
    elementary event ``|phi><phi|`` on subsystem 1 the subject becomes pure
    and uncorrelated with the object.
    """
    if psi.structure.n_subsystems != 2:
        raise ValueError("distinguishability_report needs a bipartite state")
    event = SubsystemEvent.ray(1, phi)
    rs_composite = psi.density()
    collapsed = collapse_pure(psi, event).post_state.density()
    rs_subject = partial_trace(rs_composite, [1])
    c_subject = partial_trace(collapsed, [1])
    return DistinguishabilityReport(
        rsqm_subject_state=rs_subject,
        cqm_subject_state=c_subject,
        rsqm_purity=rs_subject.purity,
        cqm_purity=c_subject.purity,
        correlation_norm_rsqm=_correlation_norm(rs_composite),
        correlation_norm_cqm=_correlation_norm(collapsed),
    )


def distinguishability_deviation(psi: StateVector, phi) -> float:
    """Deviation of a report from its closed-form expectations.

    The subject purity without collapse is checked against the Schmidt
    coefficients (``sum s**4``), which needs no partial trace.
    """
    rep = distinguishability_report(psi, phi)
    phi = np.asarray(phi, dtype=complex)
    phi = phi / np.linalg.norm(phi)
    s = np.linalg.svd(psi.amplitudes.reshape(psi.structure.dims), compute_uv=False)
    return max(
        abs(rep.cqm_purity - 1.0),
        rep.correlation_norm_cqm,
        abs(rep.rsqm_purity - float(np.sum(s ** 4))),
        max_deviation(rep.cqm_subject_state, np.outer(phi, phi.conj())),
    )


def check_distinguishability(trials, dims_pool=None, seed=0, tol=EPS_CMP, workers=1) -> CheckReport:
    pool = _structures(dims_pool)

    def trial(rng):
        structure = _pick(rng, pool)
        psi = random_pure_state(structure, rng)
        subj = int(rng.integers(structure.n_subsystems))
        # group every other subsystem into a single object factor
        m = _bipartite_view(psi, subj)
        psi2 = StateVector(HilbertStructure(m.shape), m.reshape(-1))
        for _ in range(MAX_RESAMPLES):
            phi = random_unit_vector(m.shape[1], rng)
            if event_probability(psi2, SubsystemEvent.ray(1, phi)) > EPS_PROB:
                break
        return distinguishability_deviation(psi2, phi)

    return _run("distinguishability", trial, trials, seed, tol, workers)


ALL_CHECKS = (
    check_rs_equals_collapse,
    check_psp_vs_ptrace,
    check_basis_independence,
    check_succession_vs_coincidence,
    check_distinguishability,
)


def run_all_checks(trials, seed=0, dims_pool=None, tol=EPS_CMP, workers=1) -> list[CheckReport]:
    return [check(trials, dims_pool, seed, tol, workers) for check in ALL_CHECKS]
