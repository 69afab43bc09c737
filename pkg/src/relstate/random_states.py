"""Random states, unitaries and projectors for the property oracles.

All generators take an explicit ``numpy.random.Generator``.
"""

import numpy as np

from .tensor_core import DensityOperator, HilbertStructure, StateVector, SubsystemEvent


def random_unit_vector(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_pure_state(structure, rng):
    """Haar-uniform pure state (normalized complex Gaussian vector)."""
    structure = structure if isinstance(structure, HilbertStructure) else HilbertStructure(structure)
    return StateVector(structure, random_unit_vector(structure.total_dim, rng))


def random_mixed_state(structure, rng, n_components=None):
    """Convex mixture of 2-4 Haar pure states with uniform simplex weights."""
    structure = structure if isinstance(structure, HilbertStructure) else HilbertStructure(structure)
    if n_components is None:
        n_components = int(rng.integers(2, 5))
    weights = rng.dirichlet(np.ones(n_components))
    rho = np.zeros((structure.total_dim,) * 2, dtype=complex)
    for w in weights:
        v = random_unit_vector(structure.total_dim, rng)
        rho += w * np.outer(v, v.conj())
    return DensityOperator(structure, rho)


def random_unitary(d, rng):
    """Haar unitary via QR with the phase of R's diagonal divided out."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_projector(d, rng, rank=None):
    """Projector onto the span of ``rank`` Haar-random orthonormal vectors.

    ``rank`` defaults to a uniform draw from 1..d-1.
    """
    if rank is None:
        rank = int(rng.integers(1, d))
    u = random_unitary(d, rng)[:, :rank]
    return u @ u.conj().T


def random_event(subsystem, d, rng, rank=None):
    return SubsystemEvent(subsystem, random_projector(d, rng, rank))
