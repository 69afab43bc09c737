"""Dense linear algebra over explicitly structured multipartite spaces.

Index convention: subsystem 0 is the most significant factor, so the flat
index of a multi-index ``(i_0, ..., i_{N-1})`` is ``sum_k i_k * prod_{j>k} d_j``
(row-major, the numpy C order). All value types are immutable: their arrays
are copied on construction and flagged read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    DegenerateTrace,
    InvalidState,
    NonUnitary,
    StructureMismatch,
)
from .tolerances import EPS_HERM, EPS_IDEM, EPS_NORM, EPS_PSD, EPS_UNIT


def _frozen(array, dtype=complex, ndim=None):
    arr = np.array(array, dtype=dtype, copy=True)
    if ndim is not None and arr.ndim != ndim:
        raise StructureMismatch(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class HilbertStructure:
    """Ordered subsystem dimensions of a tensor-product space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise StructureMismatch("a Hilbert structure needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise StructureMismatch(f"every subsystem dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def flatten(self, multi_index: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(multi_index), self.dims))

    def unflatten(self, flat_index: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(flat_index, self.dims))

    def check_index(self, subsystem: int) -> int:
        if not 0 <= subsystem < len(self.dims):
            raise StructureMismatch(
                f"subsystem index {subsystem} out of range for dims {self.dims}"
            )
        return int(subsystem)

    def sub(self, indices: Iterable[int]) -> "HilbertStructure":
        """Structure of the listed subsystems, kept in their original order."""
        return HilbertStructure(tuple(self.dims[i] for i in sorted(indices)))


def _as_structure(dims) -> HilbertStructure:
    if isinstance(dims, HilbertStructure):
        return dims
    if isinstance(dims, (int, np.integer)):
        return HilbertStructure((int(dims),))
    return HilbertStructure(tuple(dims))


@dataclass(frozen=True, eq=False)
class RawVector:
    """Amplitude vector with no normalization requirement."""

    structure: HilbertStructure
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "structure", _as_structure(self.structure))
        amps = _frozen(self.amplitudes, ndim=1)
        if amps.shape[0] != self.structure.total_dim:
            raise StructureMismatch(
                f"{amps.shape[0]} amplitudes do not fit dims {self.structure.dims}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def validate(self):
        return self

    def normalized(self) -> "StateVector":
        n = self.norm
        if n == 0.0:
            raise InvalidState("cannot normalize the zero vector")
        return StateVector(self.structure, self.amplitudes / n)


@dataclass(frozen=True, eq=False)
class StateVector(RawVector):
    """Normalized pure state over a :class:`HilbertStructure`.

    Construction does not check the norm; call :meth:`validate` for that.
    """

    def validate(self, tol: float = EPS_NORM) -> "StateVector":
        if not np.all(np.isfinite(self.amplitudes)):
            raise InvalidState("state has non-finite amplitudes")
        if abs(self.norm - 1.0) > tol:
            raise InvalidState(f"state norm {self.norm!r} differs from 1")
        return self

    def density(self) -> "DensityOperator":
        return DensityOperator(self.structure, np.outer(self.amplitudes, self.amplitudes.conj()))

    @classmethod
    def basis(cls, dims, index) -> "StateVector":
        """Computational basis state; ``index`` is flat or a multi-index."""
        structure = _as_structure(dims)
        if not isinstance(index, (int, np.integer)):
            index = structure.flatten(index)
        amps = np.zeros(structure.total_dim, dtype=complex)
        amps[index] = 1.0
        return cls(structure, amps)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Density matrix over a :class:`HilbertStructure`."""

    structure: HilbertStructure
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "structure", _as_structure(self.structure))
        mat = _frozen(self.matrix, ndim=2)
        n = self.structure.total_dim
        if mat.shape != (n, n):
            raise StructureMismatch(f"matrix shape {mat.shape} does not fit dims {self.structure.dims}")
        object.__setattr__(self, "matrix", mat)

    def validate(self, tol: float = EPS_NORM) -> "DensityOperator":
        m = self.matrix
        if not np.all(np.isfinite(m)):
            raise InvalidState("density matrix has non-finite entries")
        if np.max(np.abs(m - m.conj().T)) > max(tol, EPS_HERM):
            raise InvalidState("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > tol:
            raise InvalidState(f"density matrix trace {np.trace(m).real!r} differs from 1")
        if np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)) < -EPS_PSD:
            raise InvalidState("density matrix has a negative eigenvalue")
        return self

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


AnyState = Union[StateVector, DensityOperator]


def as_density(state: AnyState) -> DensityOperator:
    if isinstance(state, DensityOperator):
        return state
    if isinstance(state, StateVector):
        return DensityOperator(
            state.structure, np.outer(state.amplitudes, state.amplitudes.conj())
        )
    raise TypeError(f"expected a state, got {type(state).__name__}")


def is_hermitian(m: np.ndarray, tol: float = EPS_HERM) -> bool:
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def is_unitary(u: np.ndarray, tol: float = EPS_UNIT) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


@dataclass(frozen=True, eq=False)
class SubsystemEvent:
    """A projector bound to one subsystem (0-based index).

    This pair is the whole of what the relative-state side calls the subject
    entity: a choice of subsystem plus an event on it.
    """

    subsystem: int
    projector: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "subsystem", int(self.subsystem))
        q = _frozen(self.projector, ndim=2)
        if q.shape[0] != q.shape[1]:
            raise StructureMismatch(f"projector must be square, got shape {q.shape}")
        object.__setattr__(self, "projector", q)

    @property
    def dim(self) -> int:
        return self.projector.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.projector).real))

    def validate(self, tol: float = EPS_IDEM) -> "SubsystemEvent":
        q = self.projector
        if not is_hermitian(q, max(tol, EPS_HERM)):
            raise InvalidState("projector is not Hermitian")
        if np.max(np.abs(q @ q - q)) > tol:
            raise InvalidState("projector is not idempotent")
        return self

    def complement(self) -> "SubsystemEvent":
        """The opposite event ``I - Q``."""
        return SubsystemEvent(self.subsystem, np.eye(self.dim) - self.projector)

    @classmethod
    def ray(cls, subsystem: int, vector) -> "SubsystemEvent":
        """Elementary event ``|v><v|`` for a (normalized) vector."""
        v = np.asarray(vector, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(subsystem, np.outer(v, v.conj()))

    @classmethod
    def identity(cls, subsystem: int, dim: int) -> "SubsystemEvent":
        return cls(subsystem, np.eye(dim))


def tensor_product(a: RawVector, b: RawVector) -> RawVector:
    """Kronecker product; the result is a StateVector when both inputs are."""
    structure = HilbertStructure(a.structure.dims + b.structure.dims)
    amps = np.kron(a.amplitudes, b.amplitudes)
    cls = StateVector if isinstance(a, StateVector) and isinstance(b, StateVector) else RawVector
    return cls(structure, amps)


def _check_keep(structure: HilbertStructure, keep) -> list[int]:
    keep = sorted({structure.check_index(int(k)) for k in keep})
    if not keep or len(keep) == structure.n_subsystems:
        raise DegenerateTrace(
            f"keep={keep} must be a non-empty proper subset of {structure.n_subsystems} subsystems"
        )
    return keep


def partial_trace(state: AnyState, keep: Iterable[int]) -> DensityOperator:
    """Reduced density operator on the subsystems in ``keep``.

    Kept subsystems stay in their original relative order. ``state`` may be
    a pure state, in which case it is contracted directly without forming
    the full outer product.
    """
    structure = state.structure
    keep = _check_keep(structure, keep)
    n = structure.n_subsystems
    dims = structure.dims
    traced = [k for k in range(n) if k not in keep]
    dk = int(np.prod([dims[k] for k in keep]))

    if isinstance(state, RawVector):
        psi = np.moveaxis(state.amplitudes.reshape(dims), keep, range(len(keep)))
        psi = psi.reshape(dk, -1)
        return DensityOperator(structure.sub(keep), psi @ psi.conj().T)

    t = state.matrix.reshape(dims + dims)
    # row axes 0..n-1, column axes n..2n-1; traced column axes reuse row labels
    col_labels = [k if k in traced else n + k for k in range(n)]
    out = list(keep) + [n + k for k in keep]
    reduced = np.einsum(t, list(range(n)) + col_labels, out)
    return DensityOperator(structure.sub(keep), reduced.reshape(dk, dk))


def partial_scalar_product(phi: RawVector, psi: RawVector, subsystem: int) -> RawVector:
    """Contract the bra ``<phi|`` into factor ``subsystem`` of ``psi``.

    Returns the un-normalized vector over the remaining subsystems with
    amplitudes ``sum_l conj(phi_l) psi[..., l, ...]``.
    """
    structure = psi.structure
    subsystem = structure.check_index(subsystem)
    if structure.n_subsystems < 2:
        raise StructureMismatch("partial scalar product needs at least two subsystems")
    phi_amps = phi.amplitudes if isinstance(phi, RawVector) else np.asarray(phi, dtype=complex)
    if phi_amps.shape != (structure.dims[subsystem],):
        raise StructureMismatch(
            f"bra of dimension {phi_amps.shape[0]} does not match subsystem {subsystem} "
            f"of dims {structure.dims}"
        )
    t = psi.amplitudes.reshape(structure.dims)
    result = np.tensordot(phi_amps.conj(), t, axes=([0], [subsystem]))
    rest = [k for k in range(structure.n_subsystems) if k != subsystem]
    return RawVector(structure.sub(rest), result.reshape(-1))


def expansion_coefficients(phi, psi_matrix, object_basis, subject_basis) -> np.ndarray:
    """Coefficients of ``<phi|Psi>`` in a chosen pair of orthonormal bases.

    ``psi_matrix`` holds the composite amplitudes with rows indexing the
    object factor and columns the subject factor; basis vectors are the
    columns of ``object_basis`` and ``subject_basis``. Entry ``k`` is
    ``sum_l <phi|l> (<k|<l|Psi>)``; the vector itself is
    ``object_basis @ coefficients``.
    """
    phi = np.asarray(phi, dtype=complex)
    overlaps = subject_basis.T @ phi.conj()  # <phi|l>
    components = object_basis.conj().T @ psi_matrix @ subject_basis.conj()  # <k|<l|Psi>
    return components @ overlaps


def embed(event: SubsystemEvent, structure: HilbertStructure) -> np.ndarray:
    """Full-space matrix of ``I x ... x Q x ... x I``."""
    structure = _as_structure(structure)
    k = structure.check_index(event.subsystem)
    if event.dim != structure.dims[k]:
        raise StructureMismatch(
            f"projector of dimension {event.dim} does not fit subsystem {k} of dims {structure.dims}"
        )
    before = int(np.prod(structure.dims[:k]))
    after = int(np.prod(structure.dims[k + 1:]))
    return np.kron(np.kron(np.eye(before), event.projector), np.eye(after))


def apply_subsystem_unitary(state: StateVector, u, subsystem: int) -> StateVector:
    u = np.asarray(u, dtype=complex)
    structure = state.structure
    k = structure.check_index(subsystem)
    if u.shape != (structure.dims[k], structure.dims[k]):
        raise StructureMismatch(
            f"unitary of shape {u.shape} does not fit subsystem {k} of dims {structure.dims}"
        )
    if not is_unitary(u):
        raise NonUnitary("matrix is not unitary within tolerance")
    t = state.amplitudes.reshape(structure.dims)
    t = np.moveaxis(np.tensordot(u, t, axes=([1], [k])), 0, k)
    return type(state)(structure, t.reshape(-1))


def canonical_phase(amplitudes) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude amplitude is real positive."""
    a = np.asarray(amplitudes, dtype=complex)
    i = int(np.argmax(np.abs(a)))
    if a[i] == 0:
        return a.copy()
    return a * (abs(a[i]) / a[i])


def max_deviation(a, b) -> float:
    """Absolute element-wise max difference of two arrays or value objects."""
    a = getattr(a, "matrix", getattr(a, "amplitudes", a))
    b = getattr(b, "matrix", getattr(b, "amplitudes", b))
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))
