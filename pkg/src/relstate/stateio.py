"""Line-oriented text format for states and projectors.

::

    dims 2 2
    amp 0 0.70710678118654746 0
    amp 3 0.70710678118654746 0

Density operators and projectors use ``rho <row> <col> <re> <im>`` records
instead of ``amp``. Omitted entries are zero; blank lines and ``#`` comments
are ignored. Numbers are written with 17 significant digits so that a
write/read round trip is exact.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np

from .errors import ParseError
from .tensor_core import DensityOperator, HilbertStructure, StateVector, SubsystemEvent


def format_number(x: float) -> str:
    return format(float(x), ".17g")


def format_state(state: Union[StateVector, DensityOperator]) -> str:
    lines = ["dims " + " ".join(str(d) for d in state.structure.dims)]
    if isinstance(state, StateVector):
        for i, a in enumerate(state.amplitudes):
            if a != 0:
                lines.append(f"amp {i} {format_number(a.real)} {format_number(a.imag)}")
    else:
        rows, cols = np.nonzero(state.matrix)
        for r, c in zip(rows, cols):
            a = state.matrix[r, c]
            lines.append(f"rho {r} {c} {format_number(a.real)} {format_number(a.imag)}")
    return "\n".join(lines) + "\n"


def parse_state(text: str) -> Union[StateVector, DensityOperator]:
    """Parse the text format; the result is not validated."""
    structure = None
    amps = rho = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        tag = fields[0]
        try:
            if tag == "dims":
                if structure is not None:
                    raise ParseError(f"line {lineno}: duplicate dims record")
                structure = HilbertStructure(tuple(int(f) for f in fields[1:]))
                continue
            if structure is None:
                raise ParseError(f"line {lineno}: record before the dims line")
            n = structure.total_dim
            if tag == "amp" and len(fields) == 4:
                if rho is not None:
                    raise ParseError(f"line {lineno}: amp record in a density-operator file")
                if amps is None:
                    amps = np.zeros(n, dtype=complex)
                i = int(fields[1])
                if not 0 <= i < n:
                    raise ParseError(f"line {lineno}: index {i} out of range")
                amps[i] = complex(float(fields[2]), float(fields[3]))
            elif tag == "rho" and len(fields) == 5:
                if amps is not None:
                    raise ParseError(f"line {lineno}: rho record in a state-vector file")
                if rho is None:
                    rho = np.zeros((n, n), dtype=complex)
                r, c = int(fields[1]), int(fields[2])
                if not (0 <= r < n and 0 <= c < n):
                    raise ParseError(f"line {lineno}: index ({r}, {c}) out of range")
                rho[r, c] = complex(float(fields[3]), float(fields[4]))
            else:
                raise ParseError(f"line {lineno}: malformed record {line!r}")
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    if structure is None:
        raise ParseError("missing dims line")
    if rho is not None:
        return DensityOperator(structure, rho)
    if amps is None:
        raise ParseError("no amp or rho records")
    return StateVector(structure, amps)


def read_state(path) -> Union[StateVector, DensityOperator]:
    return parse_state(Path(path).read_text(encoding="utf-8"))


def write_state(path, state) -> None:
    Path(path).write_text(format_state(state), encoding="utf-8")


def format_projector(projector) -> str:
    q = np.asarray(projector, dtype=complex)
    return format_state(DensityOperator(HilbertStructure((q.shape[0],)), q))


def parse_event(text: str, subsystem: int) -> SubsystemEvent:
    """Parse a projector written with ``rho`` records and validate it."""
    parsed = parse_state(text)
    if not isinstance(parsed, DensityOperator) or parsed.structure.n_subsystems != 1:
        raise ParseError("a projector file needs a single dims entry and rho records")
    return SubsystemEvent(subsystem, parsed.matrix).validate()


def read_event(path, subsystem: int) -> SubsystemEvent:
    return parse_event(Path(path).read_text(encoding="utf-8"), subsystem)
