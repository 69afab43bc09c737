"""Exception types raised by relstate.

Every error carries a short ``code`` string so that callers (the CLI in
particular) can map failures to stable names without parsing messages.
"""


class QStateError(ValueError):
    code = "qstate-error"


class StructureMismatch(QStateError):
    code = "structure-mismatch"


class DegenerateTrace(QStateError):
    code = "degenerate-trace"


class NonUnitary(QStateError):
    code = "non-unitary"


class InvalidState(QStateError):
    code = "invalid-state"


class ZeroProbabilityEvent(QStateError):
    code = "zero-probability-event"


class SubjectObjectOverlap(QStateError):
    code = "subject-object-overlap"


class NotAPartition(QStateError):
    code = "not-a-partition"


class DegenerateSlit(QStateError):
    code = "degenerate-slit"


class ParseError(QStateError):
    code = "parse-error"
