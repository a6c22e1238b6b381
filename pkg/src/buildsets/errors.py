"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class carries the code it
should produce.
"""

from __future__ import annotations


class BuildSetsError(Exception):
    exit_code = 1

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


class ParseError(BuildSetsError):
    exit_code = 1


class ValidationError(BuildSetsError):
    """Input does not satisfy the axioms of the structure it claims to be."""

    exit_code = 2


class AxiomViolation(ValidationError):
    def __init__(self, axiom: str, witness: dict):
        super().__init__(f"{axiom} fails: {witness}", witness)
        self.axiom = axiom


class NotMeetSemilattice(ValidationError):
    pass


class NotIntersectionClosed(ValidationError):
    pass


class CoverAxiomViolation(ValidationError):
    pass


class NotInjective(ValidationError):
    pass


class NotOrderEmbedding(ValidationError):
    pass


class NotMeetPreserving(ValidationError):
    pass


class NotLinearExtension(ValidationError):
    pass


class TopFlatMissing(ValidationError):
    pass


class AmbientMismatch(ValidationError):
    pass


class SizeLimit(BuildSetsError):
    exit_code = 3


class InvariantBreach(BuildSetsError):
    """A proved statement failed on a concrete input. Always a library bug."""

    exit_code = 4


class InternalInconsistency(InvariantBreach):
    pass
