"""Exception hierarchy; each error carries a short machine-readable code."""

from __future__ import annotations


class SignalKgError(Exception):
    """Base for all package errors."""

    code = "error"


class ParseError(SignalKgError):
    """Syntax error in a knowledge-base document."""

    code = "syntax"

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class InvalidKnowledgeBase(SignalKgError):
    """Knowledge base has error-level diagnostics and cannot be compiled."""

    code = "invalid-kb"


class UnknownNode(SignalKgError):
    """A referenced node id does not exist in the network."""

    code = "unknown-node"


class UnknownEvidence(SignalKgError):
    """Observation references an unknown sensor or signal class."""

    code = "unknown-evidence"


class ConflictingEvidence(SignalKgError):
    """Two observations assert different results for one (sensor, class)."""

    code = "conflicting-evidence"


class RecompilationNeeded(SignalKgError):
    """Evidence references a detected node absent from the compiled network."""

    code = "recompilation-needed"


class ZeroWeightEvidence(SignalKgError):
    """Every sample received zero weight: evidence impossible under the model."""

    code = "zero-weight"


class ZeroProbabilityEvidence(SignalKgError):
    """Evidence has probability zero under exact enumeration."""

    code = "zero-probability-evidence"


class NetworkTooLarge(SignalKgError):
    """Exact enumeration refused: node count exceeds the guard."""

    code = "network-too-large"
