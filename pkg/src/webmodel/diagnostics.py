"""Validation findings reported against model elements."""

from __future__ import annotations

from dataclasses import dataclass

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"
SEVERITY_INFO = "info"
SEVERITIES = (SEVERITY_ERROR, SEVERITY_WARNING, SEVERITY_INFO)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    element_id: str
    message: str
    validator_id: str

    def to_wire(self) -> dict:
        # key order is part of the wire contract
        return {
            "severity": self.severity,
            "elementId": self.element_id,
            "message": self.message,
            "validatorId": self.validator_id,
        }
