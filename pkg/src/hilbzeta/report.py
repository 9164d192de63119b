from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Verdict:
    """Outcome of an identity check.  ``data`` holds JSON-ready details."""

    name: str
    passed: bool
    message: str = ""
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def __str__(self):
        return f"{self.status} {self.name}" + (f": {self.message}" if self.message else "")

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "message": self.message, "data": self.data}
