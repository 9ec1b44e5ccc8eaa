from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    line: int | None = None
    col: int | None = None
    severity: str = "error"

    def __str__(self):
        where = f"{self.line}:{self.col}: " if self.line is not None else ""
        return f"{where}{self.severity}: [{self.code}] {self.message}"

    def to_dict(self) -> dict:
        return asdict(self)


def at(rule, code: str, message: str, severity: str = "error") -> Diagnostic:
    """Diagnostic positioned at ``rule.loc`` when the rule has one."""
    line, col = rule.loc if getattr(rule, "loc", None) else (None, None)
    return Diagnostic(code, message, line, col, severity)
