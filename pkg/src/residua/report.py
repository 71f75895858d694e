"""A small pass/fail record shared by the checking helpers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed,
                "details": {k: _plain(v) for k, v in self.details.items()}}


def _plain(v):
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_plain(x) for x in v]
    return str(v)
