from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple


class Failure(NamedTuple):
    law: str
    witness: tuple[str, ...]
    lhs: str | None = None
    rhs: str | None = None

    def describe(self) -> str:
        text = f"{self.law}: witness ({', '.join(self.witness)})"
        if self.lhs is not None or self.rhs is not None:
            text += f": {self.lhs} != {self.rhs}"
        return text

    def to_dict(self) -> dict:
        return {"witness": list(self.witness), "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class LawReport:
    """Outcome of checking a list of named laws.

    ``laws`` maps every checked law (in checking order) to its failures; an
    empty list means the law holds. Unless a check was run exhaustively only
    the first witness, in lexicographic index order, is kept.
    """

    laws: dict[str, list[Failure]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.laws.values())

    @property
    def failures(self) -> list[Failure]:
        return [f for fs in self.laws.values() for f in fs]

    @property
    def failed_laws(self) -> list[str]:
        return [law for law, fs in self.laws.items() if fs]

    def first(self, law: str) -> Failure | None:
        fs = self.laws.get(law)
        return fs[0] if fs else None

    def add(self, law: str, failure: Failure | None = None) -> None:
        bucket = self.laws.setdefault(law, [])
        if failure is not None:
            bucket.append(failure)

    def merge(self, other: LawReport) -> LawReport:
        for law, fs in other.laws.items():
            self.laws.setdefault(law, []).extend(fs)
        return self

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "laws": {
                law: ("ok" if not fs else [f.to_dict() for f in fs])
                for law, fs in self.laws.items()
            },
        }

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f.describe() for f in self.failures)


# Names used by the individual checkers; all share one structure.
ValidationReport = LawReport
SbpReport = LawReport
PaReport = LawReport
