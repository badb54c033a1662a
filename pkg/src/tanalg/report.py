"""Axiom reports shared by the verifiers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import AlgebraError, FiniteFunction

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, size: int, budget: int):
        super().__init__(f"{what} needs {size} > budget {budget}")
        self.size = int(size)


class VerificationError(AlgebraError):
    """A structural check failed while building an object; ``axiom`` names it."""

    def __init__(self, axiom: str, message: str, witness: Sequence[int] | None = None):
        super().__init__(message, witness)
        self.axiom = axiom


@dataclass
class AxiomEntry:
    id: str
    status: str
    witness: list[int] | None = None
    cost: int = 0
    detail: str = ""

    def to_dict(self) -> dict:
        d = {"id": self.id, "status": self.status, "witness": self.witness,
             "cost": int(self.cost)}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class AxiomReport:
    entries: list[AxiomEntry] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def add(self, entry: AxiomEntry) -> None:
        if any(e.id == entry.id for e in self.entries):
            raise ValueError(f"duplicate axiom id {entry.id}")
        self.entries.append(entry)
        self.entries.sort(key=lambda e: e.id)

    def __getitem__(self, axiom_id: str) -> AxiomEntry:
        for e in self.entries:
            if e.id == axiom_id:
                return e
        raise KeyError(axiom_id)

    @property
    def ids(self) -> list[str]:
        return [e.id for e in self.entries]

    @property
    def failures(self) -> list[AxiomEntry]:
        return [e for e in self.entries if e.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def status(self, axiom_id: str) -> str:
        return self[axiom_id].status

    def to_dict(self) -> dict:
        out: dict = {"axioms": [e.to_dict() for e in self.entries]}
        if self.notes:
            out["notes"] = self.notes
        return out


class Check:
    """Accumulates table comparisons for one registry entry; the first
    failure is kept with its witness."""

    def __init__(self):
        self.cost = 0
        self.witness: list[int] | None = None
        self.message = ""

    @property
    def failed(self) -> bool:
        return self.witness is not None

    def fail(self, message: str, witness: Sequence[int]) -> bool:
        if self.witness is None:
            self.witness = [int(w) for w in witness]
            self.message = message
        return False

    def equal(self, lhs: FiniteFunction | np.ndarray, rhs: FiniteFunction | np.ndarray,
              label: str) -> bool:
        a = lhs.values if isinstance(lhs, FiniteFunction) else np.asarray(lhs)
        b = rhs.values if isinstance(rhs, FiniteFunction) else np.asarray(rhs)
        if a.shape != b.shape:
            return self.fail(f"{label}: shapes {a.shape} and {b.shape} differ", [])
        self.cost += int(a.size)
        bad = np.argwhere(a != b)
        if bad.size:
            idx = bad[0].tolist()
            return self.fail(f"{label}: differs at {idx}", idx)
        return True

    def require(self, condition: bool, label: str, witness: Sequence[int] = ()) -> bool:
        self.cost += 1
        if not condition:
            return self.fail(label, witness)
        return True

    def bijective(self, f: FiniteFunction, label: str) -> bool:
        self.cost += f.domain_size
        if f.domain_size != f.codomain_size:
            return self.fail(f"{label}: {f.domain_size} elements onto {f.codomain_size}",
                             [f.domain_size, f.codomain_size])
        clash = f.first_collision()
        if clash is not None:
            return self.fail(f"{label}: not injective", list(clash))
        return True


def run_entry(axiom_id: str, body: Callable[[Check], None]) -> AxiomEntry:
    """Run one check; budget overruns become skips, construction errors
    become failures carrying their witness."""
    check = Check()
    try:
        body(check)
    except BudgetExceeded as exc:
        return AxiomEntry(axiom_id, SKIPPED, [exc.size], check.cost, str(exc))
    except AlgebraError as exc:
        check.fail(str(exc), exc.witness or [])
    if check.failed:
        return AxiomEntry(axiom_id, FAIL, check.witness, check.cost, check.message)
    return AxiomEntry(axiom_id, PASS, None, check.cost)
