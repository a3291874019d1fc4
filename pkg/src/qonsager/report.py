"""Uniform pass/fail bookkeeping for every certification suite.

A CheckReport is an ordered list of (name, indices, ok, witness) entries;
verifiers append one entry per relation instance, so a failing run pinpoints
exactly which identity at which indices broke, with a printable witness.
Reports nest (extend) and serialize deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

__all__ = ["CheckEntry", "CheckReport"]


@dataclass
class CheckEntry:
    name: str
    indices: tuple
    ok: bool
    witness: str | None = None

    def to_dict(self):
        out = {
            "name": self.name,
            "indices": list(self.indices),
            "ok": self.ok,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class CheckReport:
    title: str
    entries: list = dc_field(default_factory=list)

    def add(self, name, indices=(), ok=True, witness=None):
        self.entries.append(CheckEntry(name, tuple(indices), bool(ok), witness))
        return ok

    def extend(self, other: "CheckReport"):
        self.entries.extend(other.entries)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not e.ok]

    def first_failure(self):
        for e in self.entries:
            if not e.ok:
                return e
        return None

    def summary(self) -> str:
        bad = self.failures()
        head = f"{self.title}: {len(self.entries) - len(bad)}/{len(self.entries)} checks passed"
        if not bad:
            return head
        lines = [head]
        for e in bad[:10]:
            w = f" [{e.witness}]" if e.witness else ""
            lines.append(f"  FAIL {e.name}{e.indices}{w}")
        if len(bad) > 10:
            lines.append(f"  ... and {len(bad) - 10} more failures")
        return "\n".join(lines)

    def to_dict(self):
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": len(self.entries),
            "entries": [e.to_dict() for e in self.entries],
        }
