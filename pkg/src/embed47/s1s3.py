"""Closed forms for N = S^1 x S^3.

Embeddings are parametrized by labels (a, l, b) in Z_12 x Z x Z, the label
standing for a # tau(l, b).  The set P_{l,b} of the twelve knotted versions
of tau(l, b) has 12 elements when l != 0 and 2 gcd(b, 6) elements when
l = 0; P_{l,b} = P_{l',b'} exactly when l = l' and b = b' mod 2l.

For l != 0 the finer question "a # tau(l,b) = a' # tau(l,b')?" depends on a
correction map psi_l : Z x Z_{2l} -> Z_12 whose values are not known in
closed form.  It is supplied as a PsiOracle table and never guessed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .classify import INDETERMINATE
from .errors import PsiTableError


@dataclass(frozen=True)
class TauLabel:
    a: int
    l: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "a", int(self.a) % 12)

    @classmethod
    def parse(cls, text: str) -> TauLabel:
        a, l, b = (int(x) for x in text.split(","))
        return cls(a, l, b)


def split_b(l: int, b: int) -> tuple[int, int]:
    """(k, r) with b = 2l*k + r and 0 <= r < |2l|."""
    m = abs(2 * l)
    r = b % m
    return (b - r) // (2 * l), r


@dataclass(frozen=True)
class PsiOracle:
    """Partial table (l, k, r) -> psi_l(k, r mod 2l) in Z_12, with provenance."""

    entries: dict = field(default_factory=dict)

    def lookup(self, l: int, k: int, r: int) -> int | None:
        hit = self.entries.get((l, k, r % abs(2 * l)))
        return None if hit is None else hit[0]

    def source(self, l: int, k: int, r: int) -> str | None:
        hit = self.entries.get((l, k, r % abs(2 * l)))
        return None if hit is None else hit[1]

    @classmethod
    def from_dict(cls, doc) -> PsiOracle:
        """Parse ``{"entries": [{"l":..,"k":..,"r":..,"value":..,"source":..}, ...]}``."""
        try:
            rows = doc["entries"]
            entries = {}
            for row in rows:
                l, k, r = int(row["l"]), int(row["k"]), int(row["r"])
                if l == 0:
                    raise ValueError("psi_l is only defined for l != 0")
                if not 0 <= r < abs(2 * l):
                    raise ValueError(f"r = {r} is not a residue mod {2 * l}")
                key = (l, k, r)
                value = int(row["value"]) % 12
                if key in entries and entries[key][0] != value:
                    raise ValueError(f"conflicting entries for {key}")
                entries[key] = (value, str(row.get("source", "unspecified")))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise PsiTableError(f"malformed psi table: {exc}") from exc
        return cls(entries)

    @classmethod
    def load(cls, path: str | Path) -> PsiOracle:
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise PsiTableError(f"cannot read psi table {path}: {exc}") from exc
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return {"entries": [{"l": l, "k": k, "r": r, "value": v, "source": s}
                            for (l, k, r), (v, s) in sorted(self.entries.items())]}


def p_size(l: int, b: int) -> int:
    return 12 if l != 0 else 2 * math.gcd(b, 6)


def p_equal(l: int, b: int, l_prime: int, b_prime: int) -> bool:
    if l != l_prime:
        return False
    if l == 0:
        return b == b_prime
    return (b - b_prime) % (2 * l) == 0


def tau_equiv(x: TauLabel, x_prime: TauLabel, psi: PsiOracle | None = None):
    """Whether x and x' label isotopic embeddings; INDETERMINATE if psi is missing."""
    if not p_equal(x.l, x.b, x_prime.l, x_prime.b):
        return False
    if x.l == 0:
        return (x.a - x_prime.a) % (2 * math.gcd(x.b, 6)) == 0
    k, r = split_b(x.l, x.b)
    k_prime, _ = split_b(x.l, x_prime.b)
    if k == k_prime:
        # both psi terms are the same entry and cancel
        return (x.a - x_prime.a) % 12 == 0
    psi = psi or PsiOracle()
    v, v_prime = psi.lookup(x.l, k, r), psi.lookup(x.l, k_prime, r)
    if v is None or v_prime is None:
        return INDETERMINATE
    return (x.a - x_prime.a - (v - v_prime)) % 12 == 0


@dataclass(frozen=True)
class OrbitRow:
    l: int
    b: int
    p_size: int
    inertia: int

    def to_dict(self) -> dict:
        return {"l": self.l, "b": self.b, "p_size": self.p_size, "inertia": self.inertia}


def orbit_table(l_range, b_range) -> list[OrbitRow]:
    rows = []
    for l in l_range:
        for b in b_range:
            n = p_size(l, b)
            rows.append(OrbitRow(l, b, n, 12 // n))
    return rows
