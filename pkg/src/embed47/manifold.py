"""Homological input data of a closed orientable 4-manifold N.

N is described only through free homology: rank H_1 (= rank H_3), the
intersection form Q on H_2, the Poincare dual of w_2 as a mod-2 vector, and
the signature.  The class set H2^DIFF = {u : u = w_2* mod 2, u.u = sigma}
collects the possible values of the Boechat-Haefliger invariant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, ValidationError
from .zmodule import IntMatrix, dot


@dataclass(frozen=True)
class ManifoldData:
    name: str
    h1_rank: int
    h2_rank: int
    Q: IntMatrix
    w2_dual: tuple[int, ...]
    signature: int

    @property
    def h3_rank(self) -> int:
        return self.h1_rank

    @property
    def is_spin(self) -> bool:
        return not any(self.w2_dual)

    @classmethod
    def from_dict(cls, doc: dict) -> ManifoldData:
        """Build from the JSON manifold format (row-major intersection form)."""
        try:
            h2 = int(doc["h2_rank"])
            flat = [int(x) for x in doc.get("intersection_form", [])]
            return cls(
                name=str(doc.get("name", "")),
                h1_rank=int(doc["h1_rank"]),
                h2_rank=h2,
                Q=IntMatrix(h2, h2, tuple(flat)),
                w2_dual=tuple(int(x) for x in doc.get("w2_dual", [])),
                signature=int(doc["signature"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed manifold spec: {exc!r}", code="MALFORMED") from exc

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "h1_rank": self.h1_rank,
            "h2_rank": self.h2_rank,
            "intersection_form": list(self.Q.entries),
            "w2_dual": list(self.w2_dual),
            "signature": self.signature,
        }


def signature_of(Q: IntMatrix) -> int:
    """Signature of a symmetric integer matrix, by exact diagonalization over Q."""
    M = [[Fraction(x) for x in row] for row in Q.to_rows()]
    sig = 0
    while M:
        n = len(M)
        piv = next((i for i in range(n) if M[i][i] != 0), None)
        if piv is None:
            off = next(((i, j) for i in range(n) for j in range(i + 1, n) if M[i][j] != 0), None)
            if off is None:
                break
            i, j = off
            # congruence x_i -> x_i + x_j makes the (i, i) entry 2 M[i][j] != 0
            for k in range(n):
                M[i][k] += M[j][k]
            for k in range(n):
                M[k][i] += M[k][j]
            piv = i
        p = M[piv][piv]
        sig += 1 if p > 0 else -1
        for i in range(n):
            if i != piv and M[i][piv] != 0:
                f = M[i][piv] / p
                for k in range(n):
                    M[i][k] -= f * M[piv][k]
        M = [[M[i][k] for k in range(n) if k != piv] for i in range(n) if i != piv]
    return sig


def validate(data: ManifoldData) -> ManifoldData:
    if data.h1_rank < 0 or data.h2_rank < 0:
        raise ValidationError("negative Betti number", code="MALFORMED")
    Q = data.Q
    if Q.shape != (data.h2_rank, data.h2_rank):
        raise DimensionError(f"intersection form is {Q.shape}, expected {data.h2_rank}x{data.h2_rank}")
    if len(data.w2_dual) != data.h2_rank:
        raise DimensionError("w2_dual has the wrong length")
    if any(w not in (0, 1) for w in data.w2_dual):
        raise ValidationError("w2_dual must be a 0/1 vector", code="MALFORMED")
    if not Q.is_symmetric():
        raise ValidationError("intersection form is not symmetric", code="SYMMETRY")
    if abs(Q.det()) != 1:
        raise ValidationError(f"det Q = {Q.det()}", code="UNIMODULAR")
    sig = signature_of(Q)
    if sig != data.signature:
        raise ValidationError(f"declared signature {data.signature}, form has {sig}",
                              code="SIGNATURE_MISMATCH")
    # x.x = w.x mod 2 for all x reduces to diag(Q) = Q w mod 2
    Qw = Q @ data.w2_dual
    if any((Q[i, i] - Qw[i]) % 2 for i in range(data.h2_rank)):
        raise ValidationError("w2_dual is not characteristic for Q", code="NOT_CHARACTERISTIC")
    return data


@dataclass(frozen=True)
class H2Class:
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))

    @property
    def div(self) -> int:
        return math.gcd(*self.coords) if self.coords else 0

    def is_zero(self) -> bool:
        return not any(self.coords)


def h2diff_contains(data: ManifoldData, u: H2Class | Sequence[int]) -> bool:
    coords = u.coords if isinstance(u, H2Class) else tuple(u)
    if len(coords) != data.h2_rank:
        raise DimensionError(f"u has {len(coords)} coordinates, H_2 has rank {data.h2_rank}")
    if any(x % 2 != w for x, w in zip(coords, data.w2_dual)):
        return False
    return dot(coords, data.Q @ coords) == data.signature


def h2diff_enumerate(data: ManifoldData, coeff_bound: int) -> list[H2Class]:
    """Members of H2^DIFF with all coordinates in [-bound, bound], lexicographic."""
    box = range(-coeff_bound, coeff_bound + 1)
    return [H2Class(u) for u in itertools.product(box, repeat=data.h2_rank)
            if h2diff_contains(data, u)]
