"""The mod-d pairing between coker(2L mod d) and ker(2L mod d).

Coordinates: H_1 and H_3 are both identified with Z^r through dual bases,
so the intersection pairing H_1 x H_3 -> Z is the dot product and the
adjoint of l is the matrix L.  The pairing of a cokernel class with a
kernel vector is the dot product of any representative with the vector,
reduced mod d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .errors import BudgetExceeded, DimensionError, MembershipError, ValidationError
from .zmodule import (
    FgAbelianGroup,
    GroupElement,
    IntMatrix,
    KernelLattice,
    cokernel_mod,
    dot,
    kernel_mod,
    reduce_mod,
)


@dataclass(frozen=True)
class PairingContext:
    L: IntMatrix
    d: int
    # check=False admits non-symmetric forms; only diagnostics should do that.
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not self.L.is_square():
            raise DimensionError(f"L must be square, got {self.L.shape}")
        if self.d < 0:
            raise ValueError("modulus must be nonnegative")
        if self.check and not self.is_symmetric:
            raise ValidationError(
                f"2L is not symmetric mod {self.d}: {self.L.to_rows()}", code="SYMMETRY_MOD_D")

    @property
    def rank(self) -> int:
        return self.L.rows

    @property
    def doubled(self) -> IntMatrix:
        return 2 * self.L

    @property
    def is_symmetric(self) -> bool:
        return self.doubled.is_symmetric(self.d)

    @cached_property
    def K(self) -> KernelLattice:
        return kernel_mod(self.doubled, self.d)

    @cached_property
    def C(self) -> FgAbelianGroup:
        return cokernel_mod(self.doubled, self.d)

    def in_kernel(self, y) -> bool:
        return all(reduce_mod(v, self.d) == 0 for v in self.doubled @ tuple(y))


def cap_d(ctx: PairingContext, c: GroupElement, y) -> int:
    """[c] cap_d y, a residue mod d (an integer when d = 0)."""
    if c.group != ctx.C:
        raise MembershipError("c is not an element of coker(2L mod d)")
    y = tuple(y)
    if len(y) != ctx.rank:
        raise DimensionError("y has the wrong length")
    if not ctx.in_kernel(y):
        raise MembershipError(f"{list(y)} is not in ker(2L mod {ctx.d})")
    return reduce_mod(dot(c.coords, y), ctx.d)


def check_cap_well_defined(ctx: PairingContext) -> bool:
    """im(2L mod d) pairs to zero with ker(2L mod d)."""
    twoL = ctx.doubled
    return all(reduce_mod(dot(twoL.col(i), y), ctx.d) == 0
               for i in range(ctx.rank) for y in ctx.K.vectors)


def _require_symmetric_mod(m: IntMatrix, d: int):
    if not m.is_symmetric(d):
        raise ValidationError(f"m is not symmetric mod {d}", code="SYMMETRY_MOD_D")


def unimzd_index(m: IntMatrix, d: int, c: GroupElement) -> int:
    """[Z_d : c(ker(m mod d))] by the closed formula.

    div c (divisibility modulo torsion in coker m) when d = 0, otherwise
    d / ord(c) with the order taken in coker(m mod d).
    """
    _require_symmetric_mod(m, d)
    if c.group != cokernel_mod(m, d):
        raise MembershipError("c is not an element of coker(m mod d)")
    if d == 0:
        return c.divisibility()
    return d // c.order()


BRUTE_MAX_RANK = 4
BRUTE_MAX_D = 24


def unimzd_brute(m: IntMatrix, d: int, c: GroupElement) -> int:
    """[Z_d : c(ker(m mod d))] by direct evaluation.

    For d > 0 every vector of (Z/d)^n is tried.  For d = 0 the subgroup
    c(ker m) of Z is generated by the values of c on a basis of ker m, so
    the answer is their gcd (0 when ker m = 0).
    """
    n = m.cols
    rep = c.coords
    if d == 0:
        return math.gcd(*(dot(rep, y) for y in kernel_mod(m, 0).vectors))
    if n > BRUTE_MAX_RANK or d > BRUTE_MAX_D:
        raise BudgetExceeded(f"enumeration of (Z/{d})^{n} is outside the brute-force bound")
    values = np.unique(kernel_residues(m, d) @ np.array(rep, dtype=np.int64) % d)
    # the values form a subgroup of Z_d (image of a subgroup)
    return d // len(values)


@lru_cache(maxsize=256)
def kernel_residues(m: IntMatrix, d: int) -> np.ndarray:
    """All v in (Z/d)^n with m v = 0 mod d, one per row."""
    n = m.cols
    grid = np.indices((d,) * n, dtype=np.int64).reshape(n, -1).T
    M = np.array(m.to_rows(), dtype=np.int64).reshape(m.rows, n)
    mask = np.all((grid @ M.T) % d == 0, axis=1)
    return grid[mask]
