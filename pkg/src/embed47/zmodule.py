"""Exact linear algebra over Z and Z/d.

Everything here works on Python ints, so intermediate entries of the Smith
normal form may grow without overflow.  ``d = 0`` is treated as "no
reduction": Z/0 = Z and a congruence mod 0 is an equality.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import DimensionError, InfiniteGroupError, MembershipError

INFINITE = math.inf

Vector = tuple[int, ...]


def gcd_hat(n: int) -> int:
    """gcd(n, 24); in particular ``gcd_hat(0) == 24``."""
    if n < 0:
        raise ValueError("gcd_hat expects a nonnegative integer")
    return math.gcd(n, 24)


def reduce_mod(x: int, d: int) -> int:
    return x % d if d else x


def dot(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y):
        raise DimensionError(f"cannot pair vectors of length {len(x)} and {len(y)}")
    return sum(a * b for a, b in zip(x, y))


@dataclass(frozen=True)
class IntMatrix:
    """Integer matrix stored row-major as a tuple of Python ints."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("negative matrix dimension")
        entries = tuple(int(x) for x in self.entries)
        if len(entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(entries)} entries for a {self.rows}x{self.cols} matrix")
        object.__setattr__(self, "entries", entries)

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        columns = [list(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise DimensionError("column of the wrong length")
        return cls(rows, len(columns),
                   tuple(columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = v
        return cls.from_rows(out, cols)

    # access

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return self.entries[j::self.cols] if self.cols else ()

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.cols)]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def select_columns(self, idx: Iterable[int]) -> IntMatrix:
        return IntMatrix.from_columns([self.col(j) for j in idx], self.rows)

    def select_rows(self, idx: Iterable[int]) -> IntMatrix:
        return IntMatrix.from_rows([self.row(i) for i in idx], self.cols)

    # arithmetic

    @property
    def T(self) -> IntMatrix:
        return IntMatrix.from_columns([self.row(i) for i in range(self.rows)], self.cols)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.columns()
            return IntMatrix.from_rows(
                [[dot(self.row(i), c) for c in ocols] for i in range(self.rows)],
                other.cols)
        v = tuple(other)
        if len(v) != self.cols:
            raise DimensionError(f"cannot apply a {self.shape} matrix to a vector of length {len(v)}")
        return tuple(dot(self.row(i), v) for i in range(self.rows))

    def _zip(self, other: IntMatrix, op) -> IntMatrix:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return IntMatrix(self.rows, self.cols,
                         tuple(op(a, b) for a, b in zip(self.entries, other.entries)))

    def __add__(self, other: IntMatrix) -> IntMatrix:
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __rmul__(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise DimensionError("hstack needs equal row counts")
        return IntMatrix.from_columns(self.columns() + other.columns(), self.rows)

    def mod(self, d: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(reduce_mod(a, d) for a in self.entries))

    def is_zero(self, d: int = 0) -> bool:
        return all(reduce_mod(a, d) == 0 for a in self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self, d: int = 0) -> bool:
        return self.is_square() and (self - self.T).is_zero(d)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        M = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if M[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
                if swap is None:
                    return 0
                M[k], M[swap] = M[swap], M[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            prev = M[k][k]
        return sign * M[n - 1][n - 1]

    def __repr__(self):
        return f"IntMatrix({self.to_rows()!r})" if self.rows else f"IntMatrix(0x{self.cols})"


def as_matrix(data, cols: int | None = None) -> IntMatrix:
    if isinstance(data, IntMatrix):
        return data
    return IntMatrix.from_rows(data, cols)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ source @ V == S`` with U, V unimodular and S in Smith form.

    The inverses of U and V are tracked alongside so callers never need to
    invert an integer matrix.
    """

    source: IntMatrix
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for s in self.diagonal if s)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.diagonal


def _eye(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms, by repeated gcd elimination.

    The diagonal is nonnegative, each entry divides the next, zeros last.
    """
    m, n = A.rows, A.cols
    S = A.to_rows()
    U, Ui, V, Vi = _eye(m), _eye(m), _eye(n), _eye(n)

    def swap_rows(i, j):
        if i != j:
            S[i], S[j] = S[j], S[i]
            U[i], U[j] = U[j], U[i]
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def add_row(i, j, k):
        # row_i += k * row_j
        S[i] = [a + k * b for a, b in zip(S[i], S[j])]
        U[i] = [a + k * b for a, b in zip(U[i], U[j])]
        for r in Ui:
            r[j] -= k * r[i]

    def negate_row(i):
        S[i] = [-a for a in S[i]]
        U[i] = [-a for a in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def swap_cols(i, j):
        if i != j:
            for r in S:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_col(i, j, k):
        # col_i += k * col_j
        for r in S:
            r[i] += k * r[j]
        for r in V:
            r[i] += k * r[j]
        Vi[j] = [a - k * b for a, b in zip(Vi[j], Vi[i])]

    def move_min(t, cells):
        i, j = min(cells, key=lambda ij: abs(S[ij[0]][ij[1]]))
        swap_rows(t, i)
        swap_cols(t, j)

    for t in range(min(m, n)):
        cells = [(i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not cells:
            break
        move_min(t, cells)
        while True:
            p = S[t][t]
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
            leftovers = [(i, t) for i in range(t + 1, m) if S[i][t]]
            leftovers += [(t, j) for j in range(t + 1, n) if S[t][j]]
            if leftovers:
                move_min(t, leftovers + [(t, t)])
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n)
                        if S[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            negate_row(t)

    def mat(rows, cols):
        return IntMatrix.from_rows(rows, cols)

    return SmithDecomposition(A, mat(U, m), mat(S, n), mat(V, n), mat(Ui, m), mat(Vi, n))


def solve_integer_system(B: IntMatrix, c: Sequence[int]) -> Vector | None:
    """An integer solution of ``B @ x == c``, or None if there is none."""
    c = tuple(c)
    if len(c) != B.rows:
        raise DimensionError("right-hand side has the wrong length")
    snf = smith_normal_form(B)
    rhs = snf.U @ c
    diag = snf.diagonal
    w = [0] * B.cols
    for i, r in enumerate(rhs):
        s = diag[i] if i < len(diag) else 0
        if s == 0:
            if r != 0:
                return None
        elif r % s:
            return None
        else:
            w[i] = r // s
    return snf.V @ w


# ---------------------------------------------------------------------------
# Lattices


@dataclass(frozen=True)
class KernelLattice:
    """A sublattice of Z^r given by a basis (the columns of ``basis``)."""

    ambient_rank: int
    basis: IntMatrix

    @property
    def rank(self) -> int:
        return self.basis.cols

    @property
    def vectors(self) -> list[Vector]:
        return self.basis.columns()

    def combination(self, coeffs: Sequence[int]) -> Vector:
        return self.basis @ coeffs

    def contains(self, v: Sequence[int]) -> bool:
        return solve_integer_system(self.basis, v) is not None

    def index(self) -> int | float:
        """[Z^r : lattice], INFINITE unless the lattice has full rank."""
        if self.rank < self.ambient_rank:
            return INFINITE
        return abs(self.basis.det())


def kernel_mod(A: IntMatrix, d: int) -> KernelLattice:
    """Z-basis of {v in Z^n : A v = 0 mod d}; full rank whenever d > 0."""
    if d < 0:
        raise ValueError("modulus must be nonnegative")
    snf = smith_normal_form(A)
    diag = snf.diagonal
    cols = []
    for i in range(A.cols):
        s = diag[i] if i < len(diag) else 0
        if d == 0:
            if s:
                continue
            factor = 1
        else:
            factor = d // math.gcd(s, d)
        cols.append(tuple(factor * x for x in snf.V.col(i)))
    return KernelLattice(A.cols, IntMatrix.from_columns(cols, A.cols))


# ---------------------------------------------------------------------------
# Finitely generated abelian groups


@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^n modulo the column span of ``relations`` (an n-row matrix)."""

    relations: IntMatrix

    @classmethod
    def free(cls, n: int) -> FgAbelianGroup:
        return cls(IntMatrix.zeros(n, 0))

    @classmethod
    def from_invariants(cls, factors: Sequence[int]) -> FgAbelianGroup:
        return cls(IntMatrix.diag(list(factors)))

    @property
    def generator_count(self) -> int:
        return self.relations.rows

    @cached_property
    def smith(self) -> SmithDecomposition:
        return smith_normal_form(self.relations)

    @cached_property
    def invariants(self) -> tuple[int, ...]:
        """One modulus per canonical coordinate (1 = trivial, 0 = free)."""
        diag = self.smith.diagonal
        return tuple(diag[i] if i < len(diag) else 0 for i in range(self.generator_count))

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nontrivial invariant factors, torsion first and zeros last."""
        return tuple(s for s in self.invariants if s != 1)

    @property
    def torsion_factors(self) -> tuple[int, ...]:
        return tuple(s for s in self.invariants if s > 1)

    @property
    def free_rank(self) -> int:
        return sum(1 for s in self.invariants if s == 0)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | float:
        return math.prod(self.invariants) if self.is_finite else INFINITE

    def canonical(self, coords: Sequence[int]) -> Vector:
        coords = tuple(coords)
        if len(coords) != self.generator_count:
            raise DimensionError(
                f"element has {len(coords)} coordinates, group has {self.generator_count} generators")
        y = self.smith.U @ coords
        return tuple(reduce_mod(a, s) for a, s in zip(y, self.invariants))

    def from_canonical(self, y: Sequence[int]) -> GroupElement:
        return GroupElement(self, self.smith.U_inv @ tuple(y))

    def element(self, coords: Sequence[int]) -> GroupElement:
        return GroupElement(self, tuple(coords))

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.generator_count)

    def elements(self) -> Iterator[GroupElement]:
        if not self.is_finite:
            raise InfiniteGroupError("cannot list the elements of an infinite group")
        for y in itertools.product(*(range(s) for s in self.invariants)):
            yield self.from_canonical(y)

    def quotient(self, gens: IntMatrix) -> FgAbelianGroup:
        return FgAbelianGroup(self.relations.hstack(gens))

    def in_subgroup(self, gens: IntMatrix, coords: Sequence[int]) -> bool:
        """Whether ``coords`` lies in the subgroup generated by the columns of gens."""
        return solve_integer_system(self.relations.hstack(gens), coords) is not None


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An element of a presented group, held by any coordinate representative."""

    group: FgAbelianGroup
    coords: Vector = field()

    def __post_init__(self):
        coords = tuple(int(x) for x in self.coords)
        if len(coords) != self.group.generator_count:
            raise DimensionError(
                f"element has {len(coords)} coordinates, group has {self.group.generator_count} generators")
        object.__setattr__(self, "coords", coords)

    @cached_property
    def canonical(self) -> Vector:
        return self.group.canonical(self.coords)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.group == other.group and self.canonical == other.canonical

    def __hash__(self):
        return hash((self.group, self.canonical))

    def _check(self, other: GroupElement):
        if other.group != self.group:
            raise MembershipError("elements of different groups")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __rmul__(self, k: int) -> GroupElement:
        return GroupElement(self.group, tuple(k * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.canonical)

    def order(self) -> int | float:
        return element_order(self)

    def divisibility(self) -> int:
        return divisibility_mod_torsion(self)

    def __repr__(self):
        return f"GroupElement({list(self.coords)} in {list(self.group.invariant_factors)})"


def cokernel_mod(A: IntMatrix, d: int) -> FgAbelianGroup:
    """(Z/d)^r / im(A mod d), presented on r generators."""
    if d < 0:
        raise ValueError("modulus must be nonnegative")
    if d == 0:
        return FgAbelianGroup(A)
    return FgAbelianGroup(A.hstack(d * IntMatrix.identity(A.rows)))


def element_order(g: GroupElement) -> int | float:
    """Least k >= 1 with k*g = 0, or INFINITE."""
    order = 1
    for y, s in zip(g.canonical, g.group.invariants):
        if s == 0:
            if y:
                return INFINITE
        else:
            order = math.lcm(order, s // math.gcd(y, s))
    return order


def divisibility_mod_torsion(g: GroupElement) -> int:
    """Largest q with g in qG + Tors G; 0 when g is torsion."""
    free = [y for y, s in zip(g.canonical, g.group.invariants) if s == 0]
    return math.gcd(*free) if free else 0


# ---------------------------------------------------------------------------
# Direct summands of finite groups


def find_retraction(gens: IntMatrix, ambient: FgAbelianGroup) -> IntMatrix | None:
    """A retraction of ``ambient`` onto the subgroup M spanned by ``gens``.

    The result P acts on generator coordinates: column i is the image in M of
    the i-th generator, and P fixes every element of M.  Returns None when M
    is not a direct summand.  The retraction is found by solving the linear
    congruences it must satisfy, written in the canonical basis of ambient.
    """
    if not ambient.is_finite:
        raise InfiniteGroupError("direct-summand test needs a finite ambient group")
    if gens.rows != ambient.generator_count:
        raise DimensionError("generators do not live in the ambient group")
    n = ambient.generator_count
    keep = [i for i, s in enumerate(ambient.invariants) if s != 1]
    k, t = len(keep), gens.cols
    if k == 0 or t == 0:
        return IntMatrix.zeros(n, n)
    mods = [ambient.invariants[i] for i in keep]
    canon = [ambient.canonical(g) for g in gens.columns()]
    A = [[canon[j][i] for j in range(t)] for i in keep]  # k x t

    # unknown Z is t x k, flattened as z[a*k + i]; the retraction is P = A Z.
    rows, rhs, moduli = [], [], []
    for r in range(k):
        # well defined: mods[i] * P[r][i] = 0 mod mods[r]
        for i in range(k):
            row = [0] * (t * k)
            for a in range(t):
                row[a * k + i] = mods[i] * A[r][a]
            rows.append(row)
            rhs.append(0)
            moduli.append(mods[r])
        # fixes M: (P A)[r][j] = A[r][j] mod mods[r]
        for j in range(t):
            row = [0] * (t * k)
            for a in range(t):
                for i in range(k):
                    row[a * k + i] += A[r][a] * A[i][j]
            rows.append(row)
            rhs.append(A[r][j])
            moduli.append(mods[r])
    system = IntMatrix.from_rows(rows, t * k).hstack(IntMatrix.diag(moduli))
    sol = solve_integer_system(system, rhs)
    if sol is None:
        return None
    Z = [[sol[a * k + i] for i in range(k)] for a in range(t)]
    P_can = [[sum(A[r][a] * Z[a][i] for a in range(t)) % mods[r] for i in range(k)]
             for r in range(k)]
    U = ambient.smith.U.select_rows(keep)
    U_inv = ambient.smith.U_inv.select_columns(keep)
    return U_inv @ IntMatrix.from_rows(P_can, k) @ U


def is_retraction(P: IntMatrix, gens: IntMatrix, ambient: FgAbelianGroup) -> bool:
    """Check by composition that P is a well-defined retraction onto <gens>."""
    G = ambient
    if any(not G.element(P @ r).is_zero() for r in G.relations.columns()):
        return False
    if any(G.element(P @ g) != G.element(g) for g in gens.columns()):
        return False
    if any(not G.in_subgroup(gens, c) for c in P.columns()):
        return False
    return all(G.element(P @ (P @ c)) == G.element(P @ c) for c in IntMatrix.identity(P.cols).columns())


def is_direct_summand(gens: IntMatrix, ambient: FgAbelianGroup) -> bool:
    """Whether the subgroup generated by the columns of gens is a direct summand."""
    return find_retraction(gens, ambient) is not None
