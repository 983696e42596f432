"""Orbit sizes of the knot action on embeddings N -> S^7 with fixed (u, l, b).

For a pair (u, l) with d = div u the relevant algebra is

    K = ker(2L mod d) in H_3,   C = coker(2L mod d) in H_1,

plus a homomorphism theta_b : K -> 4 Z_dhat (dhat = gcd(d, 24)).  The orbit
of an embedding with beta-invariant b under Z_12 has size

    dhat / (gcd(d, 2) * |im theta_b|).

theta itself is geometric; only differences are computable:

    theta_b(y) - theta_b'(y) = 4 * ((b - b') cap_d y)  mod dhat.

So im theta_b is computed in the gauge theta_0 = 0, which is legitimate
whenever some b~ has theta_b~ = 0 (guaranteed for d = 0, for 2L = 0 mod d,
and when rho_dhat K is a direct summand of (Z_dhat)^r).  Outside those
cases the image is reported as unknown, with a divisor bound.

Every numeric occurrence of the class u in the orbit formulas is read as
d = div u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DimensionError, NonIntegralError, UnresolvedThetaError
from .manifold import H2Class, ManifoldData, h2diff_contains
from .pairing import PairingContext, cap_d
from .zmodule import (
    FgAbelianGroup,
    GroupElement,
    IntMatrix,
    KernelLattice,
    cokernel_mod,
    find_retraction,
    gcd_hat,
)

COND3 = "COND3"

NOTE_NUMERIC_U = "numeric occurrences of u read as d = div u"
NOTE_GAUGE = "im theta computed in the gauge theta_{u,l,0} = 0"
NOTE_REALIZABILITY = ("UNVERIFIED-REALIZABILITY: (u, l) checked only for 2L symmetric mod d"
                      " (and u in H2^DIFF when manifold data is given)")
NOTE_ORD = "ord(4b) read as the order of the element 4b in coker(2L mod d)"
NOTE_COND3 = "COND3 assumed: b is measured from a class b~ with theta_{u,l,b~} = 0"


class _Indeterminate:
    """Third truth value for equivalence questions the theory leaves open."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        raise TypeError("INDETERMINATE has no truth value")

    def __repr__(self):
        return "INDETERMINATE"


INDETERMINATE = _Indeterminate()


class ThetaStatus(str, Enum):
    DETERMINED = "DETERMINED"
    CONDITIONAL = "CONDITIONAL"
    UNKNOWN = "UNKNOWN"


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


@dataclass(frozen=True)
class ClassCore:
    """Derived data (d, dhat, K, C) for a pair (u, l)."""

    L: IntMatrix
    d: int
    u: H2Class | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("d must be nonnegative")
        if self.u is not None and self.u.div != self.d:
            raise ValueError(f"d = {self.d} but div u = {self.u.div}")
        self.ctx  # validates symmetry of 2L mod d

    @cached_property
    def ctx(self) -> PairingContext:
        return PairingContext(self.L, self.d)

    @property
    def rank(self) -> int:
        return self.L.rows

    @property
    def d_hat(self) -> int:
        return gcd_hat(self.d)

    @property
    def K(self) -> KernelLattice:
        return self.ctx.K

    @property
    def C(self) -> FgAbelianGroup:
        return self.ctx.C

    @property
    def form_vanishes(self) -> bool:
        """2L = 0 mod d (for d = 0: L = 0)."""
        return self.ctx.doubled.is_zero(self.d)

    def element(self, b: GroupElement | Sequence[int]) -> GroupElement:
        if isinstance(b, GroupElement):
            if b.group != self.C:
                raise DimensionError("b is not an element of coker(2L mod d)")
            return b
        b = tuple(b)
        if len(b) != self.rank:
            raise DimensionError(f"b has {len(b)} coordinates, expected {self.rank}")
        return self.C.element(b)

    @cached_property
    def kernel_is_summand(self) -> bool:
        """rho_dhat K is a direct summand of (Z_dhat)^r."""
        n = self.d_hat
        gens = IntMatrix.from_columns([[x % n for x in y] for y in self.K.vectors], self.rank)
        ambient = cokernel_mod(IntMatrix.zeros(self.rank, 0), n)
        return find_retraction(gens, ambient) is not None

    def summary(self) -> dict:
        return {
            "u": None if self.u is None else list(self.u.coords),
            "L": self.L.to_rows(),
            "d": self.d,
            "d_hat": self.d_hat,
            "h1_rank": self.rank,
            "K_rank": self.K.rank,
            "K_basis": [list(v) for v in self.K.vectors],
            "C_invariant_factors": list(self.C.invariant_factors),
            "C_order": _jsonable(self.C.order()),
        }


def core_from_divisibility(d: int, L, u: H2Class | None = None, notes: Iterable[str] = ()) -> ClassCore:
    L = L if isinstance(L, IntMatrix) else IntMatrix.from_rows(L)
    return ClassCore(L, d, u, tuple(notes))


def build_core(data: ManifoldData, u: H2Class | Sequence[int], L) -> ClassCore:
    """Core for (u, l) on validated manifold data.

    A u outside H2^DIFF is not fatal (realizability is only partly checkable
    here); it is recorded as a NOT_IN_H2DIFF note on the core.
    """
    u = u if isinstance(u, H2Class) else H2Class(tuple(u))
    L = L if isinstance(L, IntMatrix) else IntMatrix.from_rows(L, data.h1_rank)
    if L.shape != (data.h1_rank, data.h1_rank):
        raise DimensionError(f"L is {L.shape}, expected {data.h1_rank}x{data.h1_rank}")
    notes = []
    if not h2diff_contains(data, u):
        notes.append(f"NOT_IN_H2DIFF: u = {list(u.coords)} fails rho_2 u = w2* or u.u = sigma")
    return ClassCore(L, u.div, u, tuple(notes))


def theta_difference(core: ClassCore, b, b_prime, y) -> int:
    """theta_b(y) - theta_b'(y) = 4 (b - b') cap_d y, as a residue mod dhat."""
    diff = core.element(b) - core.element(b_prime)
    return 4 * cap_d(core.ctx, diff, y) % core.d_hat


def theta_values(core: ClassCore, b) -> list[int]:
    """theta_b on the basis of K, in the gauge theta_0 = 0."""
    zero = core.C.zero()
    return [theta_difference(core, b, zero, y) for y in core.K.vectors]


@dataclass(frozen=True)
class ThetaImage:
    status: ThetaStatus
    order: int | None
    divisor_bound: int
    modulus: int
    basis: str

    @property
    def resolved(self) -> bool:
        return self.status is not ThetaStatus.UNKNOWN

    @property
    def generator(self) -> int | None:
        """g with im theta = g Z_dhat."""
        return None if self.order is None else self.modulus // self.order

    def to_dict(self) -> dict:
        return {"status": self.status.value, "order": self.order,
                "divisor_bound": self.divisor_bound, "modulus": self.modulus,
                "basis": self.basis}

    @classmethod
    def from_dict(cls, doc: dict) -> ThetaImage:
        return cls(ThetaStatus(doc["status"]), doc["order"], doc["divisor_bound"],
                   doc["modulus"], doc["basis"])


def theta_image(core: ClassCore, b, assumptions: Iterable[str] = ()) -> ThetaImage:
    """Resolve |im theta_b| when the available conditions allow it.

    Priority: d = 0 or 2L = 0 mod d; the target 4 Z_dhat is zero; rho_dhat K
    a direct summand; the COND3 assumption; otherwise UNKNOWN.
    """
    assumptions = set(assumptions)
    n = core.d_hat
    bound = n // math.gcd(n, 4)
    if core.d == 0:
        status, basis = ThetaStatus.DETERMINED, "d=0"
    elif core.form_vanishes:
        status, basis = ThetaStatus.DETERMINED, "2L=0 mod d"
    elif bound == 1:
        status, basis = ThetaStatus.DETERMINED, "4Z_dhat=0"
    elif core.kernel_is_summand:
        status, basis = ThetaStatus.CONDITIONAL, "cond-1"
    elif COND3 in assumptions:
        status, basis = ThetaStatus.CONDITIONAL, "cond-3"
    else:
        return ThetaImage(ThetaStatus.UNKNOWN, None, bound, n, "none")
    order = n // math.gcd(n, *theta_values(core, b))
    if bound % order:
        raise NonIntegralError(f"|im theta| = {order} does not divide {bound}")
    return ThetaImage(status, order, bound, n, basis)


@dataclass(frozen=True)
class ClassificationReport:
    core: dict
    b: tuple[int, ...]
    b_canonical: tuple[int, ...]
    theta: ThetaImage
    orbit_size: int | None
    orbit_candidates: tuple[int, ...]
    inertia_order: int | None
    inertia_candidates: tuple[int, ...]
    notes: tuple[str, ...] = field(default=())
    manifold: str | None = None

    @property
    def determined(self) -> bool:
        return self.orbit_size is not None

    def to_dict(self) -> dict:
        return {
            "manifold": self.manifold,
            "core": self.core,
            "b": list(self.b),
            "b_canonical": list(self.b_canonical),
            "theta": self.theta.to_dict(),
            "orbit_size": self.orbit_size,
            "orbit_candidates": list(self.orbit_candidates),
            "inertia_order": self.inertia_order,
            "inertia_candidates": list(self.inertia_candidates),
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> ClassificationReport:
        return cls(
            core=doc["core"],
            b=tuple(doc["b"]),
            b_canonical=tuple(doc["b_canonical"]),
            theta=ThetaImage.from_dict(doc["theta"]),
            orbit_size=doc["orbit_size"],
            orbit_candidates=tuple(doc["orbit_candidates"]),
            inertia_order=doc["inertia_order"],
            inertia_candidates=tuple(doc["inertia_candidates"]),
            notes=tuple(doc["notes"]),
            manifold=doc.get("manifold"),
        )


def _even_count(core: ClassCore) -> int:
    # |2 Z_dhat| = dhat / gcd(d, 2); gcd(0, 2) = 2 matches dhat = 24
    return core.d_hat // math.gcd(core.d, 2)


def _orbit_for(core: ClassCore, theta_order: int) -> int:
    base = _even_count(core)
    if base % theta_order:
        raise NonIntegralError(f"{core.d_hat}/(gcd({core.d},2)*{theta_order}) is not an integer")
    orbit = base // theta_order
    if 12 % orbit:
        raise NonIntegralError(f"orbit size {orbit} does not divide 12")
    return orbit


def orbit_size(core: ClassCore, theta: ThetaImage, b=None, manifold: str | None = None,
               extra_notes: Iterable[str] = ()) -> ClassificationReport:
    b = core.C.zero() if b is None else core.element(b)
    notes = list(core.notes) + [NOTE_NUMERIC_U, NOTE_GAUGE, NOTE_REALIZABILITY]
    notes += list(extra_notes)
    if theta.basis == "cond-3":
        notes.append(NOTE_COND3)
    if theta.resolved:
        orbit = _orbit_for(core, theta.order)
        orbits, inertia = (orbit,), 12 // orbit
        inertias = (inertia,)
    else:
        orbit = inertia = None
        orbits = tuple(sorted({_orbit_for(core, t) for t in divisors(theta.divisor_bound)}))
        inertias = tuple(sorted(12 // o for o in orbits))
        notes.append(f"theta undetermined: |im theta| divides {theta.divisor_bound}")
    return ClassificationReport(core.summary(), b.coords, b.canonical, theta, orbit, orbits,
                                inertia, inertias, tuple(notes), manifold)


def classify(core: ClassCore, b, assumptions: Iterable[str] = (),
             manifold: str | None = None) -> ClassificationReport:
    theta = theta_image(core, b, assumptions)
    return orbit_size(core, theta, b, manifold)


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)


def eta_shift(eta_rep: int, a: int, theta: ThetaImage) -> Residue:
    """Class of eta + 2a in Z_dhat / im theta (identified with Z_g, g = dhat/|im theta|)."""
    if not theta.resolved:
        raise UnresolvedThetaError("eta_shift needs a resolved theta image")
    return Residue(eta_rep + 2 * a, theta.generator)


def action_modulus(core: ClassCore, b) -> int | None:
    """The closed-form modulus of the knot action, when one applies.

    u = 0:                 2 gcd(div b, 6)
    u != 0, 2L = 0 mod d:  gcd(d / ord(4b), 24) / gcd(d, 2)
    otherwise None.
    """
    b = core.element(b)
    if core.d == 0:
        return 2 * math.gcd(b.divisibility(), 6)
    if core.form_vanishes:
        return gcd_hat(core.d // (4 * b).order()) // math.gcd(core.d, 2)
    return None


def knot_action_equiv(core: ClassCore, b, a: int, a_prime: int,
                      assumptions: Iterable[str] = ()):
    """Whether f#a and f#a' are isotopic for f with invariants (u, l, b).

    Returns True, False, or INDETERMINATE when im theta is not resolved.
    """
    modulus = action_modulus(core, b)
    if modulus is None:
        theta = theta_image(core, b, assumptions)
        if not theta.resolved:
            return INDETERMINATE
        modulus = _orbit_for(core, theta.order)
    return (a - a_prime) % modulus == 0


def _jsonable(x):
    return "infinite" if x == math.inf else x
