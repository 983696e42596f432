"""Brute-force verification suites.

Each suite pits a closed formula against direct enumeration over a finite
grid of small instances and collects every disagreement.  Grids that would
exceed ``budget`` instances are either sampled deterministically from
``seed`` (``sample=True``) or refused with BudgetExceeded.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .classify import (
    ThetaStatus,
    _even_count,
    action_modulus,
    classify,
    core_from_divisibility,
    theta_image,
)
from .errors import BudgetExceeded
from .manifold import ManifoldData
from .pairing import (
    PairingContext,
    cap_d,
    check_cap_well_defined,
    kernel_residues,
    unimzd_brute,
    unimzd_index,
)
from .s1s3 import p_size
from .zmodule import FgAbelianGroup, IntMatrix, cokernel_mod, dot, kernel_mod

S1S3 = ManifoldData("S1xS3", h1_rank=1, h2_rank=0, Q=IntMatrix.zeros(0, 0), w2_dual=(), signature=0)


@dataclass
class VerificationRun:
    suite: str
    instances: int = 0
    failures: list = field(default_factory=list)
    wall_time: float = 0.0
    seed: int | None = None
    sampled: bool = False
    controls: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, instance, expected, got):
        self.failures.append({"instance": instance, "expected": expected, "got": got})

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "instances": self.instances,
            "failures": self.failures,
            "wall_time": round(self.wall_time, 4),
            "seed": self.seed,
            "sampled": self.sampled,
            "controls": self.controls,
            "passed": self.passed,
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f", {len(self.controls)} negative controls" if self.controls else ""
        sampled = " (sampled)" if self.sampled else ""
        return (f"{status} {self.suite}: {self.instances} instances{sampled}, "
                f"{len(self.failures)} failures{extra}, {self.wall_time:.2f}s")


def _square_grid(rank: int, bound: int) -> Iterable[IntMatrix]:
    box = range(-bound, bound + 1)
    for entries in itertools.product(box, repeat=rank * rank):
        yield IntMatrix(rank, rank, entries)


def _matrix_grid(ranks, bound, budget, sample, rng, run, keep):
    """Square matrices of the given ranks, all or a seeded sample of them."""
    total = sum((2 * bound + 1) ** (r * r) for r in ranks)
    if total <= budget:
        for r in ranks:
            yield from (m for m in _square_grid(r, bound) if keep(m))
        return
    if not sample:
        raise BudgetExceeded(f"{total} matrices exceed the budget of {budget}")
    run.sampled = True
    for _ in range(budget):
        r = rng.choice(list(ranks))
        m = IntMatrix(r, r, tuple(rng.randint(-bound, bound) for _ in range(r * r)))
        if keep(m):
            yield m


def _residue_grid(n: int, d: int) -> np.ndarray:
    return np.indices((d,) * n, dtype=np.int64).reshape(n, -1).T


def _distinct_per_column(values: np.ndarray) -> np.ndarray:
    s = np.sort(values, axis=0)
    return 1 + np.count_nonzero(np.diff(s, axis=0), axis=0)


def _unimzd_instance_block(run, m, d, reps):
    """Compare formula and enumeration for all c in ``reps`` at once."""
    C = cokernel_mod(m, d)
    K = kernel_residues(m, d)
    sizes = _distinct_per_column(K @ reps.T % d)
    for c, size in zip(reps, sizes):
        run.instances += 1
        c = tuple(int(x) for x in c)
        got = unimzd_index(m, d, C.element(c))
        expected = d // int(size)
        if got != expected:
            run.fail({"m": m.to_rows(), "d": d, "c": list(c)}, expected, got)


def verify_unimzd(max_rank: int = 2, max_d: int = 8, entry_bound: int = 2, *,
                  include_zero: bool = True, zero_c_bound: int = 3,
                  spot_d=(12, 24), spot_rank: int = 3, spot_entry_bound: int = 3,
                  spot_samples: int = 500, seed: int = 0, budget: int = 200_000,
                  sample: bool = True) -> VerificationRun:
    """[Z_d : c(ker(m mod d))]: closed formula versus enumeration.

    Full grid: ranks 1..max_rank, d in 1..max_d, entries in [-entry_bound,
    entry_bound], every m symmetric mod d, every c in (Z/d)^rank.  Plus d = 0
    (symmetric m, c in a box) and ``spot_samples`` seeded instances at
    ``spot_rank`` with d drawn from ``spot_d``.
    """
    if max_rank > 3 or max_d > 24 or entry_bound > 3:
        raise BudgetExceeded("verify_unimzd bounds: rank <= 3, d <= 24, entries <= 3")
    run = VerificationRun("unimzd", seed=seed)
    rng = random.Random(seed)
    t0 = time.perf_counter()
    ranks = range(1, max_rank + 1)
    for d in range(1, max_d + 1):
        for m in _matrix_grid(ranks, entry_bound, budget, sample, rng, run,
                              lambda m, d=d: m.is_symmetric(d)):
            _unimzd_instance_block(run, m, d, _residue_grid(m.rows, d))
    if include_zero:
        for m in _matrix_grid(ranks, entry_bound, budget, sample, rng, run,
                              lambda m: m.is_symmetric()):
            C = cokernel_mod(m, 0)
            box = range(-zero_c_bound, zero_c_bound + 1)
            for c in itertools.product(box, repeat=m.rows):
                run.instances += 1
                got = unimzd_index(m, 0, C.element(c))
                expected = unimzd_brute(m, 0, C.element(c))
                if got != expected:
                    run.fail({"m": m.to_rows(), "d": 0, "c": list(c)}, expected, got)
    for _ in range(spot_samples):
        d = rng.choice(list(spot_d))
        while True:
            upper = [rng.randint(-spot_entry_bound, spot_entry_bound)
                     for _ in range(spot_rank * (spot_rank + 1) // 2)]
            rows = [[0] * spot_rank for _ in range(spot_rank)]
            it = iter(upper)
            for i in range(spot_rank):
                for j in range(i, spot_rank):
                    rows[i][j] = rows[j][i] = next(it)
            m = IntMatrix.from_rows(rows)
            if m.is_symmetric(d):
                break
        c = np.array([[rng.randrange(d) for _ in range(spot_rank)]], dtype=np.int64)
        _unimzd_instance_block(run, m, d, c)
    run.wall_time = time.perf_counter() - t0
    return run


# non-symmetric forms whose kernels are large enough to expose the asymmetry
NEGATIVE_CONTROLS = (
    ((0, 1), (0, 0)),
    ((1, 2), (0, 0)),
    ((0, 1, 0), (0, 0, 1), (0, 0, 0)),
)


def _check_representatives(ctx: PairingContext):
    """Yield (class, rep, alt_rep, y, v, v_alt) whenever cap_d depends on the representative."""
    C, r, d = ctx.C, ctx.rank, ctx.d
    twoL = ctx.doubled
    if C.is_finite and C.order() <= 64:
        classes = [g.coords for g in C.elements()]
    else:
        classes = list(itertools.product(range(-2, 3), repeat=r))
    shifts = [twoL.col(i) for i in range(r)]
    shifts += [tuple(-x for x in s) for s in shifts]
    if d:
        shifts += [tuple(d * int(i == j) for j in range(r)) for i in range(r)]
    for c in classes:
        base = C.element(c)
        for s in shifts:
            alt = C.element(tuple(a + b for a, b in zip(c, s)))
            for y in ctx.K.vectors:
                v, v_alt = cap_d(ctx, base, y), cap_d(ctx, alt, y)
                if v != v_alt:
                    yield c, alt.coords, y, v, v_alt


def verify_cap_welldef(max_rank: int = 2, d_set=(0, 2, 3, 4, 6), entry_bound: int = 2, *,
                       negative_controls: bool = False, budget: int = 200_000,
                       sample: bool = True, seed: int = 0) -> VerificationRun:
    """cap_d is independent of the cokernel representative.

    For every L with 2L symmetric mod d: the image of 2L pairs to zero with
    the kernel, and shifting a representative by a column of 2L or by d e_i
    never changes cap_d on a kernel basis.  Negative controls run the same
    checks on non-symmetric forms and must be caught.
    """
    run = VerificationRun("cap-welldef", seed=seed)
    rng = random.Random(seed)
    t0 = time.perf_counter()
    ranks = range(1, max_rank + 1)
    for d in d_set:
        for L in _matrix_grid(ranks, entry_bound, budget, sample, rng, run,
                              lambda m, d=d: (2 * m).is_symmetric(d)):
            ctx = PairingContext(L, d)
            run.instances += 1
            inst = {"L": L.to_rows(), "d": d}
            if not check_cap_well_defined(ctx):
                run.fail(inst, "im(2L) cap ker(2L) = 0", "nonzero pairing")
            for c, alt, y, v, v_alt in _check_representatives(ctx):
                run.fail({**inst, "c": list(c), "alt": list(alt), "y": list(y)}, v, v_alt)
    if negative_controls:
        for rows in NEGATIVE_CONTROLS:
            L = IntMatrix.from_rows(rows)
            for d in d_set:
                ctx = PairingContext(L, d, check=False)
                if ctx.is_symmetric:
                    continue
                detected = 0 if check_cap_well_defined(ctx) else 1
                detected += sum(1 for _ in _check_representatives(ctx))
                control = {"L": L.to_rows(), "d": d, "detected": detected}
                run.controls.append(control)
                if not detected:
                    run.fail(control, "at least one detected failure", 0)
    run.wall_time = time.perf_counter() - t0
    return run


def verify_s1s3_crosscheck(l_range=range(-6, 7), b_range=range(-12, 13)) -> VerificationRun:
    """General orbit formula on S^1 x S^3 data against the |P_{l,b}| table."""
    from .classify import build_core

    run = VerificationRun("s1s3-crosscheck")
    t0 = time.perf_counter()
    for l in l_range:
        core = build_core(S1S3, (), [[l]])
        for b in b_range:
            run.instances += 1
            report = classify(core, [b])
            expected = p_size(l, b)
            if report.orbit_size != expected:
                run.fail({"l": l, "b": b}, expected, report.orbit_size)
    run.wall_time = time.perf_counter() - t0
    return run


def subgroup_closure(values: Iterable[int], n: int) -> set[int]:
    """The subgroup of Z_n generated by ``values``, by repeated addition."""
    gens = {v % n for v in values}
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = (x + g) % n
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def direct_theta_subgroup(core, b) -> set[int]:
    """rho_dhat of {4 (b . v) : v in K}, enumerated without the kernel basis when d > 0."""
    n, d = core.d_hat, core.d
    b = core.element(b)
    if d:
        K = kernel_residues(core.ctx.doubled, d)
        vals = (K @ np.array(b.coords, dtype=np.int64)) % d
        return {int(4 * v) % n for v in vals}
    if core.form_vanishes:
        grid = _residue_grid(core.rank, n)
        return {int(4 * v) % n for v in grid @ np.array(b.coords, dtype=np.int64)}
    return subgroup_closure((4 * dot(b.coords, y) for y in core.K.vectors), n)


def _vanishing_form_cores(d: int, rank: int, entry_bound: int):
    if d == 0:
        for L in _square_grid(rank, entry_bound):
            if L.is_symmetric():
                yield core_from_divisibility(0, L)
        return
    step = d // math.gcd(d, 2)
    for pattern in itertools.product((0, 1), repeat=rank * rank):
        yield core_from_divisibility(d, IntMatrix(rank, rank, tuple(step * x for x in pattern)))


def verify_cgen_arithmetic(d_set=(0, 2, 3, 4, 6, 8, 12, 24), b_samples: int = 3, *,
                           max_rank: int = 2, max_group: int = 48,
                           entry_bound: int = 1) -> VerificationRun:
    """Three routes to the orbit size when theta is determined.

    (1) dhat / (gcd(d,2) |im theta|) from the engine,
    (2) the closed-form modulus 2 gcd(div b, 6) or gcd(d/ord(4b), 24)/gcd(d,2),
    (3) dhat / (gcd(d,2) |X|) with X = rho_dhat(4 b cap_d K) enumerated directly.

    d > 0 uses forms with 2L = 0 mod d; d = 0 uses every symmetric L in the
    entry grid.  b runs over all of C when |C| <= max_group, and over the box
    [-b_samples, b_samples]^r when C is infinite.
    """
    run = VerificationRun("cgen-arithmetic")
    t0 = time.perf_counter()
    for d in d_set:
        for rank in range(1, max_rank + 1):
            for core in _vanishing_form_cores(d, rank, entry_bound):
                C: FgAbelianGroup = core.C
                if C.is_finite:
                    if C.order() > max_group:
                        continue
                    bs = [g.coords for g in C.elements()]
                else:
                    bs = list(itertools.product(range(-b_samples, b_samples + 1), repeat=rank))
                for b in bs:
                    run.instances += 1
                    inst = {"d": d, "L": core.L.to_rows(), "b": list(b)}
                    theta = theta_image(core, b)
                    if theta.status is not ThetaStatus.DETERMINED:
                        run.fail(inst, "DETERMINED", theta.status.value)
                        continue
                    engine = classify(core, b).orbit_size
                    closed = action_modulus(core, b)
                    X = direct_theta_subgroup(core, b)
                    direct = _even_count(core) // len(X)
                    if not engine == closed == direct or _even_count(core) % len(X):
                        run.fail(inst, {"closed_form": closed, "direct": direct}, engine)
    run.wall_time = time.perf_counter() - t0
    return run


def summand_brute(gens: IntMatrix, ambient: FgAbelianGroup, limit: int = 200_000) -> bool:
    """Direct-summand test by exhaustive search over homomorphisms ambient -> M."""
    if not ambient.is_finite:
        raise BudgetExceeded("exhaustive search needs a finite ambient group")
    canon = ambient.canonical
    mods = ambient.invariants
    M_gens = [canon(g) for g in gens.columns()]
    M = {canon([0] * ambient.generator_count)}
    frontier = list(M)
    while frontier:
        x = frontier.pop()
        for g in M_gens:
            y = tuple((a + b) % s for a, b, s in zip(x, g, mods))
            if y not in M:
                M.add(y)
                frontier.append(y)
    # a hom from Z_{s_1} + ... + Z_{s_n} is a choice of s_i-torsion image per generator
    choices = [[m for m in M if all(s_i * a % s == 0 for a, s in zip(m, mods))] for s_i in mods]
    if math.prod(len(c) for c in choices) > limit:
        raise BudgetExceeded("homomorphism search space too large")
    for images in itertools.product(*choices):
        def phi(x):
            out = [0] * len(mods)
            for xi, img in zip(x, images):
                for j, a in enumerate(img):
                    out[j] += xi * a
            return tuple(a % s for a, s in zip(out, mods))
        if all(phi(g) == g for g in M_gens):
            return True
    return False


SUITES = {
    "unimzd": verify_unimzd,
    "cap-welldef": verify_cap_welldef,
    "s1s3-crosscheck": verify_s1s3_crosscheck,
    "cgen-arithmetic": verify_cgen_arithmetic,
}
