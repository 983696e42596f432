"""One test per acceptance criterion, each at its stated grid and tolerance."""

import itertools
import json
import math
import random
import time

from embed47 import oracle
from embed47.classify import (
    build_core,
    classify,
    core_from_divisibility,
    theta_difference,
)
from embed47.cli import main
from embed47.zmodule import IntMatrix, smith_normal_form


def test_criterion_1_s1s3_table(criterion, capsys):
    with criterion(1, "S1xS3 table |P_{l,b}|, l in [-6,6], b in [-12,12], exact, < 1 s"):
        t0 = time.perf_counter()
        code = main(["s1s3", "--l-range=-6:6", "--b-range=-12:12", "--json"])
        elapsed = time.perf_counter() - t0
        rows = json.loads(capsys.readouterr().out)["table"]
        assert code == 0
        seen = {(r["l"], r["b"]): r["p_size"] for r in rows}
        assert set(seen) == set(itertools.product(range(-6, 7), range(-12, 13)))
        for (l, b), n in seen.items():
            assert n == (12 if l else 2 * math.gcd(b, 6)), (l, b, n)
        assert elapsed < 1.0, elapsed


def test_criterion_2_example_value(criterion, capsys):
    with criterion(2, "orbit size 2 for (l, b) = (0, 1)"):
        main(["classify", "--manifold", "s1s3", "--l", "0", "--b", "1", "--json"])
        assert json.loads(capsys.readouterr().out)["orbit_size"] == 2
        main(["s1s3", "--l-range=0:0", "--b-range=1:1", "--json"])
        assert json.loads(capsys.readouterr().out)["table"][0]["p_size"] == 2


def test_criterion_3_index_formula(criterion):
    with criterion(3, "index formula vs enumeration: full grid rank<=2, d<=8, |m|<=2 and >=500 rank-3 samples at d in {12,24}, < 60 s"):
        t0 = time.perf_counter()
        run = oracle.verify_unimzd(max_rank=2, max_d=8, entry_bound=2, spot_d=(12, 24),
                                   spot_rank=3, spot_samples=500, seed=0, sample=False)
        elapsed = time.perf_counter() - t0
        assert run.passed, run.failures[:3]
        assert not run.sampled
        spots = oracle.verify_unimzd(max_d=0, include_zero=False, spot_d=(12, 24), spot_rank=3,
                                     spot_samples=500, seed=0)
        assert spots.passed and spots.instances >= 500
        assert elapsed < 60.0, elapsed


def test_criterion_4_cap_well_defined(criterion):
    with criterion(4, "cap_d well defined on the symmetric grid; every negative control detected"):
        run = oracle.verify_cap_welldef(negative_controls=True)
        assert run.passed, run.failures[:3]
        assert run.instances > 0 and run.controls
        assert all(c["detected"] >= 1 for c in run.controls)
        assert {tuple(map(tuple, c["L"])) for c in run.controls} == set(oracle.NEGATIVE_CONTROLS)


def test_criterion_5_general_vs_special(criterion):
    with criterion(5, "general engine = S1xS3 closed form on the criterion-1 grid"):
        run = oracle.verify_s1s3_crosscheck(range(-6, 7), range(-12, 13))
        assert run.passed, run.failures[:3]
        assert run.instances == 13 * 25


def random_core(rng, d, max_rank=3, bound=6):
    r = rng.randint(1, max_rank)
    # 2L must be symmetric mod d, so L_ji may differ from L_ij by multiples of d / gcd(d, 2)
    step = d // math.gcd(d, 2)
    rows = [[rng.randint(-bound, bound) for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(i):
            rows[i][j] = rows[j][i] + step * rng.randint(-2, 2)
    core = core_from_divisibility(d, rows)
    span = 3 * d if d else 12
    b = tuple(rng.randint(-span, span) for _ in range(r))
    return core, b


def test_criterion_6_small_orbits(criterion):
    with criterion(6, "orbit 1 when 4 and 3 do not divide d; orbit in {1,2} when d = 4 mod 8, 3 does not divide d"):
        rng = random.Random(2024)
        for d in (1, 2, 5, 7, 10, 11, 13, 14):
            for _ in range(150):
                core, b = random_core(rng, d)
                report = classify(core, b)
                assert set(report.orbit_candidates) == {1}, (d, core.L, b)
                assert report.orbit_size in (1, None)
        for d in (4, 20, 28, 44, 52, 68):
            for _ in range(150):
                core, b = random_core(rng, d)
                report = classify(core, b)
                assert set(report.orbit_candidates) <= {1, 2}, (d, core.L, b)


def test_criterion_7_cgen_identity(criterion):
    with criterion(7, "three orbit-size counts agree over d in {0,2,3,4,6,8,12,24}, 2L = 0 mod d, all b with |C| <= 48"):
        run = oracle.verify_cgen_arithmetic(d_set=(0, 2, 3, 4, 6, 8, 12, 24), max_group=48)
        assert run.passed, run.failures[:3]
        assert run.instances > 0


def test_criterion_8_structural(criterion):
    with criterion(8, "SNF unimodularity/divisibility, orbit x inertia = 12, theta-difference cocycle"):
        rng = random.Random(8)
        box = range(-4, 5)
        smith_cases = [IntMatrix(2, 2, e) for e in itertools.product(box, repeat=4)]
        smith_cases += [IntMatrix(r, c, tuple(rng.randint(-4, 4) for _ in range(r * c)))
                        for r, c in [(3, 3)] * 6000 + [(2, 3), (3, 2), (1, 3), (3, 1)] * 500]
        for A in smith_cases:
            D = smith_normal_form(A)
            assert D.U @ A @ D.V == D.S
            assert abs(D.U.det()) == 1 and abs(D.V.det()) == 1
            diag = [s for s in D.diagonal if s]
            assert list(D.diagonal[:len(diag)]) == diag
            assert all(b % a == 0 for a, b in zip(diag, diag[1:]))

        for d in (0, 1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 16, 24, 36, 48):
            for _ in range(60):
                core, b = random_core(rng, d, bound=4)
                report = classify(core, b, {"COND3"})
                assert report.orbit_size * report.inertia_order == 12
                K = core.K.vectors
                if not K:
                    continue
                r, n = core.rank, core.d_hat
                b1 = tuple(rng.randint(-20, 20) for _ in range(r))
                b2 = tuple(rng.randint(-20, 20) for _ in range(r))
                y = core.K.combination([rng.randint(-3, 3) for _ in K])
                y2 = core.K.combination([rng.randint(-3, 3) for _ in K])
                assert (theta_difference(core, b, b1, y) + theta_difference(core, b1, b2, y)) % n \
                    == theta_difference(core, b, b2, y)
                ys = tuple(p + q for p, q in zip(y, y2))
                assert theta_difference(core, b, b1, ys) == \
                    (theta_difference(core, b, b1, y) + theta_difference(core, b, b1, y2)) % n
