import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from embed47.errors import DimensionError, InfiniteGroupError
from embed47.oracle import summand_brute
from embed47.zmodule import (
    INFINITE,
    FgAbelianGroup,
    IntMatrix,
    cokernel_mod,
    divisibility_mod_torsion,
    element_order,
    find_retraction,
    gcd_hat,
    is_direct_summand,
    is_retraction,
    kernel_mod,
    smith_normal_form,
    solve_integer_system,
)


def check_smith(A):
    D = smith_normal_form(A)
    assert D.U @ A @ D.V == D.S
    assert abs(D.U.det()) == 1 and abs(D.V.det()) == 1
    assert D.U @ D.U_inv == IntMatrix.identity(A.rows)
    assert D.V @ D.V_inv == IntMatrix.identity(A.cols)
    for i in range(A.rows):
        for j in range(A.cols):
            if i != j:
                assert D.S[i, j] == 0
    diag = D.diagonal
    assert all(s >= 0 for s in diag)
    nonzero = [s for s in diag if s]
    assert diag[:len(nonzero)] == tuple(nonzero), "zeros must come last"
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0


def matrices(rows, cols, bound):
    box = range(-bound, bound + 1)
    for entries in itertools.product(box, repeat=rows * cols):
        yield IntMatrix(rows, cols, entries)


@pytest.mark.parametrize("shape,bound", [
    ((1, 1), 4), ((1, 2), 4), ((2, 1), 4), ((1, 3), 4), ((3, 1), 4),
    ((2, 2), 4), ((2, 3), 2), ((3, 2), 2), ((3, 3), 1),
])
def test_smith_exhaustive_small_shapes(shape, bound):
    for A in matrices(*shape, bound):
        check_smith(A)


@settings(max_examples=1500, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9))
def test_smith_3x3_entries_up_to_4(entries):
    check_smith(IntMatrix(3, 3, tuple(entries)))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_smith_large_entries(r, c, data):
    entries = data.draw(st.lists(st.integers(-10**12, 10**12), min_size=r * c, max_size=r * c))
    check_smith(IntMatrix(r, c, tuple(entries)))


def test_smith_examples():
    D = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    assert D.diagonal == (2, 4)
    assert smith_normal_form(IntMatrix.zeros(2, 2)).diagonal == (0, 0)
    assert smith_normal_form(IntMatrix.identity(3)).diagonal == (1, 1, 1)
    assert smith_normal_form(IntMatrix.zeros(0, 3)).diagonal == ()


def test_gcd_hat():
    assert gcd_hat(16) == 8
    assert gcd_hat(0) == 24
    assert gcd_hat(36) == 12


def test_kernel_examples():
    assert kernel_mod(IntMatrix.from_rows([[2]]), 6).vectors == [(3,)]
    assert kernel_mod(IntMatrix.from_rows([[0]]), 0).vectors == [(1,)]
    assert kernel_mod(IntMatrix.identity(2), 0).vectors == []


def image_size(A, d):
    grid = np.indices((d,) * A.cols, dtype=np.int64).reshape(A.cols, -1).T
    M = np.array(A.to_rows(), dtype=np.int64).reshape(A.rows, A.cols)
    return len({tuple(row) for row in (grid @ M.T) % d})


@pytest.mark.parametrize("d", [1, 2, 3, 4, 6, 8])
def test_kernel_and_cokernel_counts(d):
    for A in itertools.chain(matrices(1, 1, 3), matrices(2, 2, 2), matrices(2, 1, 2)):
        K = kernel_mod(A, d)
        for v in K.vectors:
            assert all(x % d == 0 for x in A @ v)
        im = image_size(A, d)
        if A.is_square():
            assert K.index() == im
        assert cokernel_mod(A, d).order() * im == d ** A.rows


def test_kernel_over_integers():
    for A in matrices(2, 2, 2):
        K = kernel_mod(A, 0)
        for v in K.vectors:
            assert A @ v == (0, 0)
        rank = 2 - len([s for s in smith_normal_form(A).diagonal if s])
        assert K.rank == rank
        # every small integer kernel vector is an integer combination of the basis
        for v in itertools.product(range(-4, 5), repeat=2):
            if A @ v == (0, 0):
                assert K.contains(v)


def test_cokernel_example():
    C = cokernel_mod(IntMatrix.from_rows([[2]]), 6)
    assert C.invariant_factors == (2,)
    assert C.element((1,)).order() == 2
    F = FgAbelianGroup.free(2)
    assert F.element((3, 6)).divisibility() == 3
    assert FgAbelianGroup(IntMatrix.from_rows([[2], [0]])).element((1, 3)).divisibility() == 3


def random_unimodular(n, rng, steps=6):
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            rows[i] = [-x for x in rows[i]]
            continue
        k = rng.randint(-2, 2)
        rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
    return IntMatrix.from_rows(rows)


def brute_order(x, mods):
    # smallest k >= 1 with k x = 0 coordinatewise, or INFINITE
    if any(s == 0 and a for a, s in zip(x, mods)):
        return INFINITE
    k = 1
    while any((k * a) % s for a, s in zip(x, mods) if s):
        k += 1
    return k


def brute_divisibility(x, mods):
    free = [a for a, s in zip(x, mods) if s == 0]
    if not any(free):
        return 0
    return max(q for q in range(1, max(abs(a) for a in free) + 1)
               if all(a % q == 0 for a in free))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_order_and_divisibility_against_enumeration(n):
    rng = random.Random(n)
    factors = range(0, 13)
    for mods in itertools.product(factors, repeat=n):
        if n == 3 and rng.random() > 0.08:
            continue
        W = random_unimodular(n, rng)
        # same group, generators mixed by W: x in the diagonal model is W x here
        G = FgAbelianGroup(W @ IntMatrix.diag(list(mods)))
        box = [range(s) if s else range(-3, 4) for s in mods]
        for x in itertools.product(*box):
            g = G.element(W @ x)
            assert element_order(g) == brute_order(x, mods)
            assert divisibility_mod_torsion(g) == brute_divisibility(x, mods)


def test_group_element_algebra():
    G = cokernel_mod(IntMatrix.from_rows([[2, 0], [1, 3]]), 12)
    elems = list(G.elements())
    assert len(elems) == G.order() == len(set(elems))
    a, b = elems[3], elems[5]
    assert a + b - b == a
    assert -a + a == G.zero()
    assert 3 * a == a + a + a
    assert G.from_canonical(a.canonical) == a


def test_dimension_mismatch():
    G = FgAbelianGroup.free(2)
    with pytest.raises(DimensionError):
        G.element((1, 2, 3)).canonical
    with pytest.raises(InfiniteGroupError):
        list(G.elements())


def test_solve_integer_system():
    B = IntMatrix.from_rows([[2, 4], [6, 8]])
    x = solve_integer_system(B, (2, 6))
    assert B @ x == (2, 6)
    assert solve_integer_system(IntMatrix.from_rows([[2]]), (1,)) is None


def subgroup_order(gens, G):
    mods = G.invariants
    seen = {tuple(0 for _ in mods)}
    frontier = list(seen)
    canon = [G.canonical(g) for g in gens.columns()]
    while frontier:
        x = frontier.pop()
        for g in canon:
            y = tuple((a + b) % s for a, b, s in zip(x, g, mods))
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen)


def test_direct_summand_examples():
    Z6 = FgAbelianGroup.from_invariants([6])
    Z4 = FgAbelianGroup.from_invariants([4])
    assert is_direct_summand(IntMatrix.from_rows([[3]]), Z6)
    assert not is_direct_summand(IntMatrix.from_rows([[2]]), Z4)
    with pytest.raises(InfiniteGroupError):
        is_direct_summand(IntMatrix.from_rows([[1]]), FgAbelianGroup.free(1))


@pytest.mark.parametrize("mods", [(2,), (4,), (6,), (8,), (12,), (24,), (2, 2), (2, 4), (4, 4),
                                  (2, 6), (3, 6), (2, 8), (4, 8), (2, 2, 2), (2, 2, 4)])
def test_direct_summand_against_exhaustive_search(mods):
    G = FgAbelianGroup.from_invariants(mods)
    n = len(mods)
    rng = random.Random(sum(mods))
    cases = [IntMatrix.from_columns([c], n) for c in itertools.product(*(range(s) for s in mods))]
    for _ in range(40):
        cols = [tuple(rng.randrange(s) for s in mods) for _ in range(2)]
        cases.append(IntMatrix.from_columns(cols, n))
    for gens in cases:
        P = find_retraction(gens, G)
        assert (P is not None) == summand_brute(gens, G)
        if P is not None:
            assert is_retraction(P, gens, G)
            M = subgroup_order(gens, G)
            assert M * G.quotient(gens).order() == G.order()


def test_direct_summand_large_ambient():
    # (Z_24)^3, far past exhaustive search
    G = cokernel_mod(IntMatrix.zeros(3, 0), 24)
    gens = IntMatrix.from_columns([(2, 0, 0), (0, 12, 0)], 3)
    assert not is_direct_summand(gens, G)
    gens = IntMatrix.from_columns([(1, 2, 3), (0, 1, 5)], 3)
    P = find_retraction(gens, G)
    assert P is not None and is_retraction(P, gens, G)
