from fractions import Fraction
import random

from hypothesis import given, settings, strategies as st
import pytest

from cellperv.linalg import (ChainMap, CochainComplex, ComplexError, DoubleComplex, RatMatrix,
                             cohomology, cone, fiber, rank, rank_kernel, rref, total_complex)

from complexes import cone_les_exact, rand_matrix, random_chain_map, random_complex


# -- rank and kernel ------------------------------------------------------------


def test_identity_rank():
    r, k = rank_kernel(RatMatrix.identity(2))
    assert r == 2 and k.ncols == 0


def test_row_of_ones_kernel():
    r, k = rank_kernel(RatMatrix.from_dense([[1, 1]]))
    assert r == 1 and k.ncols == 1
    v = [k[0, 0], k[1, 0]]
    assert v[0] == -v[1] != 0


def test_rank_three_product():
    rng = random.Random(7)
    for _ in range(10):
        a, b = rand_matrix(rng, 5, 3), rand_matrix(rng, 3, 7)
        if rank(a) < 3 or rank(b) < 3:
            continue
        m = a @ b
        r, k = rank_kernel(m)
        assert r == 3 and k.ncols == 4
        assert (m @ k).is_zero()
        assert rank(k) == 4


def test_rref_pivots():
    rows, piv = rref(RatMatrix.from_dense([[0, 2, 4], [1, 1, 1], [1, 2, 3]]))
    assert piv == [0, 1]
    assert rows[0] == {0: 1, 2: -1} and rows[1] == {1: 1, 2: 2}


def test_fractions_stay_exact():
    m = RatMatrix.from_dense([[Fraction(1, 3), Fraction(1, 6)], [Fraction(2, 3), Fraction(1, 3)]])
    assert rank(m) == 1
    assert m[0, 0] == Fraction(1, 3)
    assert RatMatrix.from_dense([[Fraction(4, 2)]])[0, 0] == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 10**6))
def test_rank_nullity(r, c, seed):
    m = rand_matrix(random.Random(seed), r, c, -2, 2)
    rk, k = rank_kernel(m)
    assert rk + k.ncols == c
    assert (m @ k).is_zero()
    assert rank(k) == k.ncols
    assert rank(m.T) == rk


# -- complexes ------------------------------------------------------------------


def test_zero_complex_cohomology():
    assert cohomology(CochainComplex.zero()).is_zero()


def test_iso_differential_acyclic():
    c = CochainComplex({0: 1, 1: 1}, {0: RatMatrix.identity(1)})
    assert cohomology(c).is_zero()


def test_circle_nerve_cohomology():
    # vertices v1, v2 and edges e1, e2, both edges joining v1 and v2
    d = RatMatrix.from_dense([[-1, 1], [-1, 1]])
    h = cohomology(CochainComplex({0: 2, 1: 2}, {0: d}))
    assert h.dims == {0: 1, 1: 1}


def test_d_squared_detected():
    with pytest.raises(ComplexError):
        CochainComplex({0: 1, 1: 1, 2: 1}, {0: RatMatrix.identity(1), 1: RatMatrix.identity(1)})


def test_shift_sign_and_degree():
    c = CochainComplex({0: 1, 1: 1}, {0: RatMatrix.identity(1)})
    s = c.shift(1)
    assert s.dims == {-1: 1, 0: 1}
    assert s.d(-1)[0, 0] == -1
    assert s.shift(-1) == c


def test_cohomology_representatives_are_cocycles():
    d = RatMatrix.from_dense([[-1, 1], [-1, 1]])
    c = CochainComplex({0: 2, 1: 2}, {0: d})
    h = cohomology(c, representatives=True)
    rep0 = h.representatives[0]
    assert (c.d(0) @ rep0).is_zero() and rep0.ncols == 1


# -- cones ------------------------------------------------------------------------


def circle():
    return CochainComplex({0: 2, 1: 2}, {0: RatMatrix.from_dense([[-1, 1], [-1, 1]])})


def test_cone_of_identity_acyclic():
    assert cohomology(cone(ChainMap.identity(circle()))).is_zero()


def test_cone_of_zero_splits():
    c, d = circle(), CochainComplex.concentrated(1, 2)
    h = cohomology(cone(ChainMap.zero(c, d)))
    hc, hd = cohomology(c), cohomology(d)
    for k in range(-3, 4):
        assert h[k] == hd[k] + hc[k + 1]


def test_cone_of_scalar_two_acyclic():
    q = CochainComplex.concentrated(0)
    f = ChainMap(q, q, {0: RatMatrix.identity(1, 2)})
    assert cohomology(cone(f)).is_zero()


def test_fiber_is_shifted_cone():
    f = ChainMap.zero(circle(), CochainComplex.concentrated(0))
    assert fiber(f) == cone(f).shift(-1)


def test_chain_map_check():
    c = circle()
    with pytest.raises(ComplexError):
        ChainMap(c, c, {0: RatMatrix.identity(2)})


# -- total complex ------------------------------------------------------------------


def test_total_of_column():
    dv = {(0, 0): RatMatrix.identity(1)}
    t = total_complex(DoubleComplex({(0, 0): 1, (0, 1): 1}, {}, dv))
    assert t.dims == {0: 1, 1: 1} and t.d(0) == RatMatrix.identity(1)


def test_total_of_row():
    dh = {(0, 0): RatMatrix.identity(1)}
    t = total_complex(DoubleComplex({(0, 0): 1, (1, 0): 1}, dh, {}))
    assert t.dims == {0: 1, 1: 1} and t.d(0) == RatMatrix.identity(1)


def test_total_of_square_acyclic():
    one = RatMatrix.identity(1)
    dims = {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}
    dh = {(0, 0): one, (0, 1): one}
    dv = {(0, 0): one, (1, 0): one}
    t = total_complex(DoubleComplex(dims, dh, dv))
    assert t.total_dim() == 4
    assert cohomology(t).is_zero()


# -- properties on random complexes ---------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_random_complex_invariants(seed):
    rng = random.Random(seed)
    c = random_complex(rng)
    c.check()
    h = cohomology(c)
    assert sum((-1) ** k * v for k, v in h.dims.items()) == c.euler_characteristic()
    # change of basis in every degree leaves H unchanged
    bases = {}
    for k, n in c.dims.items():
        while True:
            g = rand_matrix(rng, n, n, -2, 2)
            if rank(g) == n:
                break
        bases[k] = g
    inv = {}
    for k, g in bases.items():
        n = g.nrows
        aug = RatMatrix.from_dense([list(g.to_dense()[i]) + [1 if j == i else 0 for j in range(n)]
                                    for i in range(n)], ncols=2 * n)
        rows, _ = rref(aug)
        inv[k] = RatMatrix(n, n, [{j - n: v for j, v in r.items() if j >= n} for r in rows])
    moved = CochainComplex(c.dims, {k: bases[k + 1] @ d @ inv[k] for k, d in c.diffs.items()})
    assert cohomology(moved) == h
    assert cohomology(cone(ChainMap(c, moved, {k: bases[k] for k in c.dims}))).is_zero()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_cone_long_exact_sequence(seed):
    rng = random.Random(seed)
    c, d = random_complex(rng), random_complex(rng)
    f = random_chain_map(rng, c, d)
    assert cone(f).total_dim() <= 40
    assert cone_les_exact(f)
    assert cone_les_exact(ChainMap.zero(d, c))
    assert cone_les_exact(ChainMap.identity(c))
