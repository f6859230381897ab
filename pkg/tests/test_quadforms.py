import random
from fractions import Fraction

import pytest

from froblat.crystals import (HILBERT_INERT_SG, HILBERT_INERT_SSP,
                              HILBERT_SPLIT, SIEGEL_SG, SIEGEL_SSP,
                              local_gram)
from froblat.errors import BadDiscriminant, UnsupportedValuation
from froblat.padics import smallest_nonresidue
from froblat.quadforms import (IntLattice, diagonalize_Zp, hanke_density,
                               kronecker, local_density, sigma_s,
                               _vl_fraction)


def test_kronecker_values():
    assert kronecker(5, 1) == 1
    assert kronecker(-4, 3) == -1   # Legendre(-4|3) = (2/3)^2 (-1/3)
    assert kronecker(12, 2) == 0
    assert kronecker(13, 17) == 1
    with pytest.raises(BadDiscriminant):
        kronecker(3, 5)
    with pytest.raises(BadDiscriminant):
        kronecker(0, 5)


def test_kronecker_multiplicative():
    rng = random.Random(2)
    for _ in range(100):
        D = rng.choice([-4, -8, 5, 12, 13, -20, 28])
        a, b = rng.randint(1, 60), rng.randint(1, 60)
        assert kronecker(D, a * b) == kronecker(D, a) * kronecker(D, b)


def test_sigma_s():
    assert sigma_s(1, -1) == 1
    assert sigma_s(4, -3) == Fraction(73, 64)
    for q in (3, 7, 11):
        chi = lambda d: kronecker(-4, d)
        assert sigma_s(q, -1, chi) == 1 + Fraction(kronecker(-4, q), q)


def test_two_squares_density():
    L = IntLattice([[2, 0], [0, 2]])
    assert local_density(5, L, 1) == Fraction(4, 5)
    # brute oracle mod 5
    count = sum(1 for x in range(5) for y in range(5)
                if (x * x + y * y) % 5 == 1)
    assert count == 4


GOLDEN = [
    (HILBERT_INERT_SSP, 0, lambda p: 1 - Fraction(1, p)),
    (HILBERT_SPLIT, 0, lambda p: 1 + Fraction(1, p)),
    (HILBERT_INERT_SG, 0, lambda p: Fraction(0)),
    (SIEGEL_SSP, 1, lambda p: 1 + Fraction(1, p ** 3)),
    (SIEGEL_SG, 1, lambda p: 1 + Fraction(1, p ** 2)),
]


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_golden_densities(p):
    eps = smallest_nonresidue(p)
    for case, vp, expect in GOLDEN:
        lat = IntLattice(local_gram(case, p, eps), case)
        seen = 0
        m = 0
        while seen < 20:
            m += 1
            v, mm = 0, m
            while mm % p == 0:
                mm //= p
                v += 1
            if v != vp:
                continue
            seen += 1
            assert local_density(p, lat, m) == expect(p), (case, p, m)
            assert hanke_density(p, lat, m) == expect(p), (case, p, m)


def test_siegel_sg_unit_values(p=5):
    lat = IntLattice(local_gram(SIEGEL_SG, p, smallest_nonresidue(p)))
    vals = {local_density(p, lat, m) for m in range(1, 40) if m % p}
    assert vals == {Fraction(0), Fraction(2)}


def test_hanke_matches_brute_force():
    rng = random.Random(11)
    checked = 0
    while checked < 200:
        p = rng.choice([3, 5, 7, 11, 13])
        rk = rng.randint(2, 5)
        G = [[0] * rk for _ in range(rk)]
        for i in range(rk):
            G[i][i] = 2 * rng.choice([1, 2, 3, p, 2 * p, 3 * p]) \
                * rng.choice([1, -1])
            for j in range(i):
                G[i][j] = G[j][i] = rng.randint(-2, 2)
        lat = IntLattice(G)
        if lat.det() == 0:
            continue
        m = rng.randint(1, 200)
        v, mm = 0, m
        while mm % p == 0:
            mm //= p
            v += 1
        if v > 1:
            continue
        assert hanke_density(p, lat, m) == local_density(p, lat, m), (G, p, m)
        checked += 1


def test_unsupported_valuation():
    lat = IntLattice(local_gram(SIEGEL_SSP, 5, 2))
    with pytest.raises(UnsupportedValuation):
        hanke_density(5, lat, 25)


def test_stabilization():
    lat = IntLattice([[2, 1, 0], [1, 4, 1], [0, 1, 6]])
    for ell in (2, 3, 5):
        for m in (1, 4, 6, 18):
            v, mm = 0, 2 * m
            while mm % ell == 0:
                mm //= ell
                v += 1
            a0 = 1 + 2 * v
            assert local_density(ell, lat, m, a0) \
                == local_density(ell, lat, m, a0 + 2)


def test_diagonalize_hyperbolic():
    U = IntLattice([[0, 1], [1, 0]], "U")
    loc = diagonalize_Zp(U, 5)
    vals = sorted(_vl_fraction(a, 5) for a in loc.diag)
    assert vals == [0, 0]
    # discriminant class preserved: det(q-matrix) = -1/4, square class of
    # -1 mod squares; product of diagonal entries has the same class
    prod = loc.diag[0] * loc.diag[1]
    num = prod.numerator * prod.denominator
    assert pow((-4 * num) % 5, (5 - 1) // 2, 5) == 1  # -4 num a square


def test_diagonalize_fixed_point():
    lat = IntLattice([[2, 0], [0, -6]])
    loc = diagonalize_Zp(lat, 5)
    assert sorted(loc.diag) == sorted([Fraction(1), Fraction(-3)])


def test_siegel_ssp_diag_shape():
    lat = IntLattice(local_gram(SIEGEL_SSP, 5, 2))
    loc = diagonalize_Zp(lat, 5)
    vals = sorted(_vl_fraction(a, 5) for a in loc.diag)
    assert vals == [0, 0, 0, 1, 1]


def _index_p_sublattice(gram, p, k):
    """Scale the k-th basis vector by p."""
    n = len(gram)
    out = [[gram[i][j] for j in range(n)] for i in range(n)]
    for j in range(n):
        out[k][j] *= p
        out[j][k] *= p
    return out


@pytest.mark.parametrize("p", [5, 7])
def test_sublattice_density_bounds(p):
    eps = smallest_nonresidue(p)
    base = local_gram(SIEGEL_SSP, p, eps)
    rng = random.Random(p)
    for _ in range(15):
        g = base
        for _ in range(rng.randint(1, 3)):
            g = _index_p_sublattice(g, p, rng.randrange(5))
        lat = IntLattice(g)
        m = rng.randint(1, 60)
        if m % p:
            assert local_density(p, lat, m) <= 2
        elif (m // p) % p:
            assert local_density(p, lat, m) <= 2 + 2 * p
    # superspecial with index exactly p
    g1 = _index_p_sublattice(base, p, 2)
    lat1 = IntLattice(g1)
    for m in (p, 2 * p, 3 * p):
        if (m // p) % p:
            assert local_density(p, lat1, m) <= 4
