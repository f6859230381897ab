from fractions import Fraction

import pytest
import sympy

from froblat.budget import (BudgetInput, alpha_const, alpha_variants,
                            check_chain_nested, derive_chain,
                            eisenstein_budget, global_g, local_bound,
                            local_bound_telescoped, run_budget,
                            supergeneric_geometric_bound, threshold_A_n,
                            validate_hasse_budget)
from froblat.crystals import HILBERT_INERT_SSP, local_gram
from froblat.errors import ChainNotNested, InvalidParameter
from froblat.quadforms import IntLattice, local_density

HEAD = [[2, 0, -1, -1], [0, 2, -1, 0], [-1, -1, 6, -2], [-1, 0, -2, 18]]
LH = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 2, 1], [0, 0, 1, -6]]


def test_thresholds():
    assert [threshold_A_n(2, 5, n) for n in (0, 1, 2)] == [2, 12, 62]
    assert threshold_A_n(2, 5, -1) == 0
    # exact identity and the inequality the decay proofs rely on
    for A in range(1, 21):
        for p in (5, 7, 11, 13):
            for n in range(7):
                S = sum(p ** i for i in range(n + 1))
                assert threshold_A_n(A, p, n) == A * S + A // p
                lhs = Fraction(A) * (S + Fraction(1, p))
                assert lhs < p * (threshold_A_n(A, p, n) + 1)


def test_alpha_values():
    assert alpha_const(5) == Fraction(109, 120)
    assert alpha_const(7) == Fraction(265, 336)
    assert alpha_const(3) == Fraction(29, 24)
    assert alpha_const(3) > Fraction(11, 12)
    vals = [alpha_const(p) for p in sympy.primerange(5, 98)]
    assert all(v < Fraction(11, 12) for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_alpha_variants_thresholds():
    for p in sympy.primerange(5, 30):
        var = alpha_variants(p)
        assert var["supergeneric_inert"] < Fraction(11, 12)
        assert var["supergeneric_ramified"] < Fraction(11, 12)
        if p >= 7:
            assert var["superspecial_ramified"] < Fraction(11, 12)
    assert alpha_variants(5)["superspecial_ramified"] > Fraction(11, 12)


def test_eisenstein_budget_closed_forms():
    for p in (5, 7, 11):
        for A in (1, 2, 3):
            closed = eisenstein_budget("superspecial", A, p, "geometric")
            assert closed == Fraction(A, p - 1) * alpha_const(p)
            chain = [(1 if n == 0 else p ** (3 * n), p ** (3 * n + 1))
                     for n in range(14)]
            fin = eisenstein_budget("superspecial", A, p, chain)
            assert fin < closed
            assert closed - fin < Fraction(1, p ** 20)
            sg = eisenstein_budget("supergeneric", A, p, "geometric")
            assert sg == supergeneric_geometric_bound(A, p)


def test_budget_single_term_and_monotone():
    p, A = 5, 2
    single = eisenstein_budget("superspecial", A, p, [(1, None)])
    assert single == Fraction(A * (p + 2), 2 * p) * Fraction(1, p - 1)
    coarse = [(1, p), (p ** 3, p ** 4)]
    fine = [(1, p), (p ** 4, p ** 5)]
    assert eisenstein_budget("superspecial", A, p, fine) \
        <= eisenstein_budget("superspecial", A, p, coarse)


def test_local_bound_plug_in():
    tables = [([0, 0, 0, 2], None)]
    assert local_bound("superspecial", 2, 5, tables, 3) == Fraction(14, 5)
    assert local_bound("superspecial", 2, 5, tables, 1) == 0


def test_local_bound_dominates_telescoping():
    r01 = [0, 2, 4, 6]
    r02 = [0, 1, 2, 3]
    r11 = [0, 1, 1, 2]
    r12 = [0, 0, 1, 1]
    tables = [(r01, r02), (r11, r12)]
    for m in (1, 2, 3):
        lb = local_bound("superspecial", 2, 5, tables, m)
        tb = local_bound_telescoped(2, 5, 1, tables, m)
        assert lb >= tb


def test_global_g_validation():
    from froblat.eisenstein import q_L_hilbert
    q = q_L_hilbert(IntLattice(LH), 7)
    lo, hi = global_g(2, 5, q)
    assert 0 < lo <= hi
    with pytest.raises(InvalidParameter):
        global_g(0, 5, q)
    assert validate_hasse_budget([2, 2, 4], 5, 2)
    assert not validate_hasse_budget([2, 2], 5, 2)


def test_chain_derivation_and_nesting():
    chain, basis = derive_chain(HEAD, 5, 3)
    for n, (g1, g2) in enumerate(chain):
        L1, L2 = IntLattice(g1), IntLattice(g2)
        assert L1.is_positive_definite() and L2.is_positive_definite()
        assert L1.det() == 325 * 5 ** (6 * n)
        assert L2.det() == 325 * 5 ** (6 * n + 2)
    u1, u2, u3, u4 = basis
    ident = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    gwb = [(HEAD, ident)]
    for n in range(1, 4):
        b = [[5 ** n * x for x in u1], [5 ** n * x for x in u2],
             [5 ** n * x for x in u3], list(u4)]
        gwb.append((chain[n][0], b))
    assert check_chain_nested(gwb) == [5 ** 3, 5 ** 6, 5 ** 9]
    bad = [(HEAD, ident), (HEAD, [[1, 0, 0, 0], [0, 1, 0, 0],
                                  [0, 0, 1, 0], [0, 0, 0, Fraction(1, 2)]])]
    with pytest.raises(ChainNotNested):
        check_chain_nested([(HEAD, ident),
                            (HEAD, [[Fraction(1, 5), 0, 0, 0],
                                    [0, 1, 0, 0], [0, 0, 1, 0],
                                    [0, 0, 0, 1]])])


def test_chain_head_completions():
    """The fixture lattice lies in the forced genus at 2, 5, and 13."""
    head = IntLattice(HEAD, "head")
    local5 = IntLattice(local_gram(HILBERT_INERT_SSP, 5, 2), "model5")
    lh = IntLattice(LH, "LH")
    for m in range(1, 31):
        assert local_density(5, head, m) == local_density(5, local5, m)
        assert local_density(13, head, m) == local_density(13, lh, m)
        assert local_density(2, head, m) == local_density(2, lh, m)
    assert head.det() == 325 and head.is_positive_definite()


def test_run_budget_small():
    chain, _ = derive_chain(HEAD, 5, 2)
    inp = BudgetInput(p=5, A=2, case="superspecial", family="hilbert",
                      global_gram=LH, chain=chain, t_kind="hilbert",
                      t_params={"N": 0, "C": 1, "disc_F": 13, "det2": 26},
                      M=120)
    rep = run_budget(inp)
    assert rep.T
    assert rep.ratio_interval[1] <= Fraction(11, 12)
    # excluding m only removes local mass
    sm = [rep.per_m[0]["m"]]
    inp2 = BudgetInput(p=5, A=2, case="superspecial", family="hilbert",
                       global_gram=LH, chain=chain, t_kind="hilbert",
                       t_params={"N": 0, "C": 1, "disc_F": 13, "det2": 26},
                       M=120, exclude=sm)
    rep2 = run_budget(inp2)
    assert rep2.excluded == sm
    assert rep2.local_sum <= rep.local_sum


def test_run_budget_validates_partition():
    chain, _ = derive_chain(HEAD, 5, 1)
    inp = BudgetInput(p=5, A=2, case="superspecial", family="hilbert",
                      global_gram=LH, chain=chain, t_kind="square",
                      t_params={"D": 1}, M=50, omega_C=Fraction(1),
                      A_partition=[2, 1])
    with pytest.raises(InvalidParameter):
        run_budget(inp)
    inp.A_partition = [2, 2]
    rep = run_budget(inp)
    assert rep.T == [4, 9, 49]
