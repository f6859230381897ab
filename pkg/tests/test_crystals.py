import pytest

from froblat.crystals import (HILBERT_INERT_SG, HILBERT_INERT_SSP,
                              HILBERT_SPLIT, SIEGEL_SG, SIEGEL_SSP,
                              CrystalModel, FormalCurve, build_model,
                              check_DR, check_DvR, decay_index, f_infinity,
                              find_decaying_submodule, local_gram)
from froblat.errors import (InvalidParameter, NotGenericallyOrdinary,
                            ThresholdExceedsTruncation)
from froblat.padics import INF, PAdicParams


@pytest.fixture(scope="module")
def split_model():
    return build_model(HILBERT_SPLIT, 5, 2, 10)


@pytest.fixture(scope="module")
def split_xy(split_model):
    curve = FormalCurve(x={1: 1}, y={1: 1}, nt=63)
    return curve, f_infinity(split_model, curve)


def test_case_parameter_dichotomy():
    # superspecial requires sigma^2(c) = c; supergeneric the opposite
    with pytest.raises(InvalidParameter):
        build_model(SIEGEL_SG, 5, 2, 8, c_residue=(2, 1))  # c in F_25
    P4 = PAdicParams(5, 4, 8)
    rf = P4.residue_field
    quartic = next(e for e in rf.elements()
                   if not rf.is_zero(e) and rf.pow(e, 25) != e)
    with pytest.raises(InvalidParameter):
        CrystalModel(SIEGEL_SSP, P4, c_residue=quartic)
    CrystalModel(SIEGEL_SG, P4, c_residue=quartic)  # accepted
    with pytest.raises(InvalidParameter):
        build_model(HILBERT_SPLIT, 5, 2, 8, c_residue=3)


def test_siegel_template_entries():
    model = build_model(SIEGEL_SSP, 5, 2, 8, c_residue=2)
    curve = FormalCurve(x={1: 1}, y={1: 1}, z={1: 1}, nt=20)
    F = model.perturbation_matrix(curve)
    # top-left entry is (x y + z^2 / 4 eps) / 2p: t-adic order 2, val -1
    e00 = F.entries[0][0]
    assert min(e00.coeffs) == 2
    assert e00.coeffs[2].val == -1
    # split case: entry (1,3) is (x + y)/2p
    sp = build_model(HILBERT_SPLIT, 5, 2, 8)
    Fs = sp.perturbation_matrix(FormalCurve(x={1: 1}, y={2: 1}, nt=20))
    e02 = Fs.entries[0][2]
    assert sorted(e02.coeffs) == [1, 2]
    assert e02.coeffs[1].val == -1


def test_non_ordinary_valuations():
    m = build_model(SIEGEL_SSP, 5, 2, 8, c_residue=2)
    assert m.non_ordinary_valuation(
        FormalCurve(x={1: 1}, y={2: 1}, nt=30)) == 3
    hs = build_model(HILBERT_SPLIT, 5, 2, 8)
    assert hs.non_ordinary_valuation(
        FormalCurve(x={1: 1}, y={1: 1}, nt=30)) == 2


def test_cancellation_raises_when_total():
    m = build_model(SIEGEL_SSP, 5, 2, 8, c_residue=2)
    rf = m.params.residue_field
    inv4eps = rf.inv(rf.element(4 * m.params.eps_int))
    beta = rf.neg(inv4eps)
    with pytest.raises(NotGenericallyOrdinary):
        m.non_ordinary_valuation(
            FormalCurve(x={1: 1}, y={1: beta}, z={1: 1}, nt=30))
    # with a higher-order term the valuation jumps past 2
    A = m.non_ordinary_valuation(
        FormalCurve(x={1: 1}, y={1: beta, 7: 1}, z={1: 1}, nt=30))
    assert A == 8 > 2


def test_degenerate_curve():
    m = build_model(SIEGEL_SSP, 5, 2, 8, c_residue=2)
    with pytest.raises(NotGenericallyOrdinary):
        m.non_ordinary_valuation(FormalCurve(nt=20))
    finf = f_infinity(m, FormalCurve(nt=20))
    for i in range(5):
        for j in range(5):
            if i == j:
                assert list(finf.entries[i][j].coeffs) == [0]
            else:
                assert finf.entries[i][j].coeffs == {}


def test_split_decay_indices(split_xy):
    curve, finf = split_xy
    for n, expect in [(0, 2), (1, 12), (2, 62)]:
        idx, sound = decay_index(finf, [1, 0, 0, 0], n)
        assert sound and idx == expect
    for n, expect in [(0, 1), (1, 7), (2, 37)]:
        idx, _ = decay_index(finf, [0, 0, 1, 0], n)
        assert idx == expect


def test_fourth_vector_is_killed_when_x_equals_y(split_xy):
    _, finf = split_xy
    idx, sound = decay_index(finf, [0, 0, 0, 1], 0)
    assert idx == INF and sound


def test_scaling_shifts_depth(split_xy):
    _, finf = split_xy
    i1, _ = decay_index(finf, [5, 0, 0, 0], 1)
    i2, _ = decay_index(finf, [1, 0, 0, 0], 2)
    assert i1 == i2


def test_check_DR_and_DvR(split_model, split_xy):
    curve, finf = split_xy
    A = split_model.non_ordinary_valuation(curve)
    assert check_DR(finf, [1, 0, 0, 0], A, 2)
    assert check_DR(finf, [0, 1, 0, 0], A, 2)
    assert not check_DR(finf, [0, 0, 0, 1], A, 2)
    assert check_DvR(finf, [0, 0, 1, 0], A, 1, 2)
    with pytest.raises(InvalidParameter):
        check_DvR(finf, [0, 0, 1, 0], A, 2, 2)  # a_dvr > A/2
    with pytest.raises(ThresholdExceedsTruncation):
        check_DR(finf, [1, 0, 0, 0], A, 3)


def test_search_returns_asserted_span(split_model, split_xy):
    curve, finf = split_xy
    basis, witness = find_decaying_submodule(split_model, finf, 2, n_max=2)
    assert basis == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
    assert witness == [0, 0, 1, 0]


def test_precision_budget_enforced(split_model):
    curve = FormalCurve(x={1: 1}, y={1: 1}, nt=63)
    small = build_model(HILBERT_SPLIT, 5, 2, 4)
    with pytest.raises(InvalidParameter):
        f_infinity(small, curve, n_max=2)


def test_local_gram_shapes():
    for case, rank in [(HILBERT_INERT_SSP, 4), (HILBERT_SPLIT, 4),
                       (HILBERT_INERT_SG, 4), (SIEGEL_SSP, 5),
                       (SIEGEL_SG, 5)]:
        g = local_gram(case, 5, 2)
        assert len(g) == rank
        assert all(g[i][j] == g[j][i] for i in range(rank)
                   for j in range(rank))
        assert all(g[i][i] % 2 == 0 for i in range(rank))


def test_supergeneric_unit_a():
    P4 = PAdicParams(5, 4, 8)
    rf = P4.residue_field
    quartic = next(e for e in rf.elements()
                   if not rf.is_zero(e) and rf.pow(e, 25) != e)
    m = CrystalModel(SIEGEL_SG, P4, c_residue=quartic)
    assert m.a_frob.val == 0


def test_column_valuations_bounded_by_factor_count(split_xy):
    """Each product factor contributes at most one inverse power of p."""
    from froblat.series import column_valuation_profile
    _, finf = split_xy
    K = 0
    while 5 ** (K + 1) <= finf.nt:
        K += 1
    for i in range(4):
        w = [1 if j == i else 0 for j in range(4)]
        prof = column_valuation_profile(finf, w)
        finite = [v for v in prof.minvals.values()]
        assert all(v >= -(K + 1) for v in finite)


def test_decay_index_monotone_in_depth(split_xy):
    from froblat.crystals import decay_index
    _, finf = split_xy
    for w in ([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 2, 0, 0]):
        prev = -1
        for n in range(3):
            idx, _ = decay_index(finf, w, n)
            assert idx >= prev
            prev = idx
