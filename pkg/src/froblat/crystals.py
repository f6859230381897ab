"""Frobenius perturbation matrices at supersingular points and decay checks.

Five explicit models are supported, distinguished by the ambient family
(Hilbert-type rank 4 or Siegel-type rank 5), the splitting behaviour, and
whether the point is superspecial (sigma^2 fixes the Teichmuller parameter
c) or supergeneric (it does not).  Each model knows its perturbation
matrix F as a function of a formal curve (x(t), y(t), z(t)) with
Teichmuller coefficients, the local equation of the non-ordinary locus,
and the Gram matrix of the quadratic form on the special-endomorphism
lattice at p.

Decay of a vector w is measured through the infinite product
F_inf = prod_i (1 + sigma_t^i(F)): w decays rapidly when, for every n up
to n_max, some coefficient of t^k, k <= A(1 + p + ... + p^n), of
F_inf * w has valuation below -n.  Very rapid decay uses the shifted
thresholds A(1 + ... + p^(n-1)) + a*p^n with a <= A/2.
"""

import itertools
from fractions import Fraction

from .errors import (Indeterminate, InvalidParameter, NotFound,
                     NotGenericallyOrdinary, ThresholdExceedsTruncation)
from .padics import INF, PAdicParams
from .series import (MatSeries, TruncSeries, column_valuation_profile,
                     truncated_product)

HILBERT_INERT_SSP = "hilbert-inert-superspecial"
HILBERT_INERT_SG = "hilbert-inert-supergeneric"
HILBERT_SPLIT = "hilbert-split"
SIEGEL_SSP = "siegel-superspecial"
SIEGEL_SG = "siegel-supergeneric"

CASES = (HILBERT_INERT_SSP, HILBERT_INERT_SG, HILBERT_SPLIT,
         SIEGEL_SSP, SIEGEL_SG)

_RANK = {HILBERT_INERT_SSP: 4, HILBERT_INERT_SG: 4, HILBERT_SPLIT: 4,
         SIEGEL_SSP: 5, SIEGEL_SG: 5}


class FormalCurve:
    """A map Spf k[[t]] -> Spf k[[x,y,z]] with Teichmuller coefficients.

    Coefficients are residue-field elements; they are lifted to their
    Teichmuller representatives when series are materialized, which makes
    the coefficient Frobenius compatible with substitution of t^p.
    The z component is absent for Hilbert models.
    """

    def __init__(self, x=None, y=None, z=None, nt=60):
        self.x = dict(x or {})
        self.y = dict(y or {})
        self.z = dict(z or {})
        self.nt = nt
        for name, comp in (("x", self.x), ("y", self.y), ("z", self.z)):
            for e in comp:
                if e < 1:
                    raise InvalidParameter(
                        f"{name}(t) must vanish at t = 0 (exponent {e})")

    def is_trivial(self):
        return not (self.x or self.y or self.z)

    def component_series(self, params, which):
        comp = {"x": self.x, "y": self.y, "z": self.z}[which]
        coeffs = {}
        for e, r in comp.items():
            if e <= self.nt:
                lift = params.teichmuller(r)
                if not lift.is_zero():
                    coeffs[e] = lift
        return TruncSeries(params, self.nt, coeffs)

    def residue_component(self, rf, which):
        comp = {"x": self.x, "y": self.y, "z": self.z}[which]
        return {e: rf.element(r) for e, r in comp.items()
                if not rf.is_zero(rf.element(r))}


class CrystalModel:
    """One Frobenius model: parameters, matrix template, local Gram."""

    def __init__(self, case, params, c_residue=None):
        if case not in CASES:
            raise InvalidParameter(f"unknown case {case!r}")
        self.case = case
        self.params = params
        self.rank = _RANK[case]
        if params.d % 2 != 0:
            raise InvalidParameter(
                "models need lambda in W(F_{p^2}); use even degree d")
        self.eps = params.eps()
        self.lam = params.lam()
        rf = params.residue_field
        self.c = None
        self.a_frob = None
        if case == HILBERT_SPLIT:
            if c_residue is not None:
                raise InvalidParameter("split case carries no parameter c")
        else:
            if c_residue is None:
                raise InvalidParameter(f"case {case} needs the parameter c")
            cbar = rf.element(c_residue)
            fixed = rf.pow(cbar, params.p ** 2) == cbar
            superspecial = case in (HILBERT_INERT_SSP, SIEGEL_SSP)
            if superspecial and not fixed:
                raise InvalidParameter(
                    "superspecial case needs sigma^2(c) = c")
            if not superspecial and fixed:
                raise InvalidParameter(
                    "supergeneric case needs sigma^2(c) != c")
            self.c = params.teichmuller(cbar)
            if not superspecial:
                cm1 = self.c.frobenius_power(params.d - 1)
                self.a_frob = self.c.frobenius() - cm1
                v = self.a_frob.maybe_val()
                if v != 0:
                    raise InvalidParameter(
                        "supergeneric parameter must have unit a = "
                        "sigma(c) - sigma^(-1)(c)")

    # -- matrix template -------------------------------------------------
    def perturbation_matrix(self, curve):
        """The matrix F with Frob = (I + F) o sigma, specialized at the curve."""
        params = self.params
        nt = curve.nt
        X = curve.component_series(params, "x")
        Y = curve.component_series(params, "y")
        Z = curve.component_series(params, "z")
        lam = self.lam
        lam_inv = lam.inv()
        half = params.from_rational(Fraction(1, 2))
        half_p = params.from_rational(Fraction(1, 2 * params.p))
        inv2eps = (self.eps * params.from_int(2)).inv()
        zero = TruncSeries.zero(params, nt)

        def S(series, scalar):
            return series.scale(scalar)

        if self.case == HILBERT_INERT_SSP:
            XY = X * Y
            rows = [
                [S(XY, -half_p), S(XY, half_p * lam), S(X, half_p),
                 S(Y, half_p)],
                [S(XY, -half_p * lam_inv), S(XY, half_p),
                 S(X, half_p * lam_inv), S(Y, half_p * lam_inv)],
                [S(Y, -params.one()), S(Y, lam), zero, zero],
                [S(X, -params.one()), S(X, lam), zero, zero],
            ]
            return MatSeries(params, nt, rows)

        if self.case == HILBERT_SPLIT:
            XY = X * Y
            Spl = X + Y
            Dif = X - Y
            rows = [
                [S(XY, half_p), S(XY, -half_p * lam), S(Spl, half_p),
                 S(Dif, -half_p * lam)],
                [S(XY, half_p * lam_inv), S(XY, -half_p),
                 S(Spl, half_p * lam_inv), S(Dif, -half_p)],
                [S(Spl, half), S(Spl, -half * lam), zero, zero],
                [S(Dif, half * lam_inv), S(Dif, -half), zero, zero],
            ]
            return MatSeries(params, nt, rows)

        if self.case == HILBERT_INERT_SG:
            # F = (y/p) A + x B with B = B0 + (y/p) B1
            c = self.c
            c2 = c * c
            Yp = Y.scale(params.from_rational(Fraction(1, params.p)))
            XYp = X * Yp
            A = [
                [-c, -c2, -(lam * c2), params.zero()],
                [half, params.zero(), lam * c, half * c2],
                [half * lam_inv, c * lam_inv, params.zero(),
                 -(half * c2 * lam_inv)],
                [params.zero(), -params.one(), lam, c],
            ]
            B0 = [
                [params.zero(), -params.one(), lam, params.zero()],
                [params.zero(), params.zero(), params.zero(), half],
                [params.zero(), params.zero(), params.zero(),
                 half * lam_inv],
                [params.zero()] * 4,
            ]
            B1 = [
                [params.zero(), c, lam * c, -c2],
                [params.zero(), -half, half * lam, half * c],
                [params.zero(), -(half * lam_inv), half,
                 half * c * lam_inv],
                [params.zero()] * 4,
            ]
            rows = []
            for i in range(4):
                row = []
                for j in range(4):
                    acc = S(Yp, A[i][j]) + S(X, B0[i][j]) + S(XYp, B1[i][j])
                    row.append(acc)
                rows.append(row)
            return MatSeries(params, nt, rows)

        if self.case == SIEGEL_SSP:
            Q = X * Y + (Z * Z).scale(inv2eps * half)
            rows = [
                [S(Q, half_p), S(Q, -half_p * lam_inv),
                 S(X, half_p * lam_inv), S(Y, half_p * lam_inv),
                 S(Z, half_p * lam_inv)],
                [S(Q, half_p * lam), S(Q, -half_p), S(X, half_p),
                 S(Y, half_p), S(Z, half_p)],
                [S(Y, lam), S(Y, -params.one()), zero, zero, zero],
                [S(X, lam), S(X, -params.one()), zero, zero, zero],
                [S(Z, lam * inv2eps), S(Z, -inv2eps), zero, zero, zero],
            ]
            return MatSeries(params, nt, rows)

        # SIEGEL_SG: F = (y/p) A + (Q/p) B + x C + z D
        c = self.c
        c2 = c * c
        pinv = params.from_rational(Fraction(1, params.p))
        Yp = Y.scale(pinv)
        Qp = (X * Y + (Z * Z).scale(inv2eps * half)).scale(pinv)
        A = [
            [params.zero(), c * lam, half, half * c2, params.zero()],
            [c * lam_inv, params.zero(), half * lam_inv,
             -(half * c2 * lam_inv), params.zero()],
            [-c2, -(lam * c2), -c, params.zero(), params.zero()],
            [-params.one(), lam, params.zero(), c, params.zero()],
            [params.zero()] * 5,
        ]
        B = [
            [-half, half * lam, params.zero(), half * c, params.zero()],
            [-(half * lam_inv), half, params.zero(),
             half * c * lam_inv, params.zero()],
            [c, -(c * lam), params.zero(), -c2, params.zero()],
            [params.zero()] * 5,
            [params.zero()] * 5,
        ]
        C = [
            [params.zero(), params.zero(), params.zero(), half,
             params.zero()],
            [params.zero(), params.zero(), params.zero(),
             half * lam_inv, params.zero()],
            [-params.one(), lam, params.zero(), params.zero(),
             params.zero()],
            [params.zero()] * 5,
            [params.zero()] * 5,
        ]
        D = [
            [params.zero(), params.zero(), params.zero(), params.zero(),
             half_p],
            [params.zero(), params.zero(), params.zero(), params.zero(),
             half_p * lam_inv],
            [params.zero(), params.zero(), params.zero(), params.zero(),
             -(c * pinv)],
            [params.zero()] * 5,
            [-(half * self.eps.inv()), lam * half * self.eps.inv(),
             params.zero(), c * half * self.eps.inv(), params.zero()],
        ]
        rows = []
        for i in range(5):
            row = []
            for j in range(5):
                acc = (S(Yp, A[i][j]) + S(Qp, B[i][j]) + S(X, C[i][j])
                       + S(Z, D[i][j]))
                row.append(acc)
            rows.append(row)
        return MatSeries(params, nt, rows)

    # -- non-ordinary locus ----------------------------------------------
    def non_ordinary_valuation(self, curve):
        """t-adic order of the mod-p equation of the non-ordinary locus."""
        rf = self.params.residue_field
        x = curve.residue_component(rf, "x")
        y = curve.residue_component(rf, "y")
        z = curve.residue_component(rf, "z")
        nt = curve.nt

        def conv(a, b):
            out = {}
            for i, ai in a.items():
                for j, bj in b.items():
                    k = i + j
                    if k > nt:
                        continue
                    s = rf.add(out.get(k, rf.element(0)), rf.mul(ai, bj))
                    if rf.is_zero(s):
                        out.pop(k, None)
                    else:
                        out[k] = s
            return out

        def add(a, b):
            out = dict(a)
            for k, bk in b.items():
                s = rf.add(out.get(k, rf.element(0)), bk)
                if rf.is_zero(s):
                    out.pop(k, None)
                else:
                    out[k] = s
            return out

        if self.case in (HILBERT_INERT_SSP, HILBERT_SPLIT):
            eq = conv(x, y)
        elif self.case == HILBERT_INERT_SG:
            eq = y
        else:
            inv4eps = rf.inv(rf.element(4 * self.params.eps_int))
            z2 = conv(z, z)
            z2 = {k: rf.mul(v, inv4eps) for k, v in z2.items()}
            if self.case == SIEGEL_SSP:
                eq = add(conv(x, y), z2)
            else:
                abar = self.a_frob.residue()
                xa = add(x, {0: abar} if not rf.is_zero(abar) else {})
                # (x + a) y + z^2/(4 eps); constant term of x+a allowed
                eq = add(conv(xa, y), z2)
        if not eq:
            raise NotGenericallyOrdinary(
                "non-ordinary equation vanishes up to t^nt")
        return min(eq)


def build_model(case, p, d, precision_M, c_residue=None, eps=None):
    params = PAdicParams(p, d, precision_M, eps=eps)
    return CrystalModel(case, params, c_residue)


def required_precision(p, nt, n_max):
    """Precision floor: the deepest queried digit plus product losses."""
    k = 0
    while p ** k < nt:
        k += 1
    return n_max + 2 + k


def f_infinity(model, curve, n_max=2):
    """Truncated infinite product of the twisted factors at the curve.

    The all-zero curve gives the identity matrix (degenerate; callers that
    need generic ordinariness should call non_ordinary_valuation first).
    """
    need = required_precision(model.params.p, curve.nt, n_max)
    if model.params.precision_M < need:
        raise InvalidParameter(
            f"precision_M = {model.params.precision_M} below required "
            f"{need} for nt = {curve.nt}, n_max = {n_max}")
    F = model.perturbation_matrix(curve)
    return truncated_product(F)


def decay_thresholds(A, p, n_max):
    return [A * sum(p ** i for i in range(n + 1)) for n in range(n_max + 1)]


def dvr_thresholds(A, p, a_dvr, n_max):
    out = []
    for n in range(n_max + 1):
        base = A * sum(p ** i for i in range(n)) if n >= 1 else A // p
        out.append(base + a_dvr * p ** n)
    return out


def decay_index(finf, w, n, kmax=None):
    """Least k with a t^k coefficient of F_inf * w of valuation < -n.

    Returns (index, sound); index is +inf when no witness exists up to
    kmax (default N_t), and sound is False when a precision-masked
    coefficient could hide an earlier witness.
    """
    profile = column_valuation_profile(finf, w)
    return profile.decay_index(n, kmax)


def check_DR(finf, w, A, n_max):
    """Rapid decay of a single vector; raises Indeterminate when masked."""
    p = finf.params.p
    thrs = decay_thresholds(A, p, n_max)
    if thrs[-1] > finf.nt:
        raise ThresholdExceedsTruncation(
            f"threshold {thrs[-1]} exceeds truncation {finf.nt}")
    profile = column_valuation_profile(finf, w)
    for n, thr in enumerate(thrs):
        idx, sound = profile.decay_index(n, thr)
        if idx == INF:
            if not sound:
                raise Indeterminate(
                    f"precision masks the decay verdict at n = {n}")
            return False
    return True


def check_DvR(finf, w, A, a_dvr, n_max):
    """Very rapid decay with constant a_dvr (sound, else Indeterminate)."""
    if a_dvr * 2 > A:
        raise InvalidParameter("very rapid decay needs a_dvr <= A/2")
    p = finf.params.p
    thrs = dvr_thresholds(A, p, a_dvr, n_max)
    if max(thrs) > finf.nt:
        raise ThresholdExceedsTruncation(
            f"threshold {max(thrs)} exceeds truncation {finf.nt}")
    profile = column_valuation_profile(finf, w)
    for n, thr in enumerate(thrs):
        idx, sound = profile.decay_index(n, thr)
        if idx == INF:
            if not sound:
                raise Indeterminate(
                    f"precision masks the decay verdict at n = {n}")
            return False
    return True


# -- submodule search ------------------------------------------------------

def _primitive_classes(p, B, k):
    """Primitive vectors of (Z/p^B)^k up to unit scaling."""
    pB = p ** B
    reps = []
    for lead in range(k):
        pools = []
        for i in range(k):
            if i < lead:
                pools.append(range(0, pB, p))
            elif i == lead:
                pools.append((1,))
            else:
                pools.append(range(pB))
        reps.extend(itertools.product(*pools))
    return reps


def _combine(basis, coeffs):
    rank = len(basis[0])
    return [sum(c * v[i] for c, v in zip(coeffs, basis)) for i in range(rank)]


def _span_verdict(finf, basis, A, p, n_max, B):
    """DR status of every primitive class of the span: True/False/None.

    None means some class was indeterminate; False carries the falsifier
    through the second return slot.  Classes are swept together over
    increasing t-exponents with raw integer coefficient arithmetic, so a
    class stops costing work as soon as all its witnesses are found.
    """
    thrs = decay_thresholds(A, p, n_max)
    if thrs[-1] > finf.nt:
        raise ThresholdExceedsTruncation(
            f"threshold {thrs[-1]} exceeds truncation {finf.nt}")
    d = finf.params.d
    rank = finf.rows
    # per basis vector: per row, exponent -> (shift, coeffs, bound)
    cols = []
    for vec in basis:
        u = finf.apply_int_vector(list(vec))
        rows = []
        for i in range(rank):
            table = {}
            for k, c in u[i].coeffs.items():
                if k <= thrs[-1]:
                    bound = None if c.exact else c.shift + c.rel_prec
                    table[k] = (c.shift, c.coeffs, bound)
            rows.append(table)
        cols.append(rows)
    ks = sorted({k for rows in cols for table in rows for k in table})

    classes = []
    for coeffs in _primitive_classes(p, B, len(basis)):
        classes.append({"coeffs": coeffs, "unmet": list(range(n_max + 1)),
                        "masked": [False] * (n_max + 1)})
    pending = list(classes)
    fail = None
    indet = None

    def class_fails(cl, n):
        w = _combine(basis, cl["coeffs"])
        return None if cl["masked"][n] else w

    for k in ks:
        if not pending:
            break
        still = []
        for cl in pending:
            # expire thresholds passed without witness
            while cl["unmet"] and thrs[cl["unmet"][0]] < k:
                n = cl["unmet"].pop(0)
                w = class_fails(cl, n)
                if w is None:
                    indet = _combine(basis, cl["coeffs"])
                else:
                    return False, w
            if not cl["unmet"]:
                continue
            minval = INF
            floor = INF
            for i in range(rank):
                parts = []
                for b, cb in enumerate(cl["coeffs"]):
                    if cb:
                        entry = cols[b][i].get(k)
                        if entry is not None:
                            parts.append((entry, cb))
                if not parts:
                    continue
                s = min(e[0] for e, _ in parts)
                bound = INF
                res = [0] * d
                for (sh, cf, bd), cb in parts:
                    scale = cb * p ** (sh - s)
                    for t in range(d):
                        res[t] += scale * cf[t]
                    if bd is not None and bd < bound:
                        bound = bd
                if bound is not INF:
                    window = bound - s
                    if window <= 0:
                        floor = min(floor, bound)
                        continue
                    q = p ** window
                    res = [r % q for r in res]
                if any(res):
                    v = s + min(_val_int(r, p) for r in res if r)
                    if v < minval:
                        minval = v
                elif bound is not INF:
                    floor = min(floor, bound)
            if floor is not INF:
                for n in cl["unmet"]:
                    if floor <= -(n + 1) and k <= thrs[n]:
                        cl["masked"][n] = True
            if minval is not INF:
                cl["unmet"] = [n for n in cl["unmet"]
                               if not (minval < -n and k <= thrs[n])]
            if cl["unmet"]:
                still.append(cl)
        pending = still

    for cl in pending:
        for n in cl["unmet"]:
            w = class_fails(cl, n)
            if w is None:
                indet = _combine(basis, cl["coeffs"])
            else:
                return False, w
    if indet is not None:
        return None, indet
    return True, None


def _val_int(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _default_candidates(rank, p):
    """Coordinate triples first, then pairs completed by mod-p combos."""
    def e(i):
        v = [0] * rank
        v[i] = 1
        return tuple(v)

    cands = []
    for tri in itertools.combinations(range(rank), 3):
        cands.append(tuple(e(i) for i in tri))
    for pair in itertools.combinations(range(rank), 2):
        rest = [i for i in range(rank) if i not in pair]
        for other in itertools.combinations(rest, 2):
            k, l = other
            for m in range(1, p):
                combo = [0] * rank
                combo[k] = 1
                combo[l] = m
                cands.append((e(pair[0]), e(pair[1]), tuple(combo)))
    return cands


def find_decaying_submodule(model, finf, A, n_max=2, search_depth_B=2,
                            candidates=None, want_witness=None):
    """Certify a rank-3 submodule all of whose primitive classes decay.

    Tests every primitive class mod p^search_depth_B of each candidate
    span, in a deterministic order; superspecial models additionally
    require a very-rapidly-decaying witness inside the span (a = [A/2]).
    Returns (basis, witness_or_None).  Raises NotFound with the last
    falsifying vector, or Indeterminate when precision blocked the only
    remaining candidates.
    """
    p = model.params.p
    if want_witness is None:
        want_witness = model.case in (HILBERT_INERT_SSP, HILBERT_SPLIT,
                                      SIEGEL_SSP)
    if candidates is None:
        candidates = _default_candidates(model.rank, p)
    # cheap pre-filter: every basis vector must itself decay rapidly
    vec_status = {}

    def vec_ok(v):
        if v not in vec_status:
            try:
                vec_status[v] = check_DR(finf, list(v), A, n_max)
            except Indeterminate:
                vec_status[v] = None
        return vec_status[v]

    last_falsifier = None
    saw_indet = False
    for basis in candidates:
        statuses = [vec_ok(tuple(v)) for v in basis]
        if any(s is False for s in statuses):
            last_falsifier = [list(v) for v, s in zip(basis, statuses)
                              if s is False][0]
            continue
        if any(s is None for s in statuses):
            saw_indet = True
            continue
        verdict, bad = _span_verdict(finf, basis, A, p, n_max,
                                     search_depth_B)
        if verdict is False:
            last_falsifier = bad
            continue
        if verdict is None:
            saw_indet = True
            continue
        witness = None
        if want_witness:
            a_dvr = A // 2
            for coeffs in _witness_order(p, len(basis)):
                w = _combine(basis, coeffs)
                try:
                    if check_DvR(finf, w, A, a_dvr, n_max):
                        witness = w
                        break
                except Indeterminate:
                    continue
            if witness is None:
                last_falsifier = list(basis[0])
                continue
        return [list(v) for v in basis], witness
    if saw_indet:
        raise Indeterminate("decay search blocked by precision exhaustion")
    raise NotFound("no decaying rank-3 submodule certified",
                   falsifier=last_falsifier)


def _witness_order(p, k):
    """Single basis vectors first, then mod-p combinations."""
    for i in range(k):
        v = [0] * k
        v[i] = 1
        yield tuple(v)
    for coeffs in itertools.product(range(p), repeat=k):
        if sum(c > 0 for c in coeffs) >= 2:
            yield coeffs


def local_gram(case, p, eps):
    """Bilinear Gram matrix of Q' on the special-endomorphism lattice at p.

    Entries are integers; Q(v) = v^T G v / 2.  The shapes match the five
    closed-form local densities used by the Eisenstein comparisons.
    """
    U = [[0, 1], [1, 0]]
    if case == HILBERT_INERT_SSP:
        # x y + p z^2 - p eps w^2 in coordinates (z, w, x, y)
        return _block_diag([[2 * p]], [[-2 * p * eps]], U)
    if case == HILBERT_SPLIT:
        # x^2 - eps y^2 - p z^2 + eps p w^2
        return _block_diag([[2]], [[-2 * eps]], [[-2 * p]], [[2 * eps * p]])
    if case == HILBERT_INERT_SG:
        # p times a unimodular lattice: p(x y + z^2 - eps w^2)
        return _block_diag([[0, p], [p, 0]], [[2 * p]], [[-2 * p * eps]])
    if case == SIEGEL_SSP:
        # x y + eps z^2 + p w^2 - p eps u^2 in coordinates (u, w, x, y, z)
        return _block_diag([[-2 * p * eps]], [[2 * p]], U, [[2 * eps]])
    if case == SIEGEL_SG:
        # p x y + eps z^2 + p w^2 - p eps u^2
        return _block_diag([[0, p], [p, 0]], [[2 * eps]], [[2 * p]],
                           [[-2 * p * eps]])
    raise InvalidParameter(f"unknown case {case!r}")


def _block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return out
