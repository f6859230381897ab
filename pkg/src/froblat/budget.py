"""Local-versus-global intersection budgets for supersingular points.

The local side bounds the intersection multiplicity at a point through
weighted representation counts over a chain of sublattices forced by
decay: for a superspecial point

    l(m) <= A(p+2)/(2p) r_{0,1}(m) + A/2 r_{0,2}(m)
            + sum_{n>=1} A p^n / 2 (r_{n,1}(m) + r_{n,2}(m)),

and for a supergeneric point A(p+1)/p r_0(m) + sum A p^n r_n(m).  The
global side is g(m) = A/(p-1) |q_L(m)| with q_L the Eisenstein
coefficient of the ambient lattice.  The Eisenstein-side aggregation of
the same weights against the coefficient ratio bounds stays below
alpha(p) A/(p-1) with alpha(p) = (p+2)/(2p) + p/(p^2-1) < 11/12 for
p >= 5, which is what the cumulative report checks empirically.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ChainNotNested, InvalidParameter
from .eisenstein import q_L_hilbert, q_L_siegel, ratio_bound
from .enumeration import build_T_set, representation_counts
from .quadforms import IntLattice


def threshold_A_n(A, p, n):
    """[A (p^n + ... + p + 1 + 1/p)], with n = -1 giving [A/p]."""
    if A < 1:
        raise InvalidParameter("A must be a positive integer")
    if n < -1:
        raise InvalidParameter("n >= -1")
    if n == -1:
        return A // p
    s = Fraction(p ** (n + 1) - 1, p - 1) + Fraction(1, p)
    return int(A * s)  # floor: numerator positive


def alpha_const(p):
    """(p+2)/(2p) + p/(p^2-1), the superspecial budget constant."""
    if p < 5:
        pass  # still computable; the 11/12 comparison documents why p >= 5
    return Fraction(p + 2, 2 * p) + Fraction(p, p * p - 1)


def alpha_variants(p):
    """Budget constants for the remaining splitting behaviours.

    'superspecial' needs p >= 5 to clear 11/12; 'superspecial_ramified'
    needs p >= 7; the supergeneric variants are far below the bar.
    """
    return {
        "superspecial": alpha_const(p),
        "supergeneric_inert": Fraction(2, p)
        + Fraction(2, (p + 1) * (p * p - 1)),
        "superspecial_ramified": Fraction(p + 2, 2 * p)
        + Fraction(p + 3, p * p - 1),
        "supergeneric_ramified": Fraction(2, p) + Fraction(2, p * p - 1),
    }


def local_bound(case, A, p, r_tables, m):
    """Per-m weighted count bound from the chain's r-tables.

    For 'superspecial', r_tables is a list of (r_n1, r_n2) count arrays
    indexed by n; for 'supergeneric', a list of r_n arrays.  Missing
    second components are allowed and simply dropped from the sum.
    """
    if case == "superspecial":
        total = Fraction(0)
        for n, pair in enumerate(r_tables):
            r1, r2 = pair if isinstance(pair, tuple) else (pair, None)
            c1 = Fraction(A * (p + 2), 2 * p) if n == 0 \
                else Fraction(A * p ** n, 2)
            c2 = Fraction(A, 2) if n == 0 else Fraction(A * p ** n, 2)
            if r1 is not None:
                total += c1 * r1[m]
            if r2 is not None:
                total += c2 * r2[m]
        return total
    if case == "supergeneric":
        total = Fraction(0)
        for n, r in enumerate(r_tables):
            c = Fraction(A * (p + 1), p) if n == 0 else Fraction(A * p ** n)
            total += c * r[m]
        return total
    raise InvalidParameter(f"unknown case {case!r}")


def local_bound_telescoped(A, p, a_dvr, r_tables, m, n_cut=None):
    """The sharper telescoping form the weighted bound dominates."""
    if n_cut is None:
        n_cut = len(r_tables) - 1
    total = Fraction(0)
    r01 = r_tables[0][0][m]
    r02 = r_tables[0][1][m] if r_tables[0][1] is not None else r01
    total += (threshold_A_n(A, p, -1) + a_dvr) * r01
    total += (threshold_A_n(A, p, 0) - threshold_A_n(A, p, -1) - a_dvr) * r02
    for n in range(1, n_cut + 1):
        r1 = r_tables[n][0][m]
        r2 = r_tables[n][1][m] if r_tables[n][1] is not None else r1
        total += a_dvr * p ** n * r1
        total += (threshold_A_n(A, p, n) - threshold_A_n(A, p, n - 1)
                  - a_dvr * p ** n) * r2
    return Fraction(total)


def global_g(A, p, q_value):
    """g(m) = A/(p-1) |q_L(m)|, as an interval (lo, hi)."""
    if A < 1:
        raise InvalidParameter("A must be >= 1: the point lies on the "
                               "non-ordinary locus")
    lo, hi = q_value.interval()
    alo, ahi = sorted((abs(lo), abs(hi)))
    scale = Fraction(A, p - 1)
    return (float(scale) * alo, float(scale) * ahi)


def validate_hasse_budget(A_list, p, omega_C):
    """Check sum of A_P = (p-1) * (omega . C) for supplied global data."""
    target = (p - 1) * Fraction(omega_C)
    return sum(A_list) == target


def eisenstein_budget(case, A, p, chain="geometric", vp_m=0):
    """Aggregate coefficient-ratio bounds over a chain, exactly.

    chain is either 'geometric' (the closed form of the infinite chain
    with indices p^(3n) and p^(3n+1)) or a list of per-n index data:
    (idx1, idx2) pairs for superspecial, idx for supergeneric; None
    entries are omitted.  Index values are [L' : L'_{n, i}].
    """
    if case == "superspecial":
        if chain == "geometric":
            if vp_m != 0:
                raise InvalidParameter("closed form assumes p coprime to m")
            return Fraction(A, p - 1) * alpha_const(p)
        total = Fraction(0)
        for n, pair in enumerate(chain):
            idx1, idx2 = pair if isinstance(pair, tuple) else (pair, None)
            w1 = Fraction(A * (p + 2), 2 * p) if n == 0 \
                else Fraction(A * p ** n, 2)
            w2 = Fraction(A, 2) if n == 0 else Fraction(A * p ** n, 2)
            if idx1 is not None:
                total += w1 * _sub_ratio(p, n, idx1, vp_m)
            if idx2 is not None:
                total += w2 * _sub_ratio(p, n, idx2, vp_m)
        return total
    if case == "supergeneric":
        if chain == "geometric":
            if vp_m != 0:
                raise InvalidParameter("closed form assumes p coprime to m")
            return supergeneric_geometric_bound(A, p)
        total = Fraction(0)
        for n, idx in enumerate(chain):
            w = Fraction(A * (p + 1), p) if n == 0 else Fraction(A * p ** n)
            if idx is not None:
                total += w * _sg_sub_ratio(p, idx, vp_m)
        return total
    raise InvalidParameter(f"unknown case {case!r}")


def _sub_ratio(p, n, idx, vp_m):
    """Coefficient ratio bound for a superspecial chain member."""
    if n == 0 and idx == 1:
        return ratio_bound("superspecial", p)
    # |disc_p| of the sublattice is p^2 idx^2, so sqrt is p * idx
    if vp_m == 0:
        return ratio_bound("superspecial", p, idx_sqrt=p * idx)
    return ratio_bound("superspecial", p, idx_sqrt=p * idx, vp_m=1,
                       index_is_p=(idx == p))


def _sg_sub_ratio(p, idx, vp_m):
    if idx == 1:
        return ratio_bound("supergeneric", p)
    if vp_m == 0:
        return Fraction(2, (p * p - 1) * idx)
    return Fraction(2, (p - 1) * idx)


def supergeneric_geometric_bound(A, p):
    """Closed form of the supergeneric inert chain aggregation."""
    return Fraction(A, p - 1) * (Fraction(2, p)
                                 + Fraction(2, (p + 1) * (p * p - 1)))


def check_chain_nested(grams_with_bases):
    """Each lattice must embed integrally in the previous one.

    Input: list of (gram, basis) where basis expresses the lattice's
    basis in the coordinates of the chain head; returns the index
    sequence [head : member].
    """
    indices = []
    head_basis = grams_with_bases[0][1]
    hb = [[Fraction(x) for x in row] for row in head_basis]
    det_head = _det(hb)
    prev = hb
    for gram, basis in grams_with_bases[1:]:
        b = [[Fraction(x) for x in row] for row in basis]
        sol = _solve_matrix(prev, b)
        for row in sol:
            for x in row:
                if x.denominator != 1:
                    raise ChainNotNested("basis change is not integral")
        prev = b
        indices.append(abs(_det(b) / det_head))
    return [int(x) for x in indices]


def _det(m):
    n = len(m)
    a = [row[:] for row in m]
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if a[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            det = -det
        det *= a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            if f:
                for c in range(i, n):
                    a[r][c] -= f * a[i][c]
    return det


def _solve_matrix(A, B):
    """X with A^T X = B^T column-wise, i.e. rows of B in row space of A."""
    n = len(A)
    out = []
    for row in B:
        aug = [[A[c][r] for c in range(n)] + [row[r]] for r in range(n)]
        sol = _gauss_solve(aug)
        out.append(sol)
    return out


def _gauss_solve(aug):
    n = len(aug)
    a = [row[:] for row in aug]
    for i in range(n):
        piv = next((r for r in range(i, n) if a[r][i] != 0), None)
        if piv is None:
            raise ChainNotNested("degenerate basis")
        a[i], a[piv] = a[piv], a[i]
        inv = 1 / a[i][i]
        a[i] = [x * inv for x in a[i]]
        for r in range(n):
            if r != i and a[r][i]:
                f = a[r][i]
                a[r] = [x - f * y for x, y in zip(a[r], a[i])]
    return [a[i][n] for i in range(n)]


def _bilinear(gram, v, w):
    return sum(v[i] * gram[i][j] * w[j]
               for i in range(len(v)) for j in range(len(w)))


def _q_of(gram, v):
    return _bilinear(gram, v, v) // 2


def _complete_to_basis(v):
    """Unimodular integer matrix whose first column is the primitive v."""
    n = len(v)
    w = list(v)
    ops = []  # (i, j, 2x2 matrix) acting on rows i, j
    while True:
        nz = [i for i in range(n) if w[i] != 0]
        if len(nz) == 1:
            lead = nz[0]
            break
        i, j = nz[0], nz[1]
        a, b = w[i], w[j]
        g = math.gcd(a, b)
        # Bezout: s a + t b = g
        s, t = _bezout(a, b)
        ops.append((i, j, (s, t, -b // g, a // g)))
        w[i], w[j] = g, 0
    assert abs(w[lead]) == 1
    # W v = +/- e_lead; build W then invert
    W = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    wv = list(v)
    for i, j, (s, t, u_, v_) in ops:
        for M in (W,):
            ri = [s * M[i][c] + t * M[j][c] for c in range(n)]
            rj = [u_ * M[i][c] + v_ * M[j][c] for c in range(n)]
            M[i], M[j] = ri, rj
    if w[lead] == -1:
        W[lead] = [-x for x in W[lead]]
    # move lead row to the top
    if lead != 0:
        W[0], W[lead] = W[lead], W[0]
    inv = _int_inverse(W)
    return inv


def _bezout(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    return old_s, old_t


def _int_inverse(M):
    n = len(M)
    a = [[Fraction(x) for x in row] + [Fraction(1 if c == r else 0)
                                       for c in range(n)]
         for r, row in enumerate(M)]
    for i in range(n):
        piv = next(r for r in range(i, n) if a[r][i] != 0)
        a[i], a[piv] = a[piv], a[i]
        inv = 1 / a[i][i]
        a[i] = [x * inv for x in a[i]]
        for r in range(n):
            if r != i and a[r][i]:
                f = a[r][i]
                a[r] = [x - f * y for x, y in zip(a[r], a[i])]
    out = [[a[r][n + c] for c in range(n)] for r in range(n)]
    res = [[int(x) for x in row] for row in out]
    for r in range(n):
        for c in range(n):
            if out[r][c] != res[r][c]:
                raise InvalidParameter("non-integral basis completion")
    return res


def derive_chain(global_gram, p, depth, prec=8):
    """Chain sublattices forced by decay, from the p-adic splitting.

    Finds an isotropic direction u3 of the p-unimodular part (the very
    rapidly decaying one), completes it to a unimodular basis arranged as
    (u1, u2, u3, u4) with u1, u2 spanning the p-scaled block and u4 the
    complementary isotropic direction, and returns Gram pairs for

        L_{n,1} = <p^n u1, p^n u2, p^n u3, u4>,
        L_{n,2} = <p^n u1, p^n u2, p^(n+1) u3, u4>,

    whose indices in the head are p^(3n) and p^(3n+1).
    """
    G = [[int(x) for x in row] for row in global_gram]
    n = len(G)
    if n != 4:
        raise InvalidParameter("chain derivation implemented for rank 4")
    q = p ** prec
    u3 = _isotropic_vector(G, p, prec)
    U = _complete_to_basis(u3)
    cols = [[U[r][c] for r in range(n)] for c in range(n)]
    b3 = cols[0]
    rest = cols[1:]
    # partner with unit pairing against u3
    j = next(i for i, b in enumerate(rest)
             if _bilinear(G, b3, b) % p != 0)
    b4 = rest.pop(j)
    inv34 = pow(_bilinear(G, b3, b4) % q, -1, q)
    # make Q(b4) = 0 mod p^prec
    c = (-_q_of(G, b4) * inv34) % q
    b4 = [x + c * y for x, y in zip(b4, b3)]
    inv34 = pow(_bilinear(G, b3, b4) % q, -1, q)
    # orthogonalize the remaining two against the hyperbolic pair
    out12 = []
    for b in rest:
        al = (-_bilinear(G, b, b3) * inv34) % q
        bl = (-_bilinear(G, b, b4) * inv34) % q
        out12.append([x + al * y4 + bl * y3
                      for x, y4, y3 in zip(b, b4, b3)])
    u1, u2 = out12
    for u in (u1, u2):
        if _bilinear(G, u, b3) % q or _bilinear(G, u, b4) % q:
            raise InvalidParameter("splitting failed to orthogonalize")
        if _q_of(G, u) % p != 0:
            raise InvalidParameter("p-part direction has unit norm")
    chain = []
    for nn in range(depth + 1):
        # L_{n,1} = p^n Z^4 + Z u4;  L_{n,2} adds only p^n u1, p^n u2 and
        # p^(n+1) Z^4, so small generator representatives suffice
        gens1 = [[p ** nn if i == j else 0 for j in range(4)]
                 for i in range(4)]
        gens1.append([x % p ** nn if nn else 0 for x in b4])
        basis1 = _hnf_basis(gens1)
        qn = p ** (nn + 1)
        gens2 = [[qn if i == j else 0 for j in range(4)] for i in range(4)]
        gens2.append([p ** nn * (x % p) for x in u1])
        gens2.append([p ** nn * (x % p) for x in u2])
        gens2.append([x % qn for x in b4])
        basis2 = _hnf_basis(gens2)
        s1 = [[_bilinear(G, a, b) for b in basis1] for a in basis1]
        s2 = [[_bilinear(G, a, b) for b in basis2] for a in basis2]
        chain.append((s1, s2))
    return chain, (u1, u2, b3, b4)


def _hnf_basis(gens):
    """Basis of the Z-span of the generators (integer row Hermite form)."""
    n = len(gens[0])
    rows = [list(r) for r in gens if any(r)]
    basis = []
    for col in range(n):
        while True:
            cand = [r for r in rows if r[col] != 0]
            if len(cand) <= 1:
                break
            cand.sort(key=lambda r: abs(r[col]))
            r0 = cand[0]
            for r in cand[1:]:
                qq = r[col] // r0[col]
                for c in range(n):
                    r[c] -= qq * r0[c]
            rows = [r for r in rows if any(r)]
        cand = [r for r in rows if r[col] != 0]
        if cand:
            piv = cand[0]
            if piv[col] < 0:
                for c in range(n):
                    piv[c] = -piv[c]
            basis.append(piv)
            rows.remove(piv)
    if any(any(r) for r in rows):
        raise InvalidParameter("Hermite reduction left nonzero rows")
    return basis


def _isotropic_vector(G, p, prec):
    """Primitive v with Q(v) = 0 mod p^prec and a unit gradient."""
    n = len(G)
    import itertools as _it
    start = None
    for cand in _it.product(range(p), repeat=n):
        if not any(cand):
            continue
        if _q_of(G, list(cand)) % p == 0:
            grad = [sum(G[i][j] * cand[j] for j in range(n)) % p
                    for i in range(n)]
            if any(grad):
                start = list(cand)
                break
    if start is None:
        raise InvalidParameter("no smooth isotropic direction mod p")
    v = start
    q = p ** prec
    while _q_of(G, v) % q:
        grad = [sum(G[i][j] * v[j] for j in range(n)) for i in range(n)]
        w = next(([1 if i == k else 0 for i in range(n)]
                  for k in range(n) if grad[k] % p), None)
        c = (-_q_of(G, v) * pow(_bilinear(G, v, w), -1, q)) % q
        v = [x + c * y for x, y in zip(v, w)]
        v = [x % q for x in v]
    g = math.gcd(*v)
    if g > 1:
        v = [x // g for x in v]
    return v


def _scaled_gram(G, basis, scales):
    cols = [[s * x for x in b] for b, s in zip(basis, scales)]
    n = len(cols)
    return [[_bilinear(G, cols[i], cols[j]) for j in range(n)]
            for i in range(n)]


@dataclass
class BudgetInput:
    p: int
    A: int
    case: str                      # 'superspecial' or 'supergeneric'
    family: str                    # 'hilbert' or 'siegel' (global q_L shape)
    global_gram: list              # Gram of the ambient lattice L
    chain: list                    # [(gram1, gram2-or-None), ...] per n
    t_kind: str = "square"
    t_params: dict = field(default_factory=dict)
    M: int = 500
    exclude: list = field(default_factory=list)   # S_M
    omega_C: Fraction = None
    A_partition: list = None       # optional per-point A values
    tol: float = 1e-10


@dataclass
class BudgetReport:
    T: list
    excluded: list
    per_m: list                    # dicts with m, local, g_lo, g_hi
    local_sum: Fraction
    global_interval: tuple
    ratio_interval: tuple


def run_budget(inp):
    """Full pipeline: T-set, chain counts, local bounds, global sums."""
    if inp.A < 1:
        raise InvalidParameter("A must be >= 1")
    if inp.omega_C is not None and inp.A_partition is not None:
        if not validate_hasse_budget(inp.A_partition, inp.p, inp.omega_C):
            raise InvalidParameter(
                "supplied A values do not sum to (p-1)(omega.C)")
    t_set = build_T_set(inp.t_kind, inp.p, inp.t_params, inp.M)
    excluded = sorted(set(inp.exclude) & set(t_set))
    kept = [m for m in t_set if m not in set(excluded)]
    lattices = []
    for pair in inp.chain:
        g1, g2 = pair if isinstance(pair, tuple) else (pair, None)
        L1 = IntLattice(g1) if g1 is not None else None
        L2 = IntLattice(g2) if g2 is not None else None
        lattices.append((L1, L2))
    r_tables = []
    for L1, L2 in lattices:
        r1 = representation_counts(L1, inp.M) if L1 is not None else None
        r2 = representation_counts(L2, inp.M) if L2 is not None else None
        r_tables.append((r1, r2))
    if inp.case == "supergeneric":
        flat = [r1 for r1, _ in r_tables]
    glob = IntLattice(inp.global_gram, "global")
    qfun = q_L_hilbert if inp.family == "hilbert" else q_L_siegel
    per_m = []
    local_sum = Fraction(0)
    glo = ghi = 0.0
    for m in kept:
        if inp.case == "superspecial":
            lb = local_bound("superspecial", inp.A, inp.p, r_tables, m)
        else:
            lb = local_bound("supergeneric", inp.A, inp.p, flat, m)
        q = qfun(glob, m, tol=inp.tol)
        g_lo, g_hi = global_g(inp.A, inp.p, q)
        per_m.append({"m": m, "local": lb, "g_lo": g_lo, "g_hi": g_hi})
        local_sum += lb
        glo += g_lo
        ghi += g_hi
    if glo > 0:
        ratio = (float(local_sum) / ghi, float(local_sum) / glo)
    else:
        ratio = (float("nan"), float("nan"))
    return BudgetReport(T=t_set, excluded=excluded, per_m=per_m,
                        local_sum=local_sum, global_interval=(glo, ghi),
                        ratio_interval=ratio)
