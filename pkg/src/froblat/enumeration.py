"""Short-vector enumeration and derived counts, in exact arithmetic.

Enumeration runs on the rational Cholesky decomposition Q(v) =
sum q_i (v_i + sum_{j>i} u_ij v_j)^2 with all bounds computed through
integer square roots, so no vector is ever gained or lost to rounding.
Vectors come in +/- pairs; the zero vector is counted once.

Derived quantities: representation counts r(m), successive minima
(returned as exact squared lengths), the minimal discriminant of a rank-2
sublattice, counts restricted to D l^2 and prime targets, the m-sets used
by the intersection budgets, and theta-vs-Eisenstein cusp deviations.
"""

import math
from fractions import Fraction

import numpy as np
import sympy

from .errors import InvalidParameter, NotPositiveDefinite
from .eisenstein import q_positive_definite
from .quadforms import kronecker

HERMITE_POW = {1: Fraction(1), 2: Fraction(4, 3), 3: Fraction(2),
               4: Fraction(4), 5: Fraction(8)}


def _cholesky(lattice):
    n = lattice.rank
    a = [[Fraction(x) for x in row] for row in lattice.q_matrix()]
    q = [Fraction(0)] * n
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        q[i] = a[i][i]
        if q[i] <= 0:
            raise NotPositiveDefinite(
                f"{lattice.label}: not positive definite")
        for j in range(i + 1, n):
            u[i][j] = a[i][j] / q[i]
        for r in range(i + 1, n):
            for c in range(r, n):
                a[r][c] -= a[i][r] * a[i][c] / q[i]
    return q, u


def _floor_sqrt(frac):
    """floor(sqrt(num/den)) for a nonnegative rational."""
    if frac < 0:
        return -1
    num, den = frac.numerator, frac.denominator
    s = math.isqrt(num * den)
    r = s // den
    while (r + 1) * (r + 1) * den <= num:
        r += 1
    while r * r * den > num:
        r -= 1
    return r


def short_vectors(lattice, bound, with_zero=False):
    """All v with 0 < Q(v) <= bound, as (+v, -v) pairs; complete and exact."""
    if not lattice.is_positive_definite():
        raise NotPositiveDefinite(f"{lattice.label}: enumeration needs "
                                  "a positive-definite form")
    q, u = _cholesky(lattice)
    n = lattice.rank
    out = []
    if with_zero and bound >= 0:
        out.append(tuple([0] * n))
    v = [0] * n

    def descend(i, remaining, all_higher_zero):
        ui = u[i]
        center = Fraction(0)
        for j in range(i + 1, n):
            if v[j]:
                center += ui[j] * v[j]
        budget = remaining / q[i]
        root = _floor_sqrt(budget)
        lo = -root
        hi = root
        # integer window for v_i + center in [-sqrt, sqrt]
        lo_i = _ceil_frac(-center - root - 1)
        hi_i = _floor_frac(-center + root + 1)
        for cand in range(lo_i, hi_i + 1):
            t = cand + center
            contrib = q[i] * t * t
            if contrib > remaining:
                continue
            if all_higher_zero and cand < 0:
                continue
            v[i] = cand
            if i == 0:
                if not (all_higher_zero and cand == 0):
                    vec = tuple(v)
                    out.append(vec)
                    out.append(tuple(-x for x in vec))
            else:
                descend(i - 1, remaining - contrib,
                        all_higher_zero and cand == 0)
            v[i] = 0

    descend(n - 1, Fraction(bound), True)
    return out


def _ceil_frac(x):
    return -((-x.numerator) // x.denominator) if isinstance(x, Fraction) \
        else math.ceil(x)


def _floor_frac(x):
    return x.numerator // x.denominator if isinstance(x, Fraction) \
        else math.floor(x)


def _components(gram):
    n = len(gram)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack = [s]
        comp = []
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and gram[i][j] != 0:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def representation_counts(lattice, bound):
    """r(m) for 0 <= m <= bound as a list indexed by m.

    Orthogonal components are enumerated separately and their count
    vectors convolved, so block-diagonal Gram matrices stay cheap even
    when the total vector count is astronomical.
    """
    from .quadforms import IntLattice as _IL
    comps = _components(lattice.gram)
    total = np.zeros(bound + 1, dtype=np.int64)
    total[0] = 1
    for comp in comps:
        sub = _IL([[lattice.gram[i][j] for j in comp] for i in comp],
                  f"{lattice.label}|{comp}")
        part = np.zeros(bound + 1, dtype=np.int64)
        part[0] = 1
        for v in short_vectors(sub, bound):
            part[sub.q_value(list(v))] += 1
        total = np.convolve(total, part)[: bound + 1]
    return [int(x) for x in total]


def successive_minima(lattice):
    """Exact squared successive minima (l_1^2 <= ... <= l_rank^2)."""
    n = lattice.rank
    bound = max(lattice.gram[i][i] // 2 for i in range(n))
    while True:
        vecs = short_vectors(lattice, bound)
        vecs = sorted(set(vecs), key=lambda v: lattice.q_value(list(v)))
        minima = []
        basis = []
        for v in vecs:
            if _independent(basis, v):
                basis.append(v)
                minima.append(lattice.q_value(list(v)))
                if len(minima) == n:
                    return tuple(minima)
        bound *= 2


def _independent(basis, v):
    rows = [list(map(Fraction, b)) for b in basis] + [list(map(Fraction, v))]
    m = len(rows)
    cols = len(rows[0])
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, m):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        for i in range(r + 1, m):
            f = rows[i][c] * inv
            if f:
                for cc in range(c, cols):
                    rows[i][cc] -= f * rows[r][cc]
        r += 1
    return r == m


def _pair_disc4(lattice, v, w):
    """4 * disc of the rank-2 sublattice spanned by v, w (integer)."""
    qv = lattice.q_value(list(v))
    qw = lattice.q_value(list(w))
    b = 0
    g = lattice.gram
    for i, vi in enumerate(v):
        if vi:
            for j, wj in enumerate(w):
                if wj:
                    b += vi * g[i][j] * wj
    return 4 * qv * qw - b * b


def min_binary_disc(lattice):
    """Minimal discriminant of a rank-2 sublattice, as an exact Fraction.

    Returned value is det of the half-Gram of the pair, i.e. the square
    of the root discriminant d.
    """
    minima = successive_minima(lattice)
    l1 = minima[0]
    vecs = short_vectors(lattice, minima[1])
    best = None
    for i, v in enumerate(vecs):
        for w in vecs[i + 1:]:
            d4 = _pair_disc4(lattice, v, w)
            if d4 > 0 and (best is None or d4 < best):
                best = d4
    # optimal pair is reduced: Q(v) Q(w) <= (4/3) disc; sweep that window
    while True:
        limit = _floor_frac(Fraction(4 * best, 3 * 4 * l1))
        if limit <= minima[1]:
            break
        vecs = short_vectors(lattice, limit)
        improved = best
        for i, v in enumerate(vecs):
            for w in vecs[i + 1:]:
                d4 = _pair_disc4(lattice, v, w)
                if d4 > 0 and d4 < improved:
                    improved = d4
        if improved == best:
            break
        best = improved
    return Fraction(best, 4)


def square_rep_count(lattice, D, bound, counts=None):
    """sum of r(D l^2) over primes l with D l^2 <= bound."""
    if D < 1:
        raise InvalidParameter("D must be positive")
    if counts is None:
        counts = representation_counts(lattice, bound)
    total = 0
    for ell in sympy.primerange(2, math.isqrt(bound // D) + 1):
        m = D * ell * ell
        if m <= bound:
            total += counts[m]
    return total


def prime_rep_count(lattice, bound, counts=None):
    if counts is None:
        counts = representation_counts(lattice, bound)
    return sum(counts[ell] for ell in sympy.primerange(2, bound + 1))


def binary_prime_density(lattice, D, X):
    """Fraction of primes l <= X with D l^2 represented; measured, rank 2."""
    if lattice.rank != 2:
        raise InvalidParameter("density measurement is for binary lattices")
    primes = list(sympy.primerange(2, X + 1))
    if not primes:
        return 0.0
    bound = D * primes[-1] ** 2
    counts = representation_counts(lattice, bound)
    hit = sum(1 for ell in primes if counts[D * ell * ell] > 0)
    return hit / len(primes)


def build_T_set(kind, p, params, M):
    """The m-sequences driving the budget sums, truncated at M.

    kind 'square': {D q^2 <= M, q prime != p} with D = params['D'].
    kind 'prime_qr': primes q != p, quadratic residues mod p, q = 3 mod 4.
    kind 'hilbert': m in (N, M] with p not dividing m, v_l(m) <= C for
    every l dividing twice the lattice determinant, and some q || m inert
    in the real quadratic field (kronecker(disc_F, q) = -1).
    """
    if kind == "square":
        D = params.get("D", 1)
        out = []
        for q in sympy.primerange(2, math.isqrt(M // D) + 1 if M >= D else 2):
            if q != p and D * q * q <= M:
                out.append(D * q * q)
        return sorted(out)
    if kind == "prime_qr":
        out = []
        for q in sympy.primerange(2, M + 1):
            if q != p and q % 4 == 3 and pow(q, (p - 1) // 2, p) == 1:
                out.append(q)
        return out
    if kind == "hilbert":
        N = params.get("N", 0)
        C = params.get("C", 2)
        disc_F = params["disc_F"]
        det2 = params["det2"]
        bad = sorted(set(sympy.primefactors(det2)))
        out = []
        for m in range(max(N, 1) + 1, M + 1):
            if m % p == 0:
                continue
            ok = True
            for ell in bad:
                v = 0
                mm = m
                while mm % ell == 0:
                    mm //= ell
                    v += 1
                if v > C:
                    ok = False
                    break
            if not ok:
                continue
            has_inert = False
            for q, e in sympy.factorint(m).items():
                if e == 1 and kronecker(disc_F, q) == -1:
                    has_inert = True
                    break
            if has_inert:
                out.append(m)
        return out
    raise InvalidParameter(f"unknown T-set kind {kind!r}")


def cusp_deviation(lattice, m_lo, m_hi, modulus_cap=20000, tol=1e-6):
    """Per-m deviations r(m) - q(m) and the fitted growth exponent.

    m whose stable counting modulus l^(1 + 2 v_l(2m)) at some bad prime
    exceeds modulus_cap are skipped (the exact convolution length grows
    with v_l(m)).  The exponent is the least-squares slope of
    log|deviation| against log m over entries exceeding twice the
    L-value radius.
    """
    counts = representation_counts(lattice, m_hi)
    bad = sorted(set(sympy.primefactors(2 * lattice.det())))
    records = []
    for m in range(max(1, m_lo), m_hi + 1):
        feasible = True
        for ell in bad:
            v = 0
            mm = 2 * m
            while mm % ell == 0:
                mm //= ell
                v += 1
            if ell ** (1 + 2 * v) > modulus_cap:
                feasible = False
                break
        if not feasible:
            continue
        qv = q_positive_definite(lattice, m, tol=tol)
        dev = counts[m] - qv.midpoint()
        records.append({"m": m, "r": counts[m], "eis": qv.midpoint(),
                        "radius": qv.radius(), "deviation": dev})
    xs = []
    ys = []
    for rec in records:
        if abs(rec["deviation"]) > max(2 * rec["radius"], 1e-9):
            xs.append(math.log(rec["m"]))
            ys.append(math.log(abs(rec["deviation"])))
    slope = float("nan")
    if len(xs) >= 2:
        slope = float(np.polyfit(np.array(xs), np.array(ys), 1)[0])
    return records, slope
