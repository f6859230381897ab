"""Truncated power series in t over p-adic scalars, and matrices of them.

Series are sparse maps from t-exponent to coefficient, truncated at a
shared order N_t.  The twisted Frobenius sigma_t applies sigma to each
coefficient and sends t to t^p.  Infinite products prod_i (1 + sigma_t^i F)
are truncated once further factors are congruent to the identity mod
t^(N_t + 1), which happens as soon as p^i times the t-adic valuation of F
exceeds N_t.
"""

from .errors import InvalidParameter, NonConvergent
from .padics import INF


class TruncSeries:
    """Sparse truncated series; absent exponents are zero up to N_t."""

    __slots__ = ("params", "nt", "coeffs")

    def __init__(self, params, nt, coeffs=None):
        self.params = params
        self.nt = nt
        self.coeffs = {}
        if coeffs:
            for k, c in coeffs.items():
                if k <= nt and not c.is_zero():
                    self.coeffs[k] = c

    @classmethod
    def zero(cls, params, nt):
        return cls(params, nt)

    @classmethod
    def constant(cls, params, nt, scalar):
        return cls(params, nt, {0: scalar})

    @classmethod
    def monomial(cls, params, nt, exponent, scalar):
        return cls(params, nt, {exponent: scalar})

    def _check(self, other):
        if self.params is not other.params or self.nt != other.nt:
            raise InvalidParameter("series contexts differ")

    def v_t(self):
        """Least exponent with a stored nonzero coefficient, or +inf.

        Coefficients that vanish only up to tracked precision still count
        as present; this keeps convergence checks conservative.
        """
        return min(self.coeffs, default=INF)

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            if k in out:
                s = out[k] + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return TruncSeries(self.params, self.nt, out)

    def __neg__(self):
        return TruncSeries(self.params, self.nt,
                           {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        out = {}
        nt = self.nt
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if k > nt:
                    continue
                prod = a * b
                if prod.is_zero():
                    continue
                if k in out:
                    s = out[k] + prod
                    if s.is_zero():
                        del out[k]
                    else:
                        out[k] = s
                else:
                    out[k] = prod
        return TruncSeries(self.params, self.nt, out)

    def scale(self, scalar):
        if scalar.is_zero():
            return TruncSeries(self.params, self.nt)
        return TruncSeries(self.params, self.nt,
                           {k: c * scalar for k, c in self.coeffs.items()})

    def frobenius_twist(self):
        """sigma on coefficients, t -> t^p; exponents beyond N_t drop."""
        p = self.params.p
        out = {}
        for k, c in self.coeffs.items():
            kp = k * p
            if kp <= self.nt:
                out[kp] = c.frobenius()
        return TruncSeries(self.params, self.nt, out)

    def coefficient(self, k):
        c = self.coeffs.get(k)
        if c is None:
            return self.params.zero()
        return c

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = [f"({self.coeffs[k]})*t^{k}" for k in sorted(self.coeffs)]
        return " + ".join(terms)

    __repr__ = __str__


class MatSeries:
    """Rectangular grid of TruncSeries sharing params and N_t."""

    __slots__ = ("params", "nt", "rows", "cols", "entries")

    def __init__(self, params, nt, entries):
        self.params = params
        self.nt = nt
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else 0
        for row in entries:
            if len(row) != self.cols:
                raise InvalidParameter("ragged matrix")
            for e in row:
                if e.params is not params or e.nt != nt:
                    raise InvalidParameter("entry context differs")
        self.entries = entries

    @classmethod
    def zero(cls, params, nt, rows, cols):
        return cls(params, nt,
                   [[TruncSeries.zero(params, nt) for _ in range(cols)]
                    for _ in range(rows)])

    @classmethod
    def identity(cls, params, nt, n):
        m = cls.zero(params, nt, n, n)
        one = params.one()
        for i in range(n):
            m.entries[i][i] = TruncSeries.constant(params, nt, one)
        return m

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InvalidParameter("shape mismatch")
        return MatSeries(self.params, self.nt,
                         [[a + b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.entries, other.entries)])

    def __mul__(self, other):
        if self.cols != other.rows:
            raise InvalidParameter("shape mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = TruncSeries.zero(self.params, self.nt)
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.coeffs and b.coeffs:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return MatSeries(self.params, self.nt, out)

    def frobenius_twist(self):
        return MatSeries(self.params, self.nt,
                         [[e.frobenius_twist() for e in row]
                          for row in self.entries])

    def min_vt(self):
        return min((e.v_t() for row in self.entries for e in row),
                   default=INF)

    def apply_int_vector(self, w):
        """Product with an integer vector; returns a list of TruncSeries."""
        if len(w) != self.cols:
            raise InvalidParameter("vector length mismatch")
        ws = [self.params.from_int(x) for x in w]
        out = []
        for i in range(self.rows):
            acc = TruncSeries.zero(self.params, self.nt)
            for j, wj in enumerate(ws):
                if w[j] == 0:
                    continue
                acc = acc + self.entries[i][j].scale(wj)
            out.append(acc)
        return out


def truncated_product(F, K_terms="auto"):
    """prod_{i=0}^{K} (I + sigma_t^i(F)) truncated at N_t.

    Requires every entry of F to vanish at t = 0; otherwise the
    degree-by-degree stabilization fails.  With K_terms='auto', factors
    are included while p^i * v_t(F) <= N_t, so every omitted factor is
    congruent to the identity mod t^(N_t + 1).
    """
    if F.rows != F.cols:
        raise InvalidParameter("product needs a square matrix")
    v = F.min_vt()
    if v == INF:
        return MatSeries.identity(F.params, F.nt, F.rows)
    if v < 1:
        raise NonConvergent("an entry of F has t-adic valuation 0")
    p = F.params.p
    if K_terms == "auto":
        K = 0
        while v * p ** (K + 1) <= F.nt:
            K += 1
    else:
        K = int(K_terms)
    prod = MatSeries.identity(F.params, F.nt, F.rows)
    factor = F
    for i in range(K + 1):
        prod = prod + prod * factor
        if i < K:
            factor = factor.frobenius_twist()
    return prod


class DecayProfile:
    """Per-exponent minimum p-valuations of a series vector.

    ``minvals`` maps each exponent with a visible coefficient to the
    minimum valuation over coordinates; ``floors`` maps exponents whose
    coefficients are masked by precision to the exhaustion bound (the
    true valuation is >= the bound but otherwise unknown).
    """

    __slots__ = ("nt", "minvals", "floors")

    def __init__(self, nt, minvals, floors):
        self.nt = nt
        self.minvals = minvals
        self.floors = floors

    def min_valuation(self, k):
        return self.minvals.get(k, INF)

    def decay_index(self, n, kmax=None):
        """Least k with min valuation < -n; (index, sound) pair.

        ``sound`` is False when a precision-masked coefficient below the
        query depth occurs before the reported index, i.e. the true index
        could be smaller than reported (never larger).
        """
        if kmax is None:
            kmax = self.nt
        sound = True
        for k in range(0, kmax + 1):
            if self.floors.get(k, INF) <= -(n + 1):
                sound = False
            v = self.minvals.get(k)
            if v is not None and v < -n:
                return k, True
        return INF, sound


def column_valuation_profile(mat, w):
    """Profile of min p-valuations of the t^k coefficients of mat * w."""
    series = mat.apply_int_vector(w)
    minvals = {}
    floors = {}
    for s in series:
        for k, c in s.coeffs.items():
            mv = c.maybe_val()
            if mv is None:
                b = c.known_bound()
                if floors.get(k, INF) > b:
                    floors[k] = b
            elif mv is not INF:
                if minvals.get(k, INF) > mv:
                    minvals[k] = mv
    return DecayProfile(mat.nt, minvals, floors)
