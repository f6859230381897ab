"""Exact arithmetic in unramified extensions of the p-adic integers.

Elements of W(F_{p^d})[1/p] are represented as p^shift * u where u is a
polynomial of degree < d in a fixed generator g, with integer
coefficients.  The modulus is a fixed monic lift of an irreducible
polynomial over F_p, chosen deterministically per (p, d).  Every value
carries the number of p-adic digits of u that are guaranteed; values
built from integers or rationals with p-unit denominator times a p-power
are flagged exact and kept unreduced, so that genuine cancellations
produce an exact zero instead of a precision artifact.

The Frobenius sigma is the unique lift of x -> x^p; it is realized by
Hensel-lifting the p-power map on the generator once per parameter set
and caching the result.
"""

from fractions import Fraction

from .errors import DivisionByZero, InvalidParameter, ZeroPrecision

INF = float("inf")


def _valuation(n, p):
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _tuple_valuation(coeffs, p):
    """Minimum valuation over the coefficients, or None if all zero."""
    best = None
    for c in coeffs:
        if c:
            v = _valuation(c, p)
            if best is None or v < best:
                best = v
            if best == 0:
                return 0
    return best


# ---------------------------------------------------------------------------
# residue field F_{p^d}

def _fp_poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_poly_mulmod(a, b, mod, p):
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    # reduce by monic mod
    dm = len(mod) - 1
    while len(res) > dm:
        lead = res.pop()
        if lead:
            for k in range(dm):
                res[-dm + k] = (res[-dm + k] - lead * mod[k]) % p
    return _fp_poly_trim(res)


def _fp_poly_powmod(a, e, mod, p):
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = _fp_poly_mulmod(result, base, mod, p)
        base = _fp_poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _is_irreducible(mod, p):
    """Irreducibility of a monic polynomial over F_p via x^(p^k) tests."""
    d = len(mod) - 1
    x = [0, 1]
    xp = list(x)
    for k in range(1, d):
        xp = _fp_poly_powmod(xp, p, mod, p)
        if d % k == 0 and xp == x:
            return False
    xp = _fp_poly_powmod(xp, p, mod, p)
    return xp == x


def smallest_nonresidue(p):
    """Smallest positive quadratic non-residue mod p."""
    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            return a
    raise InvalidParameter(f"no quadratic non-residue mod {p}")


def canonical_modulus(p, d):
    """Deterministic monic integer lift of an irreducible of degree d.

    Degree 2 uses x^2 - eps with eps the smallest non-residue, so the
    generator itself squares to eps.  Other degrees take the
    lexicographically first irreducible monic polynomial.
    """
    if d == 1:
        return (0,)
    if d == 2:
        return (-smallest_nonresidue(p), 0)
    # lexicographic search over constant-first coefficient vectors
    bound = p ** d
    for code in range(bound):
        coeffs = []
        c = code
        for _ in range(d):
            coeffs.append(c % p)
            c //= p
        mod = coeffs + [1]
        if coeffs[0] != 0 and _is_irreducible(mod, p):
            return tuple(coeffs)
    raise InvalidParameter(f"no irreducible of degree {d} over F_{p}")


class ResidueField:
    """F_{p^d} with elements as coefficient tuples over F_p."""

    def __init__(self, p, d, modulus):
        self.p = p
        self.d = d
        self.modulus = list(modulus) + [1]  # monic, constant first

    def element(self, coeffs):
        if isinstance(coeffs, int):
            coeffs = (coeffs % self.p,)
        c = [x % self.p for x in coeffs]
        c += [0] * (self.d - len(c))
        if len(c) > self.d:
            raise InvalidParameter("residue coefficients exceed degree")
        return tuple(c)

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        r = _fp_poly_mulmod(list(a), list(b), self.modulus, self.p)
        return tuple(r + [0] * (self.d - len(r)))

    def pow(self, a, e):
        r = _fp_poly_powmod(list(a), e, self.modulus, self.p)
        return tuple(r + [0] * (self.d - len(r)))

    def frob(self, a):
        return self.pow(a, self.p)

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByZero("residue inverse of zero")
        return self.pow(a, self.p ** self.d - 2)

    def one(self):
        return self.element(1)

    def sqrt(self, a):
        """Some square root in F_{p^d}, or None (Tonelli-Shanks)."""
        if self.is_zero(a):
            return self.element(0)
        q = self.p ** self.d
        if self.pow(a, (q - 1) // 2) != self.one():
            return None
        # write q - 1 = s * 2^e with s odd
        s, e = q - 1, 0
        while s % 2 == 0:
            s //= 2
            e += 1
        # find a non-square z by scanning small elements
        z = None
        for code in range(1, q):
            coeffs = []
            c = code
            for _ in range(self.d):
                coeffs.append(c % self.p)
                c //= self.p
            cand = tuple(coeffs)
            if self.pow(cand, (q - 1) // 2) != self.one():
                z = cand
                break
        m = e
        cfac = self.pow(z, s)
        t = self.pow(a, s)
        r = self.pow(a, (s + 1) // 2)
        while t != self.one():
            # least i with t^(2^i) = 1
            i, t2 = 0, t
            while t2 != self.one():
                t2 = self.mul(t2, t2)
                i += 1
            b = cfac
            for _ in range(m - i - 1):
                b = self.mul(b, b)
            m = i
            cfac = self.mul(b, b)
            t = self.mul(t, cfac)
            r = self.mul(r, b)
        return r

    def elements(self):
        for code in range(self.p ** self.d):
            coeffs = []
            c = code
            for _ in range(self.d):
                coeffs.append(c % self.p)
                c //= self.p
            yield tuple(coeffs)


# ---------------------------------------------------------------------------
# parameter set

class PAdicParams:
    """Arithmetic context for W(F_{p^d}) at absolute precision M digits.

    p odd prime, 1 <= d <= 4, modulus reducing irreducibly mod p.  The
    non-square unit eps defaults to the smallest positive non-residue.
    Caches the Hensel-lifted Frobenius image of the generator and its
    powers, at the working precision.
    """

    def __init__(self, p, d, precision_M, modulus=None, eps=None):
        if p < 3 or any(p % q == 0 for q in range(2, min(p, 60000))
                        if q * q <= p):
            raise InvalidParameter(f"p = {p} is not an odd prime")
        if not 1 <= d <= 8:
            # degree 8 is needed by one supergeneric curve family: the
            # leading z-coefficient there solves g^2 = -4*eps*a with
            # sigma^2(a) = -a, which is never a square in F_{p^4}
            raise InvalidParameter("unramified degree must be 1..8")
        if precision_M < 1:
            raise InvalidParameter("precision_M must be >= 1")
        self.p = p
        self.d = d
        self.precision_M = precision_M
        self.eps_int = eps if eps is not None else smallest_nonresidue(p)
        if pow(self.eps_int % p, (p - 1) // 2, p) != p - 1:
            raise InvalidParameter(f"eps = {eps} is a square mod {p}")
        if modulus is None:
            modulus = canonical_modulus(p, d)
        self.modulus = tuple(int(c) for c in modulus)
        if len(self.modulus) != d:
            raise InvalidParameter("modulus must be monic of degree d")
        self.residue_field = ResidueField(p, d, [c % p for c in self.modulus])
        if d > 1 and not _is_irreducible(self.residue_field.modulus, p):
            raise InvalidParameter("modulus is reducible mod p")
        self.pM = p ** precision_M
        self._red_rows = self._reduction_rows()
        self._frob_gen_pows = None  # lazy: powers of sigma(g)

    # -- polynomial reduction data ------------------------------------
    def _reduction_rows(self):
        """Rows expressing g^d .. g^(2d-2) in the power basis, mod p^M."""
        d, pM = self.d, self.pM
        if d == 1:
            return []
        rows = []
        # g^d = modulus row (negated constant-first coefficients)
        cur = [(-c) % pM for c in self.modulus]
        rows.append(tuple(cur))
        for _ in range(d - 2):
            # multiply by g
            nxt = [0] + cur[:-1]
            lead = cur[-1]
            if lead:
                for k in range(d):
                    nxt[k] = (nxt[k] + lead * rows[0][k]) % pM
            cur = [c % pM for c in nxt]
            rows.append(tuple(cur))
        return rows

    def poly_mul(self, a, b, mod_power):
        """Product of coefficient tuples, reduced mod (modulus, p^mod_power)."""
        d = self.d
        q = self.p ** mod_power
        if d == 1:
            return ((a[0] * b[0]) % q,)
        if d == 2:
            e = (-self.modulus[0])  # g^2 = e  (modulus x^2 - e)
            m1 = (-self.modulus[1])  # plus m1 * g when modulus has x term
            a0, a1 = a
            b0, b1 = b
            cross = a0 * b1 + a1 * b0
            high = a1 * b1
            return ((a0 * b0 + e * high) % q, (cross + m1 * high) % q)
        res = [0] * (2 * d - 1)
        for i in range(d):
            ai = a[i]
            if ai:
                for j in range(d):
                    res[i + j] += ai * b[j]
        out = res[:d]
        for k in range(d, 2 * d - 1):
            c = res[k]
            if c:
                row = self._red_rows[k - d]
                for t in range(d):
                    out[t] += c * row[t]
        return tuple(c % q for c in out)

    def poly_pow(self, a, e, mod_power):
        result = tuple([1] + [0] * (self.d - 1))
        base = a
        while e:
            if e & 1:
                result = self.poly_mul(result, base, mod_power)
            base = self.poly_mul(base, base, mod_power)
            e >>= 1
        return result

    def poly_inv(self, a, mod_power):
        """Inverse of a unit polynomial mod (modulus, p^mod_power)."""
        p, d = self.p, self.d
        # inverse in the residue field, then Hensel lifting
        abar = tuple(c % p for c in a)
        inv0 = self.residue_field.inv(abar)
        x = tuple(int(c) for c in inv0)
        prec = 1
        while prec < mod_power:
            prec = min(2 * prec, mod_power)
            ax = self.poly_mul(a, x, prec)
            # x <- x * (2 - a x)
            two_minus = tuple((-c) % (p ** prec) for c in ax)
            two_minus = (
                (two_minus[0] + 2) % (p ** prec),) + two_minus[1:]
            x = self.poly_mul(x, two_minus, prec)
        return x

    # -- Frobenius ------------------------------------------------------
    def _frobenius_generator_powers(self):
        if self._frob_gen_pows is not None:
            return self._frob_gen_pows
        p, d, M = self.p, self.d, self.precision_M
        if d == 1:
            self._frob_gen_pows = [((1,),)]
            return self._frob_gen_pows
        # Hensel-lift the root of the modulus congruent to gbar^p
        gbar_p = self.residue_field.pow(
            tuple([0, 1] + [0] * (d - 2)), p)
        x = tuple(int(c) for c in gbar_p)
        # Newton iteration on h(X) = X^d - sum modulus_i X^i
        prec = 1
        while prec < M:
            prec = min(2 * prec, M)
            hx = self._eval_modulus(x, prec)
            dhx = self._eval_modulus_deriv(x, prec)
            delta = self.poly_mul(hx, self.poly_inv(dhx, prec), prec)
            q = p ** prec
            x = tuple((xi - di) % q for xi, di in zip(x, delta))
        pows = [tuple([1] + [0] * (d - 1)), x]
        for _ in range(d - 2):
            pows.append(self.poly_mul(pows[-1], x, M))
        self._frob_gen_pows = pows
        return pows

    def _eval_modulus(self, x, mod_power):
        """h(x) with h = X^d + sum modulus_i X^i, constant-first."""
        q = self.p ** mod_power
        acc = self.poly_pow(x, self.d, mod_power)
        acc = list(acc)
        acc[0] = (acc[0] + self.modulus[0]) % q
        for i in range(1, self.d):
            ci = self.modulus[i]
            if ci:
                term = self.poly_pow(x, i, mod_power)
                for t in range(self.d):
                    acc[t] = (acc[t] + ci * term[t]) % q
        return tuple(acc)

    def _eval_modulus_deriv(self, x, mod_power):
        q = self.p ** mod_power
        d = self.d
        # h'(X) = d X^(d-1) + sum_{i>=1} i modulus_i X^(i-1)
        acc = self.poly_pow(x, d - 1, mod_power)
        acc = [(d * a) % q for a in acc]
        for i in range(1, d):
            ci = self.modulus[i]
            if ci:
                term = self.poly_pow(x, i - 1, mod_power)
                for t in range(d):
                    acc[t] = (acc[t] + i * ci * term[t]) % q
        return tuple(acc)

    def frobenius_poly(self, coeffs, mod_power):
        """Apply sigma to a coefficient tuple (coefficients are Z_p-fixed)."""
        if self.d == 1:
            return (coeffs[0] % (self.p ** mod_power),)
        pows = self._frobenius_generator_powers()
        q = self.p ** mod_power
        out = [coeffs[0] % q] + [0] * (self.d - 1)
        for i in range(1, self.d):
            ci = coeffs[i]
            if ci:
                for t in range(self.d):
                    out[t] = (out[t] + ci * pows[i][t]) % q
        return tuple(out)

    # -- distinguished constants ---------------------------------------
    def zero(self):
        return PAdicScalar(self, 0, (0,) * self.d, None, exact=True)

    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        if n == 0:
            return self.zero()
        v = _valuation(n, self.p)
        coeffs = (n // self.p ** v,) + (0,) * (self.d - 1)
        return PAdicScalar(self, v, coeffs, None, exact=True)

    def from_rational(self, q):
        q = Fraction(q)
        if q == 0:
            return self.zero()
        num, den = q.numerator, q.denominator
        vn = _valuation(num, self.p)
        vd = _valuation(den, self.p)
        num //= self.p ** vn
        den //= self.p ** vd
        if den in (1, -1):
            coeffs = (num * den,) + (0,) * (self.d - 1)
            return PAdicScalar(self, vn - vd, coeffs, None, exact=True)
        u = (num * pow(den, -1, self.pM)) % self.pM
        coeffs = (u,) + (0,) * (self.d - 1)
        return PAdicScalar(self, vn - vd, coeffs, self.precision_M,
                           exact=False)

    def from_coeffs(self, coeffs, shift=0):
        """Exact element p^shift * (sum coeffs_i g^i) from integers."""
        c = tuple(int(x) for x in coeffs) + (0,) * (self.d - len(coeffs))
        return PAdicScalar(self, shift, c, None, exact=True)._normalize()

    def teichmuller(self, residue):
        """The root-of-unity (or zero) lift of a residue-field element."""
        r = self.residue_field.element(residue)
        if self.residue_field.is_zero(r):
            return self.zero()
        x = tuple(int(c) for c in r)
        q = self.p ** self.d
        for _ in range(self.precision_M + 2):
            nxt = self.poly_pow(x, q, self.precision_M)
            if nxt == x:
                break
            x = nxt
        return PAdicScalar(self, 0, x, self.precision_M, exact=False)

    def eps(self):
        """The configured non-square unit as an exact scalar."""
        return self.from_int(self.eps_int)

    def lam(self):
        """lambda with lambda^2 = eps and sigma(lambda) = -lambda.

        Needs d even: lambda generates the quadratic subextension.
        """
        if self.d % 2 != 0:
            raise InvalidParameter("lambda lives in W(F_{p^2}); need even d")
        if self.d == 2 and self.modulus == (-self.eps_int, 0):
            g = PAdicScalar(self, 0, (0, 1), self.precision_M, exact=False)
            return g
        rf = self.residue_field
        r = rf.sqrt(rf.element(self.eps_int))
        if r is None:
            raise InvalidParameter("eps has no square root in the residue field")
        # Newton: x <- (x + eps/x) / 2
        x = tuple(int(c) for c in r)
        inv2 = pow(2, -1, self.pM)
        prec = 1
        while prec < self.precision_M:
            prec = min(2 * prec, self.precision_M)
            q = self.p ** prec
            xinv = self.poly_inv(x, prec)
            ex = tuple((self.eps_int * c) % q for c in xinv)
            x = tuple(((a + b) * inv2) % q for a, b in zip(x, ex))
        lam = PAdicScalar(self, 0, x, self.precision_M, exact=False)
        flip = lam.frobenius() + lam
        if not (flip.is_zero() or flip.is_precision_zero()):
            raise InvalidParameter("constructed lambda is not sign-flipped by sigma")
        return lam

    def __repr__(self):
        return (f"PAdicParams(p={self.p}, d={self.d}, "
                f"M={self.precision_M})")


class PAdicScalar:
    """p^shift * u with u a degree-<d polynomial in the generator.

    ``rel_prec`` is the number of guaranteed p-adic digits of u (None for
    exact values, whose integer coefficients are meant literally).  The
    element is known modulo p^(shift + rel_prec).  Values are immutable.
    """

    __slots__ = ("params", "shift", "coeffs", "rel_prec", "exact")

    def __init__(self, params, shift, coeffs, rel_prec, exact):
        self.params = params
        self.shift = shift
        self.coeffs = coeffs
        self.rel_prec = rel_prec
        self.exact = exact

    # -- state ----------------------------------------------------------
    def is_zero(self):
        """True if the value is an exact zero."""
        return self.exact and all(c == 0 for c in self.coeffs)

    def is_precision_zero(self):
        return (not self.exact) and all(c == 0 for c in self.coeffs)

    @property
    def val(self):
        """Valuation; +inf for exact zero, ZeroPrecision if masked."""
        if self.is_zero():
            return INF
        if self.is_precision_zero():
            raise ZeroPrecision(
                f"value vanishes mod p^{self.known_bound()}; valuation unknown")
        return self.shift

    def maybe_val(self):
        """Valuation, or None when only a lower bound is known."""
        if self.is_zero():
            return INF
        if self.is_precision_zero():
            return None
        return self.shift

    def known_bound(self):
        """The value is known modulo p^known_bound (INF when exact)."""
        if self.exact:
            return INF
        return self.shift + self.rel_prec

    def _normalize(self):
        p = self.params.p
        if self.exact:
            v = _tuple_valuation(self.coeffs, p)
            if v is None:
                if self.shift != 0:
                    return PAdicScalar(self.params, 0, self.coeffs, None, True)
                return self
            if v:
                coeffs = tuple(c // p ** v for c in self.coeffs)
                return PAdicScalar(self.params, self.shift + v, coeffs,
                                   None, True)
            return self
        n = self.rel_prec
        if n < 1:
            raise ZeroPrecision("no retained digits after operation")
        q = p ** n
        coeffs = tuple(c % q for c in self.coeffs)
        v = _tuple_valuation(coeffs, p)
        if v is None:
            return PAdicScalar(self.params, self.shift, coeffs, n, False)
        if v:
            coeffs = tuple(c // p ** v for c in coeffs)
            return PAdicScalar(self.params, self.shift + v, coeffs,
                               n - v, False)._capped()
        return self._capped()

    def _capped(self):
        M = self.params.precision_M
        if not self.exact and self.rel_prec > M:
            q = self.params.p ** M
            return PAdicScalar(self.params, self.shift,
                               tuple(c % q for c in self.coeffs), M, False)
        return self

    # -- ring operations -------------------------------------------------
    def _check(self, other):
        if self.params is not other.params:
            raise InvalidParameter("mixed parameter sets")

    def __add__(self, other):
        self._check(other)
        a, b = self, other
        if a.is_zero():
            return b
        if b.is_zero():
            return a
        s = min(a.shift, b.shift)
        p = self.params.p
        ca = tuple(c * p ** (a.shift - s) for c in a.coeffs)
        cb = tuple(c * p ** (b.shift - s) for c in b.coeffs)
        coeffs = tuple(x + y for x, y in zip(ca, cb))
        if a.exact and b.exact:
            return PAdicScalar(self.params, s, coeffs, None, True)._normalize()
        bound = min(a.known_bound(), b.known_bound())
        n = bound - s
        return PAdicScalar(self.params, s, coeffs, n, False)._normalize()

    def __neg__(self):
        return PAdicScalar(self.params, self.shift,
                           tuple(-c for c in self.coeffs),
                           self.rel_prec, self.exact)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.params.from_int(other)
        self._check(other)
        a, b = self, other
        if a.is_zero() or b.is_zero():
            return self.params.zero()
        s = a.shift + b.shift
        if a.exact and b.exact:
            # unreduced integer product
            d = self.params.d
            res = [0] * (2 * d - 1) if d > 1 else [a.coeffs[0] * b.coeffs[0]]
            if d > 1:
                for i in range(d):
                    ai = a.coeffs[i]
                    if ai:
                        for j in range(d):
                            res[i + j] += ai * b.coeffs[j]
                out = res[:d]
                for k in range(d, 2 * d - 1):
                    c = res[k]
                    if c:
                        # exact reduction uses integer modulus relation
                        row = self._exact_red_row(k - d)
                        for t in range(d):
                            out[t] += c * row[t]
                coeffs = tuple(out)
            else:
                coeffs = (res[0],)
            return PAdicScalar(self.params, s, coeffs, None,
                               True)._normalize()
        if a.is_precision_zero() or b.is_precision_zero():
            # product of a bounded-zero with anything: only a bound survives
            bound_a = a.known_bound() if a.is_precision_zero() else a.shift
            bound_b = b.known_bound() if b.is_precision_zero() else b.shift
            if a.is_precision_zero() and not b.is_precision_zero():
                bound = a.known_bound() + b.shift
            elif b.is_precision_zero() and not a.is_precision_zero():
                bound = b.known_bound() + a.shift
            else:
                bound = a.known_bound() + b.known_bound()
            return PAdicScalar(self.params, bound - 1, (0,) * self.params.d,
                               1, False)
        na = a.rel_prec if not a.exact else None
        nb = b.rel_prec if not b.exact else None
        n = min(x for x in (na, nb) if x is not None)
        coeffs = self.params.poly_mul(a.coeffs, b.coeffs, n)
        return PAdicScalar(self.params, s, coeffs, n, False)._normalize()

    __rmul__ = __mul__

    def _exact_red_row(self, k):
        # g^(d+k) written in the power basis with exact integer entries
        params = self.params
        d = params.d
        rows = getattr(params, "_exact_rows", None)
        if rows is None:
            rows = []
            cur = [-c for c in params.modulus]
            rows.append(list(cur))
            for _ in range(d - 2):
                nxt = [0] + cur[:-1]
                lead = cur[-1]
                if lead:
                    for t in range(d):
                        nxt[t] += lead * rows[0][t]
                cur = nxt
                rows.append(list(cur))
            params._exact_rows = rows
        return rows[k]

    def inv(self):
        if self.is_zero():
            raise DivisionByZero("inverse of exact zero")
        if self.is_precision_zero():
            raise ZeroPrecision("inverse of a value indistinguishable from 0")
        n = self.params.precision_M if self.exact else self.rel_prec
        q = self.params.p ** n
        coeffs = tuple(c % q for c in self.coeffs)
        inv = self.params.poly_inv(coeffs, n)
        return PAdicScalar(self.params, -self.shift, inv, n,
                           False)._normalize()

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.params.from_int(other)
        return self * other.inv()

    def frobenius(self):
        """The lift sigma of x -> x^p; fixes Z_p, order d."""
        if self.is_zero():
            return self
        if self.params.d == 1 or all(c == 0 for c in self.coeffs[1:]):
            return self  # sigma fixes Z_p
        n = self.params.precision_M if self.exact else self.rel_prec
        coeffs = self.params.frobenius_poly(self.coeffs, n)
        return PAdicScalar(self.params, self.shift, coeffs, n,
                           False)._normalize()

    def frobenius_power(self, k):
        x = self
        for _ in range(k % self.params.d if self.params.d else 0):
            x = x.frobenius()
        return x

    def residue(self):
        """Image in F_{p^d} of a value with shift 0 (0 for positive shift)."""
        if self.is_zero():
            return self.params.residue_field.element(0)
        if self.shift > 0:
            return self.params.residue_field.element(0)
        if self.shift < 0:
            raise InvalidParameter("negative valuation has no residue")
        p = self.params.p
        return tuple(c % p for c in self.coeffs)

    def shift_by(self, k):
        """Multiply by p^k (exactness preserved)."""
        if self.is_zero():
            return self
        return PAdicScalar(self.params, self.shift + k, self.coeffs,
                           self.rel_prec, self.exact)

    # -- comparison and display ------------------------------------------
    def same_as(self, other, digits=None):
        """Agreement modulo p^min(bounds) (or p^(shared val + digits))."""
        diff = self - other
        if diff.is_zero():
            return True
        if diff.is_precision_zero():
            return True
        if digits is not None:
            ref = min(x for x in (self.maybe_val(), other.maybe_val(), 0)
                      if x is not None)
            return diff.val >= ref + digits
        return False

    def __str__(self):
        if self.is_zero():
            return "0"
        M = self.params.precision_M
        if self.is_precision_zero():
            return f"O(p^{self.known_bound()})"
        n = self.rel_prec if not self.exact else M
        q = self.params.p ** n
        parts = []
        for i, c in enumerate(self.coeffs):
            c %= q
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*g")
            else:
                parts.append(f"{c}*g^{i}")
        body = " + ".join(parts) if parts else "0"
        return f"p^{self.shift} * ({body}) mod p^{n}"

    __repr__ = __str__


def parse_scalar(params, text):
    """Parse the rendering ``p^v * (c0 + c1*g + ...) mod p^M``."""
    text = text.strip()
    if text == "0":
        return params.zero()
    if text.startswith("O(p^"):
        bound = int(text[4:].rstrip(")"))
        return PAdicScalar(params, bound - 1, (0,) * params.d, 1, False)
    head, _, _ = text.partition(" mod ")
    vpart, _, body = head.partition("*")
    shift = int(vpart.strip().replace("p^", ""))
    body = body.strip().lstrip("(").rstrip(")")
    coeffs = [0] * params.d
    for term in body.split("+"):
        term = term.strip()
        if not term:
            continue
        if "*g^" in term:
            c, e = term.split("*g^")
            coeffs[int(e)] = int(c)
        elif term.endswith("*g"):
            coeffs[1] = int(term[:-2])
        else:
            coeffs[0] = int(term)
    return PAdicScalar(params, shift, tuple(coeffs),
                       params.precision_M, False)._normalize()
