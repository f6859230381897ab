#!/usr/bin/env python3
"""A tour of the exact p-adic layer.

Elements of W(F_{p^d}) are polynomials in a generator g modulo a fixed
lifted irreducible, with a tracked precision per value.  Everything the
crystal machinery needs lives here: Frobenius, Teichmuller lifts, and
the distinguished constants eps (a non-square unit) and lambda (a square
root of eps that Frobenius negates).
"""

from froblat import PAdicParams

# Z_5 to 3 digits: enough to see the classic examples
Z5 = PAdicParams(5, 1, 3)

print("2 + 3 =", Z5.from_int(2) + Z5.from_int(3))
print("1/2   =", Z5.from_int(2).inv(), "(2 * 63 = 126 = 1 mod 125)")

t = Z5.teichmuller(2)
print("Teichmuller lift of 2:", t)
print("  its square:", t * t, "(= Teichmuller(4) = -1 mod 125)")

# the quadratic unramified extension: lambda^2 = eps, sigma(lambda) = -lambda
W = PAdicParams(5, 2, 6)
lam = W.lam()
print("\nlambda =", lam)
print("lambda^2 - eps =", lam * lam - W.eps())
print("sigma(lambda) + lambda =", lam.frobenius() + lam)

# Frobenius fixes the prime field and has order d
c = W.teichmuller((2, 3))
print("\nc =", c)
print("sigma(c) =", c.frobenius())
print("sigma^2(c) - c =", c.frobenius().frobenius() - c)

# exact cancellation is recognized as an exact zero
x = W.from_rational("7/5")
print("\nx - x is exact zero:", (x - x).is_zero())
