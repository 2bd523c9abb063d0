"""One ambient field, many subfields.

Everything in this library computes inside a single GF(p^D).  The base
field k = GF(q) and the working extensions k_m are cut out by Frobenius
fixed-point tests, so there is never any embedding bookkeeping.
"""

from drinfeld import context_for, frobenius_k, subfield_degree

# a context large enough for k = GF(2), k_2 = GF(4), k_3 = GF(8)
ctx = context_for(p=2, e=1, n_plus_1=3, m_list=[1, 2, 3])
print(f"ambient field: GF({ctx.p}^{ctx.D}), modulus coefficients {ctx.modulus}")
print(f"base field k = GF({ctx.q})")

# the subfield k_m is the fixed locus of m applications of a -> a^q
for m in (1, 2, 3, 6):
    els = ctx.subfield_elements(m)
    print(f"|k_{m}| = {len(els)}  (= q^{m})")

# a generator of GF(4) and its Frobenius orbit
w = next(a for a in ctx.subfield_elements(2) if a not in (ctx.zero, ctx.one))
print(f"\nw = {w!r} generates GF(4) over GF(2)")
print(f"  w^q     = {frobenius_k(w)!r}  (equals w + 1)")
print(f"  w^(q^2) = {frobenius_k(frobenius_k(w))!r}  (back to w)")
print(f"  minimal degree of w over k: {subfield_degree(w, 6)}")

# exact arithmetic: inverses, powers
a = ctx.element((1, 0, 1, 1))
print(f"\na = {a!r}")
print(f"  a * a^(-1) = {a * a.inverse()!r}")
print(f"  a^(2^6 - 1) = {a ** (2 ** 6 - 1)!r}  (multiplicative order divides 63)")
