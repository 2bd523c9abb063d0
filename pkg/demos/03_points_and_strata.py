"""Points of the three compactifications and where they sit.

A covector point (P side) is classified by its rational kernel, a
reciprocal map (Q side) by the span of its support, and a compatible
family (B side) by the flag its kernel chain cuts out.  The projections
pi and rho connect the family side to the other two.
"""

from drinfeld import (
    PPoint,
    b_enumerate,
    b_classify,
    context_for,
    frobenius_twist,
    omega_embed_b,
    omega_embed_q,
    p_classify,
    pi_map,
    q_classify,
    q_enumerate,
    rho_map,
    twist_span_dim,
)
from drinfeld.points import flag_str, subspace_str, vector_str

ctx = context_for(2, 1, 2, [1, 2])
w = next(a for a in ctx.subfield_elements(2) if a not in (ctx.zero, ctx.one))

# a dense point: no k-rational vector in the kernel
l = PPoint(ctx, (ctx.one, w))
print("l = (1, w) over GF(4):")
print("  rational kernel:", subspace_str(p_classify(l), ctx), "(the zero subspace)")
print("  twist l^F:", "(1, w+1) =",
      [list(a.coeffs[:2]) for a in frobenius_twist(l, 1).coords])
print("  twist span dimension:", twist_span_dim(l), "(= dim V, the dense case)")

# a rational point lands in the stratum of its kernel line
rational = PPoint(ctx, (ctx.one, ctx.one))
print("\nl = (1, 1):")
print("  rational kernel:", subspace_str(p_classify(rational), ctx))
print("  twist span dimension:", twist_span_dim(rational))

# reciprocal maps over k: one per line of k^2 (and nothing else)
print("\nreciprocal maps over k = F_2:")
for x in q_enumerate(ctx, 2, 1):
    support = q_classify(x)
    values = {vector_str(v, ctx): repr(val) for v, val in x.table.items()}
    print(f"  support {subspace_str(support, ctx)}: {values}")

# the dense embeddings agree: rho(embed(l)) = 1/l, pi(embed(l)) = l
xb = omega_embed_b(l)
print("\ndense point embedded into the family side:")
print("  stratum flag:", flag_str(b_classify(xb), ctx))
print("  pi back to the covector:", pi_map(xb) == l)
print("  rho equals the pointwise inverse:", rho_map(xb) == omega_embed_q(l))

# family-side census over GF(4) for dim V = 3
ctx3 = context_for(2, 1, 3, [1, 2])
points = b_enumerate(ctx3, 3, 2)
by_flag = {}
for x in points:
    key = flag_str(b_classify(x), ctx3)
    by_flag[key] = by_flag.get(key, 0) + 1
print(f"\n|B(F_4)| for dim V = 3: {len(points)} points"
      f" across {sum(1 for v in by_flag.values() if v)} nonempty strata")
print("  trivial-flag stratum is empty:", "()" not in by_flag)
