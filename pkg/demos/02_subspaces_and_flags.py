"""Canonical subspaces, Gaussian binomials, flags and complements.

Subspaces of V = k^(n+1) are stored as reduced row-echelon bases, the
unique canonical representative, so equality and hashing are structural.
"""

from drinfeld import (
    Subspace,
    complement,
    context_for,
    enumerate_flags,
    enumerate_subspaces,
    gaussian_binomial,
)

ctx = context_for(2, 1, 3, [1])
print("subspaces of F_2^3 by dimension:")
for d in range(4):
    subs = enumerate_subspaces(3, d, ctx)
    print(f"  dim {d}: {len(subs)} subspaces (Gaussian binomial"
          f" [3 choose {d}]_2 = {gaussian_binomial(3, d, 2)})")

print("\nthe seven lines, as echelon rows over F_2:")
for sub in enumerate_subspaces(3, 1, ctx):
    print("  ", [[int(bool(a)) for a in row] for row in sub.rows])

flags = enumerate_flags(3, ctx)
by_length = {}
for f in flags:
    by_length.setdefault(len(f), []).append(f)
print(f"\nflags of F_2^3: {len(flags)} total")
for length, group in sorted(by_length.items()):
    label = {0: "trivial", 1: "one member", 2: "complete"}[length]
    print(f"  {label}: {len(group)}")

# a deterministic complement: non-pivot echelon basis vectors
one, zero = ctx.one, ctx.zero
V = Subspace.full(2, ctx)
diag = Subspace.span(2, [(one, one)])
C = complement(diag, V)
print("\ncomplement of span(e1 + e2) in k^2:",
      [[int(bool(a)) for a in row] for row in C.rows])
print("direct sum check:", diag.sum(C) == V)
