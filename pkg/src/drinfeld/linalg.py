"""Exact linear algebra over k and its extensions inside one ambient field.

Subspaces of V = k^(n+1) are kept in reduced row-echelon form, which is the
unique canonical basis: subspace equality is plain tuple equality and every
subspace is hashable.  Flags are strictly increasing chains of proper nonzero
subspaces, ordered ascending (smallest member first).
"""

from functools import lru_cache
from itertools import combinations, product

from .field import _int_kernel_mod_p


def rref(rows):
    """Reduced row-echelon form over the elements' field.

    Returns (tuple of nonzero echelon rows, rank).  Rows must all have the
    same length.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return (), 0
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged rows")
    rank = 0
    for col in range(width):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        rows[rank] = [inv * v for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                c = rows[r][col]
                rows[r] = [a - c * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    out = tuple(tuple(r) for r in rows[:rank] if any(r))
    return out, len(out)


def vec_key(v):
    "Deterministic sort key for a vector of field elements."
    return tuple(a.coeffs for a in v)


class Subspace:
    """A k-rational subspace of k^(n+1) in canonical echelon form."""

    __slots__ = ("n_plus_1", "rows", "_hash")

    def __init__(self, n_plus_1, rows):
        self.n_plus_1 = n_plus_1
        self.rows = rows
        self._hash = hash((n_plus_1, tuple(tuple(a.coeffs for a in r) for r in rows)))

    @classmethod
    def span(cls, n_plus_1, vectors):
        rows, _ = rref(vectors)
        return cls(n_plus_1, rows)

    @classmethod
    def zero(cls, n_plus_1):
        return cls(n_plus_1, ())

    @classmethod
    def full(cls, n_plus_1, ctx):
        rows = []
        for i in range(n_plus_1):
            row = [ctx.zero] * n_plus_1
            row[i] = ctx.one
            rows.append(tuple(row))
        return cls(n_plus_1, tuple(rows))

    @property
    def dim(self):
        return len(self.rows)

    def pivots(self):
        return tuple(next(i for i, a in enumerate(r) if a) for r in self.rows)

    def contains_vector(self, v):
        "Membership test by reduction against the echelon rows."
        v = list(v)
        for r in self.rows:
            piv = next(i for i, a in enumerate(r) if a)
            if v[piv]:
                c = v[piv]
                v = [a - c * b for a, b in zip(v, r)]
        return not any(v)

    def contains(self, other):
        return all(self.contains_vector(r) for r in other.rows)

    def coords_of(self, v):
        """Coordinates of v with respect to the echelon basis; v must lie here.

        Echelon form makes this a lookup: the coefficient of row i is the
        entry of v at row i's pivot column.
        """
        coords = tuple(v[p] for p in self.pivots())
        # residual must vanish
        resid = list(v)
        for c, r in zip(coords, self.rows):
            if c:
                resid = [a - c * b for a, b in zip(resid, r)]
        if any(resid):
            raise ValueError("vector not in subspace")
        return coords

    def vectors(self, ctx):
        "All q^dim k-rational vectors of the subspace (including zero)."
        n, k_els = self.n_plus_1, ctx.k_elements
        out = []
        for combo in product(k_els, repeat=self.dim):
            acc = [ctx.zero] * n
            for c, row in zip(combo, self.rows):
                if c:
                    acc = [a + c * b for a, b in zip(acc, row)]
            out.append(tuple(acc))
        return out

    def nonzero_vectors(self, ctx):
        return [v for v in self.vectors(ctx) if any(v)]

    def sum(self, other):
        return Subspace.span(self.n_plus_1, list(self.rows) + list(other.rows))

    def sort_key(self):
        return (self.dim, tuple(tuple(a.coeffs for a in r) for r in self.rows))

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.n_plus_1 == other.n_plus_1
            and self.rows == other.rows
        )

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (Subspace, (self.n_plus_1, self.rows))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of k^{self.n_plus_1})"


class Flag:
    """A strictly increasing chain of proper nonzero subspaces of k^(n+1).

    Members are stored ascending; the empty chain is the trivial flag.
    """

    __slots__ = ("n_plus_1", "members", "_hash")

    def __init__(self, n_plus_1, members):
        members = tuple(members)
        for a, b in zip(members, members[1:]):
            if not (b.contains(a) and a.dim < b.dim):
                raise ValueError("flag members must strictly increase")
        for m in members:
            if m.dim == 0 or m.dim == n_plus_1:
                raise ValueError("flag members must be proper and nonzero")
        self.n_plus_1 = n_plus_1
        self.members = members
        self._hash = hash((n_plus_1, members))

    @classmethod
    def trivial(cls, n_plus_1):
        return cls(n_plus_1, ())

    def __len__(self):
        return len(self.members)

    @property
    def smallest(self):
        "Smallest member, or None for the trivial flag."
        return self.members[0] if self.members else None

    @property
    def largest(self):
        return self.members[-1] if self.members else None

    def chain(self, ctx):
        "The full descending chain V = C_0 > C_1 > ... > C_last = 0."
        full = Subspace.full(self.n_plus_1, ctx)
        zero = Subspace.zero(self.n_plus_1)
        return [full] + list(reversed(self.members)) + [zero]

    def sort_key(self):
        return (len(self.members), tuple(m.sort_key() for m in self.members))

    def __eq__(self, other):
        return (
            isinstance(other, Flag)
            and self.n_plus_1 == other.n_plus_1
            and self.members == other.members
        )

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (Flag, (self.n_plus_1, self.members))

    def __repr__(self):
        dims = tuple(m.dim for m in self.members)
        return f"Flag(dims {dims} in k^{self.n_plus_1})"


def flag_leq(f, g):
    "Refinement order: every member of f is a member of g."
    if f.n_plus_1 != g.n_plus_1:
        raise ValueError("flags in different ambient spaces")
    gset = set(g.members)
    return all(m in gset for m in f.members)


def normalize_functional(coords):
    "Scale so the first nonzero coordinate is 1; rejects the zero vector."
    coords = tuple(coords)
    lead = next((a for a in coords if a), None)
    if lead is None:
        raise ValueError("zero functional")
    inv = lead.inverse()
    return tuple(inv * a for a in coords)


def functional_ratio(u, v):
    "Scalar c with u = c*v, or None if the vectors are not proportional."
    lead = next((i for i, a in enumerate(v) if a), None)
    if lead is None:
        raise ValueError("ratio against the zero vector")
    c = u[lead] * v[lead].inverse()
    if all(a == c * b for a, b in zip(u, v)):
        return c
    return None


def apply_functional(coords, v):
    "Evaluate sum coords_i * v_i."
    ctx = coords[0].ctx
    acc = ctx.zero
    for a, b in zip(coords, v):
        if a and b:
            acc = acc + a * b
    return acc


def rational_kernel(coords, ctx):
    """The k-rational kernel {v in k^(n+1) : sum coords_i v_i = 0}.

    Each coordinate is expanded over an F_p-basis of k, the resulting F_p
    system is solved exactly, and the solution set is returned in canonical
    echelon form over k (it is automatically a k-subspace).
    """
    n_plus_1 = len(coords)
    k_basis = _k_basis(ctx)
    # unknowns: F_p-coordinates c_{j,t} of v_j = sum_t c_{j,t} beta_t
    cols = []
    for j in range(n_plus_1):
        for beta in k_basis:
            cols.append((coords[j] * beta).coeffs)
    rows = [[cols[c][i] for c in range(len(cols))] for i in range(ctx.D)]
    kern = _int_kernel_mod_p(rows, ctx.p)
    vectors = []
    for vec in kern:
        v = []
        for j in range(n_plus_1):
            acc = ctx.zero
            for t, beta in enumerate(k_basis):
                c = vec[j * len(k_basis) + t]
                if c:
                    acc = acc + ctx.from_int(c) * beta
            v.append(acc)
        vectors.append(tuple(v))
    return Subspace.span(n_plus_1, vectors)


@lru_cache(maxsize=None)
def _k_basis(ctx):
    "An F_p-basis of k inside the ambient field."
    els = ctx.subfield_elements(1)
    rows = [list(a.coeffs) for a in els]
    ech, rank = _int_rref_mod_p(rows, ctx.p)
    assert rank == ctx.e
    return tuple(ctx.element(r) for r in ech[:rank])


def _int_rref_mod_p(rows, p):
    mat = [list(r) for r in rows]
    if not mat:
        return [], 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(mat)):
            if mat[r][col] % p:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], p - 2, p)
        mat[rank] = [(inv * v) % p for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] % p:
                c = mat[r][col]
                mat[r] = [(a - c * b) % p for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return mat, rank


def gaussian_binomial(n, d, q):
    "Number of d-dimensional subspaces of an n-dimensional space over F_q."
    if d < 0 or d > n:
        return 0
    num = 1
    den = 1
    for i in range(d):
        num *= q ** (n - i) - 1
        den *= q ** (d - i) - 1
    assert num % den == 0
    return num // den


def enumerate_subspaces(n_plus_1, d, ctx):
    """All d-dimensional k-subspaces of k^(n+1), canonical and sorted.

    Echelon parametrisation: choose pivot columns, then fill every entry
    that sits right of its row's pivot and is not itself a pivot column.
    """
    if d < 0 or d > n_plus_1:
        raise ValueError(f"dimension {d} out of range")
    if d == 0:
        return [Subspace.zero(n_plus_1)]
    k_els = ctx.k_elements
    out = []
    for pivs in combinations(range(n_plus_1), d):
        free = []
        for i in range(d):
            for col in range(pivs[i] + 1, n_plus_1):
                if col not in pivs:
                    free.append((i, col))
        for values in product(k_els, repeat=len(free)):
            rows = [[ctx.zero] * n_plus_1 for _ in range(d)]
            for i, pcol in enumerate(pivs):
                rows[i][pcol] = ctx.one
            for (i, col), val in zip(free, values):
                rows[i][col] = val
            out.append(Subspace(n_plus_1, tuple(tuple(r) for r in rows)))
    out.sort(key=Subspace.sort_key)
    return out


def all_subspaces(n_plus_1, ctx, include_zero=True, include_full=True):
    lo = 0 if include_zero else 1
    hi = n_plus_1 if include_full else n_plus_1 - 1
    out = []
    for d in range(lo, hi + 1):
        out.extend(enumerate_subspaces(n_plus_1, d, ctx))
    return out


def enumerate_flags(n_plus_1, ctx):
    """All flags of k^(n+1): strictly increasing chains of proper nonzero
    subspaces, the empty chain included.  Deterministic order."""
    proper = all_subspaces(n_plus_1, ctx, include_zero=False, include_full=False)
    chains = [()]
    grow = [()]
    while grow:
        nxt = []
        for chain in grow:
            top = chain[-1] if chain else None
            for s in proper:
                if top is None or (s.dim > top.dim and s.contains(top)):
                    nxt.append(chain + (s,))
        chains.extend(nxt)
        grow = nxt
    flags = [Flag(n_plus_1, c) for c in chains]
    flags.sort(key=Flag.sort_key)
    return flags


def complement(sub, within):
    """The deterministic complement of sub inside within.

    In the coordinates of within's echelon basis, sub is again in echelon
    form; the complement is spanned by the basis rows of within at sub's
    non-pivot coordinate positions.  sub + result = within, directly.
    """
    if not within.contains(sub):
        raise ValueError("sub is not contained in within")
    coords = [within.coords_of(r) for r in sub.rows]
    ech, rank = rref(coords)
    assert rank == sub.dim
    pivs = set()
    for r in ech:
        pivs.add(next(i for i, a in enumerate(r) if a))
    rows = tuple(within.rows[i] for i in range(within.dim) if i not in pivs)
    return Subspace(within.n_plus_1, rows)


def quotient_functional(coords, sub, ctx):
    """Induced functional on the quotient by sub, in complement coordinates.

    coords is a functional on the full coordinate space k^s that must vanish
    on sub (a subspace of k^s).  Returns (complement of sub in k^s, induced
    normalized coords on that complement).
    """
    s = len(coords)
    for r in sub.rows:
        if apply_functional(coords, r):
            raise ValueError("functional does not vanish on the subspace")
    comp = complement(sub, Subspace.full(s, ctx))
    induced = tuple(apply_functional(coords, r) for r in comp.rows)
    return comp, normalize_functional(induced)


def restrict_functional(coords, sub):
    "Values of the functional on sub's echelon basis rows (not normalized)."
    return tuple(apply_functional(coords, r) for r in sub.rows)


def subspace_in_coords(within, sub):
    "Express sub (a subspace of within) inside within's coordinate space."
    vecs = [within.coords_of(r) for r in sub.rows]
    return Subspace.span(within.dim, vecs)


def coords_to_ambient(within, coord_rows):
    "Map vectors of within's coordinate space back into the ambient space."
    out = []
    for cr in coord_rows:
        acc = [within.rows[0][0].ctx.zero] * within.n_plus_1
        for c, row in zip(cr, within.rows):
            if c:
                acc = [a + c * b for a, b in zip(acc, row)]
        out.append(tuple(acc))
    return out
