"""The action of PGL(V)(k) on points and the structure of stabilizers.

All three point kinds carry right actions: covectors pull back along g,
reciprocal maps precompose with g, families move by
(family . g)_W = l_{g(W)} o g|_W.  Stabilizers are computed twice and
compared: once by sheer brute force over the whole group, and once through
the block-triangular description, whose diagonal blocks act as Galois-twisted
scalars on the twist span of a dense quotient point (fixpoint_check_omega).
"""

from functools import lru_cache
from itertools import product

from .errors import DefectSignal
from .linalg import (
    Flag,
    Subspace,
    apply_functional,
    complement,
    coords_to_ambient,
    normalize_functional,
    functional_ratio,
    quotient_functional,
    rational_kernel,
    rref,
    subspace_in_coords,
)
from .points import (
    BPoint,
    PPoint,
    QPoint,
    b_classify,
    p_classify,
    q_classify,
    twist_coords,
)


class GroupElement:
    """An element of PGL(n+1, k): an invertible matrix over k, scaled so the
    first nonzero entry in row-major order is 1."""

    __slots__ = ("ctx", "matrix", "_hash")

    def __init__(self, ctx, matrix):
        matrix = tuple(tuple(r) for r in matrix)
        lead = next(a for row in matrix for a in row if a)
        if lead != ctx.one:
            inv = lead.inverse()
            matrix = tuple(tuple(inv * a for a in row) for row in matrix)
        self.ctx = ctx
        self.matrix = matrix
        self._hash = hash(tuple(tuple(a.coeffs for a in r) for r in matrix))

    @classmethod
    def identity(cls, n_plus_1, ctx):
        rows = [
            [ctx.one if i == j else ctx.zero for j in range(n_plus_1)]
            for i in range(n_plus_1)
        ]
        return cls(ctx, rows)

    @property
    def n_plus_1(self):
        return len(self.matrix)

    def apply(self, v):
        "g(v): matrix times column vector."
        return tuple(
            apply_functional(row, v) for row in self.matrix
        )

    def apply_subspace(self, sub):
        return Subspace.span(sub.n_plus_1, [self.apply(r) for r in sub.rows])

    def compose(self, other):
        "Matrix product self * other, so (self*other)(v) = self(other(v))."
        n = self.n_plus_1
        cols = list(zip(*other.matrix))
        rows = [
            [apply_functional(self.matrix[i], cols[j]) for j in range(n)]
            for i in range(n)
        ]
        return GroupElement(self.ctx, rows)

    def inverse(self):
        "Inverse by Gauss-Jordan on the augmented matrix."
        n = self.n_plus_1
        ctx = self.ctx
        aug = [
            list(self.matrix[i])
            + [ctx.one if j == i else ctx.zero for j in range(n)]
            for i in range(n)
        ]
        ech, rank = rref(aug)
        if rank < n:
            raise ValueError("matrix not invertible")
        return GroupElement(ctx, [r[n:] for r in ech])

    def order(self):
        e = GroupElement.identity(self.n_plus_1, self.ctx)
        g = self
        n = 1
        while g != e:
            g = g.compose(self)
            n += 1
        return n

    def is_identity(self):
        return self == GroupElement.identity(self.n_plus_1, self.ctx)

    def sort_key(self):
        return tuple(tuple(a.coeffs for a in r) for r in self.matrix)

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.matrix == other.matrix

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (GroupElement, (self.ctx, self.matrix))

    def __repr__(self):
        return f"GroupElement({self.matrix})"


class ParabolicData:
    """A flag with its deterministic complement decomposition
    V = C_last + ... + C_0 (summands listed top quotient first)."""

    __slots__ = ("flag", "blocks")

    def __init__(self, flag, ctx):
        chain = flag.chain(ctx)
        self.flag = flag
        self.blocks = tuple(
            complement(chain[t + 1], chain[t]) for t in range(len(chain) - 1)
        )


def pgl_order(n_plus_1, q):
    "Product formula for |PGL(n+1, q)| = |GL(n+1, q)| / (q - 1)."
    order = 1
    for i in range(n_plus_1):
        order *= q**n_plus_1 - q**i
    return order // (q - 1)


@lru_cache(maxsize=None)
def _enumerate_pgl_cached(n_plus_1, ctx):
    bound = 10**5
    if pgl_order(n_plus_1, ctx.q) > bound:
        raise ValueError(
            f"|PGL({n_plus_1}, {ctx.q})| exceeds the desk-scale bound {bound}"
        )
    k_els = ctx.k_elements
    out = []
    for flat in product(k_els, repeat=n_plus_1 * n_plus_1):
        lead = next((a for a in flat if a), None)
        if lead != ctx.one:
            continue  # one representative per scalar coset
        rows = [flat[i * n_plus_1 : (i + 1) * n_plus_1] for i in range(n_plus_1)]
        _, rank = rref(rows)
        if rank == n_plus_1:
            out.append(GroupElement(ctx, rows))
    assert len(out) == pgl_order(n_plus_1, ctx.q)
    return tuple(out)


def enumerate_pgl(n_plus_1, ctx):
    "All elements of PGL(n+1)(k) as canonical representatives, sorted."
    return list(_enumerate_pgl_cached(n_plus_1, ctx))


# ---------------------------------------------------------------------------
# actions (all right actions)


def act_P(x, g):
    "Pull back the covector: coordinates of l o g."
    cols = list(zip(*g.matrix))
    coords = tuple(apply_functional(x.coords, col) for col in cols)
    return PPoint(x.ctx, coords)


def act_Q(x, g):
    "(r . g)(v) = r(g(v))."
    table = {v: x.table[g.apply(v)] for v in x.table}
    return QPoint(x.ctx, x.n_plus_1, table, validate=False)


def act_B(x, g):
    "(family . g)_W = l_{g(W)} o g restricted to W."
    family = {}
    for W in x.family:
        gW = g.apply_subspace(W)
        coords = tuple(x.value(gW, g.apply(r)) for r in W.rows)
        family[W] = normalize_functional(coords)
    return BPoint(x.ctx, x.n_plus_1, family, validate=False)


def act(x, g):
    if isinstance(x, PPoint):
        return act_P(x, g)
    if isinstance(x, QPoint):
        return act_Q(x, g)
    if isinstance(x, BPoint):
        return act_B(x, g)
    raise TypeError(f"not a point: {x!r}")


# ---------------------------------------------------------------------------
# stabilizers


def stabilizer_bruteforce(x, group=None):
    "All g with x.g = x, by acting with every element; asserted a subgroup."
    ctx = x.ctx
    n_plus_1 = x.n_plus_1 if not isinstance(x, PPoint) else len(x.coords)
    if group is None:
        group = enumerate_pgl(n_plus_1, ctx)
    stab = [g for g in group if act(x, g) == x]
    members = set(stab)
    for g in stab:
        assert g.inverse() in members, "stabilizer not closed under inverse"
        for h in stab:
            assert g.compose(h) in members, "stabilizer not closed under product"
    return sorted(members, key=GroupElement.sort_key)


def fixpoint_check_omega(coords, g_matrix_rows, ctx):
    """Characterize when g fixes a dense point, without acting on it.

    coords: a functional with trivial rational kernel on a space of
    dimension s; g given by matrix rows over k on the same space.  For each
    divisor d of s, test

      (i)  the span U of the d-step twists l, l^(F^d), ..., l^(F^(s-d))
           is closed under further d-step twisting, and
      (ii) the transpose of g scales every twist l^(F^t) by F^(-t)(lam)
           for one lam fixed by F^d (lam in k_d).

    Returns the smallest witnessing divisor d, or None if g does not fix
    the point.
    """
    s = len(coords)
    if rational_kernel(coords, ctx).dim != 0:
        raise ValueError("not a dense point: rational kernel is nontrivial")
    cols = list(zip(*g_matrix_rows))
    twists = [tuple(coords)]
    for _ in range(s):
        twists.append(twist_coords(twists[-1], 1, ctx))
    # ratios mu_t with l^(F^t) o g = mu_t * l^(F^t); all must exist
    mus = []
    for t in range(s):
        lt = twists[t]
        ltg = tuple(apply_functional(lt, col) for col in cols)
        mu = functional_ratio(ltg, lt)
        if mu is None:
            return None
        mus.append(mu)
    lam = mus[0]
    if not lam:
        return None
    cur = lam
    for t in range(1, s):
        cur = ctx.inv_frobenius(cur)
        if mus[t] != cur:
            return None
    for d in range(1, s + 1):
        if s % d:
            continue
        # lam must live in k_d
        if not ctx.in_subfield(lam, d):
            continue
        u_basis = [twists[j] for j in range(0, s, d)]
        _, rank_u = rref(u_basis)
        _, rank_ext = rref(u_basis + [twists[s]])
        if rank_ext == rank_u:
            return d
    return None


class _QuotientBlock:
    """Precomputed data for inducing a group element on big/small and testing
    whether the induced map fixes the attached dense quotient point.

    coords is a functional on big's coordinate space vanishing on small.
    Only call passes(g) for g leaving big (and small) invariant.
    """

    __slots__ = ("ctx", "pivots", "small_dim", "basis_rows", "amb_basis", "lbar")

    def __init__(self, big, small, coords, ctx):
        s = big.dim
        small_c = subspace_in_coords(big, small)
        comp_c = complement(small_c, Subspace.full(s, ctx))
        self.ctx = ctx
        self.pivots = big.pivots()
        self.small_dim = small_c.dim
        self.basis_rows = list(small_c.rows) + list(comp_c.rows)
        self.amb_basis = coords_to_ambient(big, comp_c.rows)
        _, self.lbar = quotient_functional(coords, small_c, ctx)

    def induced_matrix(self, g):
        induced = []
        for amb in self.amb_basis:
            img = g.apply(amb)
            img_c = tuple(img[p] for p in self.pivots)
            sol = _solve_in_basis_rows(self.basis_rows, img_c, self.ctx)
            induced.append(sol[self.small_dim :])
        d = len(induced)
        # columns are images of basis vectors
        return [[induced[j][i] for j in range(d)] for i in range(d)]

    def passes(self, g):
        return fixpoint_check_omega(self.lbar, self.induced_matrix(g), self.ctx) is not None


def _solve_in_basis_rows(rows, v, ctx):
    aug = [[r[i] for r in rows] + [v[i]] for i in range(len(v))]
    ech, _ = rref(aug)
    sol = [ctx.zero] * len(rows)
    for r in ech:
        piv = next(i for i, a in enumerate(r) if a)
        if piv == len(rows):
            raise ValueError("vector not in span")
        sol[piv] = r[-1]
    return tuple(sol)


def _predicted_blocks(x):
    """The invariance constraints and quotient blocks of the block-triangular
    stabilizer description: (subspaces g must preserve, quotient blocks)."""
    ctx = x.ctx
    if isinstance(x, PPoint):
        n_plus_1 = len(x.coords)
        sub = p_classify(x)
        big = Subspace.full(n_plus_1, ctx)
        small = sub if sub.dim else Subspace.zero(n_plus_1)
        invariant = [sub] if sub.dim else []
        return invariant, [_QuotientBlock(big, small, x.coords, ctx)]
    if isinstance(x, QPoint):
        sub = q_classify(x)
        # the covector on the support span, recovered from 1/r on its basis
        inv_coords = normalize_functional(
            tuple(x.table[r].inverse() for r in sub.rows)
        )
        zero = Subspace.zero(x.n_plus_1)
        invariant = [sub] if sub.dim < x.n_plus_1 else []
        return invariant, [_QuotientBlock(sub, zero, inv_coords, ctx)]
    if isinstance(x, BPoint):
        flag = b_classify(x)
        chain = flag.chain(ctx)
        blocks = [
            _QuotientBlock(chain[t], chain[t + 1], x.family[chain[t]], ctx)
            for t in range(len(chain) - 1)
        ]
        return list(flag.members), blocks
    raise TypeError(f"not a point: {x!r}")


def stabilizer_predicted(x, group=None):
    """Membership test for Stab(x) through the block-triangular description.

    P: g preserves the kernel V' and the induced map on V/V' passes the
    dense fixpoint check against the induced covector.  Q: g preserves the
    support span V' and g restricted to V' passes the check against 1/r.
    B: g fixes the stratum flag and every induced diagonal block passes the
    check against its quotient covector.
    """
    ctx = x.ctx
    n_plus_1 = len(x.coords) if isinstance(x, PPoint) else x.n_plus_1
    if group is None:
        group = enumerate_pgl(n_plus_1, ctx)
    invariant, blocks = _predicted_blocks(x)
    out = []
    for g in group:
        if any(g.apply_subspace(m) != m for m in invariant):
            continue
        if all(block.passes(g) for block in blocks):
            out.append(g)
    return sorted(out, key=GroupElement.sort_key)


# ---------------------------------------------------------------------------
# unipotent radicals


def stratum_flag(x):
    "The flag indexing the stratum of any point kind."
    if isinstance(x, PPoint):
        sub = p_classify(x)
        n_plus_1 = len(x.coords)
        return Flag(n_plus_1, (sub,) if sub.dim else ())
    if isinstance(x, QPoint):
        sub = q_classify(x)
        return Flag(x.n_plus_1, (sub,) if sub.dim < x.n_plus_1 else ())
    if isinstance(x, BPoint):
        return b_classify(x)
    raise TypeError(f"not a point: {x!r}")


def unipotent_radical_k(flag, ctx, group=None):
    """The k-points of the unipotent radical of the parabolic fixing flag.

    g belongs iff some scalar multiple c*M of its representative satisfies
    (c*M - id) V_{i-1} inside V_i along the full chain; the order is q to
    the number of free block entries.
    """
    n_plus_1 = flag.n_plus_1
    if group is None:
        group = enumerate_pgl(n_plus_1, ctx)
    chain = flag.chain(ctx)
    k_units = [a for a in ctx.k_elements if a]
    out = []
    for g in group:
        if any(_nilpotent_along_chain(g, c, chain, ctx) for c in k_units):
            out.append(g)
    return sorted(out, key=GroupElement.sort_key)


def _nilpotent_along_chain(g, c, chain, ctx):
    "(c*M - id) maps chain[t] into chain[t+1] for every step."
    n = g.n_plus_1
    for t in range(len(chain) - 1):
        big, small = chain[t], chain[t + 1]
        for r in big.rows:
            img = g.apply(r)
            shifted = tuple(c * a - b for a, b in zip(img, r))
            if not small.contains_vector(shifted):
                return False
    return True


def is_unipotent(g):
    """Order is a power of the characteristic; cross-checked against the
    matrix criterion that some scalar multiple of the representative is
    id + nilpotent."""
    p = g.ctx.p
    n = g.order()
    by_order = True
    while n % p == 0:
        n //= p
    by_order = n == 1
    by_matrix = _unipotent_matrix_criterion(g)
    if by_order != by_matrix:
        raise DefectSignal(
            f"order criterion ({by_order}) and matrix criterion ({by_matrix}) disagree"
        )
    return by_order


def _unipotent_matrix_criterion(g):
    ctx = g.ctx
    n = g.n_plus_1
    for c in ctx.k_elements:
        if not c:
            continue
        rows = [
            [c * a - (ctx.one if i == j else ctx.zero) for j, a in enumerate(row)]
            for i, row in enumerate(g.matrix)
        ]
        # (cM - id)^(n) = 0 iff the matrix is nilpotent
        power = rows
        for _ in range(n - 1):
            power = _mat_mul(power, rows, ctx)
        if all(not a for r in power for a in r):
            return True
    return False


def _mat_mul(a, b, ctx):
    n = len(a)
    cols = list(zip(*b))
    return [
        [apply_functional(a[i], cols[j]) for j in range(n)] for i in range(n)
    ]


def unipotent_elements(group_subset):
    "The unipotent members of a subgroup (identity always included)."
    return sorted(
        (g for g in group_subset if is_unipotent(g)), key=GroupElement.sort_key
    )


def p_core(subgroup):
    """The largest normal p-subgroup of a finite matrix subgroup.

    An element belongs iff its normal closure inside the subgroup is a
    p-group.  For the block-shaped stabilizers here this recovers the
    k-points of the unipotent radical of the algebraic stabilizer, which the
    plain unipotent-element set overshoots whenever a stratum leaves an
    unconstrained diagonal block of dimension at least two.
    """
    subgroup = list(subgroup)
    if not subgroup:
        return []
    out = []
    for x in subgroup:
        if not is_unipotent(x):
            continue
        conj = {h.compose(x).compose(h.inverse()) for h in subgroup}
        closure = set(conj)
        frontier = list(conj)
        is_p_group = True
        while frontier and is_p_group:
            a = frontier.pop()
            if not is_unipotent(a):
                is_p_group = False
                break
            for b in conj:
                c = a.compose(b)
                if c not in closure:
                    closure.add(c)
                    frontier.append(c)
        if is_p_group:
            out.append(x)
    return sorted(out, key=GroupElement.sort_key)
