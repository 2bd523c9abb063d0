"""Points of the three compactifications over finite extensions of k.

Three kinds of points, all valued in an extension k_m inside the ambient
field:

* PPoint -- a projective covector: a nonzero functional on V up to scalar.
* QPoint -- a reciprocal map: a table r on the nonzero k-rational vectors
  satisfying r(c*v) = c^(-1) r(v) and r(v) r(v') = r(v+v') (r(v) + r(v')).
* BPoint -- a compatible family of functionals, one per nonzero subspace
  W of V, tied together by the 2x2 incidence minors
  l_W(v) l_W'(v') = l_W(v') l_W'(v) for v, v' in W' subset W.

Classification sends a point to the stratum it lies in: the rational kernel
(P), the support span (Q), or the kernel chain flag (B).
"""

from functools import lru_cache
from itertools import combinations, product

from .errors import DefectSignal, InvariantViolation
from .linalg import (
    Flag,
    Subspace,
    all_subspaces,
    apply_functional,
    enumerate_flags,
    normalize_functional,
    functional_ratio,
    rational_kernel,
    rref,
    vec_key,
)


class PPoint:
    """A point of the projective side: normalized functional coordinates."""

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx, coords):
        self.ctx = ctx
        self.coords = normalize_functional(coords)

    @property
    def n_plus_1(self):
        return len(self.coords)

    def __eq__(self, other):
        return isinstance(other, PPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __reduce__(self):
        return (PPoint, (self.ctx, self.coords))

    def __repr__(self):
        return f"PPoint{tuple(a for a in self.coords)}"


class QPoint:
    """A reciprocal map on V \\ {0}, normalized at its first supported vector."""

    __slots__ = ("ctx", "n_plus_1", "table")

    def __init__(self, ctx, n_plus_1, table, validate=True):
        if validate:
            result = q_validate(table, ctx, n_plus_1)
            if not result:
                raise ValueError(f"not a reciprocal map: {result.code}")
        self.ctx = ctx
        self.n_plus_1 = n_plus_1
        self.table = _normalize_table(table)

    def __eq__(self, other):
        return isinstance(other, QPoint) and self.table == other.table

    def __hash__(self):
        return hash(tuple(sorted(self.table.items(), key=lambda kv: vec_key(kv[0]))))

    def __reduce__(self):
        return (QPoint, (self.ctx, self.n_plus_1, self.table, False))

    def __repr__(self):
        support = sum(1 for v in self.table.values() if v)
        return f"QPoint(support {support} of {len(self.table)})"


class BPoint:
    """A compatible family: one normalized functional per nonzero subspace."""

    __slots__ = ("ctx", "n_plus_1", "family")

    def __init__(self, ctx, n_plus_1, family, validate=True):
        family = {W: normalize_functional(c) for W, c in family.items()}
        expected = len(all_subspaces(n_plus_1, ctx, include_zero=False))
        if len(family) != expected:
            raise ValueError(
                f"family must cover all {expected} nonzero subspaces, got {len(family)}"
            )
        for W, c in family.items():
            if len(c) != W.dim:
                raise ValueError("functional length must match subspace dimension")
        self.ctx = ctx
        self.n_plus_1 = n_plus_1
        self.family = family
        if validate:
            result = b_validate(self)
            if not result:
                raise ValueError(f"incompatible family: {result.code}")

    def value(self, W, v):
        "Evaluate the functional attached to W at a vector v of W."
        return apply_functional(self.family[W], W.coords_of(v))

    def __eq__(self, other):
        return isinstance(other, BPoint) and self.family == other.family

    def __hash__(self):
        items = sorted(self.family.items(), key=lambda kv: kv[0].sort_key())
        return hash(tuple((k, v) for k, v in items))

    def __reduce__(self):
        return (BPoint, (self.ctx, self.n_plus_1, self.family, False))

    def __repr__(self):
        return f"BPoint(n+1={self.n_plus_1}, {len(self.family)} functionals)"


# ---------------------------------------------------------------------------
# enumeration of functionals and points


def canonical_vectors(n_plus_1, ctx, nonzero=True):
    "k-rational vectors of k^(n+1) in canonical order."
    vecs = sorted(product(ctx.k_elements, repeat=n_plus_1), key=vec_key)
    if nonzero:
        vecs = [v for v in vecs if any(v)]
    return vecs


def enumerate_functionals(dim, ctx, m):
    """All normalized functionals of length dim with entries in k_m.

    Count is (q^(m*dim) - 1)/(q^m - 1); deterministic order by leading
    position, then lexicographic tail.
    """
    els = ctx.subfield_elements(m)
    out = []
    for lead in range(dim):
        head = (ctx.zero,) * lead + (ctx.one,)
        for tail in product(els, repeat=dim - lead - 1):
            out.append(head + tail)
    return out


def enumerate_omega(dim, ctx, m):
    "Normalized functionals over k_m whose rational kernel is trivial."
    return [
        c for c in enumerate_functionals(dim, ctx, m)
        if rational_kernel(c, ctx).dim == 0
    ]


def p_enumerate(ctx, n_plus_1, m):
    "All points of the projective side over k_m."
    return [PPoint(ctx, c) for c in enumerate_functionals(n_plus_1, ctx, m)]


# ---------------------------------------------------------------------------
# P


def p_classify(x):
    """The stratum of a PPoint: its k-rational kernel V'.

    V' = {0} exactly on the open dense part (no rational hyperplane
    constraint is hit).
    """
    return rational_kernel(x.coords, x.ctx)


def frobenius_twist(x, i):
    "The i-fold twist: apply the inverse Frobenius to every coordinate."
    if i < 0:
        raise ValueError("twist exponent must be >= 0")
    return PPoint(x.ctx, twist_coords(x.coords, i, x.ctx))


def twist_coords(coords, i, ctx):
    "Raw coordinate twist (no renormalization): F^(-i) entrywise."
    for _ in range(i):
        coords = tuple(ctx.inv_frobenius(a) for a in coords)
    return tuple(coords)


def twist_span_dim(x):
    """Dimension of the span of the twist orbit of x's functional.

    Twists are stacked until the orbit closes, and the rank is taken over
    the ambient field.  Equals n+1 minus the dimension of the rational
    kernel.
    """
    rows = [x.coords]
    cur = twist_coords(x.coords, 1, x.ctx)
    while cur != x.coords:
        rows.append(cur)
        cur = twist_coords(cur, 1, x.ctx)
    _, rank = rref(rows)
    return rank


# ---------------------------------------------------------------------------
# Q


class QValidation:
    "Outcome of the reciprocal-map axioms; falsy iff some axiom failed."

    __slots__ = ("code", "witness")

    def __init__(self, code=None, witness=None):
        self.code = code
        self.witness = witness

    def __bool__(self):
        return self.code is None

    def __repr__(self):
        return "valid" if self else f"invalid({self.code}, witness={self.witness})"


def q_validate(table, ctx, n_plus_1):
    """Check the reciprocal-map axioms on a raw table over V \\ {0}.

    Returns a QValidation; on failure the code names the violated axiom
    ('non-generating', 'scaling', 'addition') with witness vectors.
    """
    vectors = canonical_vectors(n_plus_1, ctx)
    if set(table) != set(vectors):
        raise ValueError("table must be defined on exactly the nonzero vectors")
    if not any(table[v] for v in vectors):
        return QValidation("non-generating")
    k_units = [a for a in ctx.k_elements if a]
    for v in vectors:
        rv = table[v]
        for lam in k_units:
            if lam == ctx.one:
                continue
            lv = tuple(lam * a for a in v)
            if table[lv] != lam.inverse() * rv:
                return QValidation("scaling", (lam, v))
    for v, w in combinations(vectors, 2):
        s = tuple(a + b for a, b in zip(v, w))
        if not any(s):
            continue
        lhs = table[v] * table[w]
        rhs = table[s] * (table[v] + table[w])
        if lhs != rhs:
            return QValidation("addition", (v, w))
    return QValidation()


def _normalize_table(table):
    items = sorted(table.items(), key=lambda kv: vec_key(kv[0]))
    lead = next((val for _, val in items if val), None)
    if lead is None:
        raise ValueError("identically zero table")
    inv = lead.inverse()
    return {v: inv * val for v, val in items}


def q_classify(x):
    """The stratum of a QPoint: the span V' of its support.

    The support together with zero must itself be a subspace; anything else
    means the point was never validated.
    """
    support = [v for v, val in x.table.items() if val]
    span = Subspace.span(x.n_plus_1, support)
    expected = set(span.nonzero_vectors(x.ctx))
    if set(support) != expected:
        raise InvariantViolation("support of a reciprocal map is not a subspace")
    return span


def q_from_omega(coords, sub, ctx, n_plus_1):
    """The reciprocal map supported on sub with values 1/l there.

    coords is a functional on sub's coordinate space with trivial rational
    kernel (a dense point of the sub side); the table is its pointwise
    inverse on sub, zero elsewhere.
    """
    if rational_kernel(coords, ctx).dim != 0:
        raise ValueError("functional must have trivial rational kernel")
    table = {}
    for v in canonical_vectors(n_plus_1, ctx):
        if sub.contains_vector(v):
            table[v] = apply_functional(coords, sub.coords_of(v)).inverse()
        else:
            table[v] = ctx.zero
    return QPoint(ctx, n_plus_1, table)


def q_enumerate_stratum(sub, ctx, m):
    "All reciprocal maps over k_m supported exactly on the subspace sub."
    return [
        q_from_omega(coords, sub, ctx, sub.n_plus_1)
        for coords in enumerate_omega(sub.dim, ctx, m)
    ]


def q_enumerate(ctx, n_plus_1, m):
    """All reciprocal maps over k_m, built stratum by stratum.

    For each nonzero subspace V' and each dense point l of V' over k_m,
    extend 1/l by zero.  The union over strata is disjoint.
    """
    out = []
    for sub in all_subspaces(n_plus_1, ctx, include_zero=False):
        out.extend(q_enumerate_stratum(sub, ctx, m))
    return out


def q_bruteforce(ctx, n_plus_1, m):
    "All valid tables found by filtering every normalized table; tiny sizes."
    vectors = canonical_vectors(n_plus_1, ctx)
    els = ctx.subfield_elements(m)
    out = []
    for lead in range(len(vectors)):
        head = (ctx.zero,) * lead + (ctx.one,)
        for tail in product(els, repeat=len(vectors) - lead - 1):
            values = head + tail
            table = dict(zip(vectors, values))
            if q_validate(table, ctx, n_plus_1):
                out.append(QPoint(ctx, n_plus_1, table, validate=False))
    return out


# ---------------------------------------------------------------------------
# B


class BValidation:
    """Outcome of both compatibility tests on a family.

    minor_ok: the 2x2 incidence minors; prop_ok: every restriction is a
    scalar multiple (possibly zero) of the attached functional.  The two are
    equivalent; a disagreement raises DefectSignal at the call site.
    """

    __slots__ = ("minor_ok", "prop_ok", "code", "witness")

    def __init__(self, minor_ok, prop_ok, code=None, witness=None):
        self.minor_ok = minor_ok
        self.prop_ok = prop_ok
        self.code = code
        self.witness = witness

    def __bool__(self):
        return self.minor_ok and self.prop_ok

    def __repr__(self):
        return "valid" if self else f"invalid({self.code}, witness={self.witness})"


def _family_values(family, ctx):
    "For each subspace, tabulate the attached functional on its vectors."
    values = {}
    for W, coords in family.items():
        vals = {}
        for combo in product(ctx.k_elements, repeat=W.dim):
            vec = [ctx.zero] * W.n_plus_1
            val = ctx.zero
            for c, row, a in zip(combo, W.rows, coords):
                if c:
                    vec = [x + c * y for x, y in zip(vec, row)]
                    if a:
                        val = val + c * a
            vals[tuple(vec)] = val
        values[W] = vals
    return values


def incidence_minors_ok(family, ctx):
    """Test (a): all 2x2 minors across nested pairs of subspaces vanish.

    Returns (ok, witness); the witness is (W, W', v, v') for the first
    violated minor.
    """
    values = _family_values(family, ctx)
    subs = sorted(family, key=Subspace.sort_key)
    for small, big in combinations(subs, 2):
        if not big.contains(small):
            continue
        vals_b, vals_s = values[big], values[small]
        small_vecs = [v for v in vals_s if any(v)]
        for v, w in combinations(small_vecs, 2):
            if vals_b[v] * vals_s[w] != vals_b[w] * vals_s[v]:
                return False, (big, small, v, w)
    return True, None


def restriction_proportional_ok(family, ctx):
    """Test (b): the restriction of l_W to each W' < W is c * l_W' for some
    scalar c, zero allowed.  Returns (ok, witness)."""
    subs = sorted(family, key=Subspace.sort_key)
    for small, big in combinations(subs, 2):
        if not big.contains(small):
            continue
        restriction = tuple(
            apply_functional(family[big], big.coords_of(r)) for r in small.rows
        )
        if not any(restriction):
            continue
        if functional_ratio(restriction, family[small]) is None:
            return False, (big, small)
    return True, None


def b_validate(x_or_family, ctx=None):
    """Run both compatibility tests; they must agree.

    Accepts a BPoint or a raw family dict (with ctx).  Returns a BValidation
    that is truthy iff the family is compatible; raises DefectSignal if the
    two equivalent tests ever disagree.
    """
    if isinstance(x_or_family, BPoint):
        family, ctx = x_or_family.family, x_or_family.ctx
    else:
        family = x_or_family
        if ctx is None:
            raise ValueError("ctx required for a raw family")
    minor_ok, minor_wit = incidence_minors_ok(family, ctx)
    prop_ok, prop_wit = restriction_proportional_ok(family, ctx)
    if minor_ok != prop_ok:
        raise DefectSignal(
            f"minor test ({minor_ok}) and proportionality test ({prop_ok}) disagree"
        )
    code = None if minor_ok else "incidence-minor"
    witness = minor_wit if minor_wit is not None else prop_wit
    return BValidation(minor_ok, prop_ok, code, witness)


def _kernel_chain(x):
    "Descending chain V_0 > V_1 > ... ending just above {0}, possibly empty."
    ctx = x.ctx
    chain = []
    cur = Subspace.full(x.n_plus_1, ctx)
    while cur.dim > 0:
        ker = rational_kernel(x.family[cur], ctx)
        if ker.dim == 0:
            break
        ambient_rows = []
        for kr in ker.rows:
            acc = [ctx.zero] * x.n_plus_1
            for c, row in zip(kr, cur.rows):
                if c:
                    acc = [a + c * b for a, b in zip(acc, row)]
            ambient_rows.append(tuple(acc))
        nxt = Subspace.span(x.n_plus_1, ambient_rows)
        chain.append(nxt)
        cur = nxt
    return chain


def b_classify(x):
    """The stratum of a BPoint: the flag cut out by the kernel chain.

    Starting from the whole space, intersect each member with the rational
    kernel of its functional until {0}.  As a cross-check, the members must
    be exactly the subspaces V' whose every strict superspace W has
    l_W vanishing on V' (the exceptional-divisor membership test).
    """
    chain = _kernel_chain(x)
    flag = Flag(x.n_plus_1, tuple(reversed(chain)))
    divisors = set()
    proper = [W for W in x.family if W.dim < x.n_plus_1]
    for cand in proper:
        member = True
        for W in x.family:
            if W.dim > cand.dim and W.contains(cand) and W != cand:
                if any(
                    apply_functional(x.family[W], W.coords_of(r)) for r in cand.rows
                ):
                    member = False
                    break
        if member:
            divisors.add(cand)
    if divisors != set(chain):
        raise InvariantViolation(
            "divisor membership set does not match the kernel chain"
        )
    return flag


def b_from_flag_data(flag, parts, ctx):
    """Assemble the unique BPoint with a given flag from dense quotient data.

    With the descending chain V = C_0 > C_1 > ... > C_last = {0} through the
    flag members, parts[t] is a functional on the complement coordinates of
    C_{t+1} inside C_t with trivial rational kernel in that quotient.  The
    member functionals are parts composed with the projections; every other
    subspace W inherits the restriction from the smallest chain member
    containing it not inside the next one.
    """
    from .linalg import complement, subspace_in_coords

    chain = flag.chain(ctx)
    if len(parts) != len(chain) - 1:
        raise ValueError(f"need {len(chain) - 1} quotient parts, got {len(parts)}")
    n_plus_1 = flag.n_plus_1
    member_funcs = {}
    for t in range(len(chain) - 1):
        big, small = chain[t], chain[t + 1]
        s = big.dim
        small_c = subspace_in_coords(big, small)
        comp_c = complement(small_c, Subspace.full(s, ctx))
        part = tuple(parts[t])
        if len(part) != comp_c.dim:
            raise ValueError("part length must match the quotient dimension")
        if rational_kernel(part, ctx).dim != 0:
            raise ValueError("part must have trivial rational kernel in its quotient")
        # value on the j-th coordinate basis vector of big: project along small
        coords = []
        basis_rows = list(small_c.rows) + list(comp_c.rows)
        for j in range(s):
            e_j = tuple(ctx.one if i == j else ctx.zero for i in range(s))
            sol = _solve_in_basis(basis_rows, e_j, ctx)
            comp_part = sol[small_c.dim:]
            coords.append(apply_functional(part, comp_part) if comp_c.dim else ctx.zero)
        member_funcs[big] = normalize_functional(tuple(coords))
    family = {}
    for W in all_subspaces(n_plus_1, ctx, include_zero=False):
        t = 0
        while chain[t + 1].contains(W):
            t += 1
        big = chain[t]
        if W == big:
            family[W] = member_funcs[big]
        else:
            family[W] = normalize_functional(
                tuple(
                    apply_functional(member_funcs[big], big.coords_of(r))
                    for r in W.rows
                )
            )
    # compatible by construction; the classification roundtrip is asserted,
    # b_validate on constructed families is exercised by the test suites
    x = BPoint(ctx, n_plus_1, family, validate=False)
    assert b_classify(x) == flag
    return x


def _solve_in_basis(rows, v, ctx):
    "Coefficients x with sum x_i rows_i = v; rows independent."
    width = len(v)
    aug = []
    for i in range(width):
        aug.append([r[i] for r in rows] + [v[i]])
    ech, rank = rref(aug)
    sol = [ctx.zero] * len(rows)
    for r in ech:
        piv = next(i for i, a in enumerate(r) if a)
        if piv == len(rows):
            raise ValueError("vector not in the span")
        sol[piv] = r[-1]
    return tuple(sol)


def b_enumerate(ctx, n_plus_1, m):
    "All BPoints over k_m, flag by flag, via the quotient parametrisation."
    out = []
    for flag in enumerate_flags(n_plus_1, ctx):
        out.extend(b_enumerate_flag(flag, ctx, m))
    return out


def b_enumerate_flag(flag, ctx, m):
    "All BPoints over k_m with the given stratum flag."
    chain = flag.chain(ctx)
    dims = [chain[t].dim - chain[t + 1].dim for t in range(len(chain) - 1)]
    part_choices = [enumerate_omega(d, ctx, m) for d in dims]
    return [
        b_from_flag_data(flag, parts, ctx) for parts in product(*part_choices)
    ]


def omega_embed_b(x):
    "The dense embedding of a trivial-stratum PPoint into the family side."
    if p_classify(x).dim != 0:
        raise ValueError("only dense points embed")
    return b_from_flag_data(Flag.trivial(x.n_plus_1), [x.coords], x.ctx)


def omega_embed_q(x):
    "The dense embedding l -> 1/l of a trivial-stratum PPoint."
    ctx = x.ctx
    full = Subspace.full(x.n_plus_1, ctx)
    return q_from_omega(x.coords, full, ctx, x.n_plus_1)


def pi_map(x):
    "Forget everything but the functional on the whole space."
    full = Subspace.full(x.n_plus_1, x.ctx)
    return PPoint(x.ctx, x.family[full])


def rho_map(x):
    """Collapse a family to the reciprocal map supported on its last member.

    The table is 1/l_{V_r} on the smallest flag member V_r and zero outside;
    on dense points this is the classical l -> 1/l.
    """
    chain = _kernel_chain(x)
    sub = chain[-1] if chain else Subspace.full(x.n_plus_1, x.ctx)
    ctx = x.ctx
    table = {}
    for v in canonical_vectors(x.n_plus_1, ctx):
        if sub.contains_vector(v):
            table[v] = x.value(sub, v).inverse()
        else:
            table[v] = ctx.zero
    return QPoint(ctx, x.n_plus_1, table)


# ---------------------------------------------------------------------------
# serialization


@lru_cache(maxsize=None)
def _k_index(ctx):
    return {a: i for i, a in enumerate(ctx.k_elements)}


def vector_str(v, ctx):
    idx = _k_index(ctx)
    return ",".join(str(idx[a]) for a in v)


def vector_from_str(s, ctx):
    els = ctx.k_elements
    return tuple(els[int(t)] for t in s.split(","))


def subspace_str(sub, ctx):
    if sub.dim == 0:
        return "0"
    return ";".join(vector_str(r, ctx) for r in sub.rows)


def subspace_from_str(s, ctx, n_plus_1):
    if s == "0":
        return Subspace.zero(n_plus_1)
    rows = [vector_from_str(t, ctx) for t in s.split(";")]
    sub = Subspace.span(n_plus_1, rows)
    if sub.rows != tuple(rows):
        raise ValueError("subspace rows are not in canonical echelon form")
    return sub


def flag_str(flag, ctx):
    if not flag.members:
        return "()"
    return "<".join(subspace_str(m, ctx) for m in flag.members)


def field_to_obj(ctx):
    return {"p": ctx.p, "e": ctx.e, "D": ctx.D, "modulus": list(ctx.modulus)}


def element_to_obj(a):
    return list(a.coeffs)


def point_to_obj(x):
    "JSON-ready dict for any of the three point kinds."
    if isinstance(x, PPoint):
        return {
            "kind": "P",
            "field": field_to_obj(x.ctx),
            "data": {"coords": [element_to_obj(a) for a in x.coords]},
        }
    if isinstance(x, QPoint):
        table = {
            vector_str(v, x.ctx): element_to_obj(val)
            for v, val in x.table.items()
        }
        return {
            "kind": "Q",
            "field": field_to_obj(x.ctx),
            "data": {"n_plus_1": x.n_plus_1, "table": table},
        }
    if isinstance(x, BPoint):
        family = {
            subspace_str(W, x.ctx): [element_to_obj(a) for a in coords]
            for W, coords in x.family.items()
        }
        return {
            "kind": "B",
            "field": field_to_obj(x.ctx),
            "data": {"n_plus_1": x.n_plus_1, "family": family},
        }
    raise TypeError(f"not a point: {x!r}")


def point_from_obj(obj, ctx=None, validate=True):
    """Rebuild a point from its JSON dict; the field context is verified.

    With validate=False the reciprocal/compatibility axioms are not
    enforced, so a caller can inspect an invalid table and report on it.
    """
    from .field import FieldCtx

    fld = obj["field"]
    if ctx is None:
        ctx = FieldCtx(fld["p"], fld["e"], fld["D"], tuple(fld["modulus"]))
    elif (ctx.p, ctx.e, ctx.D, ctx.modulus) != (
        fld["p"], fld["e"], fld["D"], tuple(fld["modulus"]),
    ):
        raise ValueError("field of the point does not match the context")
    kind = obj["kind"]
    data = obj["data"]
    if kind == "P":
        return PPoint(ctx, tuple(ctx.element(c) for c in data["coords"]))
    if kind == "Q":
        n_plus_1 = data["n_plus_1"]
        table = {
            vector_from_str(k, ctx): ctx.element(v)
            for k, v in data["table"].items()
        }
        return QPoint(ctx, n_plus_1, table, validate=validate)
    if kind == "B":
        n_plus_1 = data["n_plus_1"]
        family = {
            subspace_from_str(k, ctx, n_plus_1): tuple(ctx.element(c) for c in v)
            for k, v in data["family"].items()
        }
        return BPoint(ctx, n_plus_1, family, validate=validate)
    raise ValueError(f"unknown point kind {kind!r}")
