from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from drinfeld import (
    Flag,
    Subspace,
    all_subspaces,
    complement,
    enumerate_flags,
    enumerate_subspaces,
    flag_leq,
    gaussian_binomial,
    quotient_functional,
    rational_kernel,
    rref,
)
from drinfeld.linalg import apply_functional, normalize_functional


def vecs(ctx, *ints):
    "Row of base-field elements from small integers."
    return tuple(ctx.from_int(i) for i in ints)


# --- rref -------------------------------------------------------------------


def test_rref_identity(ctx64):
    one, zero = ctx64.one, ctx64.zero
    rows = [(one, zero), (zero, one)]
    ech, rank = rref(rows)
    assert ech == ((one, zero), (zero, one)) and rank == 2


def test_rref_zero(ctx64):
    ech, rank = rref([(ctx64.zero, ctx64.zero)])
    assert ech == () and rank == 0


def test_rref_dependent_rows(ctx64):
    rows = [vecs(ctx64, 1, 1, 0), vecs(ctx64, 0, 1, 1), vecs(ctx64, 1, 0, 1)]
    _, rank = rref(rows)
    assert rank == 2


def test_rref_rejects_ragged(ctx64):
    with pytest.raises(ValueError):
        rref([vecs(ctx64, 1, 0), vecs(ctx64, 1)])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_rref_idempotent(ctx64, data):
    n = data.draw(st.integers(2, 4))
    rows = data.draw(
        st.lists(
            st.lists(st.integers(0, 1), min_size=n, max_size=n),
            min_size=1,
            max_size=4,
        )
    )
    mat = [vecs(ctx64, *r) for r in rows]
    ech, rank = rref(mat)
    again, rank2 = rref(list(ech))
    assert ech == again and rank == rank2


# --- rational kernels -------------------------------------------------------


def test_kernel_coordinate_functional(ctx64):
    K = rational_kernel((ctx64.one, ctx64.zero), ctx64)
    assert K == Subspace.span(2, [vecs(ctx64, 0, 1)])


def test_kernel_irrational_functional(ctx64, omega4):
    assert rational_kernel((ctx64.one, omega4), ctx64).dim == 0


def test_kernel_diagonal_functional(ctx64):
    K = rational_kernel((ctx64.one, ctx64.one), ctx64)
    assert K == Subspace.span(2, [vecs(ctx64, 1, 1)])


def test_kernel_of_110_is_two_dimensional(ctx64):
    # l(e3) = 0 as well, so the kernel picks up e3 besides e1+e2
    K = rational_kernel((ctx64.one, ctx64.one, ctx64.zero), ctx64)
    assert K == Subspace.span(3, [vecs(ctx64, 1, 1, 0), vecs(ctx64, 0, 0, 1)])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_kernel_matches_bruteforce(ctx64, data):
    els = list(ctx64.subfield_elements(2))
    n = data.draw(st.integers(2, 3))
    coords = tuple(data.draw(st.sampled_from(els)) for _ in range(n))
    if not any(coords):
        return
    K = rational_kernel(coords, ctx64)
    solutions = [
        v
        for v in product(ctx64.k_elements, repeat=n)
        if not apply_functional(coords, v)
    ]
    assert K == Subspace.span(n, [v for v in solutions if any(v)])
    assert len(solutions) == 2**K.dim


# --- enumeration ------------------------------------------------------------


def test_zero_dimension_enumeration(ctx64):
    assert enumerate_subspaces(3, 0, ctx64) == [Subspace.zero(3)]


def test_lines_in_dim_three(ctx64):
    assert len(enumerate_subspaces(3, 1, ctx64)) == 7


def test_lines_in_dim_two_over_gf3(ctx729):
    assert len(enumerate_subspaces(2, 1, ctx729)) == 4


def test_counts_match_gaussian_binomial(ctx64, ctx729):
    for ctx, q in ((ctx64, 2), (ctx729, 3)):
        for n_plus_1 in range(1, 5):
            for d in range(n_plus_1 + 1):
                subs = enumerate_subspaces(n_plus_1, d, ctx)
                assert len(subs) == gaussian_binomial(n_plus_1, d, q)
                assert len(set(subs)) == len(subs)
                assert all(s.dim == d for s in subs)


def test_enumeration_rejects_bad_dimension(ctx64):
    with pytest.raises(ValueError):
        enumerate_subspaces(3, 4, ctx64)


def _flag_count_oracle(n_plus_1, q):
    "Chains counted by products of Gaussian binomials over dimension words."
    from itertools import combinations

    total = 0
    for r in range(n_plus_1):
        for word in combinations(range(1, n_plus_1), r):
            prod = 1
            prev = n_plus_1
            for d in reversed(word):
                prod *= gaussian_binomial(prev, d, q)
                prev = d
            total += prod
    return total


def test_flag_counts(ctx64, ctx729):
    assert len(enumerate_flags(2, ctx64)) == 4 == _flag_count_oracle(2, 2)
    assert len(enumerate_flags(2, ctx729)) == 5 == _flag_count_oracle(2, 3)
    flags3 = enumerate_flags(3, ctx64)
    assert len(flags3) == 36 == _flag_count_oracle(3, 2)
    # 1 trivial + 7 + 7 one-member + 21 complete
    by_len = {}
    for f in flags3:
        by_len[len(f)] = by_len.get(len(f), 0) + 1
    assert by_len == {0: 1, 1: 14, 2: 21}


def test_flag_refinement_order(ctx64):
    flags = enumerate_flags(2, ctx64)
    trivial = Flag.trivial(2)
    for f in flags:
        assert flag_leq(trivial, f)
        assert flag_leq(f, f)
    one_member = [f for f in flags if len(f) == 1]
    assert not flag_leq(one_member[0], one_member[1])


def test_flag_rejects_non_chain(ctx64):
    a = Subspace.span(3, [vecs(ctx64, 1, 0, 0)])
    b = Subspace.span(3, [vecs(ctx64, 0, 1, 0)])
    with pytest.raises(ValueError):
        Flag(3, (a, b))


# --- complements and quotients ----------------------------------------------


def test_complement_extremes(ctx64):
    W = Subspace.full(2, ctx64)
    assert complement(Subspace.zero(2), W) == W
    assert complement(W, W) == Subspace.zero(2)


def test_complement_nonpivot_choice(ctx64):
    W = Subspace.full(2, ctx64)
    V = Subspace.span(2, [vecs(ctx64, 1, 1)])
    assert complement(V, W) == Subspace.span(2, [vecs(ctx64, 0, 1)])


def test_complement_rejects_non_subspace(ctx64):
    V = Subspace.span(2, [vecs(ctx64, 1, 0)])
    W = Subspace.span(2, [vecs(ctx64, 0, 1)])
    with pytest.raises(ValueError):
        complement(V, W)


def test_complement_direct_sum_everywhere(ctx64):
    for n_plus_1 in (2, 3):
        subs = all_subspaces(n_plus_1, ctx64)
        for W in subs:
            for V in subs:
                if not W.contains(V):
                    continue
                C = complement(V, W)
                assert V.sum(C) == W
                assert V.dim + C.dim == W.dim


def test_quotient_functional_identity_cases(ctx64):
    one, zero = ctx64.one, ctx64.zero
    comp, induced = quotient_functional((one, zero), Subspace.zero(2), ctx64)
    assert comp == Subspace.full(2, ctx64) and induced == (one, zero)
    comp, induced = quotient_functional(
        (one, zero), Subspace.span(2, [vecs(ctx64, 0, 1)]), ctx64
    )
    assert comp.dim == 1 and induced == (one,)


def test_quotient_functional_factorization(ctx64):
    one, zero = ctx64.one, ctx64.zero
    coords = (one, one, zero)
    sub = Subspace.span(3, [vecs(ctx64, 1, 1, 0)])
    comp, induced = quotient_functional(coords, sub, ctx64)
    assert any(induced)
    # l = c * (induced o projection) on every vector, one fixed scalar c
    basis = list(sub.rows) + list(comp.rows)
    scalars = set()
    for v in Subspace.full(3, ctx64).vectors(ctx64):
        sol = _decompose(basis, v, ctx64)
        proj = sol[sub.dim :]
        lhs = apply_functional(coords, v)
        rhs = apply_functional(induced, proj)
        if rhs:
            scalars.add(lhs / rhs)
        else:
            assert not lhs
    assert len(scalars) == 1


def _decompose(rows, v, ctx):
    from drinfeld.points import _solve_in_basis

    return _solve_in_basis(rows, v, ctx)


def test_quotient_functional_rejects_nonvanishing(ctx64):
    with pytest.raises(ValueError):
        quotient_functional(
            (ctx64.one, ctx64.zero),
            Subspace.span(2, [vecs(ctx64, 1, 0)]),
            ctx64,
        )


# --- canonical forms --------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_canonical_form_basis_independent(ctx729, data):
    k_els = list(ctx729.k_elements)
    n = data.draw(st.integers(2, 4))
    nvecs = data.draw(st.integers(1, 3))
    vectors = [
        tuple(data.draw(st.sampled_from(k_els)) for _ in range(n))
        for _ in range(nvecs)
    ]
    sub = Subspace.span(n, vectors)
    # recombine by a random square matrix; equal span implies equal rows
    coeffs = [
        [data.draw(st.sampled_from(k_els)) for _ in range(nvecs)]
        for _ in range(nvecs + 1)
    ]
    mixed = []
    for row in coeffs:
        acc = [ctx729.zero] * n
        for c, v in zip(row, vectors):
            if c:
                acc = [a + c * b for a, b in zip(acc, v)]
        mixed.append(tuple(acc))
    again = Subspace.span(n, mixed)
    assert sub.contains(again)
    if again.dim == sub.dim:
        assert again == sub


def test_normalize_functional(ctx729):
    two = ctx729.from_int(2)
    coords = (ctx729.zero, two, ctx729.one)
    normalized = normalize_functional(coords)
    assert normalized[1] == ctx729.one
    with pytest.raises(ValueError):
        normalize_functional((ctx729.zero, ctx729.zero))


def test_subspace_membership_and_coords(ctx64):
    sub = Subspace.span(3, [vecs(ctx64, 1, 0, 1), vecs(ctx64, 0, 1, 1)])
    v = vecs(ctx64, 1, 1, 0)
    assert sub.contains_vector(v)
    coords = sub.coords_of(v)
    rebuilt = [ctx64.zero] * 3
    for c, row in zip(coords, sub.rows):
        if c:
            rebuilt = [a + c * b for a, b in zip(rebuilt, row)]
    assert tuple(rebuilt) == v
    with pytest.raises(ValueError):
        sub.coords_of(vecs(ctx64, 0, 0, 1))
