import json
import random

import pytest

from drinfeld import (
    BPoint,
    Flag,
    PPoint,
    QPoint,
    Subspace,
    all_subspaces,
    b_classify,
    b_enumerate,
    b_from_flag_data,
    b_validate,
    enumerate_omega,
    frobenius_twist,
    omega_embed_b,
    omega_embed_q,
    p_classify,
    p_enumerate,
    pi_map,
    point_from_obj,
    point_to_obj,
    q_classify,
    q_enumerate,
    q_validate,
    rho_map,
    twist_span_dim,
)
from drinfeld.errors import InvariantViolation
from drinfeld.points import (
    b_enumerate_flag,
    canonical_vectors,
    enumerate_functionals,
    incidence_minors_ok,
    q_bruteforce,
    restriction_proportional_ok,
)


def vecs(ctx, *ints):
    return tuple(ctx.from_int(i) for i in ints)


# --- P ----------------------------------------------------------------------


def test_p_classify_rational_point(ctx64):
    x = PPoint(ctx64, (ctx64.one, ctx64.zero))
    assert p_classify(x) == Subspace.span(2, [vecs(ctx64, 0, 1)])


def test_p_classify_dense_point(ctx64, omega4):
    assert p_classify(PPoint(ctx64, (ctx64.one, omega4))).dim == 0


def test_p_classify_dim_two_kernel(ctx64):
    x = PPoint(ctx64, (ctx64.one, ctx64.one, ctx64.zero))
    want = Subspace.span(3, [vecs(ctx64, 1, 1, 0), vecs(ctx64, 0, 0, 1)])
    assert p_classify(x) == want


def test_p_point_normalization(ctx64, omega4):
    assert PPoint(ctx64, (omega4, ctx64.one)) == PPoint(
        ctx64, (ctx64.one, omega4.inverse())
    )
    with pytest.raises(ValueError):
        PPoint(ctx64, (ctx64.zero, ctx64.zero))


def test_p_partition_totals(ctx64, ctx729):
    for ctx, q in ((ctx64, 2), (ctx729, 3)):
        for n_plus_1 in (2, 3):
            for m in (1, 2):
                pts = p_enumerate(ctx, n_plus_1, m)
                assert len(pts) == (q ** (m * n_plus_1) - 1) // (q**m - 1)
                assert len(set(pts)) == len(pts)


def test_twist_examples(ctx64, omega4):
    x = PPoint(ctx64, (ctx64.one, omega4))
    assert frobenius_twist(x, 0) == x
    assert frobenius_twist(x, 1).coords == (ctx64.one, omega4 + ctx64.one)
    assert frobenius_twist(x, 2) == x
    rational = PPoint(ctx64, (ctx64.one, ctx64.one))
    assert frobenius_twist(rational, 5) == rational


def test_twist_span_dims(ctx64, omega4):
    assert twist_span_dim(PPoint(ctx64, (ctx64.one, ctx64.one))) == 1
    assert twist_span_dim(PPoint(ctx64, (ctx64.one, omega4))) == 2


def test_twist_span_lemma_exhaustive(ctx64):
    for n_plus_1 in (2, 3):
        for m in (1, 2, 3):
            for x in p_enumerate(ctx64, n_plus_1, m):
                assert twist_span_dim(x) == n_plus_1 - p_classify(x).dim


# --- Q ----------------------------------------------------------------------


def test_q_validate_accepts_inverse_of_dense_covector(ctx64, omega4):
    x = omega_embed_q(PPoint(ctx64, (ctx64.one, omega4)))
    assert q_validate(x.table, ctx64, 2)


def test_q_validate_rejects_zero_table(ctx64):
    table = {v: ctx64.zero for v in canonical_vectors(2, ctx64)}
    res = q_validate(table, ctx64, 2)
    assert not res and res.code == "non-generating"


def test_q_validate_addition_counterexample(ctx64):
    table = {
        vecs(ctx64, 1, 0): ctx64.one,
        vecs(ctx64, 0, 1): ctx64.one,
        vecs(ctx64, 1, 1): ctx64.zero,
    }
    res = q_validate(table, ctx64, 2)
    assert not res and res.code == "addition" and res.witness is not None


def test_q_validate_scaling_counterexample(ctx729):
    # violate r(2v) = 2^(-1) r(v) over GF(3)
    table = {v: ctx729.one for v in canonical_vectors(2, ctx729)}
    res = q_validate(table, ctx729, 2)
    assert not res and res.code == "scaling"


def test_q_validate_requires_full_domain(ctx64):
    with pytest.raises(ValueError):
        q_validate({vecs(ctx64, 1, 0): ctx64.one}, ctx64, 2)


def test_q_bruteforce_matches_construction(ctx64, ctx729):
    # q = 2: 3 points over k, 5 over k_2 (one per line, plus dense points)
    for m, count in ((1, 3), (2, 5)):
        brute = q_bruteforce(ctx64, 2, m)
        built = q_enumerate(ctx64, 2, m)
        assert len(brute) == len(built) == count
        assert set(brute) == set(built)
    # q = 3, m = 1: 4 lines, no dense points
    brute = q_bruteforce(ctx729, 2, 1)
    assert len(brute) == 4
    assert set(brute) == set(q_enumerate(ctx729, 2, 1))


def test_q_totals_equal_p_totals(ctx64):
    for n_plus_1 in (2, 3):
        for m in (1, 2):
            assert len(q_enumerate(ctx64, n_plus_1, m)) == len(
                p_enumerate(ctx64, n_plus_1, m)
            )


def _omega_count_moebius(s, q, m):
    """Dense-point count by Moebius inversion on the subspace lattice.

    Functionals vanishing on a fixed V' of codimension j are the points of
    the quotient projective space, so with pi(t) = (q^(mt) - 1)/(q^m - 1):
    |Omega| = sum_j (-1)^j q^(j(j-1)/2) [s choose j]_q pi(s - j).
    """
    from drinfeld.linalg import gaussian_binomial

    def pi(t):
        return (q ** (m * t) - 1) // (q**m - 1) if t else 0

    total = 0
    for j in range(s + 1):
        sign = (-1) ** j
        total += sign * q ** (j * (j - 1) // 2) * gaussian_binomial(s, j, q) * pi(s - j)
    return total


def test_omega_counts_match_moebius_formula(ctx64, ctx729):
    for ctx, q in ((ctx64, 2), (ctx729, 3)):
        for s in (1, 2, 3):
            for m in (1, 2, 3):
                got = len(enumerate_omega(s, ctx, m))
                assert got == _omega_count_moebius(s, q, m), (q, s, m, got)


def test_q_classify_supports(ctx64, ctx729):
    line = Subspace.span(2, [vecs(ctx64, 1, 0)])
    from drinfeld.points import q_from_omega

    x = q_from_omega((ctx64.one,), line, ctx64, 2)
    assert q_classify(x) == line
    # over GF(3): values on the line scale reciprocally
    line3 = Subspace.span(2, [vecs(ctx729, 1, 0)])
    x3 = q_from_omega((ctx729.one,), line3, ctx729, 2)
    assert q_classify(x3) == line3
    assert x3.table[vecs(ctx729, 2, 0)] == ctx729.from_int(2)


def test_q_classify_rejects_broken_support(ctx64):
    x = q_enumerate(ctx64, 2, 2)[-1]
    table = dict(x.table)
    v = next(v for v, val in table.items() if val)
    table[v] = ctx64.zero  # punch a hole in the support
    broken = QPoint(ctx64, 2, table, validate=False)
    with pytest.raises(InvariantViolation):
        q_classify(broken)


def test_q_point_rejects_invalid_table(ctx64):
    table = {
        vecs(ctx64, 1, 0): ctx64.one,
        vecs(ctx64, 0, 1): ctx64.one,
        vecs(ctx64, 1, 1): ctx64.zero,
    }
    with pytest.raises(ValueError):
        QPoint(ctx64, 2, table)


# --- B ----------------------------------------------------------------------


def test_b_family_must_cover_all_subspaces(ctx64):
    with pytest.raises(ValueError):
        BPoint(ctx64, 2, {Subspace.full(2, ctx64): (ctx64.one, ctx64.zero)})


def test_omega_embedding_roundtrip(ctx64, omega4):
    l = PPoint(ctx64, (ctx64.one, omega4))
    x = omega_embed_b(l)
    assert b_classify(x) == Flag.trivial(2)
    assert pi_map(x) == l
    assert rho_map(x) == omega_embed_q(l)


def test_omega_embedding_requires_dense_point(ctx64):
    with pytest.raises(ValueError):
        omega_embed_b(PPoint(ctx64, (ctx64.one, ctx64.one)))


def test_b_from_flag_data_one_member(ctx64):
    V1 = Subspace.span(2, [vecs(ctx64, 0, 1)])
    flag = Flag(2, (V1,))
    x = b_from_flag_data(flag, [(ctx64.one,), (ctx64.one,)], ctx64)
    assert b_classify(x) == flag
    assert p_classify(pi_map(x)) == V1
    assert q_classify(rho_map(x)) == V1
    assert b_validate(x)


def test_b_from_flag_data_rejects_degenerate_part(ctx64):
    V1 = Subspace.span(2, [vecs(ctx64, 0, 1)])
    with pytest.raises(ValueError):
        # (1, 1) has a rational kernel inside the 2-dim quotient of the
        # trivial flag piece, hence is not a dense point of it
        b_from_flag_data(Flag.trivial(2), [(ctx64.one, ctx64.one)], ctx64)
    with pytest.raises(ValueError):
        b_from_flag_data(Flag(2, (V1,)), [(ctx64.one,)], ctx64)


def test_b_counts(ctx64):
    # dim V = 2: the family side has as many points as the covector side
    for m in (1, 2, 3):
        assert len(b_enumerate(ctx64, 2, m)) == (2 ** (2 * m) - 1) // (2**m - 1)
    for m, want in ((1, 21), (2, 49), (3, 129)):
        pts = b_enumerate(ctx64, 3, m)
        assert len(pts) == want
        assert len(set(pts)) == want


def test_b_parametrisation_injective(ctx64):
    # fixed flag: distinct quotient data gives distinct points (n+1=3, m=2)
    from itertools import product as iproduct

    from drinfeld import enumerate_flags

    for flag in enumerate_flags(3, ctx64):
        chain = flag.chain(ctx64)
        dims = [chain[t].dim - chain[t + 1].dim for t in range(len(chain) - 1)]
        choices = [enumerate_omega(d, ctx64, 2) for d in dims]
        seen = {}
        for parts in iproduct(*choices):
            x = b_from_flag_data(flag, parts, ctx64)
            assert parts not in seen
            assert x not in seen.values()
            seen[parts] = x
        # complete flags carry exactly one point
        if len(flag) == 2:
            assert len(seen) == 1


def test_b_classification_is_the_built_flag(ctx64):
    from drinfeld import enumerate_flags

    for m in (1, 2):
        for flag in enumerate_flags(3, ctx64):
            for x in b_enumerate_flag(flag, ctx64, m):
                assert b_classify(x) == flag


def test_b_classify_guards_divisor_chain_agreement(ctx64):
    # complete flag: the kernel chain is [plane, line]; tampering with an
    # off-chain plane functional removes the line from the divisor set, and
    # the classifier must refuse rather than return a flag
    from drinfeld import enumerate_flags

    flag = next(f for f in enumerate_flags(3, ctx64) if len(f) == 2)
    x = b_enumerate_flag(flag, ctx64, 1)[0]
    line = flag.smallest
    off_chain = next(
        W
        for W in x.family
        if W.dim == 2 and W != flag.largest and W.contains(line)
    )
    fam = dict(x.family)
    line_coords = off_chain.coords_of(line.rows[0])
    from drinfeld.linalg import apply_functional

    fam[off_chain] = next(
        c
        for c in enumerate_functionals(2, ctx64, 1)
        if apply_functional(c, line_coords)
    )
    broken = BPoint(ctx64, 3, fam, validate=False)
    with pytest.raises(InvariantViolation):
        b_classify(broken)


def test_b_validate_detects_perturbation(ctx64):
    # replacing one plane functional of a dense point breaks a minor, and
    # both tests must agree on that
    x = omega_embed_b(PPoint(ctx64, enumerate_omega(3, ctx64, 3)[0]))
    subs = all_subspaces(3, ctx64, include_zero=False)
    plane = next(s for s in subs if s.dim == 2)
    fam = dict(x.family)
    for cand in enumerate_functionals(2, ctx64, 3):
        if cand != fam[plane]:
            fam[plane] = cand
            break
    a, wit_a = incidence_minors_ok(fam, ctx64)
    b, wit_b = restriction_proportional_ok(fam, ctx64)
    assert a == b and not a and wit_a is not None
    assert not b_validate(fam, ctx64)
    with pytest.raises(ValueError):
        BPoint(ctx64, 3, fam)


def test_b_two_tests_agree_on_random_perturbations(ctx64):
    rng = random.Random(11)
    for n_plus_1, m in ((2, 2), (3, 1), (3, 2)):
        pts = b_enumerate(ctx64, n_plus_1, m)
        subs = all_subspaces(n_plus_1, ctx64, include_zero=False)
        for _ in range(120):
            x = rng.choice(pts)
            W = rng.choice(subs)
            fam = dict(x.family)
            fam[W] = rng.choice(enumerate_functionals(W.dim, ctx64, m))
            a, _ = incidence_minors_ok(fam, ctx64)
            b, _ = restriction_proportional_ok(fam, ctx64)
            assert a == b


def test_pi_map_hits_every_reachable_stratum(ctx64):
    for m in (1, 2):
        images = {p_classify(pi_map(x)) for x in b_enumerate(ctx64, 2, m)}
        strata = {p_classify(x) for x in p_enumerate(ctx64, 2, m)}
        assert images == strata


def test_rho_lands_on_smallest_member(ctx64):
    for m in (1, 2):
        for x in b_enumerate(ctx64, 3, m):
            flag = b_classify(x)
            want = flag.smallest or Subspace.full(3, ctx64)
            assert q_classify(rho_map(x)) == want


# --- serialization ----------------------------------------------------------


def test_point_json_roundtrips(ctx64, omega4):
    l = PPoint(ctx64, (ctx64.one, omega4))
    pts = [l, omega_embed_q(l), omega_embed_b(l), b_enumerate(ctx64, 3, 1)[0]]
    for x in pts:
        obj = json.loads(json.dumps(point_to_obj(x), sort_keys=True))
        assert point_from_obj(obj) == x


def test_point_json_rejects_mismatched_field(ctx64, ctx729):
    obj = point_to_obj(PPoint(ctx64, (ctx64.one, ctx64.zero)))
    with pytest.raises(ValueError):
        point_from_obj(obj, ctx729)


def test_point_json_rejects_unknown_kind(ctx64):
    obj = point_to_obj(PPoint(ctx64, (ctx64.one, ctx64.zero)))
    obj["kind"] = "X"
    with pytest.raises(ValueError):
        point_from_obj(obj)


def test_subspace_str_roundtrip(ctx64):
    from drinfeld.points import subspace_from_str, subspace_str

    for sub in all_subspaces(3, ctx64):
        assert subspace_from_str(subspace_str(sub, ctx64), ctx64, 3) == sub
