"""The base field need not be prime: everything over k = GF(4) = GF(2^2).

Subfield membership, rational kernels, enumeration and both stabilizer
routes all run relative to k, not to the prime field, so a non-prime base
exercises every e-dependent code path.
"""

from itertools import product

import pytest

from drinfeld import (
    Subspace,
    b_enumerate,
    context_for,
    enumerate_pgl,
    enumerate_subspaces,
    frobenius_k,
    gaussian_binomial,
    p_classify,
    p_core,
    p_enumerate,
    pgl_order,
    q_classify,
    q_enumerate,
    rational_kernel,
    stabilizer_bruteforce,
    stabilizer_predicted,
    stratum_flag,
    unipotent_elements,
    unipotent_radical_k,
)
from drinfeld.linalg import apply_functional
from drinfeld.points import b_classify


@pytest.fixture(scope="module")
def ctx4():
    "k = GF(4) and k_2 = GF(16) inside GF(2^4)."
    return context_for(2, 2, 2, [1, 2])


def test_base_field_sits_inside_ambient(ctx4):
    assert ctx4.q == 4 and ctx4.D == 4
    assert len(ctx4.k_elements) == 4
    assert len(ctx4.subfield_elements(2)) == 16
    for a in ctx4.k_elements:
        assert frobenius_k(a) == a  # Frobenius is relative to k, not F_p
    fixed_by_p_power = sum(1 for a in ctx4.elements() if a**2 == a)
    assert fixed_by_p_power == 2  # only the prime field is fixed by x -> x^p


def test_subspace_enumeration_over_gf4(ctx4):
    assert len(enumerate_subspaces(2, 1, ctx4)) == 5 == gaussian_binomial(2, 1, 4)


def test_rational_kernel_over_gf4_bruteforce(ctx4):
    import random

    rng = random.Random(3)
    els = ctx4.subfield_elements(2)
    for _ in range(120):
        coords = tuple(rng.choice(els) for _ in range(2))
        if not any(coords):
            continue
        K = rational_kernel(coords, ctx4)
        solutions = [
            v
            for v in product(ctx4.k_elements, repeat=2)
            if not apply_functional(coords, v)
        ]
        assert K == Subspace.span(2, [v for v in solutions if any(v)])
        assert len(solutions) == 4**K.dim


def test_point_totals_over_gf4(ctx4):
    for m in (1, 2):
        want = (4 ** (2 * m) - 1) // (4**m - 1)
        P = p_enumerate(ctx4, 2, m)
        Q = q_enumerate(ctx4, 2, m)
        B = b_enumerate(ctx4, 2, m)
        assert len(P) == len(Q) == len(B) == want
        for x in Q:
            q_classify(x)
        for x in B:
            b_classify(x)


def test_pgl24_is_order_sixty(ctx4):
    group = enumerate_pgl(2, ctx4)
    assert len(group) == 60 == pgl_order(2, 4)


def test_stabilizer_theorem_over_gf4(ctx4):
    group = enumerate_pgl(2, ctx4)
    for m in (1, 2):
        pts = (
            p_enumerate(ctx4, 2, m)
            + q_enumerate(ctx4, 2, m)
            + b_enumerate(ctx4, 2, m)
        )
        for x in pts:
            assert stabilizer_bruteforce(x, group) == stabilizer_predicted(x, group)


def test_dense_point_stabilizer_is_nonsplit_torus(ctx4):
    # a dense GF(16)-point is fixed exactly by the nonsplit torus
    # k_2^x / k^x of order (16 - 1)/(4 - 1) = 5 inside PGL(2, 4)
    x = next(x for x in p_enumerate(ctx4, 2, 2) if p_classify(x).dim == 0)
    stab = stabilizer_bruteforce(x)
    assert len(stab) == 5
    assert sorted(g.order() for g in stab) == [1, 5, 5, 5, 5]


def test_unipotent_identities_over_gf4(ctx4):
    group = enumerate_pgl(2, ctx4)
    for m in (1, 2):
        for x in (
            p_enumerate(ctx4, 2, m)
            + q_enumerate(ctx4, 2, m)
            + b_enumerate(ctx4, 2, m)
        ):
            stab = stabilizer_bruteforce(x, group)
            rad = unipotent_radical_k(stratum_flag(x), ctx4, group)
            assert unipotent_elements(stab) == rad
            assert p_core(stab) == rad
