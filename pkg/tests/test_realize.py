"""Realization constructions: factorization, padding, prescribed groups."""

import math

import numpy as np
import pytest

from ballmaps import (
    MapConstructionError,
    Polynomial,
    catalog,
    close_permutation_group,
    diagonal_stabilizer,
    factor_form,
    form_of,
    gram_form,
    is_proper,
    membership,
    norm_power_form,
    pad_to_proper,
    padded_map,
    permutation_stabilizer,
    polynomial_map,
    power_chain_check,
    realize_from_invariants,
    realize_subgroup,
    sphere_form,
    sphere_sample_check,
    strict_stabilizer,
    symmetric_group_map,
    symmetric_group_map_v2,
    unitary_automorphism,
)

ETA = np.exp(2j * np.pi / 3)
CUBE_ROOTS_DIAG = np.diag([ETA, ETA**2])


# ---------------------------------------------------------------------------
# factor_form
# ---------------------------------------------------------------------------
def test_factor_sphere_form():
    res = factor_form(sphere_form(2))
    assert len(res.positives) == 2 and len(res.negatives) == 1
    assert res.reconstruct(2).max_entry_diff(sphere_form(2)) < 1e-12


def test_factor_positive_semidefinite_form():
    # 2|z|^2 + |z|^4 factors into holomorphic squares with no negative part
    h = norm_power_form(2, 1).scale(2.0) + norm_power_form(2, 2)
    res = factor_form(h)
    assert not res.negatives
    assert gram_form(list(res.positives)).max_entry_diff(h) < 1e-10


def test_factor_cubic_form_signature_split():
    res = factor_form(form_of(catalog("faran-4")))
    assert len(res.positives) == 3 and len(res.negatives) == 1


def test_factor_reconstruction_random(rng):
    for _ in range(4):
        polys = [
            Polynomial(2, {tuple(rng.integers(0, 3, 2)): complex(*rng.standard_normal(2))})
            for _ in range(3)
        ]
        h = gram_form(polys, [1.0, 1.0, -1.0])
        res = factor_form(h)
        assert res.reconstruct(2).max_entry_diff(h) < 1e-10 * max(1.0, h.max_abs())


# ---------------------------------------------------------------------------
# pad_to_proper
# ---------------------------------------------------------------------------
def test_pad_pair_monomial_with_forced_epsilon():
    # (2/3)|z1 z2|^2 + (1/3)(1 + |z|^2 + |z1|^4 + |z2|^4) = (1/3)(1 + |z|^2 + |z|^4)
    p = [Polynomial.monomial((1, 1))]
    pad = pad_to_proper(p, epsilon=math.sqrt(2.0 / 3.0))
    assert pad.powers == (0, 1, 2)
    assert all(lam == pytest.approx(1.0 / math.sqrt(3.0)) for lam in pad.lambdas)
    z1, z2 = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    expected = gram_form(
        [Polynomial.constant(2, 1.0), z1, z2, z1 * z1, z2 * z2]
    ).scale(1.0 / 3.0)
    assert gram_form(list(pad.components)).max_entry_diff(expected) < 1e-10
    mapped = padded_map(p, pad)
    assert is_proper(mapped).proper
    assert sphere_sample_check(mapped, 500, 1e-9, seed=7).passed


def test_pad_empty_map():
    pad = pad_to_proper([Polynomial.zero(2)])
    assert pad.powers == (0,)
    assert len(pad.components) == 1
    assert pad.components[0].degree == 0


def test_pad_affine_map():
    p = [Polynomial(2, {(0, 0): 1.0, (1, 0): 1.0, (0, 1): 1.0})]
    pad = pad_to_proper(p)
    mapped = padded_map(p, pad)
    assert is_proper(mapped).proper
    # reconstruction certificate
    lhs = gram_form([q.scale(pad.epsilon) for q in p] + list(pad.components))
    assert lhs.max_entry_diff(pad.target_form(2)) < 1e-9


def test_pad_reconstruction_identity_holds(rng):
    for _ in range(3):
        p = [
            Polynomial(2, {tuple(rng.integers(0, 3, 2)): complex(*rng.standard_normal(2))})
            for _ in range(2)
        ]
        pad = pad_to_proper(p)
        lhs = gram_form([q.scale(pad.epsilon) for q in p] + list(pad.components))
        assert lhs.max_entry_diff(pad.target_form(2)) < 1e-9 * max(1.0, lhs.max_abs())


def test_pad_omit_empty_degrees():
    p = [Polynomial.monomial((1, 1))]
    pad = pad_to_proper(p, omit_empty_degrees=True)
    assert pad.powers == (2,)
    mapped = padded_map(p, pad)
    assert is_proper(mapped).proper


def test_pad_rejects_oversized_epsilon():
    with pytest.raises(MapConstructionError):
        pad_to_proper([Polynomial.monomial((1, 1))], epsilon=10.0)


# ---------------------------------------------------------------------------
# permutation closure
# ---------------------------------------------------------------------------
def test_close_permutation_group_sizes():
    assert len(close_permutation_group([], 3)) == 1
    assert len(close_permutation_group([(1, 2, 0)], 3)) == 3
    assert len(close_permutation_group([(1, 2, 0), (1, 0, 2)], 3)) == 6


def test_close_permutation_group_rejects_non_permutation():
    with pytest.raises(MapConstructionError):
        close_permutation_group([(0, 0, 1)], 3)


# ---------------------------------------------------------------------------
# symmetric group maps
# ---------------------------------------------------------------------------
@pytest.mark.parametrize("n", [2, 3])
def test_symmetric_group_map(n):
    f = symmetric_group_map(n)
    assert f.degree == 3
    cert = is_proper(f)
    assert cert.proper and cert.residual <= 1e-8
    assert sphere_sample_check(f, 1000, 1e-9, seed=5).passed
    expected = close_permutation_group([tuple(range(1, n)) + (0,), (1, 0) + tuple(range(2, n))], n)
    assert sorted(permutation_stabilizer(f)) == expected
    assert diagonal_stabilizer(f).is_trivial
    assert power_chain_check(f) == set()


def test_symmetric_group_map_n1_is_trivial_fixture():
    f = symmetric_group_map(1)
    g = catalog("corollary-6-2")
    assert form_of(f).max_entry_diff(form_of(g)) < 1e-14


@pytest.mark.parametrize("n", [1, 2])
def test_symmetric_group_map_v2(n):
    f = symmetric_group_map_v2(n)
    cert = is_proper(f)
    assert cert.proper and cert.residual <= 1e-8
    assert sphere_sample_check(f, 500, 1e-9, seed=9).passed
    perms = permutation_stabilizer(f)
    assert len(perms) == math.factorial(n)
    assert diagonal_stabilizer(f).is_trivial


def test_symmetric_group_map_v2_three_variables():
    f = symmetric_group_map_v2(3)
    assert is_proper(f).proper
    assert len(permutation_stabilizer(f)) == 6


# ---------------------------------------------------------------------------
# subgroup realization
# ---------------------------------------------------------------------------
def test_realize_alternating_group():
    f = realize_subgroup([(1, 2, 0)], 3)
    assert is_proper(f).proper
    stab = permutation_stabilizer(f)
    assert sorted(stab) == [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    assert diagonal_stabilizer(f).is_trivial


def test_realize_trivial_subgroup_of_s2():
    f = realize_subgroup([], 2)
    assert is_proper(f).proper
    assert permutation_stabilizer(f) == [(0, 1)]
    assert diagonal_stabilizer(f).is_trivial


def test_realize_full_symmetric_delegates():
    f = realize_subgroup([(1, 2, 0), (1, 0, 2)], 3)
    g = symmetric_group_map(3)
    assert form_of(f).max_entry_diff(form_of(g)) < 1e-12


def test_realize_subgroup_members_have_unit_constant():
    f = realize_subgroup([(1, 0, 2)], 3)
    perm_mat = np.zeros((3, 3))
    perm_mat[0, 1] = perm_mat[1, 0] = perm_mat[2, 2] = 1.0
    res = membership(f, unitary_automorphism(perm_mat))
    assert res.member and res.c_gamma == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# realization from invariants
# ---------------------------------------------------------------------------
def test_realize_sign_flip_group_on_disc():
    zsq = Polynomial.monomial((2,))
    f = realize_from_invariants([zsq], [np.array([[-1.0 + 0j]])])
    assert is_proper(f).proper
    d = diagonal_stabilizer(f)
    assert d.order == 2
    assert sphere_sample_check(f, 500, 1e-9, seed=13).passed


def test_realize_cyclic_three_group():
    z1cubed = Polynomial.monomial((3, 0))
    z2cubed = Polynomial.monomial((0, 3))
    cross = Polynomial.monomial((1, 1))
    f = realize_from_invariants([z1cubed, z2cubed, cross], [CUBE_ROOTS_DIAG])
    assert is_proper(f).proper
    assert membership(f, unitary_automorphism(CUBE_ROOTS_DIAG)).member
    assert diagonal_stabilizer(f).order == 3


def test_realize_trivial_group_from_coordinates():
    invs = [Polynomial.variable(2, i) for i in range(2)]
    f = realize_from_invariants(invs, [])
    assert is_proper(f).proper
    assert diagonal_stabilizer(f).is_trivial


def test_realize_rejects_nonvanishing_invariants():
    bad = Polynomial.constant(1, 1.0) + Polynomial.variable(1, 0)
    with pytest.raises(MapConstructionError):
        realize_from_invariants([bad], [])


def test_strict_stabilizer_of_realized_sign_flip():
    # the output form has the order-2 lattice even though the map itself is
    # only Hermitian-invariant, not strictly invariant
    zsq = Polynomial.monomial((2,))
    f = realize_from_invariants([zsq], [np.array([[-1.0 + 0j]])])
    s = strict_stabilizer(f)
    assert s.diagonal.order in (1, 2)
    assert diagonal_stabilizer(f).order == 2


# ---------------------------------------------------------------------------
# pairwise-product block symmetry
# ---------------------------------------------------------------------------
def test_pairwise_product_block_admits_only_diag_perm_symmetries(rng):
    # |p o U|^2 = |p|^2 for p = (z_j z_k)_{j<k} holds for diagonal-times-
    # permutation unitaries and fails for generic rotations
    zs = [Polynomial.variable(3, i) for i in range(3)]
    p = polynomial_map([zs[j] * zs[k] for j in range(3) for k in range(j + 1, 3)])
    h = gram_form(list(p.numerator))
    from ballmaps import compose_source, permutation_automorphism

    for _ in range(5):
        diag = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, 3)))
        perm = tuple(rng.permutation(3))
        u = diag @ permutation_automorphism(perm).U
        composed = compose_source(p, unitary_automorphism(u))
        assert gram_form(list(composed.numerator)).max_entry_diff(h) < 1e-10
    theta = 0.4
    rot = np.array(
        [
            [math.cos(theta), -math.sin(theta), 0.0],
            [math.sin(theta), math.cos(theta), 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    composed = compose_source(p, unitary_automorphism(rot))
    assert gram_form(list(composed.numerator)).max_entry_diff(h) > 1e-3
