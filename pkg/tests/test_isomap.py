"""Splitting maps, proof matrices, rank and character-sum identities."""

import random
from fractions import Fraction

import pytest
from mpmath import mp

from weilforms.arith import euler_phi
from weilforms.discform import DiscriminantForm
from weilforms.expansions import (
    HarmonicExpansion,
    random_plus_expansion,
    theta_expansion,
    verify_T_transform,
)
from weilforms.isomap import (
    b_entry_bruteforce,
    build_proof_matrices,
    combine_to_scalar,
    coprime_residues,
    f_j_consistency_check,
    gauss_sum_identity_check,
    rank_lemma_check,
    split_to_vector,
)
from weilforms.weilrep import rho_S


def test_coprime_residues():
    assert coprime_residues(12) == (1, 5, 7, 11)
    assert coprime_residues(1) == (1,)
    assert len(coprime_residues(40)) == euler_phi(40)


def test_split_self_paired_component_is_undivided():
    f = HarmonicExpansion(1, {5: 1}, window=(-8, 8))
    F = split_to_vector(f, 1, 0)
    # gamma = 1 is its own negative mod 2, so no halving
    assert F.components[1].c_plus == {Fraction(5, 4): 1}
    assert F.components[0].is_zero()
    assert F.components[1].window == (-2, 2)


def test_split_halves_across_paired_roots():
    f = HarmonicExpansion(1, {1: 1}, window=(-12, 12))
    F = split_to_vector(f, 3, 0)
    assert F.components[1].c_plus == {Fraction(1, 12): Fraction(1, 2)}
    assert F.components[5].c_plus == {Fraction(1, 12): Fraction(1, 2)}
    for g in (0, 2, 3, 4):
        assert F.components[g].is_zero()


def test_split_gates():
    f = HarmonicExpansion(1, {0: 1}, window=(-4, 4))
    with pytest.raises(ValueError):
        split_to_vector(f, 4, 0)
    split_to_vector(f, 4, 0, allow_composite=True)
    with pytest.raises(ValueError):
        split_to_vector(f, 2, 1)      # weight says k = 0
    bad = HarmonicExpansion(1, {2: 1}, window=(-4, 4))
    with pytest.raises(ValueError):
        split_to_vector(bad, 1, 0)    # off the square classes


def test_combine_gates():
    F = split_to_vector(theta_expansion(8), 1, 0)
    with pytest.raises(ValueError):
        combine_to_scalar(F, k=1)
    flipped = type(F)(F.df, F.weight_num, dict(F.components), dual=True)
    with pytest.raises(ValueError):
        combine_to_scalar(flipped)


def test_roundtrip_corpus():
    rng = random.Random(977)
    for m in (1, 2, 3, 5):
        for k in (0, 1):
            for _ in range(12):
                f = random_plus_expansion(m, k, rng)
                F = split_to_vector(f, m, k)
                assert F.dual == bool(k % 2)
                assert F.support_congruence_ok()
                assert combine_to_scalar(F, k) == f


def test_composite_roundtrip_doubles_on_doubly_self_paired_class():
    # m = 4 is why the prime gate exists: gamma = 0 and gamma = 4 are both
    # self-paired with 0^2 = 4^2 = 0 mod 16, so a coefficient at n = 16
    # lands whole on both components and comes back doubled.
    f = HarmonicExpansion(1, {16: 1}, window=(-16, 16))
    F = split_to_vector(f, 4, 0, allow_composite=True)
    assert F.components[0].c_plus == {1: 1}
    assert F.components[4].c_plus == {1: 1}
    assert combine_to_scalar(F).c_plus == {16: 2}
    # off that class the composite roundtrip is still exact
    g = HarmonicExpansion(1, {1: 1, 4: 1}, window=(-16, 16))
    assert combine_to_scalar(split_to_vector(g, 4, 0, allow_composite=True)) == g


def test_split_image_satisfies_T():
    F = split_to_vector(theta_expansion(40), 1, 0)
    assert verify_T_transform(F)


def test_R_matches_weil_S_action():
    for m in (1, 2, 3, 5):
        mats = build_proof_matrices(m)
        s = rho_S(DiscriminantForm(m))
        for b in range(2 * m):
            for g in range(2 * m):
                assert mats.R[b][g] == s.entry(b, g), (m, b, g)


def test_B_equals_bruteforce_character_sums():
    for m in (1, 2, 3, 4, 6, 10):
        mats = build_proof_matrices(m)
        for b in range(2 * m):
            for g in range(2 * m):
                assert mats.B[b][g].as_rational() == b_entry_bruteforce(m, b, g)


def test_rank_lemma_small_indices_match_prediction():
    for m in (1, 2, 3):
        rep = rank_lemma_check(m)
        assert rep.expected_rank == 2 * euler_phi(m)
        assert rep.rank == rep.expected_rank
        assert rep.rank_matches
        assert rep.first_columns_independent


def test_rank_lemma_prime_rank_is_m_plus_one():
    for m in (3, 5, 7, 11, 13):
        rep = rank_lemma_check(m)
        assert rep.rank == m + 1, m
        assert rep.rank_matches == (m + 1 == 2 * euler_phi(m)), m
        assert rep.distinct_columns_independent, m


def test_rank_lemma_m2_distinct_columns_degenerate():
    rep = rank_lemma_check(2)
    assert not rep.distinct_columns_independent
    assert rank_lemma_check(1).distinct_columns_independent


def test_rank_lemma_discrepancies_sit_on_negation_cells():
    # for odd prime m the predicted table fails exactly at beta = -gamma
    # off the diagonal, where the character sum evaluates to phi(4m)
    for m in (3, 5, 7):
        rep = rank_lemma_check(m)
        dim = 2 * m
        want = {
            ((-g) % dim, g, euler_phi(4 * m), -2)
            for g in range(dim)
            if (2 * g) % dim != 0
        }
        assert set(rep.table_discrepancies) == want, m
    assert rank_lemma_check(1).table_discrepancies == ()


def test_rank_lemma_discrepancies_m2():
    # at m = 2 even the diagonal prediction 2 phi(2) = 2 misses phi(8) = 4,
    # and the even-difference cells split into +-phi(8) instead of -2
    want = {
        (0, 0, 4, 2), (1, 1, 4, 2), (2, 2, 4, 2), (3, 3, 4, 2),
        (0, 2, -4, -2), (2, 0, -4, -2),
        (1, 3, 4, -2), (3, 1, 4, -2),
    }
    assert set(rank_lemma_check(2).table_discrepancies) == want


def test_gauss_sum_identity():
    for m in (1, 2, 3, 4, 5, 6, 7):
        assert gauss_sum_identity_check(m), m


def test_f_j_on_theta():
    mp.prec = 160
    th = theta_expansion(400)
    for j in (1, 3):
        rep = f_j_consistency_check(th, 1, 0, j, [1j], 1e-8)
        assert rep.passed, j
        assert rep.max_deviation < 1e-20


def test_f_j_detects_corruption():
    mp.prec = 160
    th = theta_expansion(400)
    broken = dict(th.c_plus)
    broken[4] = broken[4] + Fraction(1, 31)
    bad = HarmonicExpansion(1, broken, window=th.window)
    rep = f_j_consistency_check(bad, 1, 0, 3, [1j], 1e-8)
    assert not rep.passed


def test_f_j_rejects_common_factor():
    with pytest.raises(ValueError):
        f_j_consistency_check(theta_expansion(8), 1, 0, 2, [1j])
