"""Jacobi forms: theta series, decomposition, heat and Casimir checks."""

import random
from fractions import Fraction

import pytest
from mpmath import exp, jtheta, mp, mpc, mpf, pi

from weilforms.expansions import TruncationError, eval_point, inc_gamma, plus_space_check
from weilforms.isomap import split_to_vector
from weilforms.jacobi import (
    JacobiForm,
    casimir_reduced_fd,
    decomposition_consistency_check,
    heat_operator_term_check,
    jacobi_eval_direct,
    random_jacobi_form,
    reconstruct,
    theta_decompose,
    theta_series_eval,
    thm2_map,
)


def test_constructor_validation():
    with pytest.raises(ValueError):
        JacobiForm(Fraction(1, 2), 1, {})
    with pytest.raises(ValueError):
        JacobiForm(2, 0, {})
    with pytest.raises(ValueError):
        JacobiForm(2, 1, {(2, 1): 1})            # 2 != 1 mod 4
    with pytest.raises(ValueError):
        JacobiForm(2, 1, {}, {(-4, 0): 1})       # c_minus needs D > 0
    with pytest.raises(ValueError):
        JacobiForm(2, 1, {(1, 1): 1, (1, 3): 2})  # same class, two values
    with pytest.raises(ValueError):
        JacobiForm(2, 1, {(8, 0): 1}, d_max=4)


def test_key_normalization():
    phi = JacobiForm(2, 3, {(1, 7): 5, (1, 1): 5, (4, -2): 0})
    assert phi.c_plus == {(1, 1): 5}
    assert phi.is_zero() is False
    assert JacobiForm(2, 3, {}).is_zero()


def test_d_max_covers_both_parts():
    phi = JacobiForm(2, 1, {(0, 0): 1}, {(8, 0): 2})
    assert phi.d_max == 8
    # equality sees the declared horizon, not just the stored keys
    assert JacobiForm(2, 1, {(0, 0): 1}) != JacobiForm(2, 1, {(0, 0): 1}, d_max=4)


def test_theta_against_jtheta():
    mp.prec = 160
    tau = mpc("0.31", "0.9")
    z = mpc("0.12", "0.05")
    q = exp(2j * pi * tau)
    v0, b0 = theta_series_eval(1, 0, tau, z, 30)
    v1, b1 = theta_series_eval(1, 1, tau, z, 30)
    assert abs(v0 - jtheta(3, 2 * pi * z, q)) < mpf(2) ** -120
    assert abs(v1 - jtheta(2, 2 * pi * z, q)) < mpf(2) ** -120
    assert b0 < mpf(2) ** -120 and b1 < mpf(2) ** -120


def test_theta_reference_value():
    mp.prec = 80
    val, bound = theta_series_eval(1, 0, 1j, 0, 12)
    # 1 + 2 e^(-2 pi) + 2 e^(-8 pi) + ...
    direct = sum(exp(-2 * pi * n * n) for n in range(-12, 13))
    assert abs(val - direct) < mpf(2) ** -75
    assert abs(val - mpf("1.0037348854877391")) < 1e-15
    assert bound < 1e-50


def test_theta_reflection():
    mp.prec = 120
    tau = mpc("0.2", "1.3")
    z = mpc("-0.07", "0.11")
    for mu in range(6):
        a, _ = theta_series_eval(3, mu, tau, z, 40)
        b, _ = theta_series_eval(3, -mu, tau, -z, 40)
        assert abs(a - b) < mpf(2) ** -100, mu


def test_theta_tail_bound_is_honest():
    mp.prec = 160
    tau = mpc("0.1", "0.6")
    z = mpc("0.3", "0.25")
    coarse, bound = theta_series_eval(2, 1, tau, z, 8)
    fine, fine_bound = theta_series_eval(2, 1, tau, z, 200)
    assert fine_bound < mpf(2) ** -150
    assert abs(coarse - fine) <= bound


def test_theta_rejects_hopeless_truncation():
    with pytest.raises(TruncationError):
        theta_series_eval(1, 0, 0.05j, 0.9j, 3)
    with pytest.raises(TruncationError):
        theta_series_eval(1, 0, 1j, 0, 5, accuracy=1e-40)
    with pytest.raises(ValueError):
        theta_series_eval(1, 0, -1j, 0, 5)


def test_decompose_single_classes():
    phi = JacobiForm(2, 1, {(-4, 0): 3, (1, 1): 5}, {(8, 0): 7})
    hs = theta_decompose(phi)
    assert hs.weight_num == 3 and hs.dual
    assert hs.components[0].c_plus == {1: 3}
    assert hs.components[0].c_minus == {-2: 7}
    assert hs.components[1].c_plus == {Fraction(-1, 4): 5}
    assert hs.components[0].window == (-2, 1)
    assert hs.components[1].window == (-2, 1)


def test_reconstruct_inverts_decompose():
    rng = random.Random(20260825)
    for m in (1, 2, 3, 5):
        for k in (0, 1, 2, 3):
            for _ in range(10):
                phi = random_jacobi_form(k, m, rng)
                assert reconstruct(theta_decompose(phi), m) == phi


def test_reconstruct_gates():
    phi = random_jacobi_form(2, 2, random.Random(7))
    hs = theta_decompose(phi)
    with pytest.raises(ValueError):
        reconstruct(hs, 3)
    plain = type(hs)(hs.df, hs.weight_num, dict(hs.components), dual=False)
    with pytest.raises(ValueError):
        reconstruct(plain, 2)


def test_heat_operator_kills_theta_terms():
    for m in range(1, 11):
        for r in range(-25, 26):
            assert heat_operator_term_check(m, r) == 0, (m, r)


def test_gamma_argument_bookkeeping():
    # a single c_minus class evaluated directly must match the generic
    # vector-component evaluation times the theta value: both sides hinge
    # on Gamma(3/2 - k, pi D y / m) = Gamma(1 - (k - 1/2), 4 pi |n| y)
    mp.prec = 128
    k, m, d, r = 2, 3, 13, 1
    phi = JacobiForm(k, m, {}, {(d, r): 1})
    tau = mpc("0.11", "0.8")
    z = mpc("0.04", "0.03")
    direct, _ = jacobi_eval_direct(phi, tau, z, 80)
    hs = theta_decompose(phi)
    total = mpc(0)
    for g in range(2 * m):
        hv, _ = eval_point(hs.components[g], tau, accuracy=float("inf"))
        tv, _ = theta_series_eval(m, g, tau, z, 80)
        total += hv * tv
    assert abs(direct - total) < mpf(2) ** -100
    y = tau.imag
    gam = inc_gamma(Fraction(3, 2) - k, pi * d * y / m)
    vector_gam = inc_gamma(
        Fraction(1, 2) - (k - 1), 4 * pi * abs(Fraction(-d, 4 * m)) * y)
    assert abs(gam - vector_gam) < mpf(2) ** -110 * abs(gam)


def test_decomposition_consistency():
    rng = random.Random(5150)
    pts = [(mpc("0.13", "1.1"), mpc("0.21", "0.05")),
           (1j, mpf("0.4")),
           (mpc("-0.5", "0.8"), mpc("0", "0.1"))]
    for m in (1, 3):
        phi = random_jacobi_form(2, m, rng)
        rep = decomposition_consistency_check(phi, pts)
        assert rep.passed, rep


def test_casimir_annihilates_harmonic_terms():
    mp.prec = 128
    pt = (mpc("0.13", "1.05"), mpc("0.06", "0.02"))
    hol = JacobiForm(2, 1, {(1, 1): 1})
    non = JacobiForm(2, 1, {}, {(4, 0): 1})
    for phi in (hol, non):
        res = casimir_reduced_fd(phi, 2, 1, pt, 1e-3)
        assert abs(res) < 1e-4, phi
    zero = casimir_reduced_fd(JacobiForm(2, 1, {}), 2, 1, pt, 1e-3)
    assert abs(zero) == 0


def test_casimir_quadratic_convergence():
    mp.prec = 160
    pt = (mpc("0.13", "1.05"), mpc("0.06", "0.02"))
    phi = JacobiForm(2, 1, {(1, 1): 1})
    r1 = abs(casimir_reduced_fd(phi, 2, 1, pt, 1e-2))
    r2 = abs(casimir_reduced_fd(phi, 2, 1, pt, 5e-3))
    assert 3.0 < r1 / r2 < 5.0


def test_casimir_flags_non_harmonic():
    mp.prec = 128
    pt = (mpc("0.13", "1.05"), mpc("0.06", "0.02"))
    res = casimir_reduced_fd(lambda t, z: mpc(t).imag ** 3, 2, 1, pt, 1e-3)
    assert abs(res) > 1e-2


def test_thm2_roundtrip_corpus():
    rng = random.Random(20260825)
    for m in (1, 2, 3, 5):
        for k in (0, 2, 4):
            for _ in range(6):
                phi = random_jacobi_form(k, m, rng)
                f = thm2_map(phi)
                assert f.weight_num == 2 * k - 1
                assert plus_space_check(f, m, k - 1)
                assert split_to_vector(f, m, k - 1) == theta_decompose(phi)


def test_thm2_gates():
    rng = random.Random(11)
    with pytest.raises(ValueError):
        thm2_map(random_jacobi_form(3, 2, rng))
    with pytest.raises(ValueError):
        thm2_map(random_jacobi_form(2, 4, rng))
    thm2_map(random_jacobi_form(2, 4, rng), allow_composite=True)
    lopsided = JacobiForm(2, 3, {(1, 1): 1})
    with pytest.raises(ValueError):
        thm2_map(lopsided)


def test_random_form_elliptic_parity():
    rng = random.Random(31)
    for k in (0, 1, 2, 3):
        for m in (1, 2, 3):
            phi = random_jacobi_form(k, m, rng)
            sign = -1 if k % 2 else 1
            for table in (phi.c_plus, phi.c_minus):
                for (d, r), v in table.items():
                    assert table[(d, (-r) % (2 * m))] == sign * v
            if k % 2:
                for table in (phi.c_plus, phi.c_minus):
                    assert all(r not in (0, m) for _, r in table)
    assert random_jacobi_form(1, 1, random.Random(1)).is_zero()
