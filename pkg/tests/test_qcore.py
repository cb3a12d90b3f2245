import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtau.qcore import (
    LogComplex,
    PoleError,
    QContext,
    barnes_q,
    cpow,
    gamma_q,
    identity_suite,
    log_barnes_q,
    log_barnes_ratio,
    log_gamma_q,
    log_q_minus_one,
    log_shift_product,
    product_terms,
    q_double_pochhammer_inf,
    q_number,
    q_pochhammer,
    q_pochhammer_inf,
)

CTX = QContext(0.5)


def rel(a, b):
    return abs(a - b) / abs(b)


def test_context_validates_q_and_tolerance():
    for bad in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            QContext(bad)
    with pytest.raises(ValueError):
        QContext(0.5, 0.0)


def test_context_env_override(monkeypatch):
    monkeypatch.setenv("QTAU_PROD_TAIL_TOL", "1e-12")
    assert QContext.from_env(0.5).prod_tail_tol == 1e-12
    monkeypatch.delenv("QTAU_PROD_TAIL_TOL")
    assert QContext.from_env(0.5).prod_tail_tol == QContext(0.5).prod_tail_tol


def test_cpow_examples():
    assert cpow(1, 2.7 - 1j) == 1
    assert cpow(0.37, 0) == 1
    assert cpow(0, 0) == 1
    assert abs(cpow(-0.5, 2) - 0.25) < 1e-16
    with pytest.raises(ZeroDivisionError):
        cpow(0, -1)


def test_principal_log_of_q_minus_one():
    assert log_q_minus_one(CTX) == pytest.approx(complex(math.log(0.5), math.pi))


def test_logcomplex_roundtrip_and_2pi_ambiguity():
    z = LogComplex.from_value(-3 + 4j)
    assert abs(z.value - (-3 + 4j)) < 1e-14
    shifted = LogComplex(z.log_modulus, z.argument + 2 * math.pi)
    assert abs(shifted.value - z.value) < 1e-14
    with pytest.raises(ValueError):
        LogComplex.from_value(0)


def test_q_number_and_finite_pochhammer():
    assert q_number(CTX, 0) == 0
    assert q_number(CTX, 1) == pytest.approx(1)
    assert q_number(CTX, 2) == pytest.approx(1.5)
    assert q_pochhammer(CTX, 0.7, 0) == 1
    assert q_pochhammer(CTX, 0, 5) == 1
    assert q_pochhammer(CTX, 0.5, 2) == pytest.approx(0.375)


def test_infinite_pochhammers():
    assert q_pochhammer_inf(CTX, 0) == 1
    assert q_pochhammer_inf(CTX, 0.5) == pytest.approx(0.2887880950866024, rel=1e-14)
    assert q_pochhammer_inf(CTX, 0.25) == pytest.approx(0.5775761901732048, rel=1e-14)
    assert q_double_pochhammer_inf(CTX, 0) == 1
    direct = math.prod((1 - 0.5 ** (m + 1)) ** (m + 1) for m in range(200))
    assert q_double_pochhammer_inf(CTX, 0.5) == pytest.approx(direct, rel=1e-14)


@given(st.complex_numbers(max_magnitude=2.0))
@settings(max_examples=50, deadline=None)
def test_double_product_reindexing(a):
    lhs = q_double_pochhammer_inf(CTX, a) / q_double_pochhammer_inf(CTX, a * CTX.q)
    assert abs(lhs - q_pochhammer_inf(CTX, a)) <= 1e-12 * max(1.0, abs(lhs))


def test_truncation_converges_within_tail_bound():
    a = 0.8 - 0.3j
    coarse = QContext(0.5, 1e-8)
    fine = QContext(0.5, 0.5e-8)
    bound = abs(a) * 0.5 ** product_terms(coarse, a) / 0.5
    assert abs(q_pochhammer_inf(coarse, a) - q_pochhammer_inf(fine, a)) < bound


def test_gamma_and_barnes_values():
    assert gamma_q(CTX, 1) == pytest.approx(1, rel=1e-15)
    assert gamma_q(CTX, 2) == pytest.approx(1, rel=1e-15)
    assert gamma_q(CTX, 3) == pytest.approx(1.5, rel=1e-14)
    assert barnes_q(CTX, 1) == pytest.approx(1, rel=1e-15)
    assert barnes_q(CTX, 2) == pytest.approx(1, rel=1e-15)
    assert barnes_q(CTX, 4) == pytest.approx(1.5, rel=1e-14)


@pytest.mark.parametrize("u", [0, -1, -3, -3 + 1e-10])
def test_poles_raise(u):
    with pytest.raises(PoleError):
        log_gamma_q(CTX, u)
    with pytest.raises(PoleError):
        log_barnes_q(CTX, u)


def test_periodic_poles_are_detected():
    period = 2 * math.pi / abs(CTX.log_q)
    with pytest.raises(PoleError):
        log_gamma_q(CTX, complex(-2, period))


def test_huge_barnes_stays_in_log_space():
    w = log_barnes_q(CTX, -11.5 + 0.27)
    assert math.isfinite(w.log_modulus) and abs(w.log_modulus) > 50


@pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
def test_identity_suite(q):
    worst = identity_suite(q)
    assert worst["GAMMA_FE"] < 1e-11 and worst["BARNES_FE"] < 1e-11
    assert worst["SHIFT"] < 1e-10 and worst["RATIO"] < 1e-10


@pytest.mark.parametrize("n", range(-3, 4))
def test_ratio_identity_direct(n):
    x = 0.23 + 0.11j
    lg = lambda u: log_barnes_q(CTX, u).log  # noqa: E731
    lhs = lg(1 + x + n) + lg(1 - x) - lg(1 - x - n) - lg(1 + x)
    assert abs(cmath.exp(lhs - log_barnes_ratio(CTX, x, n)) - 1) < 1e-10


@pytest.mark.parametrize("n", [-3, -2])
def test_shift_identity_needs_signed_sigma_for_negative_n(n):
    # with +sigma in the q-number double products the identity fails for n <= -2
    x, sig = 0.13 - 0.07j, 0.21 + 0.05j
    lg = lambda u: log_barnes_q(CTX, u).log  # noqa: E731
    lhs = sum(lg(1 - x + e * (sig + n)) for e in (1, -1))
    assert abs(cmath.exp(lhs - log_shift_product(CTX, x, sig, n)) - 1) < 1e-10
    ln = lambda u: cmath.log(q_number(CTX, u))  # noqa: E731
    variant = sum(lg(1 - x + e * sig) + e * n * log_gamma_q(CTX, -x + e * sig).log for e in (1, -1))
    variant += abs(n) * ln(-x - sig)
    for i in range(abs(n)):
        for j in range(1, i + 1):
            variant += ln(-x + sig + j) + ln(-x - sig - j)
    assert abs(cmath.exp(lhs - variant) - 1) > 1e-3
