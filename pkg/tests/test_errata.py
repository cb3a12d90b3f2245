"""Plausible alternative forms that fail numerically, next to the forms that hold.

Each test evaluates the literal expression and shows its residual is
large, so the correction in the library is forced rather than cosmetic.
"""

import cmath
import math
from dataclasses import replace

import pytest

from qtau.degeneration import (
    DegenerationStep,
    constant_relations,
    degeneration_terms,
    relation_error,
    scaling_constant,
    source_params,
    source_t,
    substituted_s,
)
from qtau.painleve import _equation_terms, _TauTable, bilinear_residuals, equation_residual
from qtau.qcore import QContext, log_q_minus_one
from qtau.tau import ParamsIII1, ParamsIII2, ParamsIII3, TruncationSpec, tau, tau_shifted

CTX = QContext(0.5)
Q = CTX.q
T = 0.03
FULL = TruncationSpec(10, 4)
BROKEN = 1e-3


def _worst(terms_pair):
    return max(abs(sum(e)) / max(abs(x) for x in e) for e in terms_pair)


def _equations_with(params, yz_fn):
    tab = _TauTable(CTX, params, FULL)
    y, z = yz_fn(tab, T)
    yb, zb = yz_fn(tab, Q * T)
    return _worst(_equation_terms(CTX, params, y, z, yb, zb, T))


def test_iii1_variant_z():
    p = ParamsIII1(0.37, 0.21, 0.29, 0.9)

    def variant(tab, t):
        st = math.sqrt(t)
        y = Q ** (-p.theta_star - 1) * st * tab(3, t) * tab(4, t) / (tab(1, t) * tab(2, t))
        z = Q ** (-p.theta_star / 2 - 0.75) * st * tab(3, t) * tab(4, t / Q) / (tab(1, t / Q) * tab(2, t))
        return y, z

    assert _equations_with(p, variant) > BROKEN
    assert max(r.relative for r in equation_residual(CTX, p, T, FULL)) < 1e-6


def test_iii2_variant_z():
    p = ParamsIII2(0.37, 0.29, 0.9)
    r = cmath.exp(0.5 * log_q_minus_one(CTX))

    def variant(tab, t):
        st = math.sqrt(t)
        y = Q ** (-p.theta_star - 1) / r * st * tab(3, t) ** 2 / (tab(1, t) * tab(2, t))
        z = Q ** (-p.theta_star / 2 - 0.75) / r * st * tab(3, t) * tab(3, t / Q) / (tab(1, t / Q) * tab(2, t))
        return y, z

    assert _equations_with(p, variant) > BROKEN


def test_iii3a_variant_y_and_z():
    p = ParamsIII3(0.27, 0.8)

    def variant(tab, t):
        st, s = math.sqrt(t), p.s
        y = st * s * tab(2, t) ** 2 / tab(1, t) ** 2
        z = Q**-0.75 * st * s * tab(2, t) * tab(2, t / Q) / (tab(1, t) * tab(1, t / Q))
        return y, z

    assert _equations_with(p, variant) > BROKEN
    assert max(r.relative for r in equation_residual(CTX, p, T, FULL)) < 1e-6


def test_iii3b_variant_y_and_z():
    p = ParamsIII3(0.27, 0.8, "A7")

    def variant(tab, t):
        st, s = math.sqrt(t), p.s
        y = -st * s * tab(2, t) ** 2 / (Q * tab(1, t) * tab(1, Q * t))
        z = -Q**-0.75 * st * s * tab(2, t) * tab(2, t / Q) / (tab(1, t / Q) * tab(1, Q * t))
        return y, z

    assert _equations_with(p, variant) > BROKEN
    assert max(r.relative for r in equation_residual(CTX, p, T, FULL)) < 1e-6


def test_iii3b_second_tau_needs_negated_s():
    p = ParamsIII3(0.27, 0.8, "A7")
    unflipped = lambda t: tau(CTX, replace(p, sigma=p.sigma + 0.5), t, FULL)  # noqa: E731
    tau1 = lambda t: tau_shifted(CTX, p, 1, t, FULL)  # noqa: E731
    terms = [math.sqrt(T) / p.s * tau1(T) * tau1(Q * T), -unflipped(T) ** 2, unflipped(Q * T) * unflipped(T / Q)]
    assert abs(sum(terms)) / max(map(abs, terms)) > BROKEN
    reps = {r.identity_id: r.relative for r in bilinear_residuals(CTX, p, T, FULL)}
    assert reps["III3B.B4"] < 1e-6


def test_iii3b_variant_b5_sign():
    p = ParamsIII3(0.27, 0.8, "A7")
    tab = _TauTable(CTX, p, FULL)
    st = math.sqrt(T)
    terms = [tab(1, T) ** 2, -p.s * Q**-0.25 * st * tab(2, T) * tab(2, T / Q), -tab(1, T / Q) * tab(1, Q * T)]
    assert abs(sum(terms)) / max(map(abs, terms)) > BROKEN


def _orbit(p, k, s_flip):
    s = p.s * (-1) ** k if s_flip else p.s
    return tau(CTX, replace(p, sigma=p.sigma + k / 2, s=s), math.sqrt(Q) ** k * T, FULL)


@pytest.mark.parametrize("s_flip", [False, True])
def test_variant_five_term_sign(s_flip):
    p = ParamsIII3(0.27, 0.8, "A7")
    v = {k: _orbit(p, k, s_flip) for k in range(-2, 3)}
    terms = [v[0] ** 2, -math.sqrt(T) * v[1] * v[-1], -v[2] * v[-2]]
    assert abs(sum(terms)) / max(map(abs, terms)) > BROKEN


def test_time_evolution_without_s_flip():
    p = ParamsIII3(0.27, 0.8, "A7")
    v = {k: _orbit(p, k, False) for k in range(-2, 3)}
    terms = [v[0] ** 2, math.sqrt(T) * v[1] * v[-1], -v[2] * v[-2]]
    assert abs(sum(terms)) / max(map(abs, terms)) > BROKEN


def test_a7prime_variant_substitution():
    p = ParamsIII3(0.27, 0.8)
    from qtau.painleve import _yz

    tab = _TauTable(CTX, p, FULL)
    # (Y, Z) = (z, y(t/q)) instead of (z(q t), y)
    y_lo, _ = _yz(CTX, p, tab, T / Q, "theorem")
    y0, z0 = _yz(CTX, p, tab, T, "theorem")
    _, z1 = _yz(CTX, p, tab, Q * T, "theorem")
    Y, Yb, Z, Zb = z0, z1, y_lo, y0
    e1 = [Y * Yb, Zb * (Zb - T) / (Zb - 1 / Q)]
    e2 = [Z * Zb * Q, -(Y**2)]
    assert _worst((e1, e2)) > BROKEN


def test_iii2_to_iii3b_variant_constant_relation():
    p, lam = ParamsIII3(0.27, 0.8, "A7"), 9.0
    sig = p.sigma
    c = lambda i: scaling_constant(CTX, "III2_to_III3B", i, p, lam).log  # noqa: E731
    variant = 0.5 * log_q_minus_one(CTX) - cmath.log(1 - Q ** (lam - sig + 0.5)) + 2 * c(3)
    assert relation_error(c(1) + c(2), variant) > BROKEN
    (_, lhs, rhs), = constant_relations(CTX, "III2_to_III3B", p, lam)
    assert relation_error(lhs, rhs) < 1e-12


def test_iii2_to_iii3b_second_limit_sign():
    p = ParamsIII3(0.27, 0.8, "A7")
    step = DegenerationStep("III2_to_III3B", p, 0.02, 12.0)
    entry, lhs, rhs = degeneration_terms(CTX, step, TruncationSpec(8, 3))[1]
    assert entry.sign == -1
    assert abs(lhs + rhs) / abs(rhs) > 1.0  # the unsigned target is off by a factor -1
    assert abs(lhs - rhs) / abs(rhs) < 1e-3


def test_v_to_iii1_sixth_limit_time():
    p, t1, lam = ParamsIII1(0.37, 0.21, 0.29, 0.9), 0.02, 12.0
    trunc = TruncationSpec(8, 3)
    src = source_params(CTX, "V_to_III1", p, lam)
    s_src = substituted_s(CTX, "V_to_III1", p.s, p.sigma, lam)
    lc = scaling_constant(CTX, "V_to_III1", 6, p, lam, t1).log
    lhs = tau_shifted(CTX, src, 6, source_t(CTX, "V_to_III1", t1, lam), trunc, s=s_src, log_scale=lc)
    variant = tau_shifted(CTX, p, 4, Q * t1, trunc)
    used = tau_shifted(CTX, p, 4, t1 / Q, trunc)
    assert abs(lhs - variant) / abs(variant) > 0.1
    assert abs(lhs - used) / abs(used) < 1e-3
