"""Solutions of the q-Painleve equations built from tau-function ratios.

Every residual is reported relative to the largest individual summand of
the identity, so that identities whose terms carry huge structure
constants are judged on the same footing as the others.

Notation used in the comments: ``f_lo = f(t/q)``, ``f_hi = f(q t)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from .qcore import QContext, cpow, log_barnes_q, log_gamma_q, log_q_minus_one
from .tau import (
    Params,
    ParamsIII1,
    ParamsIII3,
    TruncationSpec,
    tau,
    tau_shifted,
)

PROVED = "proved"
CONJECTURED = "conjectured"
DEFAULT_TOLERANCE = 1e-6
_TINY = 1e-300

# Identity ids and their status, per family, in report order.
BILINEAR_IDS = {
    "VI": tuple(f"VI.B{k}" for k in range(1, 9)) + ("VI.FOUR",),
    "V": ("V.B1", "V.B3", "V.B4", "V.B5", "V.B7", "V.B8", "V.FOUR"),
    "III1": ("III1.B1", "III1.B4", "III1.B5", "III1.B7"),
    "III2": ("III2.B1", "III2.B4", "III2.B5"),
    "III3A": ("III3A.B1", "III3A.B4"),
    "III3B": ("III3B.B4", "III3B.B5"),
}


def identity_status(identity_id: str) -> str:
    if identity_id.startswith(("VI.B", "V.B")) or identity_id.endswith(".CONJ"):
        return CONJECTURED
    return PROVED


@dataclass(frozen=True)
class ResidualReport:
    identity_id: str
    status: str
    lhs_scale: float
    residual: complex
    relative: float
    passed: bool
    trunc: TruncationSpec
    t: complex
    tolerance: float = DEFAULT_TOLERANCE

    def with_tolerance(self, tolerance: float) -> "ResidualReport":
        return replace(self, tolerance=tolerance, passed=self.relative < tolerance)


def make_report(identity_id, terms, trunc, t, tolerance=DEFAULT_TOLERANCE, status=None) -> ResidualReport:
    """Report for the identity ``sum(terms) == 0``."""
    residual = complex(sum(terms))
    scale = max(abs(x) for x in terms)
    rel = abs(residual) / max(scale, _TINY)
    return ResidualReport(
        identity_id,
        status or identity_status(identity_id),
        scale,
        residual,
        rel,
        rel < tolerance,
        trunc,
        t,
        tolerance,
    )


@dataclass(frozen=True)
class EquationParams:
    a1: complex | None = None
    a2: complex | None = None
    a3: complex | None = None
    a4: complex | None = None
    b1: complex | None = None
    b2: complex | None = None
    b3: complex | None = None
    b4: complex | None = None


def equation_params(ctx: QContext, params: Params) -> EquationParams:
    """Coefficients of the family's coupled equations as q-powers of the thetas."""
    Q = ctx.qpow
    fam = params.family
    if fam == "VI":
        t1, tt, ti, t0 = params.theta1, params.theta_t, params.theta_inf, params.theta0
        return EquationParams(
            Q(-2 * t1 - 1), Q(-2 * tt - 2 * t1 - 1), Q(-1), Q(-2 * t1 - 1),
            Q(-t0 - tt - t1), Q(t0 - tt - t1), Q(ti - 0.5), Q(-ti - 0.5),
        )
    if fam == "V":
        ts, tt, t0 = params.theta_star, params.theta_t, params.theta0
        return EquationParams(
            Q(-ts - 1), Q(-2 * tt - ts - 1), Q(-1), Q(-1.5 * ts - 0.5),
            Q(-t0 - tt - ts / 2), Q(t0 - tt - ts / 2), Q(-ts / 2 - 0.5),
        )
    if fam == "III1":
        ts, t2 = params.theta_star, params.theta_star2
        return EquationParams(
            a2=Q(-t2 - ts - 1), a3=Q(-1), a4=Q(-1.5 * ts - 0.5), b2=Q(-ts / 2), b3=Q(-ts / 2 - 0.5)
        )
    if fam == "III2":
        ts = params.theta_star
        return EquationParams(
            a2=Q(-ts - 1), a3=Q(-1), a4=Q(-1.5 * ts - 0.5), b2=Q(-ts / 2), b3=Q(-ts / 2 - 0.5)
        )
    if fam == "III3A":
        return EquationParams(a2=Q(-1), a3=Q(-1))
    if fam == "III3B":
        return EquationParams(b3=Q(-0.5))
    raise ValueError(f"unknown family {fam!r}")


class _TauTable:
    """Memoized shifted tau functions of one parameter set."""

    def __init__(self, ctx: QContext, params: Params, trunc: TruncationSpec):
        self.ctx, self.params, self.trunc = ctx, params, trunc
        self._cache: dict = {}

    def __call__(self, index: int, t: complex) -> complex:
        key = (index, t)
        if key not in self._cache:
            self._cache[key] = tau_shifted(self.ctx, self.params, index, t, self.trunc)
        return self._cache[key]


def _sqrt(t: complex) -> complex:
    return cpow(t, 0.5)


def _sqrt_q_minus_one(ctx: QContext) -> complex:
    return cmath.exp(0.5 * log_q_minus_one(ctx))


def _ratio(num: complex, den: complex, what: str) -> complex:
    if abs(den) < _TINY:
        raise ZeroDivisionError(f"vanishing denominator in {what}")
    return num / den


def _yz(ctx: QContext, params: Params, T: _TauTable, t: complex, form: str) -> tuple[complex, complex]:
    q, Q = ctx.q, ctx.qpow
    lo = t / q
    fam = params.family
    if fam == "VI":
        t1, tt, ti = params.theta1, params.theta_t, params.theta_inf
        y = Q(-2 * t1 - 1) * t * _ratio(T(3, t) * T(4, t), T(1, t) * T(2, t), "y")
        if form == "conjecture":
            z = -Q(tt - t1 - 1) * t * _ratio(T(7, lo) * T(8, t), T(5, lo) * T(6, t), "z")
        else:
            a, b = T(1, lo) * T(2, t), T(1, t) * T(2, lo)
            z = _ratio(a - b, Q(0.5 + ti) * a - Q(0.5 - ti) * b, "z")
        return y, z
    if fam == "V":
        ts, tt = params.theta_star, params.theta_t
        r = _sqrt_q_minus_one(ctx)
        y = Q(-ts - 1) * r * t * _ratio(T(3, t) * T(4, t), T(1, t) * T(2, t), "y")
        if form == "conjecture":
            z = -Q(tt - ts / 2 - 1) * r * t * _ratio(T(5, lo) * T(6, t), T(1, t) * T(2, lo), "z")
        else:
            a, b = T(1, lo) * T(2, t), T(1, t) * T(2, lo)
            z = -_ratio(a - b, Q(ts / 2 + 0.5) * b, "z")
        return y, z
    st = _sqrt(t)
    if fam == "III1":
        ts = params.theta_star
        y = Q(-ts - 1) * st * _ratio(T(3, t) * T(4, t), T(1, t) * T(2, t), "y")
        z = -Q(-ts / 2 - 0.75) * st * _ratio(T(3, t) * T(4, lo), T(1, t) * T(2, lo), "z")
        return y, z
    if fam == "III2":
        ts = params.theta_star
        r = _sqrt_q_minus_one(ctx)
        y = Q(-ts - 1) / r * st * _ratio(T(3, t) ** 2, T(1, t) * T(2, t), "y")
        z = -Q(-ts / 2 - 0.75) / r * st * _ratio(T(3, t) * T(3, lo), T(1, t) * T(2, lo), "z")
        return y, z
    s = params.s
    if fam == "III3A":
        y = Q(-1) * st * s * _ratio(T(2, t) ** 2, T(1, t) ** 2, "y")
        z = -Q(-0.75) * st * s * _ratio(T(2, t) * T(2, lo), T(1, t) * T(1, lo), "z")
        return y, z
    if fam == "III3B":
        y = Q(-1) * st * s * _ratio(T(2, t) ** 2, T(1, t) * T(1, q * t), "y")
        z = -Q(-0.75) * st * s * _ratio(T(2, t) * T(2, lo), T(1, t) ** 2, "z")
        return y, z
    raise ValueError(f"unknown family {fam!r}")


def yz(ctx: QContext, params: Params, t: complex, trunc: TruncationSpec, form: str = "theorem") -> tuple[complex, complex]:
    """The solution pair ``(y, z)`` at ``t``.

    ``form="conjecture"`` selects the alternative expression of ``z`` in
    terms of the auxiliary tau functions (VI and V only).
    """
    if form not in ("theorem", "conjecture"):
        raise ValueError(f"unknown form {form!r}")
    if form == "conjecture" and params.family not in ("VI", "V"):
        raise ValueError(f"{params.family} has no alternative z expression")
    return _yz(ctx, params, _TauTable(ctx, params, trunc), t, form)


def _equation_terms(ctx: QContext, params: Params, y, z, yb, zb, t):
    """Both coupled equations as lists of summands (LHS minus RHS)."""
    e = equation_params(ctx, params)
    q = ctx.q
    fam = params.family
    if fam == "VI":
        e1 = [y * yb / (e.a3 * e.a4), -(zb - e.b1 * t) * (zb - e.b2 * t) / ((zb - e.b3) * (zb - e.b4))]
        e2 = [z * zb / (e.b3 * e.b4), -(y - e.a1 * t) * (y - e.a2 * t) / ((y - e.a3) * (y - e.a4))]
    elif fam == "V":
        e1 = [y * yb / (e.a3 * e.a4), (zb - e.b1 * t) * (zb - e.b2 * t) / (zb - e.b3)]
        e2 = [z * zb / e.b3, (y - e.a1 * t) * (y - e.a2 * t) / (e.a4 * (y - e.a3))]
    elif fam == "III1":
        e1 = [y * yb / (e.a3 * e.a4), zb * (zb - e.b2 * t) / (zb - e.b3)]
        e2 = [z * zb / e.b3, y * (y - e.a2 * t) / (e.a4 * (y - e.a3))]
    elif fam == "III2":
        e1 = [y * yb / (e.a3 * e.a4), zb**2 / (zb - e.b3)]
        e2 = [z * zb / e.b3, y * (y - e.a2 * t) / (e.a4 * (y - e.a3))]
    elif fam == "III3A":
        e1 = [y * yb / e.a3, -(zb**2)]
        e2 = [z * zb, y * (y - e.a2 * t) / (y - e.a3)]
    elif fam == "III3B":
        e1 = [y * yb, q**-1.5 * zb**2 / (zb - e.b3)]
        e2 = [z * zb, -y * (q * y - t)]
    else:
        raise ValueError(f"unknown family {fam!r}")
    return e1, e2


def equation_residual(
    ctx: QContext,
    params: Params,
    t: complex,
    trunc: TruncationSpec,
    tolerance: float = DEFAULT_TOLERANCE,
    form: str = "theorem",
) -> tuple[ResidualReport, ResidualReport]:
    """Residuals of the two coupled equations, ids ``<family>.E1`` / ``.E2``.

    With ``form="conjecture"`` the ids get a ``.CONJ`` suffix.
    """
    T = _TauTable(ctx, params, trunc)
    y, z = _yz(ctx, params, T, t, form)
    yb, zb = _yz(ctx, params, T, ctx.q * t, form)
    e1, e2 = _equation_terms(ctx, params, y, z, yb, zb, t)
    suffix = ".CONJ" if form == "conjecture" else ""
    fam = params.family
    return (
        make_report(f"{fam}.E1{suffix}", e1, trunc, t, tolerance),
        make_report(f"{fam}.E2{suffix}", e2, trunc, t, tolerance),
    )


def _bilinear_terms(ctx: QContext, params: Params, T: _TauTable, t: complex) -> dict:
    q, Q = ctx.q, ctx.qpow
    lo, hi = t / q, q * t

    def tt(i):
        return T(i, t)

    def tl(i):
        return T(i, lo)

    def th(i):
        return T(i, hi)

    fam = params.family
    if fam == "VI":
        t1, tt_, ti, t0 = params.theta1, params.theta_t, params.theta_inf, params.theta0
        four = (Q(0.5 + ti) - Q(0.5 - ti)) / (Q(-t0) - Q(t0)) * Q(-t1 - 1) * t
        return {
            "VI.B1": [tt(1) * tt(2), -Q(-2 * t1) * t * tt(3) * tt(4), -(1 - Q(-2 * t1) * t) * tt(5) * tt(6)],
            "VI.B2": [tt(1) * tt(2), -t * tt(3) * tt(4), -(1 - Q(-2 * tt_) * t) * tl(5) * th(6)],
            "VI.B3": [tt(1) * tt(2), -tt(3) * tt(4), (1 - Q(-2 * t1) * t) * Q(2 * tt_) * tl(7) * th(8)],
            "VI.B4": [tt(1) * tt(2), -Q(2 * tt_) * tt(3) * tt(4), (1 - Q(-2 * tt_) * t) * Q(2 * tt_) * tt(7) * tt(8)],
            "VI.B5": [tl(5) * tt(6), Q(-t1 - ti + tt_ - 0.5) * t * tl(7) * tt(8), -tl(1) * tt(2)],
            "VI.B6": [tl(5) * tt(6), Q(-t1 + ti + tt_ - 0.5) * t * tl(7) * tt(8), -tt(1) * tl(2)],
            "VI.B7": [tl(5) * tt(6), Q(t0 + 2 * tt_) * tl(7) * tt(8), -Q(tt_) * tl(3) * tt(4)],
            "VI.B8": [tl(5) * tt(6), Q(-t0 + 2 * tt_) * tl(7) * tt(8), -Q(tt_) * tt(3) * tl(4)],
            "VI.FOUR": [tl(1) * tt(2), -tt(1) * tl(2), -four * tl(3) * tt(4), four * tt(3) * tl(4)],
        }
    if fam == "V":
        ts, tt_, t0 = params.theta_star, params.theta_t, params.theta0
        r = _sqrt_q_minus_one(ctx)
        four = Q(-0.5) * r / (Q(t0) - Q(-t0)) * t
        return {
            "V.B1": [tt(1) * tt(2), -Q(-ts) * r * t * tt(3) * tt(4), -(1 - Q(-ts) * t) * th(1) * tl(2)],
            "V.B3": [tt(1) * tt(2) / r, -tt(3) * tt(4), (1 - Q(-ts) * t) * Q(2 * tt_) * tl(5) * th(6)],
            "V.B4": [tt(1) * tt(2) / r, -Q(2 * tt_) * tt(3) * tt(4), Q(2 * tt_) * tt(5) * tt(6)],
            "V.B5": [tt(1) * tl(2), Q(tt_ - 0.5) * r * t * tl(5) * tt(6), -tl(1) * tt(2)],
            "V.B7": [tt(1) * tl(2) / r, Q(t0 + 2 * tt_) * tl(5) * tt(6), -Q(tt_) * tl(3) * tt(4)],
            "V.B8": [tt(1) * tl(2) / r, Q(-t0 + 2 * tt_) * tl(5) * tt(6), -Q(tt_) * tt(3) * tl(4)],
            "V.FOUR": [tl(1) * tt(2), -tt(1) * tl(2), -four * tl(3) * tt(4), four * tt(3) * tl(4)],
        }
    st = _sqrt(t)
    if fam == "III1":
        ts, t2 = params.theta_star, params.theta_star2
        return {
            "III1.B1": [tt(1) * tt(2), -Q(-ts) * st * tt(3) * tt(4), -th(1) * tl(2)],
            "III1.B4": [tt(1) * tt(2), -Q(t2) / st * tt(3) * tt(4), Q(t2) / st * th(3) * tl(4)],
            "III1.B5": [tt(1) * tl(2), Q(-0.25) * st * tt(3) * tl(4), -tl(1) * tt(2)],
            "III1.B7": [tt(1) * tl(2), Q(0.25) / st * tt(3) * tl(4), -Q(0.25) / st * tl(3) * tt(4)],
        }
    if fam == "III2":
        ts = params.theta_star
        r = _sqrt_q_minus_one(ctx)
        return {
            "III2.B1": [tt(1) * tt(2), -Q(-ts) / r * st * tt(3) ** 2, -th(1) * tl(2)],
            "III2.B4": [tt(1) * tt(2), -1 / r / st * tt(3) ** 2, 1 / r / st * th(3) * tl(3)],
            "III2.B5": [tt(1) * tl(2), Q(-0.25) / r * st * tt(3) * tl(3), -tl(1) * tt(2)],
        }
    s = params.s
    if fam == "III3A":
        return {
            "III3A.B1": [s * st * tt(2) ** 2, -tt(1) ** 2, th(1) * tl(1)],
            "III3A.B4": [st / s * tt(1) ** 2, -tt(2) ** 2, th(2) * tl(2)],
        }
    if fam == "III3B":
        return {
            "III3B.B4": [st / s * tt(1) * th(1), -tt(2) ** 2, th(2) * tl(2)],
            "III3B.B5": [tt(1) ** 2, s * Q(-0.25) * st * tt(2) * tl(2), -tl(1) * th(1)],
        }
    raise ValueError(f"unknown family {fam!r}")


def bilinear_residuals(
    ctx: QContext, params: Params, t: complex, trunc: TruncationSpec, tolerance: float = DEFAULT_TOLERANCE
) -> list[ResidualReport]:
    """One report per bilinear identity of the family, in the fixed id order."""
    terms = _bilinear_terms(ctx, params, _TauTable(ctx, params, trunc), t)
    return [make_report(i, terms[i], trunc, t, tolerance) for i in BILINEAR_IDS[params.family]]


# ---------------------------------------------------------------------------
# III1 Backlund transformation
# ---------------------------------------------------------------------------


def _lg(ctx: QContext, u: complex) -> complex:
    return log_barnes_q(ctx, u).log


def log_k_factor(ctx: QContext, theta_star: complex, theta_star2: complex, sigma: complex) -> complex:
    """``log K``, the G_q-product relating transformed and original III1 tau functions."""
    acc = -(theta_star + theta_star2) * sigma**2 * ctx.log_q
    for e in (1, -1):
        for e2 in (1, -1):
            acc += e * (_lg(ctx, 1 + e * theta_star + e2 * sigma) + _lg(ctx, 1 + e * theta_star2 + e2 * sigma))
    return acc


def k_ratio_terms(ctx: QContext, theta_star: complex, theta_star2: complex, sigma: complex) -> tuple[complex, complex]:
    """Both sides of the K-ratio identity: ``(K1 K2 / (K3 K4), -q**((th2 - th)/2))``."""
    a, b, s = theta_star, theta_star2, sigma
    log_lhs = (
        log_k_factor(ctx, a, b + 0.5, s - 0.5)
        + log_k_factor(ctx, a, b - 0.5, s - 0.5)
        - log_k_factor(ctx, a + 0.5, b, s)
        - log_k_factor(ctx, a - 0.5, b, s - 1)
    )
    return cmath.exp(log_lhs), -ctx.qpow((b - a) / 2)


def backlund_iii1_params(ctx: QContext, params: ParamsIII1, t: complex) -> tuple[ParamsIII1, complex]:
    """Transformed parameters and time ``(params~, t~)``."""
    ts, t2, sig = params.theta_star, params.theta_star2, params.sigma
    log_c = (sig - 1) * (2 * ts + 2 * t2 + 1) * ctx.log_q
    for e in (1, -1):
        for e2 in (1, -1):
            log_c -= e * e2 * (
                log_gamma_q(ctx, 0.5 + e * ts + e2 * (sig - 1)).log
                + log_gamma_q(ctx, 0.5 + e * (t2 + 0.5) + e2 * (sig - 1)).log
            )
    new = ParamsIII1(-t2, -ts, sig - 0.5, cmath.exp(log_c) * params.s)
    return new, ctx.qpow(-ts - t2 + 0.5) * t


def backlund_iii1_check(
    ctx: QContext, params: ParamsIII1, t: complex, trunc: TruncationSpec, tolerance: float = DEFAULT_TOLERANCE
) -> list[ResidualReport]:
    """The four transformed-tau relations (``III1.BT1``..``BT4``) and the K-ratio (``III1.KRATIO``)."""
    if params.family != "III1":
        raise ValueError("the Backlund check applies to III1 parameters")
    ts, t2, sig, s = params.theta_star, params.theta_star2, params.sigma, params.s
    new, t_new = backlund_iii1_params(ctx, params, t)
    T = _TauTable(ctx, params, trunc)
    Tn = _TauTable(ctx, new, trunc)
    hi = ctx.q * t
    rels = [
        (1, log_k_factor(ctx, ts, t2 + 0.5, sig - 0.5), T(4, t)),
        (2, cmath.log(s) + log_k_factor(ctx, ts, t2 - 0.5, sig - 0.5), T(3, hi)),
        (3, log_k_factor(ctx, ts + 0.5, t2, sig), T(2, t)),
        (4, cmath.log(s) + log_k_factor(ctx, ts - 0.5, t2, sig - 1), T(1, hi)),
    ]
    out = [
        make_report(f"III1.BT{i}", [Tn(i, t_new), -cmath.exp(lk) * val], trunc, t, tolerance, PROVED)
        for i, lk, val in rels
    ]
    lhs, rhs = k_ratio_terms(ctx, ts, t2, sig)
    out.append(make_report("III1.KRATIO", [lhs, -rhs], trunc, t, tolerance, PROVED))
    return out


# ---------------------------------------------------------------------------
# III3 variants: standard-form reductions
# ---------------------------------------------------------------------------


def _t_orbit(ctx: QContext, params: ParamsIII3, k: int, t: complex, trunc: TruncationSpec) -> complex:
    # T^k: sigma -> sigma + k/2, t -> q^(k/2) t, s -> (-1)^k s
    p = replace(params, sigma=params.sigma + k / 2, s=params.s * (-1) ** k)
    return tau(ctx, p, math.sqrt(ctx.q) ** k * t, trunc)


def five_term_residual(
    ctx: QContext, params: ParamsIII3, t: complex, trunc: TruncationSpec, tolerance: float = DEFAULT_TOLERANCE
) -> ResidualReport:
    """``tau**2 + t**(1/2) T(tau) T^-1(tau) - T^2(tau) T^-2(tau)`` along the T-orbit (``III3B.FIVE``)."""
    v = {k: _t_orbit(ctx, params, k, t, trunc) for k in range(-2, 3)}
    terms = [v[0] ** 2, _sqrt(t) * v[1] * v[-1], -v[2] * v[-2]]
    return make_report("III3B.FIVE", terms, trunc, t, tolerance, PROVED)


def g_reduction(
    ctx: QContext, params: ParamsIII3, t: complex, trunc: TruncationSpec, tolerance: float = DEFAULT_TOLERANCE
) -> tuple[complex, ResidualReport]:
    """``g = -t**(1/2) T(tau) T^-1(tau) / tau**2`` and the residual of ``g_hi g**2 g_lo = t**2 (1 - g)``.

    ``T`` raises sigma by 1/2, multiplies t by sqrt(q) and flips the sign of s.
    """
    if params.family != "III3B":
        raise ValueError("g reduction applies to the A7 variant")
    v = {k: _t_orbit(ctx, params, k, t, trunc) for k in range(-2, 3)}
    r = math.sqrt(ctx.q)

    def g(k: int) -> complex:
        return -_sqrt(r**k * t) * v[k + 1] * v[k - 1] / v[k] ** 2

    g0, gh, gl = g(0), g(1), g(-1)
    terms = [gh * g0**2 * gl, -(t**2), t**2 * g0]
    return g0, make_report("III3B.GFORM", terms, trunc, t, tolerance, PROVED)


def a7prime_form_residual(
    ctx: QContext, params: ParamsIII3, t: complex, trunc: TruncationSpec, tolerance: float = DEFAULT_TOLERANCE
) -> tuple[ResidualReport, ResidualReport]:
    """The A7' standard system with ``a4 = 1, b2 = 1, b3 = 1/q``.

    Its solution is ``(Y, Z) = (z(q t), y(t))`` built from the III3 pair.
    """
    if params.family != "III3A":
        raise ValueError("the A7' form applies to the A7prime variant")
    q = ctx.q
    T = _TauTable(ctx, params, trunc)
    y0, _ = _yz(ctx, params, T, t, "theorem")
    y1, z1 = _yz(ctx, params, T, q * t, "theorem")
    _, z2 = _yz(ctx, params, T, q * q * t, "theorem")
    Y, Yb, Z, Zb = z1, z2, y0, y1
    a4, b2, b3 = 1.0, 1.0, 1 / q
    e1 = [Y * Yb / a4, Zb * (Zb - b2 * t) / (Zb - b3)]
    e2 = [Z * Zb / b3, -(Y**2) / a4]
    return (
        make_report("III3A.A7P1", e1, trunc, t, tolerance, PROVED),
        make_report("III3A.A7P2", e2, trunc, t, tolerance, PROVED),
    )
