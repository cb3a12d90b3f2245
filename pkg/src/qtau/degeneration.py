"""Confluence limits VI -> V -> III1 -> III2 -> III3 evaluated at finite Lambda.

For a step, the source family's parameters are tied to ``Lambda`` and the
target parameters, the source tau functions are multiplied by explicit
scaling constants ``C_i`` and compared with target tau functions.  All
constants are assembled in log space; at ``Lambda ~ 12`` the individual
q-Barnes factors are far outside double range.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .qcore import LogComplex, QContext, log_barnes_q, log_gamma_q, log_q_minus_one
from .tau import (
    Params,
    ParamsIII1,
    ParamsIII2,
    ParamsIII3,
    ParamsV,
    ParamsVI,
    TruncationSpec,
    tau_shifted,
)

STEPS = ("VI_to_V", "V_to_III1", "III1_to_III2", "III2_to_III3A", "III2_to_III3B")

SOURCE_FAMILY = {
    "VI_to_V": "VI",
    "V_to_III1": "V",
    "III1_to_III2": "III1",
    "III2_to_III3A": "III2",
    "III2_to_III3B": "III2",
}
TARGET_FAMILY = {
    "VI_to_V": "V",
    "V_to_III1": "III1",
    "III1_to_III2": "III2",
    "III2_to_III3A": "III3A",
    "III2_to_III3B": "III3B",
}


@dataclass(frozen=True)
class IndexMapEntry:
    """``C_source * tau_source -> sign * s**s_power * tau_target(t_scale * t1)``."""

    source: int
    target: int
    t_scale: float = 1.0
    s_power: int = 0
    sign: int = 1


def _q_scaled(ctx: QContext, k: int) -> float:
    return ctx.q**k


def index_map(ctx: QContext, step_id: str) -> tuple[IndexMapEntry, ...]:
    q = ctx.q
    if step_id == "VI_to_V":
        return (
            IndexMapEntry(1, 1),
            IndexMapEntry(2, 2),
            IndexMapEntry(3, 3),
            IndexMapEntry(4, 4),
            IndexMapEntry(5, 1, t_scale=q),
            IndexMapEntry(6, 2, t_scale=1 / q),
            IndexMapEntry(7, 5),
            IndexMapEntry(8, 6),
        )
    if step_id == "V_to_III1":
        return (
            IndexMapEntry(1, 1),
            IndexMapEntry(2, 2),
            IndexMapEntry(3, 3),
            IndexMapEntry(4, 4),
            IndexMapEntry(5, 3, t_scale=q),
            IndexMapEntry(6, 4, t_scale=1 / q),
        )
    if step_id == "III1_to_III2":
        return (
            IndexMapEntry(1, 1),
            IndexMapEntry(2, 2, s_power=1),
            IndexMapEntry(3, 3),
            IndexMapEntry(4, 3, s_power=1),
        )
    if step_id == "III2_to_III3A":
        return (
            IndexMapEntry(1, 1),
            IndexMapEntry(2, 1, s_power=-1),
            IndexMapEntry(3, 2),
        )
    if step_id == "III2_to_III3B":
        # the limit of tau_2 carries an extra sign under the principal branch
        return (
            IndexMapEntry(1, 1),
            IndexMapEntry(2, 1, t_scale=q, s_power=-1, sign=-1),
            IndexMapEntry(3, 2),
        )
    raise ValueError(f"unknown degeneration step {step_id!r}")


def _lg(ctx: QContext, u: complex) -> complex:
    return log_barnes_q(ctx, u).log


def _lgam(ctx: QContext, u: complex) -> complex:
    return log_gamma_q(ctx, u).log


def _inv_g_pair(ctx: QContext, base: complex, sig: complex) -> complex:
    """``log prod_eps G_q(base + eps*sig)^-1``."""
    return -(_lg(ctx, base + sig) + _lg(ctx, base - sig))


def _source_thetas(step_id: str, params: Params, lam: float) -> dict:
    if step_id == "VI_to_V":
        ts = params.theta_star
        return {"theta1": (lam + ts) / 2, "theta_inf": (lam - ts) / 2,
                "theta_t": params.theta_t, "theta0": params.theta0}
    if step_id == "V_to_III1":
        t2 = params.theta_star2
        return {"theta_star": params.theta_star, "theta_t": (lam + t2) / 2, "theta0": (lam - t2) / 2}
    if step_id == "III1_to_III2":
        return {"theta_star": params.theta_star, "theta_star2": lam}
    if step_id == "III2_to_III3A":
        return {"theta_star": lam}
    if step_id == "III2_to_III3B":
        return {"theta_star": -lam}
    raise ValueError(f"unknown degeneration step {step_id!r}")


def source_t(ctx: QContext, step_id: str, t1: complex, lam: float) -> complex:
    if step_id == "III2_to_III3B":
        return t1
    return ctx.q**lam * t1


def substituted_s(ctx: QContext, step_id: str, s_tilde: complex, sigma: complex, lam: float) -> LogComplex | complex:
    """Source-family ``s`` (log space) that reproduces ``s_tilde`` in the limit.

    The map is linear in ``s_tilde``; ``s_tilde = 0`` returns a plain ``0``.
    """
    if s_tilde == 0:
        return 0j
    lqm1 = log_q_minus_one(ctx)
    lq = ctx.log_q
    acc = cmath.log(s_tilde) - 2 * sigma * lqm1
    if step_id in ("VI_to_V", "III2_to_III3A"):
        acc += -2 * sigma * lam * lq
        acc -= _lgam(ctx, 0.5 - lam + sigma) - _lgam(ctx, 0.5 - lam - sigma)
    elif step_id in ("V_to_III1", "III1_to_III2"):
        acc += -sigma * (2 * lam + 1) * lq
        acc -= _lgam(ctx, -lam + sigma) - _lgam(ctx, -lam - sigma)
    elif step_id == "III2_to_III3B":
        acc -= _lgam(ctx, 0.5 + lam + sigma) - _lgam(ctx, 0.5 + lam - sigma)
    else:
        raise ValueError(f"unknown degeneration step {step_id!r}")
    return LogComplex.from_log(acc)


def source_params(ctx: QContext, step_id: str, params: Params, lam: float) -> Params:
    """Source-family parameters at finite ``Lambda`` (``s`` set to 0; pass it separately)."""
    th = _source_thetas(step_id, params, lam)
    fam = SOURCE_FAMILY[step_id]
    sig = params.sigma
    if fam == "VI":
        return ParamsVI(th["theta1"], th["theta_t"], th["theta_inf"], th["theta0"], sig, 0)
    if fam == "V":
        return ParamsV(th["theta_star"], th["theta_t"], th["theta0"], sig, 0)
    if fam == "III1":
        return ParamsIII1(th["theta_star"], th["theta_star2"], sig, 0)
    return ParamsIII2(th["theta_star"], sig, 0)


def scaling_constant(
    ctx: QContext, step_id: str, index: int, params: Params, lam: float, t1: complex = None
) -> LogComplex:
    """Log of the scaling constant ``C_index`` of a degeneration step.

    ``params`` are the target-family parameters (only the thetas and sigma
    are read).  ``t1`` is needed by V -> III1 only, whose constants contain
    powers of the source ``t = q**Lambda * t1``.
    """
    lqm1 = log_q_minus_one(ctx)
    lq = ctx.log_q
    sig = params.sigma
    h = 0.5

    def pre(sg: complex) -> complex:
        return -(sg**2) * lqm1

    if step_id == "VI_to_V":
        tt, t0 = params.theta_t, params.theta0
        if index in (1, 6):
            return LogComplex.from_log(pre(sig) - (lam + h) * (sig**2 - tt**2 - t0**2) * lq + _inv_g_pair(ctx, h - lam, sig))
        if index in (2, 5):
            return LogComplex.from_log(pre(sig) - (lam - h) * (sig**2 - tt**2 - t0**2) * lq + _inv_g_pair(ctx, 1.5 - lam, sig))
        shifts = {3: (h, 0.0, h), 4: (-h, 0.0, -h), 7: (h, -h, 0.0), 8: (-h, h, 0.0)}
        if index in shifts:
            ds, dt, d0 = shifts[index]
            sg = sig + ds
            expo = sg**2 - (tt + dt) ** 2 - (t0 + d0) ** 2
            return LogComplex.from_log(pre(sg) - lam * expo * lq + _inv_g_pair(ctx, 1 - lam, sg))
    elif step_id == "V_to_III1":
        if t1 is None:
            raise ValueError("V_to_III1 constants need t1")
        th = _source_thetas(step_id, params, lam)
        tt, t0 = th["theta_t"], th["theta0"]
        log_t = cmath.log(source_t(ctx, step_id, t1, lam))
        table = {
            # index: (sigma shift, q-power coefficient of Lambda offset, t-power, G base)
            1: (0.0, lambda sg: -lam * sg**2 - (tt**2 + t0**2) / 2, tt**2 + t0**2, 1 - lam),
            2: (0.0, lambda sg: -lam * sg**2 + (tt**2 + t0**2) / 2, tt**2 + t0**2, 1 - lam),
            3: (h, lambda sg: -(lam + h) * sg**2, tt**2 + (t0 + h) ** 2, h - lam),
            4: (-h, lambda sg: -(lam - h) * sg**2, tt**2 + (t0 - h) ** 2, 1.5 - lam),
            5: (h, lambda sg: -(lam - h) * sg**2, (tt - h) ** 2 + t0**2, 1.5 - lam),
            6: (-h, lambda sg: -(lam + h) * sg**2, (tt + h) ** 2 + t0**2, h - lam),
        }
        if index in table:
            ds, qexp, texp, base = table[index]
            sg = sig + ds
            return LogComplex.from_log(pre(sg) + qexp(sg) * lq + texp * log_t + _inv_g_pair(ctx, base, sg))
    elif step_id == "III1_to_III2":
        table = {1: (0.0, lam, 1 - lam), 2: (0.0, lam, 1 - lam),
                 3: (h, lam - h, 1.5 - lam), 4: (-h, lam + h, h - lam)}
        if index in table:
            ds, coef, base = table[index]
            sg = sig + ds
            return LogComplex.from_log(pre(sg) - coef * sg**2 * lq + _inv_g_pair(ctx, base, sg))
    elif step_id == "III2_to_III3A":
        table = {1: (0.0, lam - h, 1.5 - lam), 2: (1.0, lam + h, h - lam), 3: (h, lam, 1 - lam)}
        if index in table:
            ds, coef, base = table[index]
            sg = sig + ds
            return LogComplex.from_log(pre(sg) - coef * sg**2 * lq + _inv_g_pair(ctx, base, sg))
    elif step_id == "III2_to_III3B":
        table = {1: (0.0, 1.5 + lam), 2: (1.0, h + lam), 3: (h, 1 + lam)}
        if index in table:
            ds, base = table[index]
            sg = sig + ds
            return LogComplex.from_log(pre(sg) + _inv_g_pair(ctx, base, sg))
    else:
        raise ValueError(f"unknown degeneration step {step_id!r}")
    raise ValueError(f"{step_id} has no scaling constant C_{index}")


@dataclass(frozen=True)
class DegenerationStep:
    step_id: str
    params: Params  # target family, with s = s_tilde
    t1: complex
    lam: float

    def __post_init__(self) -> None:
        if self.step_id not in STEPS:
            raise ValueError(f"unknown degeneration step {self.step_id!r}")
        if self.params.family != TARGET_FAMILY[self.step_id]:
            raise ValueError(
                f"{self.step_id} needs {TARGET_FAMILY[self.step_id]} parameters, got {self.params.family}"
            )
        if not self.lam > 0:
            raise ValueError("Lambda must be positive")


def degeneration_terms(ctx: QContext, step: DegenerationStep, trunc: TruncationSpec):
    """``[(entry, scaled source value, target value)]`` for every index-map entry."""
    src = source_params(ctx, step.step_id, step.params, step.lam)
    s_src = substituted_s(ctx, step.step_id, step.params.s, step.params.sigma, step.lam)
    t_src = source_t(ctx, step.step_id, step.t1, step.lam)
    out = []
    for entry in index_map(ctx, step.step_id):
        lc = scaling_constant(ctx, step.step_id, entry.source, step.params, step.lam, step.t1)
        lhs = tau_shifted(ctx, src, entry.source, t_src, trunc, s=s_src, log_scale=lc.log)
        rhs = tau_shifted(ctx, step.params, entry.target, entry.t_scale * step.t1, trunc)
        rhs *= entry.sign * step.params.s**entry.s_power
        out.append((entry, lhs, rhs))
    return out


def degeneration_error(ctx: QContext, step: DegenerationStep, trunc: TruncationSpec):
    """``[((source index, target index), relative error)]`` at the step's Lambda."""
    return [
        ((e.source, e.target), abs(lhs - rhs) / abs(rhs))
        for e, lhs, rhs in degeneration_terms(ctx, step, trunc)
    ]


@dataclass
class SweepRow:
    lam: float
    errors: list = field(default_factory=list)  # [((src, tgt), err)]
    max_error: float = math.nan
    skipped: str | None = None


@dataclass
class SweepResult:
    step_id: str
    rows: list
    fitted_ratio: float | None
    convergent: bool | None


def fit_ratio(lams, errs) -> float:
    """Least-squares geometric decay ratio of ``errs`` per mean step of ``lams``."""
    lams = np.asarray(lams, dtype=float)
    logs = np.log(np.asarray(errs, dtype=float))
    slope = np.polyfit(lams, logs, 1)[0]
    spacing = float(np.mean(np.diff(lams)))
    return float(math.exp(slope * spacing))


def convergence_sweep(
    ctx: QContext, step_id: str, params: Params, t1: complex, lams, trunc: TruncationSpec
) -> SweepResult:
    """Errors of a step along increasing ``lams``; Lambda values hitting poles are skipped."""
    lams = list(lams)
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise ValueError("Lambda list must be strictly increasing")
    rows = []
    for lam in lams:
        try:
            errs = degeneration_error(ctx, DegenerationStep(step_id, params, t1, lam), trunc)
        except ArithmeticError as exc:
            rows.append(SweepRow(lam, skipped=str(exc)))
            continue
        rows.append(SweepRow(lam, errs, max(e for _, e in errs)))
    good = [r for r in rows if r.skipped is None]
    if len(good) < 2:
        return SweepResult(step_id, rows, None, None)
    ratio = fit_ratio([r.lam for r in good], [r.max_error for r in good])
    return SweepResult(step_id, rows, ratio, ratio < 0.9)


def constant_relations(
    ctx: QContext, step_id: str, params: Params, lam: float, t1: complex = 0.02
) -> list[tuple[str, complex, complex]]:
    """Product relations among the ``C_i`` of a step as ``(name, log lhs, log rhs)``.

    These are exact identities in ``Lambda``; the two logs agree modulo ``2 pi i``.
    """
    lqm1 = log_q_minus_one(ctx)
    lq = ctx.log_q
    q, sig = ctx.q, params.sigma

    def C(i: int, tt: complex = t1) -> complex:
        return scaling_constant(ctx, step_id, i, params, lam, tt).log

    if step_id == "VI_to_V":
        return [
            ("C1C2", C(1) + C(2), 0.5 * lqm1 + C(3) + C(4)),
            ("C5C6", C(5) + C(6), 0.5 * lqm1 + C(7) + C(8)),
        ]
    if step_id == "V_to_III1":
        # lo(i): the constant at t1/q, i.e. for a source evaluated at t/q
        th0 = (lam - params.theta_star2) / 2
        pref = cmath.log(q**-lam - q**sig) - 0.5 * lqm1 - 0.5 * cmath.log(t1)

        def lo(i: int) -> complex:
            return C(i, t1 / q)

        return [
            ("C1loC2", lo(1) + C(2), pref + (th0 + 0.25) * lq + lo(3) + C(4)),
            ("C1C2lo", C(1) + lo(2), pref + (th0 + 0.25) * lq + lo(3) + C(4)),
            ("C1loC2b", lo(1) + C(2), pref + (0.25 - th0) * lq + C(3) + lo(4)),
            ("C1C2", C(1) + C(2), pref + C(3) + C(4)),
        ]
    if step_id == "III1_to_III2":
        rhs = -0.5 * lqm1 + cmath.log(q ** (-lam / 2) - q ** (lam / 2 - sig)) + C(3) + C(4)
        return [("C1C2", C(1) + C(2), rhs)]
    if step_id == "III2_to_III3A":
        rhs = 0.5 * lqm1 + (lam / 2 - sig - 0.5) * lq - cmath.log(q ** (-sig - 0.5) - q**lam) + 2 * C(3)
        return [("C1C2", C(1) + C(2), rhs)]
    if step_id == "III2_to_III3B":
        rhs = 0.5 * lqm1 + 1j * math.pi - cmath.log(1 - q ** (lam - sig - 0.5)) + 2 * C(3)
        return [("C1C2", C(1) + C(2), rhs)]
    raise ValueError(f"unknown degeneration step {step_id!r}")


def relation_error(lhs: complex, rhs: complex) -> float:
    return abs(cmath.exp(lhs - rhs) - 1)
