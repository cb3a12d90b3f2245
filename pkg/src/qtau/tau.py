"""Tau-function series for the q-Painleve VI, V, III1, III2 and III3 families.

A tau function is a window of Fourier terms

    sum_{|n| <= w} s^n t^{e(sigma+n)} C[sigma+n] Z[sigma+n, t]

where ``C`` is a ratio of q-Barnes functions (kept in log space) and ``Z``
is a sum over pairs of partitions truncated at total weight ``n_max``.
``Z`` is computed as its Taylor coefficients in ``t`` so the many
shifted-``t`` evaluations a residual needs share one partition sum.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, fields, replace
from functools import lru_cache
from typing import Union

import numpy as np

from .nekrasov import content_sum, nekrasov_exponents
from .partitions import EMPTY, ENUMERATION_CEILING, enumerate_pairs_upto, weight
from .qcore import LogComplex, QContext, log_barnes_q, log_q_minus_one

DENOMINATOR_TOL = 1e-10
MAX_WINDOW = 16

FAMILIES = ("VI", "V", "III1", "III2", "III3A", "III3B")


class DenominatorError(ArithmeticError):
    """A Nekrasov denominator vanishes (non-generic sigma)."""


@dataclass(frozen=True)
class TruncationSpec:
    n_max: int = 10
    w: int = 5

    def __post_init__(self) -> None:
        if not 0 <= self.n_max <= ENUMERATION_CEILING:
            raise ValueError(f"n_max must be in [0, {ENUMERATION_CEILING}]")
        if not 0 <= self.w <= MAX_WINDOW:
            raise ValueError(f"w must be in [0, {MAX_WINDOW}]")


Scalar = Union[complex, float]


@dataclass(frozen=True)
class ParamsVI:
    theta1: complex
    theta_t: complex
    theta_inf: complex
    theta0: complex
    sigma: complex
    s: complex
    family: str = field(default="VI", init=False, repr=False)


@dataclass(frozen=True)
class ParamsV:
    theta_star: complex
    theta_t: complex
    theta0: complex
    sigma: complex
    s: complex
    family: str = field(default="V", init=False, repr=False)


@dataclass(frozen=True)
class ParamsIII1:
    theta_star: complex
    theta_star2: complex
    sigma: complex
    s: complex
    family: str = field(default="III1", init=False, repr=False)


@dataclass(frozen=True)
class ParamsIII2:
    theta_star: complex
    sigma: complex
    s: complex
    family: str = field(default="III2", init=False, repr=False)


@dataclass(frozen=True)
class ParamsIII3:
    """``variant="A7prime"`` is the pure series, ``"A7"`` the one with CS factors."""

    sigma: complex
    s: complex
    variant: str = "A7prime"

    def __post_init__(self) -> None:
        if self.variant not in ("A7prime", "A7"):
            raise ValueError(f"unknown III3 variant {self.variant!r}")

    @property
    def family(self) -> str:
        return "III3A" if self.variant == "A7prime" else "III3B"


Params = Union[ParamsVI, ParamsV, ParamsIII1, ParamsIII2, ParamsIII3]

PARAM_TYPES = {
    "VI": ParamsVI,
    "V": ParamsV,
    "III1": ParamsIII1,
    "III2": ParamsIII2,
    "III3A": ParamsIII3,
    "III3B": ParamsIII3,
}


def theta_names(params: Params) -> tuple[str, ...]:
    return tuple(
        f.name for f in fields(params) if f.name.startswith("theta")
    )


def shifted(params: Params, **deltas: complex) -> Params:
    """Copy of ``params`` with the named fields incremented."""
    return replace(params, **{k: getattr(params, k) + v for k, v in deltas.items()})


# ---------------------------------------------------------------------------
# Z series
# ---------------------------------------------------------------------------

# Numerator slot: (kind, side, power, u-exponent builder).  kind "N0" is
# N_{0,lam}(q^x), "N1" is N_{lam,0}(q^x), "f" is the Chern-Simons factor
# f_lam(q^x); side is +1 / -1 for lam_plus / lam_minus.


def _slots_vi(th: dict, sigma: complex):
    out = []
    for side in (1, -1):
        for eps in (1, -1):
            out.append(("N0", side, 1, eps * th["theta_inf"] - th["theta1"] - side * sigma))
        for eps2 in (1, -1):
            out.append(("N1", side, 1, side * sigma - th["theta_t"] - eps2 * th["theta0"]))
    return out


def _slots_v(th: dict, sigma: complex, cs: bool = True):
    out = []
    for side in (1, -1):
        out.append(("N0", side, 1, -th["theta_star"] - side * sigma))
        if cs:
            out.append(("f", side, 1, side * sigma))
        for eps2 in (1, -1):
            out.append(("N1", side, 1, side * sigma - th["theta_t"] - eps2 * th["theta0"]))
    return out


def _slots_iii1(th: dict, sigma: complex):
    out = []
    for side in (1, -1):
        out.append(("N0", side, 1, -th["theta_star"] - side * sigma))
        out.append(("N1", side, 1, side * sigma - th["theta_star2"]))
    return out


def _slots_iii2(th: dict, sigma: complex, cs: bool = True):
    out = []
    for side in (1, -1):
        out.append(("N0", side, 1, -th["theta_star"] - side * sigma))
        if cs:
            out.append(("f", side, -1, side * sigma))
    return out


def _slots_iii3(th: dict, sigma: complex, cs: bool):
    if not cs:
        return []
    return [("f", side, -1, side * sigma) for side in (1, -1)]


_SERIES = {
    "VI": _slots_vi,
    "V": _slots_v,
    "V_CS0": lambda th, s: _slots_v(th, s, cs=False),
    "III1": _slots_iii1,
    "III2": _slots_iii2,
    "III2_CS0": lambda th, s: _slots_iii2(th, s, cs=False),
    "III3A": lambda th, s: _slots_iii3(th, s, cs=False),
    "III3B": lambda th, s: _slots_iii3(th, s, cs=True),
}


class _Segments:
    """Flat exponent array for one Nekrasov slot across every enumerated pair."""

    def __init__(self, exps_per_pair):
        starts, flat, mask = [], [], []
        for ex in exps_per_pair:
            starts.append(len(flat))
            flat.append(0)
            mask.append(True)
            flat.extend(ex)
            mask.extend([False] * len(ex))
        self.starts = np.asarray(starts, dtype=np.intp)
        self.exps = np.asarray(flat, dtype=float)
        self.sentinel = np.asarray(mask, dtype=bool)

    def factors(self, q: float, u: complex) -> np.ndarray:
        vals = 1.0 - (q ** self.exps) * u
        vals[self.sentinel] = 1.0
        return vals

    def product(self, q: float, u: complex) -> np.ndarray:
        return np.multiply.reduceat(self.factors(q, u), self.starts)


class _PairTable:
    def __init__(self, n_max: int):
        self.pairs = enumerate_pairs_upto(n_max)
        self.n_max = n_max
        lp = [p for p, _ in self.pairs]
        lm = [m for _, m in self.pairs]
        self.weights = np.asarray([weight(a) + weight(b) for a, b in self.pairs], dtype=np.intp)
        # pairs are grouped by total weight; start index of each weight block
        self.weight_starts = np.searchsorted(self.weights, np.arange(n_max + 1))
        self.den = {
            (1, 1): _Segments(nekrasov_exponents(a, a) for a in lp),
            (1, -1): _Segments(nekrasov_exponents(a, b) for a, b in zip(lp, lm)),
            (-1, 1): _Segments(nekrasov_exponents(b, a) for a, b in zip(lp, lm)),
            (-1, -1): _Segments(nekrasov_exponents(b, b) for b in lm),
        }
        self.n0 = {
            1: _Segments(nekrasov_exponents(EMPTY, a) for a in lp),
            -1: _Segments(nekrasov_exponents(EMPTY, b) for b in lm),
        }
        self.n1 = {
            1: _Segments(nekrasov_exponents(a, EMPTY) for a in lp),
            -1: _Segments(nekrasov_exponents(b, EMPTY) for b in lm),
        }
        self.size = {
            1: np.asarray([weight(a) for a in lp], dtype=float),
            -1: np.asarray([weight(b) for b in lm], dtype=float),
        }
        self.content = {
            1: np.asarray([content_sum(a) for a in lp], dtype=float),
            -1: np.asarray([content_sum(b) for b in lm], dtype=float),
        }


@lru_cache(maxsize=None)
def _pair_table(n_max: int) -> _PairTable:
    return _PairTable(n_max)


def _qx(q: float, x: complex) -> complex:
    return cmath.exp(complex(x) * math.log(q))


def _series_coefficients(
    q: float, series: str, theta_items: tuple, sigma: complex, n_max: int
) -> np.ndarray:
    table = _pair_table(n_max)
    th = dict(theta_items)
    ratio = np.ones(len(table.pairs), dtype=complex)
    for (e1, e2), seg in table.den.items():
        u = _qx(q, (e1 - e2) * sigma)
        fac = seg.factors(q, u)
        small = np.abs(fac) < DENOMINATOR_TOL
        if small.any():
            k = int(np.searchsorted(seg.starts, np.flatnonzero(small)[0], side="right") - 1)
            lp, lm = table.pairs[k]
            raise DenominatorError(
                f"N_{{lam{'+' if e1 > 0 else '-'},lam{'+' if e2 > 0 else '-'}}}"
                f"(q^{(e1 - e2)}sigma) vanishes for pair {lp}, {lm} at sigma={sigma!r}"
            )
        ratio /= np.multiply.reduceat(fac, seg.starts)
    for kind, side, power, x in _SERIES[series](th, sigma):
        u = _qx(q, x)
        if kind == "N0":
            val = table.n0[side].product(q, u)
        elif kind == "N1":
            val = table.n1[side].product(q, u)
        else:
            # f_lam(u) = (-1)^{|lam|} u^{-|lam|} q^{sum(i-j)}
            k = table.size[side]
            val = np.exp(k * (1j * math.pi) - k * complex(x) * math.log(q) + table.content[side] * math.log(q))
        ratio = ratio * val if power == 1 else ratio / val
    return np.add.reduceat(ratio, table.weight_starts)


@lru_cache(maxsize=4096)
def _cached_coefficients(q, series, theta_items, sigma, n_max):
    out = _series_coefficients(q, series, theta_items, sigma, n_max)
    out.setflags(write=False)
    return out


def series_coefficients(
    ctx: QContext, series: str, thetas: dict, sigma: complex, n_max: int
) -> np.ndarray:
    """Taylor coefficients ``[a_0, ..., a_n_max]`` of a ``Z`` series in ``t``."""
    if series not in _SERIES:
        raise ValueError(f"unknown series {series!r}")
    items = tuple(sorted((k, complex(v)) for k, v in thetas.items()))
    return _cached_coefficients(ctx.q, series, items, complex(sigma), n_max)


def _horner(coeffs: np.ndarray, t: complex) -> complex:
    acc = 0j
    for c in coeffs[::-1]:
        acc = acc * t + c
    return acc


def zseries_named(
    ctx: QContext, series: str, thetas: dict, sigma: complex, t: complex, trunc: TruncationSpec
) -> complex:
    return _horner(series_coefficients(ctx, series, thetas, sigma, trunc.n_max), t)


def zseries(ctx: QContext, params: Params, t: complex, trunc: TruncationSpec, sigma=None) -> complex:
    """``Z`` of the family of ``params`` at ``sigma`` (default ``params.sigma``)."""
    sigma = params.sigma if sigma is None else sigma
    th = {k: getattr(params, k) for k in theta_names(params)}
    return zseries_named(ctx, params.family, th, sigma, t, trunc)


def zseries_v_cs0(ctx, theta_star, theta_t, theta0, sigma, t, trunc) -> complex:
    th = {"theta_star": theta_star, "theta_t": theta_t, "theta0": theta0}
    return zseries_named(ctx, "V_CS0", th, sigma, t, trunc)


def zseries_iii2_cs0(ctx, theta_star, sigma, t, trunc) -> complex:
    return zseries_named(ctx, "III2_CS0", {"theta_star": theta_star}, sigma, t, trunc)


# ---------------------------------------------------------------------------
# Structure constants
# ---------------------------------------------------------------------------


def _lg(ctx: QContext, u: complex) -> complex:
    return log_barnes_q(ctx, u).log


def _log_cconst(ctx: QContext, params: Params, sigma: complex) -> complex:
    fam = params.family
    lqm1 = log_q_minus_one(ctx)
    if fam == "VI":
        t1, tt, ti, t0 = params.theta1, params.theta_t, params.theta_inf, params.theta0
        acc = 0j
        for e in (1, -1):
            for e2 in (1, -1):
                acc += _lg(ctx, 1 + e * ti - t1 + e2 * sigma)
                acc += _lg(ctx, 1 + e * sigma - tt + e2 * t0)
        return acc - _lg(ctx, 1 + 2 * sigma) - _lg(ctx, 1 - 2 * sigma)
    if fam == "V":
        acc = -(sigma**2) * lqm1
        for e in (1, -1):
            acc += _lg(ctx, 1 - params.theta_star + e * sigma) - _lg(ctx, 1 + 2 * e * sigma)
            for e2 in (1, -1):
                acc += _lg(ctx, 1 + e * sigma - params.theta_t + e2 * params.theta0)
        return acc
    if fam == "III1":
        acc = -2 * sigma**2 * lqm1
        for e in (1, -1):
            acc += _lg(ctx, 1 - params.theta_star + e * sigma)
            acc += _lg(ctx, 1 + e * sigma - params.theta_star2)
            acc -= _lg(ctx, 1 + 2 * e * sigma)
        return acc
    if fam == "III2":
        acc = -3 * sigma**2 * lqm1
        for e in (1, -1):
            acc += _lg(ctx, 1 - params.theta_star + e * sigma) - _lg(ctx, 1 + 2 * e * sigma)
        return acc
    if fam in ("III3A", "III3B"):
        return -4 * sigma**2 * lqm1 - _lg(ctx, 1 + 2 * sigma) - _lg(ctx, 1 - 2 * sigma)
    raise ValueError(f"unknown family {fam!r}")


def cconst(ctx: QContext, params: Params, sigma=None) -> LogComplex:
    """Structure constant ``C`` of the family at ``sigma`` (log space)."""
    sigma = params.sigma if sigma is None else sigma
    return LogComplex.from_log(_log_cconst(ctx, params, sigma))


def t_exponent(params: Params, sigma: complex) -> complex:
    if params.family in ("VI", "V"):
        return sigma**2 - params.theta_t**2 - params.theta0**2
    return sigma**2


# ---------------------------------------------------------------------------
# Tau functions
# ---------------------------------------------------------------------------


def _log_s(s) -> complex | None:
    if isinstance(s, LogComplex):
        return s.log
    if s == 0:
        return None
    return cmath.log(s)


def tau_terms(ctx: QContext, params: Params, t: complex, trunc: TruncationSpec, s=None):
    """Per-``n`` terms ``(n, log_prefactor, Z)``; the tau value is ``sum exp(lp) * Z``.

    ``s`` overrides ``params.s`` and may be a :class:`LogComplex` when its
    powers would overflow.  At ``t == 0`` only the ``n = 0`` term is kept
    with the ``t``-power dropped (the leading coefficient, ``C[sigma]``).
    """
    s = params.s if s is None else s
    log_s = _log_s(s)
    if t == 0:
        try:
            return [(0, _log_cconst(ctx, params, params.sigma), 1.0 + 0j)]
        except ArithmeticError as exc:
            raise type(exc)(f"n=0: {exc}") from exc
    log_t = cmath.log(t)
    window = [0] if log_s is None else range(-trunc.w, trunc.w + 1)
    out = []
    for n in window:
        sig = params.sigma + n
        try:
            lp = t_exponent(params, sig) * log_t + _log_cconst(ctx, params, sig)
            z = zseries(ctx, params, t, trunc, sigma=sig)
        except ArithmeticError as exc:
            raise type(exc)(f"n={n}: {exc}") from exc
        if n:
            lp += n * log_s
            if params.family == "III3B" and n % 2:
                lp += 1j * math.pi
        out.append((n, lp, z))
    return out


def tau(ctx: QContext, params: Params, t: complex, trunc: TruncationSpec, s=None, log_scale: complex = 0) -> complex:
    """Tau function, optionally multiplied by ``exp(log_scale)`` before summing."""
    return sum(cmath.exp(lp + log_scale) * z for _, lp, z in tau_terms(ctx, params, t, trunc, s))


# (field deltas, sigma shift, power of sqrt(q) multiplying t)
SHIFT_TABLES = {
    "VI": {
        1: ({"theta_inf": 0.5}, 0.0, 0),
        2: ({"theta_inf": -0.5}, 0.0, 0),
        3: ({"theta0": 0.5}, 0.5, 0),
        4: ({"theta0": -0.5}, -0.5, 0),
        5: ({"theta1": -0.5}, 0.0, 0),
        6: ({"theta1": 0.5}, 0.0, 0),
        7: ({"theta_t": -0.5}, 0.5, 0),
        8: ({"theta_t": 0.5}, -0.5, 0),
    },
    "V": {
        1: ({"theta_star": -0.5}, 0.0, -1),
        2: ({"theta_star": 0.5}, 0.0, 1),
        3: ({"theta0": 0.5}, 0.5, 0),
        4: ({"theta0": -0.5}, -0.5, 0),
        5: ({"theta_t": -0.5}, 0.5, 0),
        6: ({"theta_t": 0.5}, -0.5, 0),
    },
    "III1": {
        1: ({"theta_star": -0.5}, 0.0, -1),
        2: ({"theta_star": 0.5}, 0.0, 1),
        3: ({"theta_star2": -0.5}, 0.5, -1),
        4: ({"theta_star2": 0.5}, -0.5, 1),
    },
    "III2": {
        1: ({"theta_star": -0.5}, 0.0, -1),
        2: ({"theta_star": 0.5}, 1.0, 1),
        3: ({}, 0.5, 0),
    },
    "III3A": {
        1: ({}, 0.0, 0),
        2: ({}, 0.5, 0),
    },
    "III3B": {
        1: ({}, 0.0, -1),
        2: ({}, 0.5, 0),
    },
}


# tau indices whose s parameter is negated
S_FLIPPED = {("III3B", 2)}


def _negated_s(s):
    if isinstance(s, LogComplex):
        return LogComplex(s.log_modulus, s.argument + math.pi)
    return -s


def shifted_params(params: Params, index: int) -> tuple[Params, int]:
    """Parameters of ``tau_index`` and the power of ``sqrt(q)`` applied to ``t``."""
    table = SHIFT_TABLES[params.family]
    if index not in table:
        raise ValueError(f"{params.family} has tau indices {sorted(table)}, got {index}")
    deltas, dsig, tpow = table[index]
    return shifted(params, sigma=dsig, **deltas), tpow


def tau_shifted(ctx: QContext, params: Params, index: int, t: complex, trunc: TruncationSpec, **kw) -> complex:
    p, tpow = shifted_params(params, index)
    if (params.family, index) in S_FLIPPED:
        kw["s"] = _negated_s(kw.get("s") if kw.get("s") is not None else params.s)
    return tau(ctx, p, t * math.sqrt(ctx.q) ** tpow, trunc, **kw)
