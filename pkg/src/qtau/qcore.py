"""Complex q-special functions with explicit truncation of infinite products.

All functions take a :class:`QContext` carrying the base ``q`` (real, in
``(0, 1)``) and the relative tail tolerance used to truncate infinite
products.  Gamma/Barnes values are produced in log space as
:class:`LogComplex` so that products of many large or tiny factors never
overflow before they are combined.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from functools import lru_cache

DEFAULT_PROD_TAIL_TOL = 1e-16
POLE_TOL = 1e-8
_MAX_TERMS = 100_000


class PoleError(ArithmeticError):
    """Raised when a q-Gamma/q-Barnes argument sits on (or next to) a singularity."""


@dataclass(frozen=True)
class QContext:
    q: float
    prod_tail_tol: float = DEFAULT_PROD_TAIL_TOL

    def __post_init__(self) -> None:
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"q must lie in (0, 1), got {self.q!r}")
        if not self.prod_tail_tol > 0.0:
            raise ValueError("prod_tail_tol must be positive")

    @classmethod
    def from_env(cls, q: float) -> "QContext":
        """Context honouring the ``QTAU_PROD_TAIL_TOL`` override."""
        raw = os.environ.get("QTAU_PROD_TAIL_TOL")
        if raw is None:
            return cls(q)
        return cls(q, float(raw))

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    def qpow(self, u: complex) -> complex:
        """``q**u`` for real ``q``; exact for real ``u``."""
        if isinstance(u, complex) and u.imag != 0.0:
            return cmath.exp(u * self.log_q)
        return self.q ** float(u.real if isinstance(u, complex) else u)


@dataclass(frozen=True)
class LogComplex:
    """A nonzero complex number stored as ``log|z| + i*arg`` (argument not reduced)."""

    log_modulus: float
    argument: float

    @classmethod
    def from_log(cls, w: complex) -> "LogComplex":
        w = complex(w)
        return cls(w.real, w.imag)

    @classmethod
    def from_value(cls, z: complex) -> "LogComplex":
        if z == 0:
            raise ValueError("LogComplex cannot represent zero")
        return cls.from_log(cmath.log(z))

    @property
    def log(self) -> complex:
        return complex(self.log_modulus, self.argument)

    @property
    def value(self) -> complex:
        return cmath.exp(self.log)

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        return LogComplex(self.log_modulus + other.log_modulus, self.argument + other.argument)

    def __truediv__(self, other: "LogComplex") -> "LogComplex":
        return LogComplex(self.log_modulus - other.log_modulus, self.argument - other.argument)

    def __pow__(self, k: complex) -> "LogComplex":
        return LogComplex.from_log(self.log * k)

    def inverse(self) -> "LogComplex":
        return LogComplex(-self.log_modulus, -self.argument)


ONE = LogComplex(0.0, 0.0)


def cpow(base: complex, exponent: complex) -> complex:
    """Principal-branch power ``exp(exponent * Log(base))`` with ``0**0 == 1``."""
    if base == 0:
        if exponent == 0:
            return 1.0 + 0j
        if complex(exponent).real > 0:
            return 0j
        raise ZeroDivisionError("0 raised to an exponent with non-positive real part")
    if exponent == 0:
        return 1.0 + 0j
    return cmath.exp(exponent * cmath.log(base))


def log_cpow(base: complex, exponent: complex) -> complex:
    """Log of :func:`cpow` without exponentiating: ``exponent * Log(base)``."""
    if base == 0:
        raise ZeroDivisionError("log of a power of zero")
    return exponent * cmath.log(base)


def log_q_minus_one(ctx: QContext) -> complex:
    """Principal ``Log(q - 1)``; for real ``q < 1`` this is ``log(1 - q) + i*pi``."""
    return cmath.log(complex(ctx.q - 1.0, 0.0))


def q_number(ctx: QContext, u: complex) -> complex:
    return (1.0 - ctx.qpow(u)) / (1.0 - ctx.q)


def q_pochhammer(ctx: QContext, a: complex, n: int) -> complex:
    if n < 0:
        raise ValueError("finite q-Pochhammer needs n >= 0")
    out = 1.0 + 0j
    qj = 1.0
    for _ in range(n):
        out *= 1.0 - a * qj
        qj *= ctx.q
    return out


def _single_terms(q: float, mod_a: float, tol: float) -> int:
    # tail |a| q^J / (1-q) < tol
    if mod_a == 0.0:
        return 0
    j = math.ceil(math.log(tol * (1.0 - q) / mod_a) / math.log(q))
    return min(max(j, 1), _MAX_TERMS)


def _double_terms(q: float, mod_a: float, tol: float) -> int:
    # tail sum_{m>=J} (m+1)|a| q^m <= |a| q^J (J+1) / (1-q)^2 < tol
    if mod_a == 0.0:
        return 0
    j = max(_single_terms(q, mod_a, tol * (1.0 - q)), 1)
    while mod_a * q**j * (j + 1) / (1.0 - q) ** 2 >= tol and j < _MAX_TERMS:
        j += 1
    return j


def product_terms(ctx: QContext, a: complex, double: bool = False) -> int:
    """Number of factors kept for ``(a;q)_inf`` (or ``(a;q,q)_inf`` if ``double``)."""
    if double:
        return _double_terms(ctx.q, abs(a), ctx.prod_tail_tol)
    return _single_terms(ctx.q, abs(a), ctx.prod_tail_tol)


def q_pochhammer_inf(ctx: QContext, a: complex) -> complex:
    out = 1.0 + 0j
    qj = 1.0
    for _ in range(product_terms(ctx, a)):
        out *= 1.0 - a * qj
        qj *= ctx.q
    return out


def q_double_pochhammer_inf(ctx: QContext, a: complex) -> complex:
    out = 1.0 + 0j
    qm = 1.0
    for m in range(product_terms(ctx, a, double=True)):
        out *= (1.0 - a * qm) ** (m + 1)
        qm *= ctx.q
    return out


def _log_poch_inf(ctx: QContext, a: complex) -> complex:
    acc = 0j
    qj = 1.0
    for _ in range(product_terms(ctx, a)):
        acc += cmath.log(1.0 - a * qj)
        qj *= ctx.q
    return acc


def _log_double_poch_inf(ctx: QContext, a: complex) -> complex:
    acc = 0j
    qm = 1.0
    for m in range(product_terms(ctx, a, double=True)):
        acc += (m + 1) * cmath.log(1.0 - a * qm)
        qm *= ctx.q
    return acc


@lru_cache(maxsize=64)
def _log_constants(q: float, tol: float) -> tuple[float, float, float]:
    ctx = QContext(q, tol)
    log_qq = _log_poch_inf(ctx, q).real
    log_qqq = _log_double_poch_inf(ctx, q).real
    return log_qq, log_qqq, math.log(1.0 - q)


def _check_pole(ctx: QContext, u: complex, what: str) -> None:
    # singular set: u = -j + 2*pi*i*k / log q, j >= 0
    u = complex(u)
    period = 2.0 * math.pi / abs(ctx.log_q)
    k = round(u.imag / period)
    j = round(-u.real)
    if j >= 0 and abs(u - complex(-j, k * period)) < POLE_TOL:
        raise PoleError(f"{what} singular at u={u!r}")


def log_gamma_q(ctx: QContext, u: complex) -> LogComplex:
    """``log Gamma_q(u) = log (q;q)_inf - log (q^u;q)_inf + (1-u) log(1-q)``."""
    _check_pole(ctx, u, "Gamma_q")
    log_qq, _, log_1mq = _log_constants(ctx.q, ctx.prod_tail_tol)
    w = log_qq - _log_poch_inf(ctx, ctx.qpow(u)) + (1.0 - u) * log_1mq
    return LogComplex.from_log(w)


def gamma_q(ctx: QContext, u: complex) -> complex:
    return log_gamma_q(ctx, u).value


def log_barnes_q(ctx: QContext, u: complex) -> LogComplex:
    """Log of the q-Barnes function ``G_q(u)``.

    ``G_q`` vanishes (rather than blows up) at non-positive integers; its log
    is singular there, so those points raise :class:`PoleError` as well.
    """
    _check_pole(ctx, u, "G_q")
    log_qq, log_qqq, log_1mq = _log_constants(ctx.q, ctx.prod_tail_tol)
    w = (
        _log_double_poch_inf(ctx, ctx.qpow(u))
        - log_qqq
        + (u - 1.0) * log_qq
        - (u - 1.0) * (u - 2.0) / 2.0 * log_1mq
    )
    return LogComplex.from_log(w)


def barnes_q(ctx: QContext, u: complex) -> complex:
    return log_barnes_q(ctx, u).value


def log_shift_product(ctx: QContext, x: complex, sigma: complex, n: int) -> complex:
    """Log of ``prod_eps G_q(1 - x + eps*(sigma + n))`` rebuilt from the ``n = 0`` factors.

    Uses ``G_q(u+1) = Gamma_q(u) G_q(u)`` unrolled ``|n|`` times; the
    q-number products are written with ``sign(n) * sigma``.
    """
    m = abs(n)
    sg = sigma if n >= 0 else -sigma
    acc = 0j
    for e in (1, -1):
        acc += log_barnes_q(ctx, 1 - x + e * sigma).log + e * n * log_gamma_q(ctx, -x + e * sigma).log
    acc += m * cmath.log(q_number(ctx, -x + sg))
    for i in range(m):
        for j in range(1, i + 1):
            acc += cmath.log(q_number(ctx, -x + sg + j)) + cmath.log(q_number(ctx, -x - sg - j))
    return acc


def log_barnes_ratio(ctx: QContext, x: complex, n: int) -> complex:
    """Log of the closed form of ``G_q(1+x+n) G_q(1-x) / (G_q(1-x-n) G_q(1+x))``."""
    sign = 0j if (n * (n + 1) // 2) % 2 == 0 else 1j * math.pi
    expo = n * (n + 1) * x / 2 + (n - 1) * n * (n + 1) / 6
    return sign + expo * ctx.log_q + n * (log_gamma_q(ctx, x).log + log_gamma_q(ctx, 1 - x).log)


def _rel_from_logs(a: complex, b: complex) -> float:
    return abs(cmath.exp(a - b) - 1.0)


def identity_suite(q: float, draws: int = 100, seed: int = 0) -> dict[str, float]:
    """Worst relative error of each special-function identity over random complex points."""
    import random

    ctx = QContext(q)
    rng = random.Random(seed)

    def point(box: float) -> complex:
        while True:
            u = complex(rng.uniform(-box, box), rng.uniform(-box, box))
            if min(abs(u + j) for j in range(0, 6)) > 1e-3:
                return u

    worst = {"GAMMA_FE": 0.0, "BARNES_FE": 0.0, "SHIFT": 0.0, "RATIO": 0.0}
    for _ in range(draws):
        u = point(3.0)
        g0, g1 = log_gamma_q(ctx, u), log_gamma_q(ctx, u + 1)
        worst["GAMMA_FE"] = max(worst["GAMMA_FE"], _rel_from_logs(g0.log + cmath.log(q_number(ctx, u)), g1.log))
        b0, b1 = log_barnes_q(ctx, u), log_barnes_q(ctx, u + 1)
        worst["BARNES_FE"] = max(worst["BARNES_FE"], _rel_from_logs(g0.log + b0.log, b1.log))
    for n in range(-3, 4):
        for _ in range(max(1, draws // 20)):
            x, sig = point(0.45), point(0.45)
            lhs = sum(log_barnes_q(ctx, 1 - x + e * (sig + n)).log for e in (1, -1))
            worst["SHIFT"] = max(worst["SHIFT"], _rel_from_logs(lhs, log_shift_product(ctx, x, sig, n)))
            lhs = (
                log_barnes_q(ctx, 1 + x + n).log
                + log_barnes_q(ctx, 1 - x).log
                - log_barnes_q(ctx, 1 - x - n).log
                - log_barnes_q(ctx, 1 + x).log
            )
            worst["RATIO"] = max(worst["RATIO"], _rel_from_logs(lhs, log_barnes_ratio(ctx, x, n)))
    return worst
