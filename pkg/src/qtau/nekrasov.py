"""Nekrasov factors and the Chern-Simons monomial.

Every factor here is a product over cells of ``(1 - q**e * u)`` with an
integer exponent ``e`` fixed by the diagrams, so the exponent lists are
exposed separately; the series engine reuses them across many ``u``.
"""

from __future__ import annotations

from functools import lru_cache

from .partitions import EMPTY, Partition, arm, cells, leg, weight
from .qcore import QContext

VANISHING_FIRST_SLOT = "vanishing-first-slot"
VANISHING_SECOND_SLOT = "vanishing-second-slot"


@lru_cache(maxsize=None)
def nekrasov_exponents(lam: Partition, mu: Partition) -> tuple[int, ...]:
    """Integer exponents ``e`` with ``N_{lam,mu}(u) = prod (1 - q**e * u)``."""
    ex = [-leg(lam, c) - arm(mu, c) - 1 for c in cells(lam)]
    ex += [leg(mu, c) + arm(lam, c) + 1 for c in cells(mu)]
    return tuple(ex)


@lru_cache(maxsize=None)
def content_sum(lam: Partition) -> int:
    """``sum over cells (i - j)``; the q-exponent of the Chern-Simons factor."""
    return sum(i - j for i, j in cells(lam))


def nekrasov_factor(ctx: QContext, lam: Partition, mu: Partition, u: complex) -> complex:
    out = 1.0 + 0j
    for e in nekrasov_exponents(lam, mu):
        out *= 1.0 - ctx.qpow(e) * u
    return out


def cs_factor(ctx: QContext, lam: Partition, u: complex) -> complex:
    """``f_lam(u) = prod over cells of (-q**(leg + a_empty + 1) / u)``."""
    if u == 0:
        raise ZeroDivisionError("Chern-Simons factor needs u != 0")
    out = 1.0 + 0j
    for c in cells(lam):
        out *= -ctx.qpow(leg(lam, c) + arm(EMPTY, c) + 1) / u
    return out


def cs_factor_closed(ctx: QContext, lam: Partition, u: complex) -> complex:
    k = weight(lam)
    return (-1) ** k * u ** (-k) * ctx.qpow(content_sum(lam))


def scaled_limit_lhs(ctx: QContext, kind: str, lam: Partition, u: complex, big: float) -> complex:
    """``N_{0,lam}(q^-big u) q^(big|lam|)`` or ``N_{lam,0}(q^-big u) q^(big|lam|)``.

    Evaluated per cell as ``q**big - q**e * u`` so that large ``big`` stays finite.
    """
    if kind == VANISHING_FIRST_SLOT:
        exps = nekrasov_exponents(EMPTY, lam)
    elif kind == VANISHING_SECOND_SLOT:
        exps = nekrasov_exponents(lam, EMPTY)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    qb = ctx.qpow(big)
    out = 1.0 + 0j
    for e in exps:
        out *= qb - ctx.qpow(e) * u
    return out


def identity_suite(q: float, max_weight: int = 6, draws: int = 10, seed: int = 0) -> dict[str, float]:
    """Worst relative error of the transposition, CS-exchange and pair relations.

    Transposition runs over all pairs with ``|lam|, |mu| <= max_weight``;
    the one-partition relations over all ``|lam| <= max_weight``.
    """
    import random

    from .partitions import conjugate, enumerate_partitions

    ctx = QContext(q)
    rng = random.Random(seed)
    parts = [lam for k in range(max_weight + 1) for lam in enumerate_partitions(k)]
    us = [complex(rng.uniform(0.3, 2.0), rng.uniform(-1.0, 1.0)) for _ in range(draws)]
    ws = [complex(rng.uniform(0.3, 2.0), rng.uniform(-1.0, 1.0)) for _ in range(draws)]

    def rel(a: complex, b: complex) -> float:
        return abs(a - b) / max(abs(a), abs(b), 1e-300)

    worst = {"TRANSPOSE": 0.0, "CS_EXCHANGE": 0.0, "PAIR": 0.0}
    for u in us:
        for lam in parts:
            for mu in parts:
                a = nekrasov_factor(ctx, lam, mu, u)
                b = nekrasov_factor(ctx, conjugate(mu), conjugate(lam), u)
                worst["TRANSPOSE"] = max(worst["TRANSPOSE"], rel(a, b))
    for u, w in zip(us, ws):
        for lam in parts:
            a = nekrasov_factor(ctx, EMPTY, lam, u)
            b = cs_factor(ctx, lam, 1 / u) * nekrasov_factor(ctx, lam, EMPTY, 1 / u)
            c = nekrasov_factor(ctx, lam, EMPTY, u)
            d = nekrasov_factor(ctx, EMPTY, lam, 1 / u) / cs_factor(ctx, lam, u)
            worst["CS_EXCHANGE"] = max(worst["CS_EXCHANGE"], rel(a, b), rel(c, d))
            lhs = nekrasov_factor(ctx, EMPTY, lam, u) * nekrasov_factor(ctx, lam, EMPTY, w)
            rhs = (u * w) ** weight(lam) * nekrasov_factor(ctx, EMPTY, lam, 1 / w) * nekrasov_factor(ctx, lam, EMPTY, 1 / u)
            worst["PAIR"] = max(worst["PAIR"], rel(lhs, rhs))
    return worst
