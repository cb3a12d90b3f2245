import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtau.nekrasov import (
    VANISHING_FIRST_SLOT,
    VANISHING_SECOND_SLOT,
    content_sum,
    cs_factor,
    cs_factor_closed,
    identity_suite,
    nekrasov_factor,
    scaled_limit_lhs,
)
from qtau.partitions import conjugate, enumerate_partitions
from qtau.qcore import QContext

CTX = QContext(0.5)
PARTS = [lam for k in range(6) for lam in enumerate_partitions(k)]


def test_nekrasov_examples():
    u = 0.3 + 0.4j
    assert nekrasov_factor(CTX, (), (), u) == 1
    assert nekrasov_factor(CTX, (1,), (), u) == pytest.approx(1 - u)
    assert nekrasov_factor(CTX, (), (1,), u) == pytest.approx(1 - u)


def test_cs_examples():
    u = 0.3 + 0.4j
    assert cs_factor(CTX, (), u) == 1
    assert cs_factor(CTX, (1,), u) == pytest.approx(-1 / u)
    assert cs_factor(CTX, (2,), u) == pytest.approx(u**-2 / CTX.q)
    with pytest.raises(ZeroDivisionError):
        cs_factor(CTX, (1,), 0)


@pytest.mark.parametrize("lam", PARTS)
def test_cs_closed_form(lam):
    u = 0.7 - 0.2j
    assert abs(cs_factor(CTX, lam, u) - cs_factor_closed(CTX, lam, u)) <= 1e-12 * abs(cs_factor(CTX, lam, u))
    assert content_sum(lam) == -content_sum(conjugate(lam))


@pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
def test_identity_suite(q):
    worst = identity_suite(q)
    assert max(worst.values()) < 1e-12


@given(
    st.sampled_from(PARTS),
    st.sampled_from(PARTS),
    st.complex_numbers(min_magnitude=0.1, max_magnitude=3.0),
)
@settings(max_examples=200, deadline=None)
def test_transposition_symmetry(lam, mu, u):
    a = nekrasov_factor(CTX, lam, mu, u)
    b = nekrasov_factor(CTX, conjugate(mu), conjugate(lam), u)
    assert abs(a - b) <= 1e-11 * max(abs(a), 1.0)


def test_scaled_limit_examples():
    u = 0.4 + 0.2j
    for kind in (VANISHING_FIRST_SLOT, VANISHING_SECOND_SLOT):
        assert scaled_limit_lhs(CTX, kind, (), u, 3.0) == 1
        assert scaled_limit_lhs(CTX, kind, (1,), u, 60.0) == pytest.approx(-u, rel=1e-15)
    with pytest.raises(ValueError):
        scaled_limit_lhs(CTX, "sideways", (1,), u, 1.0)


def test_scaled_limit_matches_unscaled_form():
    u, big = 0.4 + 0.2j, 2.5
    lam = (2, 1)
    direct = nekrasov_factor(CTX, (), lam, CTX.qpow(-big) * u) * CTX.qpow(big * 3)
    assert scaled_limit_lhs(CTX, VANISHING_FIRST_SLOT, lam, u, big) == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("lam", [lam for lam in PARTS if lam])
def test_scaled_limit_converges_geometrically(lam):
    u = 0.4 + 0.2j
    targets = {
        VANISHING_FIRST_SLOT: cs_factor(CTX, lam, 1 / u),
        VANISHING_SECOND_SLOT: 1 / cs_factor(CTX, lam, u),
    }
    for kind, target in targets.items():
        errs = [abs(scaled_limit_lhs(CTX, kind, lam, u, big) - target) for big in (20, 21, 22)]
        ratios = [errs[1] / errs[0], errs[2] / errs[1]]
        assert all(abs(r - CTX.q) < 0.05 for r in ratios), ratios
        assert cmath.isfinite(target)
