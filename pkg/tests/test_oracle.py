"""Package values against the frozen high-precision brute-force reference."""

import json
from pathlib import Path

import pytest

from qtau.qcore import QContext, barnes_q, gamma_q
from qtau.tau import ParamsIII3, ParamsVI, TruncationSpec, cconst, series_coefficients, tau

FROZEN = json.loads((Path(__file__).parent / "oracle" / "frozen.json").read_text())
REL = 1e-12


def _c(pair):
    return complex(*pair)


def _close(a, b, rel=REL):
    return abs(a - b) <= rel * max(abs(b), 1e-300)


@pytest.mark.parametrize("row", FROZEN["special"], ids=lambda r: f"q{r['q']}-u{r['u']}")
def test_gamma_and_barnes(row):
    ctx = QContext(row["q"])
    u = _c(row["u"])
    assert _close(gamma_q(ctx, u), _c(row["gamma"]))
    assert _close(barnes_q(ctx, u), _c(row["barnes"]))


@pytest.mark.parametrize("series", sorted(FROZEN["zcoeffs"]))
def test_series_coefficients(series):
    row = FROZEN["zcoeffs"][series]
    ctx = QContext(FROZEN["q"])
    got = series_coefficients(ctx, series, row["thetas"], row["sigma"], 5)
    want = [_c(p) for p in row["coeffs"]]
    scale = max(abs(w) for w in want)
    for g, w in zip(got, want):
        assert abs(g - w) <= REL * scale


def test_iii3_structure_constant():
    row = FROZEN["cconst_iii3"]
    ctx = QContext(FROZEN["q"])
    got = cconst(ctx, ParamsIII3(row["sigma"], 1.0)).value
    assert _close(got, _c(row["value"]))


@pytest.mark.parametrize("row", FROZEN["tau"], ids=lambda r: r["family"])
def test_tau_values(row):
    ctx = QContext(FROZEN["q"])
    if row["family"] == "VI":
        params = ParamsVI(**row["thetas"], sigma=row["sigma"], s=row["s"])
    else:
        variant = "A7prime" if row["family"] == "III3A" else "A7"
        params = ParamsIII3(row["sigma"], row["s"], variant)
    got = tau(ctx, params, row["t"], TruncationSpec(row["n_max"], row["w"]))
    assert _close(got, _c(row["value"]), 1e-11)
