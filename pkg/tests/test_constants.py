import mpmath
import pytest

from einpinch.constants import (
    COROLLARY_DECIMAL,
    EPS0,
    M1,
    M2,
    PRINTED_DECIMALS,
    constants_table,
    corollary13_audit,
    k_s,
    k_s_mp,
    pinch_constants,
)
from einpinch.errors import DomainError

from oracles import sympy_constants


def test_closed_forms_match_symbolic():
    ref = sympy_constants()
    c = pinch_constants()
    assert c.M1 == pytest.approx(float(ref["M1"]), abs=1e-16)
    assert c.M2 == pytest.approx(float(ref["M2"]), abs=1e-16)
    assert c.eps0 == pytest.approx(float(ref["eps0"]), abs=1e-16)
    assert c.yang_a == pytest.approx(float(ref["yang_a"]), abs=1e-16)
    assert c.yang_b == 9 / 14
    assert c.costa == 2 / 3
    assert (M1, M2, EPS0) == (c.M1, c.M2, c.eps0)


def test_k_s_values():
    ref = sympy_constants()
    assert k_s(0) == pytest.approx(float(ref["K_0"]), abs=1e-16)
    assert k_s(0.5) == pytest.approx(float(ref["two_k_half"]) / 2, abs=1e-16)
    assert k_s(1) - k_s(0) == pytest.approx(EPS0)
    with mpmath.workdps(40):
        assert abs(k_s_mp(0) - mpmath.mpf(str(ref["K_0"]))) < mpmath.mpf("1e-28")
    with pytest.raises(DomainError):
        k_s(-0.1)


def test_printed_decimals_are_truncations():
    # every printed decimal is the closed form cut (not rounded) after six places
    for row in constants_table()["rows"]:
        assert row["truncated"] == row["printed"] == PRINTED_DECIMALS[row["name"]]
    assert corollary13_audit()["two_k_half_truncated"] == COROLLARY_DECIMAL


def test_table_precision():
    ref = sympy_constants()
    rows = {r["name"]: r for r in constants_table(12)["rows"]}
    for name in ("M1", "M2", "eps0"):
        assert rows[name]["rounded"] == f"{float(ref[name]):.12f}"


def test_m2_rounds_away_from_printed_value():
    row = {r["name"]: r for r in constants_table()["rows"]}["M2"]
    assert row["rounded"] == "0.750913"
    assert row["abs_diff"] == pytest.approx(5.554e-7, abs=1e-10)


def test_corollary_audit_numbers():
    audit = corollary13_audit()
    assert audit["two_k_half"] == pytest.approx(0.4005438163, abs=1e-10)
    assert audit["closed_form_display"] == pytest.approx(1.0538253, abs=1e-7)
    assert audit["printed_decimal"] == 0.400543
    assert audit["diff_two_k_half_vs_display"] == pytest.approx(
        audit["two_k_half"] - audit["closed_form_display"])
