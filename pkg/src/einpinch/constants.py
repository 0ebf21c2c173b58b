"""Closed-form pinching constants, evaluated in high precision."""

from dataclasses import asdict, dataclass
from decimal import ROUND_DOWN, ROUND_HALF_EVEN, Decimal

import mpmath

from .errors import DomainError

_DPS = 40

# decimals as printed alongside each closed form
PRINTED_DECIMALS = {
    "M1": "0.866025",
    "M2": "0.750912",
    "eps0": "0.097631",
    "K_0": "0.151456",
    "yang_b": "0.642857",
    "yang_a": "0.102843",
}
COROLLARY_DECIMAL = "0.400543"


def _mp():
    ctx = mpmath.mp.clone()
    ctx.dps = _DPS
    return ctx


def _closed_forms():
    mp = _mp()
    s2 = mp.sqrt(2)
    r = mp.sqrt(4 + 2 * s2) / 4
    eps0 = (2 - s2) / 6
    return mp, {
        "M1": mp.sqrt(3) / 2,
        "eps0": eps0,
        "M2": eps0 + r,
        "K_0": (1 + s2) / 3 - r,
        "K_slope": eps0,
        "yang_a": (mp.sqrt(1249) - 23) / 120,
        "yang_b": mp.mpf(9) / 14,
        "costa": mp.mpf(2) / 3,
        "cor13_display": (2 + s2) / 2 - r,
    }


@dataclass(frozen=True)
class PinchConstants:
    M1: float
    M2: float
    eps0: float
    yang_a: float
    yang_b: float
    costa: float


def pinch_constants():
    _, cf = _closed_forms()
    return PinchConstants(**{k: float(cf[k]) for k in ("M1", "M2", "eps0", "yang_a", "yang_b", "costa")})


_C = pinch_constants()
M1 = _C.M1
M2 = _C.M2
EPS0 = _C.eps0


def k_s(s):
    """Lower pinching level K_s = (1+sqrt2)/3 - sqrt(4+2sqrt2)/4 + (2-sqrt2)/6 * s."""
    if s < 0:
        raise DomainError("s must be nonnegative")
    return float(k_s_mp(s))


def k_s_mp(s):
    _, cf = _closed_forms()
    return cf["K_0"] + cf["K_slope"] * mpmath.mpf(s)


def z_lower_root(s):
    """Smaller root in z of lemma41_lower_bound at m = eps0; equals K_s."""
    return k_s(s)


def _fixed(value, digits, rounding=ROUND_HALF_EVEN):
    """Fixed-point decimal string of an mpf; ROUND_DOWN truncates."""
    exact = Decimal(mpmath.nstr(value, _DPS, strip_zeros=False))
    return str(exact.quantize(Decimal(1).scaleb(-digits), rounding=rounding))


def constants_table(precision=6):
    """Every named constant with its decimals and the printed value it is compared against."""
    _, cf = _closed_forms()
    rows = []
    for name, printed in PRINTED_DECIMALS.items():
        value = cf[name]
        rows.append({
            "name": name,
            "value": float(value),
            "rounded": _fixed(value, precision),
            "truncated": _fixed(value, 6, ROUND_DOWN),
            "printed": printed,
            "abs_diff": float(abs(value - mpmath.mpf(printed))),
        })
    return {"constants": asdict(pinch_constants()), "rows": rows}


def corollary13_audit():
    """2*K_{1/2} against the displayed closed form and the printed decimal."""
    _, cf = _closed_forms()
    two_k_half = 2 * k_s_mp(mpmath.mpf(1) / 2)
    display = cf["cor13_display"]
    printed = mpmath.mpf(COROLLARY_DECIMAL)
    return {
        "two_k_half": float(two_k_half),
        "closed_form_display": float(display),
        "printed_decimal": float(printed),
        "diff_two_k_half_vs_printed": float(two_k_half - printed),
        "diff_display_vs_printed": float(display - printed),
        "diff_two_k_half_vs_display": float(two_k_half - display),
        "two_k_half_truncated": _fixed(two_k_half, 6, ROUND_DOWN),
    }
