"""The invariant I, lemma margins and the intermediate bounds of their proofs.

Scalar entry points take :class:`BergerData`; the underscored array kernels
take broadcastable ``(m, k13, x, y)`` arrays and are what the searches use.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .berger import BergerData, feasibility_violations
from .constants import EPS0, M1, k_s
from .curvature import EigenProfile
from .errors import DomainError, HypothesisError

HYPOTHESIS_TOL = 1e-12
COUNTEREXAMPLE_TOL = 1e-9


# -- array kernels ---------------------------------------------------------

def profile_arrays(m, k13, x, y):
    """Eigenvalue triples (a, c), stacked on a new last axis."""
    k14 = 1.0 - m - k13
    a = 2 * np.stack(np.broadcast_arrays(m - x, k13 - y, k14 + x + y), axis=-1)
    c = 2 * np.stack(np.broadcast_arrays(m + x, k13 + y, k14 - x - y), axis=-1)
    return a, c


def invariant_arrays(a, c):
    a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2]
    c1, c2, c3 = c[..., 0], c[..., 1], c[..., 2]
    return (c2 - c1) * c3 + (c3 - c1) * c2 + (a2 - a1) * a3 + (a3 - a1) * a2


def invariant_from_data(m, k13, x, y):
    return invariant_arrays(*profile_arrays(m, k13, x, y))


def is_case1(a, c):
    """Lemma case (1): a2 >= 0 and c2 >= 0."""
    return (a[..., 1] >= 0) & (c[..., 1] >= 0)


def lemma22_bounds(eps):
    return {"case1": 16.0 / 3.0 * eps, "case2": eps / 4.0}


def lemma41_bounds(eps):
    return {"case1": 8.0 / 3.0 * eps, "case2": eps}


# -- profile and invariant -------------------------------------------------

def berger_to_profile(d):
    bad = feasibility_violations(d)
    if bad:
        raise DomainError(f"infeasible Berger data: {', '.join(bad)}")
    a, c = profile_arrays(d.m, d.k13, d.x, d.y)
    return EigenProfile(np.sort(a), np.sort(c))


def invariant_I(p):
    return float(invariant_arrays(p.a, p.c))


# -- reports ---------------------------------------------------------------

@dataclass
class LemmaReport:
    lemma: str                  # "L22" or "L41"
    case_label: str             # "case1" or "case2"
    I_value: float
    bound: float
    margin: float
    argmin: BergerData
    samples: int = 1
    proof_case: Optional[str] = None
    params: dict = field(default_factory=dict)
    by_case: dict = field(default_factory=dict)

    @property
    def counterexample(self):
        return self.margin < -COUNTEREXAMPLE_TOL

    def to_dict(self):
        out = {
            "lemma": self.lemma,
            "case_label": self.case_label,
            "proof_case": self.proof_case,
            "I_value": self.I_value,
            "bound": self.bound,
            "margin": self.margin,
            "argmin": self.argmin.to_dict(),
            "samples": self.samples,
            "counterexample": self.counterexample,
            "params": dict(self.params),
        }
        if self.by_case:
            out["by_case"] = {k: (v.to_dict() if v is not None else None)
                              for k, v in self.by_case.items()}
        return out


def _require(cond, name):
    if not cond:
        raise HypothesisError(name)


def _require_feasible(d):
    bad = feasibility_violations(d)
    if bad:
        raise HypothesisError(bad[0], f"infeasible Berger data: {', '.join(bad)}")


def lemma22_proof_case(d):
    """Sub-case of the a2 < 0 or c2 < 0 estimate (c1, c2, c3), or None in lemma case (1).

    The proof assumes a2 < 0; when instead c2 < 0 the orientation is reversed,
    which flips the signs of x and y.
    """
    a, c = profile_arrays(d.m, d.k13, d.x, d.y)
    if is_case1(a, c):
        return None
    if d.k14 - d.k13 <= 3.5 * (d.k13 - d.m):
        return "c1"
    x = d.x if a[1] < 0 else -d.x
    return "c2" if x <= 0 else "c3"


def lemma22_margin(d, eps, cap=M1):
    _require(eps > 0, "eps>0")
    _require_feasible(d)
    _require(d.k14 <= cap + HYPOTHESIS_TOL, f"K14<={cap:.6g}")
    _require(d.m <= -eps + HYPOTHESIS_TOL, "K12<=-eps")
    a, c = profile_arrays(d.m, d.k13, d.x, d.y)
    label = "case1" if is_case1(a, c) else "case2"
    bound = lemma22_bounds(eps)[label]
    value = float(invariant_arrays(a, c))
    return LemmaReport("L22", label, value, bound, value - bound, d,
                       proof_case=lemma22_proof_case(d), params={"eps": eps, "cap": cap})


def lemma41_margin(d, s, eps):
    _require(s >= 0, "s>=0")
    _require(eps > 0, "eps>0")
    _require_feasible(d)
    _require(d.m >= -HYPOTHESIS_TOL, "K12>=0")
    _require(d.m <= EPS0 - eps + HYPOTHESIS_TOL, "K12<=eps0-eps")
    _require(d.k13 + s * d.m >= k_s(s) - HYPOTHESIS_TOL, "K13+s*K12>=K_s")
    a, c = profile_arrays(d.m, d.k13, d.x, d.y)
    label = "case1" if is_case1(a, c) else "case2"
    bound = lemma41_bounds(eps)[label]
    value = float(invariant_arrays(a, c))
    return LemmaReport("L41", label, value, bound, value - bound, d,
                       params={"eps": eps, "s": s})


# -- intermediate bounds from the proofs -----------------------------------

def lemma41_lower_bound(m, z, s):
    """Quadratic in z = K13 + s*K12 bounding (3/8) I from below when a2 < 0 or c2 < 0."""
    return (-4 * z**2 + 8 * (1 + s * m - 2 * m) * z
            + (-1 + (1 - 8 * s) * m + 2 * (1 + 8 * s - 2 * s**2) * m**2))


def lemma41_lower_bound_dm(m, z, s):
    """Analytic partial derivative of :func:`lemma41_lower_bound` in m at fixed z."""
    return 8 * z * (s - 2) + 1 - 8 * s + 4 * m * (1 + 8 * s - 2 * s**2)


def case3_polynomial(m, M):
    """-4M^2 + 3 + (-m)(15 - 8M) + 14m^2, a lower bound of (3/8) I in proof case 3."""
    return -4 * M**2 + 3 - m * (15 - 8 * M) + 14 * m**2


@dataclass
class CaseBoundReport:
    proof_case: str     # "lemma_case1", "c1", "c2" or "c3"
    scale: float        # the bounds compare against scale * I
    scaled_I: float
    bounds: dict

    @property
    def ok(self):
        return all(self.scaled_I >= b - COUNTEREXAMPLE_TOL for b in self.bounds.values())

    def to_dict(self):
        return {"proof_case": self.proof_case, "scale": self.scale, "scaled_I": self.scaled_I,
                "bounds": dict(self.bounds), "ok": self.ok}


def lemma22_case_bounds(d, eps, cap=M1):
    rep = lemma22_margin(d, eps, cap)
    m, z, M = d.m, d.k13, d.k14
    u, v = z - m, M - z
    I = rep.I_value
    if rep.proof_case is None:
        return CaseBoundReport("lemma_case1", 1.0, I, {"two_thirds_gap": 8.0 / 3.0 * u})
    if rep.proof_case == "c1":
        primary = u * M + (M - m) * z - 0.5 * v**2
        return CaseBoundReport("c1", 1.0 / 8.0, I / 8, {
            "primary": primary,
            "chained": 0.25 * u * (9 * z - M),
        })
    if rep.proof_case == "c2":
        return CaseBoundReport("c2", 1.0 / 8.0, I / 8, {
            "primary": u * M + (M - m) * z - 2 * u**2,
        })
    return CaseBoundReport("c3", 3.0 / 8.0, 3 * I / 8, {"polynomial": case3_polynomial(m, M)})
