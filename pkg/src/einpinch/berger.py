"""Berger normal frames of Einstein curvature tensors.

For B = 0 the frame is fixed by the spectra of A and C: rotating so that both
blocks become diagonal with ascending entries puts the minimal plane on
(e1, e2), the maximal plane on (e1, e4) and kills every R_ikjk with i != j.
The required rotation is assembled from the two SO(3) eigenbases through
so(4) = so(3) + so(3).
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm
from scipy.spatial.transform import Rotation
from scipy.stats import special_ortho_group

from .curvature import (
    ANTI_SELF_DUAL,
    EINSTEIN_TOL,
    SELF_DUAL,
    CurvatureTensor4,
    OperatorBlocks,
    blocks_to_tensor,
    einstein_defect,
    min_max_sectional,
    tensor_to_blocks,
)
from .errors import BergerSearchError, DomainError, NotEinsteinError

FEASIBILITY_TOL = 1e-12
FRAME_TOL = 1e-8
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class FrameRotation:
    """Orthonormal frame; column ``a`` of Q holds the new basis vector e_a."""

    Q: np.ndarray

    def __post_init__(self):
        Q = np.array(self.Q, dtype=float)
        if Q.shape != (4, 4):
            raise DomainError("frame must be 4x4")
        if np.abs(Q.T @ Q - np.eye(4)).max() > 1e-10:
            raise DomainError("frame is not orthogonal")
        if np.linalg.det(Q) < 0:
            raise DomainError("frame is not positively oriented")
        object.__setattr__(self, "Q", Q)


@dataclass(frozen=True)
class BergerData:
    m: float    # K12, the minimal sectional curvature
    k13: float
    k14: float  # the maximal sectional curvature
    x: float    # -R1234
    y: float    # -R1342; R1423 = x + y by Bianchi

    @property
    def r1423(self):
        return self.x + self.y

    def as_tuple(self):
        return (self.m, self.k13, self.k14, self.x, self.y)

    def to_dict(self):
        return {"K12": self.m, "K13": self.k13, "K14": self.k14, "x": self.x, "y": self.y}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["K12"]), float(d["K13"]), float(d["K14"]), float(d["x"]), float(d["y"]))


def feasibility_violations(d, tol=FEASIBILITY_TOL):
    """Named constraints of a Berger data set that fail by more than ``tol``."""
    m, k13, k14, x, y = d.as_tuple()
    checks = {
        "trace": abs(m + k13 + k14 - 1.0),
        "m<=k13": m - k13,
        "k13<=k14": k13 - k14,
        "|x-y|<=k13-m": abs(x - y) - (k13 - m),
        "|x+2y|<=k14-k13": abs(x + 2 * y) - (k14 - k13),
        "|2x+y|<=k14-m": abs(2 * x + y) - (k14 - m),
        "a1<=a2": (m - x) - (k13 - y),
        "a2<=a3": (k13 - y) - (k14 + x + y),
        "c1<=c2": (m + x) - (k13 + y),
        "c2<=c3": (k13 + y) - (k14 - x - y),
    }
    return [name for name, excess in checks.items() if excess > tol]


def is_feasible(d, tol=FEASIBILITY_TOL):
    return not feasibility_violations(d, tol)


def random_rotation(rng):
    return FrameRotation(special_ortho_group.rvs(4, random_state=rng))


def rotate_tensor(t, frame):
    Q = frame.Q if isinstance(frame, FrameRotation) else FrameRotation(frame).Q
    return CurvatureTensor4(np.einsum("ia,jb,kc,ld,ijkl->abcd", Q, Q, Q, Q, t.comp))


def induced_rotations(Q):
    """3x3 matrices S+, S- with phi'_a = sum_b S+[b, a] phi_b (and likewise for psi)."""
    def block(basis):
        moved = np.einsum("ia,naj,bj->nib", Q, basis, Q)  # Q F Q^T for each form
        return np.einsum("nij,mij->mn", moved, basis) / 4

    return block(SELF_DUAL), block(ANTI_SELF_DUAL)


def _so4_generators():
    gens = []
    for i in range(4):
        for j in range(i + 1, 4):
            g = np.zeros((4, 4))
            g[i, j], g[j, i] = -1.0, 1.0
            gens.append(g)
    return gens


def _skew_coords(w):
    return np.array([w[2, 1], w[0, 2], w[1, 0]])


def _lie_map():
    cols = []
    for g in _so4_generators():
        dp = np.einsum("nij,mij->mn", g @ SELF_DUAL - SELF_DUAL @ g, SELF_DUAL) / 4
        dm = np.einsum("nij,mij->mn", g @ ANTI_SELF_DUAL - ANTI_SELF_DUAL @ g, ANTI_SELF_DUAL) / 4
        cols.append(np.concatenate([_skew_coords(dp), _skew_coords(dm)]))
    return np.array(cols).T


_LIE_MAP = None


def frame_from_pair(s_plus, s_minus):
    """Rotation Q in SO(4) whose induced action on (Lambda+, Lambda-) is (s_plus, s_minus)."""
    global _LIE_MAP
    if _LIE_MAP is None:
        _LIE_MAP = _lie_map()
    target = np.concatenate([Rotation.from_matrix(s_plus).as_rotvec(),
                             Rotation.from_matrix(s_minus).as_rotvec()])
    coeffs = np.linalg.solve(_LIE_MAP, target)
    X = sum(c * g for c, g in zip(coeffs, _so4_generators()))
    return expm(X)


def _proper_eigenbasis(sym):
    w, v = np.linalg.eigh(sym)
    if np.linalg.det(v) < 0:
        v[:, 0] = -v[:, 0]
    return w, v


def read_berger_data(t):
    r = t.comp
    return BergerData(float(r[0, 1, 0, 1]), float(r[0, 2, 0, 2]), float(r[0, 3, 0, 3]),
                      float(-r[0, 1, 2, 3]), float(-r[0, 2, 3, 1]))


class BergerFrame(NamedTuple):
    frame: FrameRotation
    data: BergerData
    degenerate: bool


def find_berger_frame(t, tol=EINSTEIN_TOL, check_tol=FRAME_TOL):
    ric_defect, b_norm = einstein_defect(t)
    if b_norm > tol:
        raise NotEinsteinError(f"|B| = {b_norm:.3e}, Ricci defect {ric_defect:.3e}",
                               ricci_defect=ric_defect, b_norm=b_norm)
    b = tensor_to_blocks(t)
    a, U = _proper_eigenbasis(b.A)
    c, V = _proper_eigenbasis(b.C)
    Q = frame_from_pair(U, V)
    frame = FrameRotation(Q)
    report = verify_berger_properties(t, frame, check_tol)
    data = read_berger_data(rotate_tensor(t, frame))
    if not report.ok:
        raise BergerSearchError(f"frame fails checks: {report.failed()}", best=(frame, data))
    degenerate = bool(np.min(np.diff(a)) < DEGENERACY_TOL or np.min(np.diff(c)) < DEGENERACY_TOL)
    return BergerFrame(frame, data, degenerate)


@dataclass(frozen=True)
class BergerCheck:
    min_plane: bool
    max_plane: bool
    mixed_vanish: bool
    inequalities: bool
    residuals: dict

    @property
    def ok(self):
        return self.min_plane and self.max_plane and self.mixed_vanish and self.inequalities

    def failed(self):
        names = ("min_plane", "max_plane", "mixed_vanish", "inequalities")
        return [n for n in names if not getattr(self, n)]

    def to_dict(self):
        return {"min_plane": self.min_plane, "max_plane": self.max_plane,
                "mixed_vanish": self.mixed_vanish, "inequalities": self.inequalities,
                "residuals": dict(self.residuals)}


def verify_berger_properties(t, frame, tol=FRAME_TOL):
    frame = frame if isinstance(frame, FrameRotation) else FrameRotation(frame)
    kmin, kmax = min_max_sectional(tensor_to_blocks(t))
    r = rotate_tensor(t, frame).comp
    res_min = abs(r[0, 1, 0, 1] - kmin)
    res_max = abs(r[0, 3, 0, 3] - kmax)
    mixed = max(abs(r[i, k, j, k]) for i in range(4) for j in range(4) for k in range(4)
                if i != j and k != i and k != j)
    k12, k13, k14 = r[0, 1, 0, 1], r[0, 2, 0, 2], r[0, 3, 0, 3]
    r1234, r1342, r1423 = r[0, 1, 2, 3], r[0, 2, 3, 1], r[0, 3, 1, 2]
    ineq = max(0.0,
               abs(r1342 - r1234) - (k13 - k12),
               abs(r1423 - r1342) - (k14 - k13),
               abs(r1423 - r1234) - (k14 - k12))
    residuals = {"min_plane": float(res_min), "max_plane": float(res_max),
                 "mixed_vanish": float(mixed), "inequalities": float(ineq)}
    return BergerCheck(bool(res_min <= tol), bool(res_max <= tol), bool(mixed <= tol),
                       bool(ineq <= tol), residuals)


def berger_blocks(d, tol=FEASIBILITY_TOL):
    bad = feasibility_violations(d, tol)
    if bad:
        raise DomainError(f"infeasible Berger data: {', '.join(bad)}")
    m, k13, k14, x, y = d.as_tuple()
    a = 2 * np.array([m - x, k13 - y, k14 + x + y])
    c = 2 * np.array([m + x, k13 + y, k14 - x - y])
    return OperatorBlocks(np.diag(a), np.zeros((3, 3)), np.diag(c))


def berger_to_tensor(d, tol=FEASIBILITY_TOL):
    return blocks_to_tensor(berger_blocks(d, tol))
