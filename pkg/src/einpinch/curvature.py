"""Algebraic curvature tensors in dimension four.

Components are stored as ``comp[i, j, k, l] = R(e_i, e_j, e_k, e_l)`` with the
sign convention ``R_{ijij} = K(e_i, e_j)``.  The curvature operator is
represented on the *unnormalized* 2-form basis

    phi_1 = t12 + t34,  phi_2 = t13 + t42,  phi_3 = t14 + t23   (self-dual)
    psi_1 = t12 - t34,  psi_2 = t13 - t42,  psi_3 = t14 - t23   (anti-self-dual)

where ``tij = theta_i ^ theta_j``.  Each basis form has norm sqrt(2), so the
blocks A, B, C are twice the operator in the unit-norm convention; in
exchange the diagonal of A in an adapted frame is exactly
``a_1 = 2(K_12 + R_1234)`` and so on.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidTensorError, NotEinsteinError

SYMMETRY_TOL = 1e-12
EINSTEIN_TOL = 1e-9

MODEL_NAMES = ("S4", "RP4", "CP2", "S2xS2")


def _wedge(i, j):
    w = np.zeros((4, 4))
    w[i, j] = 1.0
    w[j, i] = -1.0
    return w


# rows: phi_1..phi_3, psi_1..psi_3 as antisymmetric 4x4 matrices
TWO_FORM_BASIS = np.array([
    _wedge(0, 1) + _wedge(2, 3),
    _wedge(0, 2) + _wedge(3, 1),
    _wedge(0, 3) + _wedge(1, 2),
    _wedge(0, 1) - _wedge(2, 3),
    _wedge(0, 2) - _wedge(3, 1),
    _wedge(0, 3) - _wedge(1, 2),
])
SELF_DUAL = TWO_FORM_BASIS[:3]
ANTI_SELF_DUAL = TWO_FORM_BASIS[3:]


@dataclass(frozen=True)
class CurvatureTensor4:
    comp: np.ndarray

    def __post_init__(self):
        comp = np.array(self.comp, dtype=float)
        if comp.shape != (4, 4, 4, 4):
            raise InvalidTensorError(f"expected shape (4, 4, 4, 4), got {comp.shape}")
        comp.setflags(write=False)
        object.__setattr__(self, "comp", comp)

    def symmetry_residuals(self):
        """Max absolute violation of antisymmetry, pair symmetry and first Bianchi."""
        r = self.comp
        anti = max(np.abs(r + r.transpose(1, 0, 2, 3)).max(),
                   np.abs(r + r.transpose(0, 1, 3, 2)).max())
        pair = np.abs(r - r.transpose(2, 3, 0, 1)).max()
        # R_ijkl + R_iklj + R_iljk
        bianchi = np.abs(r + r.transpose(0, 2, 3, 1) + r.transpose(0, 3, 1, 2)).max()
        return {"antisymmetry": float(anti), "pair": float(pair), "bianchi": float(bianchi)}

    def check(self, tol=SYMMETRY_TOL):
        scale = max(1.0, float(np.abs(self.comp).max()))
        for name, value in self.symmetry_residuals().items():
            if value > tol * scale:
                raise InvalidTensorError(f"{name} violated by {value:.3e}")
        return self

    def ricci(self):
        return np.einsum("ijkj->ik", self.comp)

    def to_dict(self):
        return {"comp": self.comp.tolist()}

    @classmethod
    def from_dict(cls, data):
        if "comp" not in data:
            raise InvalidTensorError("tensor JSON needs a 'comp' field")
        return cls(np.asarray(data["comp"], dtype=float))


@dataclass(frozen=True)
class OperatorBlocks:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        for name in ("A", "B", "C"):
            value = np.array(getattr(self, name), dtype=float)
            if value.shape != (3, 3):
                raise ValueError(f"block {name} must be 3x3")
            object.__setattr__(self, name, value)

    @property
    def matrix(self):
        """Full 6x6 operator matrix [[A, B], [B^T, C]]."""
        return np.block([[self.A, self.B], [self.B.T, self.C]])

    def b_norm(self):
        return float(np.linalg.norm(self.B))


@dataclass(frozen=True)
class EigenProfile:
    """Ascending eigenvalue triples of A and C."""

    a: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float).reshape(3))
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float).reshape(3))

    @property
    def scalar(self):
        """Scalar curvature R = sum(a) + sum(c)."""
        return float(self.a.sum() + self.c.sum())

    def is_sorted(self):
        return bool(np.all(np.diff(self.a) >= 0) and np.all(np.diff(self.c) >= 0))

    def sorted(self):
        return EigenProfile(np.sort(self.a), np.sort(self.c))

    def to_dict(self):
        return {"a": self.a.tolist(), "c": self.c.tolist()}


@dataclass(frozen=True)
class Plane2:
    """Tangent 2-plane as a pair of unit vectors (self-dual part p, anti-self-dual part q).

    The unit bivector of the plane is ``(sum p_i phi_i + sum q_i psi_i) / 2``.
    """

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float).reshape(3))
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float).reshape(3))

    def bivector(self):
        return (np.tensordot(self.p, SELF_DUAL, 1) + np.tensordot(self.q, ANTI_SELF_DUAL, 1)) / 2

    def complement(self):
        """The orthogonal complement plane (Hodge star flips the sign of q)."""
        return Plane2(self.p, -self.q)

    def basis(self):
        """Orthonormal 4x2 frame (e, f) spanning the plane."""
        u, _, _ = np.linalg.svd(self.bivector())
        e, f = u[:, 0], u[:, 1]
        if (np.outer(e, f) - np.outer(f, e)).ravel() @ self.bivector().ravel() < 0:
            f = -f
        return np.stack([e, f], axis=1)

    @classmethod
    def from_vectors(cls, e, f):
        e = np.asarray(e, dtype=float)
        f = np.asarray(f, dtype=float)
        w = np.outer(e, f) - np.outer(f, e)
        w = w * np.sqrt(2.0) / np.linalg.norm(w)
        coeffs = np.tensordot(TWO_FORM_BASIS, w, axes=([1, 2], [0, 1])) / 2
        return cls(coeffs[:3], coeffs[3:])


def tensor_to_blocks(t, tol=SYMMETRY_TOL):
    t.check(tol)
    m = np.einsum("aij,ijkl,bkl->ab", TWO_FORM_BASIS, t.comp, TWO_FORM_BASIS) / 4
    m = (m + m.T) / 2
    return OperatorBlocks(m[:3, :3], m[:3, 3:], m[3:, 3:])


def blocks_to_tensor(b):
    """Inverse of :func:`tensor_to_blocks`.

    Bianchi holds only when trace(A) == trace(C); that is left to the caller.
    """
    comp = np.einsum("ab,aij,bkl->ijkl", b.matrix, TWO_FORM_BASIS, TWO_FORM_BASIS) / 4
    return CurvatureTensor4(comp)


def _require_einstein(b, tol):
    bn = b.b_norm()
    if bn > tol:
        raise NotEinsteinError(f"|B| = {bn:.3e} exceeds {tol:.1e}", b_norm=bn)


def blocks_to_profile(b, tol=EINSTEIN_TOL):
    _require_einstein(b, tol)
    return EigenProfile(np.linalg.eigvalsh(b.A), np.linalg.eigvalsh(b.C))


def _check_unit(v, name):
    n = np.linalg.norm(v, axis=-1)
    if np.any(np.abs(n - 1.0) > 1e-9):
        raise DomainError(f"{name} must be a unit vector")


def sectional_curvature(b, plane):
    _check_unit(plane.p, "p")
    _check_unit(plane.q, "q")
    p, q = plane.p, plane.q
    return float((p @ b.A @ p + 2 * p @ b.B @ q + q @ b.C @ q) / 4)


def sectional_curvatures(b, p, q):
    """Vectorised K over stacks of unit vectors p, q of shape (n, 3)."""
    p = np.atleast_2d(p)
    q = np.atleast_2d(q)
    _check_unit(p, "p")
    _check_unit(q, "q")
    return (np.einsum("ni,ij,nj->n", p, b.A, p)
            + 2 * np.einsum("ni,ij,nj->n", p, b.B, q)
            + np.einsum("ni,ij,nj->n", q, b.C, q)) / 4


def tensor_sectional(t, e, f):
    """K of span(e, f) straight from the components, for stacks e, f of shape (n, 4).

    Used as an oracle independent of the block decomposition.
    """
    e = np.atleast_2d(e)
    f = np.atleast_2d(f)
    num = np.einsum("ijkl,ni,nj,nk,nl->n", t.comp, e, f, e, f)
    area2 = (e * e).sum(1) * (f * f).sum(1) - (e * f).sum(1) ** 2
    return num / area2


def min_max_sectional(b, tol=EINSTEIN_TOL):
    prof = blocks_to_profile(b, tol)
    return (float(prof.a[0] + prof.c[0]) / 4, float(prof.a[2] + prof.c[2]) / 4)


def einstein_defect(t):
    """(max |Ric - delta|, |B|_F) for a tensor normalised to Ric = 1."""
    ric = t.ricci()
    b = tensor_to_blocks(t)
    return float(np.abs(ric - np.eye(4)).max()), b.b_norm()


def constant_curvature(k):
    d = np.eye(4)
    return CurvatureTensor4(k * (np.einsum("ik,jl->ijkl", d, d) - np.einsum("il,jk->ijkl", d, d)))


def model_space(name):
    """Curvature tensor of a model Einstein space normalised to Ric = 1."""
    if name in ("S4", "RP4"):
        return constant_curvature(1.0 / 3.0)
    if name == "CP2":
        # Fubini-Study, holomorphic curvature H = 2/3, J e1 = e2, J e3 = e4
        h = 2.0 / 3.0
        d = np.eye(4)
        J = np.zeros((4, 4))
        J[1, 0], J[0, 1], J[3, 2], J[2, 3] = 1.0, -1.0, 1.0, -1.0
        comp = (np.einsum("ik,jl->ijkl", d, d) - np.einsum("il,jk->ijkl", d, d)
                + np.einsum("ik,jl->ijkl", J, J) - np.einsum("il,jk->ijkl", J, J)
                + 2 * np.einsum("ij,kl->ijkl", J, J))
        return CurvatureTensor4(h / 4 * comp)
    if name == "S2xS2":
        comp = np.zeros((4, 4, 4, 4))
        for i, j in ((0, 1), (2, 3)):
            comp[i, j, i, j] = comp[j, i, j, i] = 1.0
            comp[i, j, j, i] = comp[j, i, i, j] = -1.0
        return CurvatureTensor4(comp)
    raise KeyError(f"unknown model space {name!r}; choose from {MODEL_NAMES}")


def random_einstein_blocks(rng, scale=1.0):
    """Symmetric A, C with i.i.d. uniform entries, shifted to trace 2; B = 0."""
    def draw():
        m = rng.uniform(-scale, scale, (3, 3))
        m = (m + m.T) / 2
        return m + (2.0 - np.trace(m)) / 3 * np.eye(3)

    A = draw()
    C = draw()
    return OperatorBlocks(A, np.zeros((3, 3)), C)


def random_unit_vectors(rng, n, dim=3):
    v = rng.standard_normal((n, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)
