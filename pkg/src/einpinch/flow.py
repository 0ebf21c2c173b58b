"""Ricci-flow ODE for the eigenvalues of A and C, and pinching-line checks.

    a1' = a1^2 + 2 a2 a3,  a2' = a2^2 + 2 a1 a3,  a3' = a3^2 + 2 a1 a2

and the same for c.  Summing gives (sum a)' = (sum a)^2, so Einstein data with
sum a = sum c = 2 blows up at t = 1/2 and the self-similar solution is
a_i(t) = a_i(0) / (1 - 2t).
"""

import csv
from dataclasses import dataclass

import numpy as np

from .curvature import EigenProfile
from .errors import BlowUpError, DomainError
from .lemmas import invariant_arrays

BLOWUP_GUARD = 1e12
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class FlowState:
    profile: EigenProfile
    t: float = 0.0


@dataclass(frozen=True)
class PinchLine:
    """Half-space a1 + c1 >= (kappa + delta*t) R."""

    kappa: float
    delta: float


def _triple_rhs(v):
    v1, v2, v3 = v[..., 0], v[..., 1], v[..., 2]
    return np.stack([v1 * v1 + 2 * v2 * v3, v2 * v2 + 2 * v1 * v3, v3 * v3 + 2 * v1 * v2], axis=-1)


def ode_rhs(p):
    """Time derivatives (da, dc) of a profile."""
    return _triple_rhs(p.a), _triple_rhs(p.c)


def _rhs6(y):
    return np.concatenate([_triple_rhs(y[:3]), _triple_rhs(y[3:])])


def _rk4_step(y, h):
    k1 = _rhs6(y)
    k2 = _rhs6(y + 0.5 * h * k1)
    k3 = _rhs6(y + 0.5 * h * k2)
    k4 = _rhs6(y + h * k3)
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


@dataclass
class Trajectory:
    t: np.ndarray
    a: np.ndarray   # (n, 3)
    c: np.ndarray   # (n, 3)

    @property
    def R(self):
        return self.a.sum(1) + self.c.sum(1)

    @property
    def I(self):
        return invariant_arrays(np.sort(self.a, 1), np.sort(self.c, 1))

    def final(self):
        return EigenProfile(self.a[-1], self.c[-1])

    def ordering_events(self):
        """Times at which a component order changes (an eigenvalue crossing)."""
        events = []
        for name, arr in (("a", self.a), ("c", self.c)):
            order = np.argsort(arr, axis=1, kind="stable")
            changed = np.any(order[1:] != order[:-1], axis=1)
            events += [(name, float(self.t[i + 1])) for i in np.flatnonzero(changed)]
        return sorted(events, key=lambda e: e[1])

    def write_csv(self, path_or_file):
        header = ["t", "a1", "a2", "a3", "c1", "c2", "c3", "R", "I"]
        rows = np.column_stack([self.t, self.a, self.c, self.R, self.I])
        if hasattr(path_or_file, "write"):
            _write_rows(path_or_file, header, rows)
        else:
            with open(path_or_file, "w", newline="") as fh:
                _write_rows(fh, header, rows)


def _write_rows(fh, header, rows):
    w = csv.writer(fh)
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) for v in row])


def blowup_horizon(p):
    """1 / max(sum a, sum c) when positive, else inf: the traces blow up there."""
    top = max(p.a.sum(), p.c.sum())
    return 1.0 / top if top > 0 else np.inf


def integrate(state, t_end, dt, guard=BLOWUP_GUARD):
    """Classical fourth-order Runge-Kutta with a fixed step; the last step is shortened."""
    if dt <= 0:
        raise DomainError("dt must be positive")
    t0 = state.t
    if t_end < t0:
        raise DomainError("t_end must not precede the initial time")
    horizon = t0 + blowup_horizon(state.profile)
    if t_end >= horizon:
        raise DomainError(f"t_end = {t_end} is not before the trace blow-up time {horizon:.6g}")
    n = int(np.ceil((t_end - t0) / dt - 1e-9))
    ts = np.empty(n + 1)
    ys = np.empty((n + 1, 6))
    ts[0] = t0
    ys[0] = np.concatenate([state.profile.a, state.profile.c])
    for i in range(n):
        h = min(dt, t_end - ts[i])
        ys[i + 1] = _rk4_step(ys[i], h)
        ts[i + 1] = ts[i] + h
        peak = np.abs(ys[i + 1]).max()
        if not np.isfinite(peak) or peak > guard:
            partial = Trajectory(ts[: i + 1], ys[: i + 1, :3], ys[: i + 1, 3:])
            k = int(np.argmax(np.abs(ys[i])))
            rate = _rhs6(ys[i])[k]
            # y' ~ y^2 near blow-up, so y / y' estimates the remaining time
            t_est = ts[i] + (ys[i][k] / rate if ys[i][k] * rate > 0 else np.inf)
            raise BlowUpError(f"blow-up guard hit at t = {ts[i + 1]:.6g}; "
                              f"estimated blow-up time {t_est:.6g}", t_est, partial)
    return Trajectory(ts, ys[:, :3], ys[:, 3:])


def _require_normalized(p, tol=1e-9):
    if abs(p.a.sum() - 2.0) > tol or abs(p.c.sum() - 2.0) > tol:
        raise DomainError("profile must satisfy sum(a) = sum(c) = 2")


def _rel_dev(num, exact):
    scale = np.maximum(np.abs(exact).max(axis=-1), 1e-300)
    return (np.abs(num - exact).max(axis=-1) / scale).max()


def self_similar_residual(p, t_end=0.4, dt=1e-4):
    """Max relative deviation of the flow from a(0)/(1-2t), c(0)/(1-2t)."""
    _require_normalized(p)
    traj = integrate(FlowState(p), t_end, dt)
    scale = 1.0 / (1.0 - 2.0 * traj.t)[:, None]
    return float(max(_rel_dev(traj.a, p.a * scale), _rel_dev(traj.c, p.c * scale)))


def scalar_evolution_check(p, t_end=0.4, dt=1e-4):
    """Max relative deviation of R(t) from 4/(1-2t)."""
    _require_normalized(p)
    traj = integrate(FlowState(p), t_end, dt)
    exact = 4.0 / (1.0 - 2.0 * traj.t)
    return float(np.max(np.abs(traj.R - exact) / exact))


def trace_identity_residual(traj):
    """Max relative deviation of sum(a), sum(c) from S0/(1 - S0 t)."""
    dev = 0.0
    for arr in (traj.a, traj.c):
        s0 = arr[0].sum()
        exact = s0 / (1.0 - s0 * (traj.t - traj.t[0]))
        dev = max(dev, float(np.max(np.abs(arr.sum(1) - exact) / np.maximum(np.abs(exact), 1e-300))))
    return dev


def _min_rate(values, rates, tol=1e-12):
    """Derivative of min(values): the smallest rate among the tied minimal entries."""
    lo = values.min()
    return rates[values <= lo + tol].min()


def boundary_derivative_gap(p, line, t):
    """d/dt(a1 + c1) - d/dt[(kappa + delta t) R] at a point of the pinching line."""
    R = p.scalar
    level = (line.kappa + line.delta * t) * R
    a1c1 = p.a.min() + p.c.min()
    if abs(a1c1 - level) > BOUNDARY_TOL * max(1.0, abs(R)):
        raise DomainError(f"profile is off the pinching line by {a1c1 - level:.3e}")
    da, dc = ode_rhs(p)
    lhs = _min_rate(p.a, da) + _min_rate(p.c, dc)
    dR = da.sum() + dc.sum()
    rhs = (line.kappa + line.delta * t) * dR + line.delta * R
    return float(lhs - rhs)


def line_through(p, delta, t=0.0):
    """The pinching line with rate ``delta`` that passes through ``p`` at time t."""
    return PinchLine((p.a.min() + p.c.min()) / p.scalar - delta * t, delta)
