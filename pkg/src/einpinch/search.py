"""Constrained falsification searches for the two pinching lemmas.

A region is the set of Berger data (m, k13, x, y) with k14 = 1 - m - k13,
``lo(m) <= k13 <= (1 - m)/2`` and (x, y) in the parallelogram
``|x - y| <= k13 - m``, ``|x + 2y| <= k14 - k13`` cut out by the eigenvalue
orderings.  In the coordinates p = x - y, q = x + 2y that parallelogram is a
box, so uniform (x, y) samples come from uniform (p, q) directly.

Samples are drawn in fixed-size chunks, each with its own spawned seed, so
results do not depend on the number of worker threads.  Reductions order by
(margin, global sample index).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .berger import BergerData
from .constants import EPS0, M1, k_s
from .errors import DomainError, InfeasibleRegionError
from .lemmas import (
    LemmaReport,
    invariant_arrays,
    is_case1,
    lemma22_bounds,
    lemma22_proof_case,
    lemma41_bounds,
    profile_arrays,
)

CASES = ("case1", "case2")
ABLATED_CAP = 2.0


@dataclass(frozen=True)
class Region:
    m_lo: float
    m_hi: float
    cap: Optional[float] = None       # upper bound on k14
    s: Optional[float] = None         # enforce k13 + s*m >= K_s
    ks: float = 0.0

    def k13_bounds(self, m):
        lo = np.asarray(m, dtype=float)
        if self.cap is not None:
            lo = np.maximum(lo, 1.0 - m - self.cap)
        if self.s is not None:
            lo = np.maximum(lo, self.ks - self.s * m)
        return lo, (1.0 - m) / 2.0

    def contains(self, m, k13, x, y, tol=1e-9):
        lo, hi = self.k13_bounds(m)
        k14 = 1.0 - m - k13
        return ((m >= self.m_lo - tol) & (m <= self.m_hi + tol)
                & (k13 >= lo - tol) & (k13 <= hi + tol)
                & (np.abs(x - y) <= k13 - m + tol)
                & (np.abs(x + 2 * y) <= k14 - k13 + tol))

    def _lower_pieces(self):
        pieces = [(1.0, 0.0)]  # k13 >= slope*m + intercept
        if self.cap is not None:
            pieces.append((-1.0, 1.0 - self.cap))
        if self.s is not None:
            pieces.append((-self.s, self.ks))
        return pieces

    @staticmethod
    def _upper_pieces(case2):
        # k13 <= (1-m)/2; the a2 < 0 branch also needs k13 < (1-2m)/4
        return [(-0.5, 0.5), (-0.5, 0.25)] if case2 else [(-0.5, 0.5)]

    def sample_mk(self, rng, n, case2=False):
        """n points (m, k13), uniform on the admissible set, by rejection from a box."""
        lows, highs = self._lower_pieces(), self._upper_pieces(case2)
        cons = [(sl - su, iu - il) for sl, il in lows for su, iu in highs]
        interval = _m_interval(self.m_lo, self.m_hi, cons)
        if interval is None:
            return np.empty(0), np.empty(0)
        m_lo, m_hi = interval
        lo_box = min(sl * mm + ic for sl, ic in lows for mm in (m_lo, m_hi))
        hi_box = max(min(su * mm + iu for su, iu in highs) for mm in (m_lo, m_hi))
        ms, ks = [], []
        have = 0
        while have < n:
            want = max(2 * (n - have), 1024)
            m = rng.uniform(m_lo, m_hi, want)
            k13 = rng.uniform(lo_box, hi_box, want)
            lo, hi = self.k13_bounds(m)
            if case2:
                hi = np.minimum(hi, (1.0 - 2 * m) / 4.0)
            ok = (k13 >= lo) & (k13 <= hi)
            ms.append(m[ok])
            ks.append(k13[ok])
            have += int(ok.sum())
        return np.concatenate(ms)[:n], np.concatenate(ks)[:n]

    def sample(self, rng, n, kind="uniform"):
        """Arrays (m, k13, x, y) of n region points.

        ``kind="case2"`` draws (x, y) only from the part where a2 < 0 and then
        reverses orientation (x, y -> -x, -y, which exchanges a and c) for a
        random half, so every point lies in lemma case (2).
        """
        if kind == "uniform":
            m, k13 = self.sample_mk(rng, n)
            u, v = k13 - m, 1.0 - m - 2 * k13
            p = rng.uniform(-1.0, 1.0, n) * u
            q = rng.uniform(-1.0, 1.0, n) * v
            return m, k13, (2 * p + q) / 3, (q - p) / 3
        if kind != "case2":
            raise ValueError(f"unknown sample kind {kind!r}")
        out = [[], [], [], []]
        have = 0
        while have < n:
            want = max(2 * (n - have), 1024)
            m, k13 = self.sample_mk(rng, want, case2=True)
            if m.size == 0:
                break
            u, v = k13 - m, 1.0 - m - 2 * k13
            p = rng.uniform(-1.0, 1.0, want) * u
            q_lo = np.maximum(-v, p + 3 * k13)
            ok = q_lo < v
            q = q_lo + rng.uniform(0.0, 1.0, want) * (v - q_lo)
            sign = np.where(rng.uniform(size=want) < 0.5, 1.0, -1.0)
            x, y = sign * (2 * p + q) / 3, sign * (q - p) / 3
            for store, arr in zip(out, (m, k13, x, y)):
                store.append(arr[ok])
            have += int(ok.sum())
        return tuple(np.concatenate(arr)[:n] for arr in out)

    # -- unit-cube chart used by the local refinement ----------------------

    def _q_interval(self, p, k13, v, case):
        if case == "case1":
            return max(-v, p - 3 * k13), min(v, p + 3 * k13)
        return max(-v, p + 3 * k13), v

    def from_cube(self, t, case):
        t1, t2, t3, t4 = (min(max(float(ti), 0.0), 1.0) for ti in t)
        m = self.m_lo + t1 * (self.m_hi - self.m_lo)
        lo, hi = self.k13_bounds(m)
        lo, hi = float(lo), float(hi)
        if hi < lo:
            return None
        k13 = lo + t2 * (hi - lo)
        u, v = k13 - m, 1.0 - m - 2 * k13
        p = -u + 2 * u * t3
        q_lo, q_hi = self._q_interval(p, k13, v, case)
        if q_hi < q_lo:
            return None
        q = q_lo + t4 * (q_hi - q_lo)
        return m, k13, (2 * p + q) / 3, (q - p) / 3

    def to_cube(self, m, k13, x, y, case):
        def frac(val, lo, hi):
            return 0.0 if hi - lo <= 0 else min(max((val - lo) / (hi - lo), 0.0), 1.0)

        if case == "case2" and k13 - y >= 0:
            x, y = -x, -y  # bring a c2 < 0 point to the a2 < 0 branch
        lo, hi = self.k13_bounds(m)
        u, v = k13 - m, 1.0 - m - 2 * k13
        p, q = x - y, x + 2 * y
        q_lo, q_hi = self._q_interval(p, k13, v, case)
        return np.array([frac(m, self.m_lo, self.m_hi), frac(k13, float(lo), float(hi)),
                         frac(p, -u, u), frac(q, q_lo, q_hi)])


def _m_interval(m_lo, m_hi, constraints):
    """Intersect [m_lo, m_hi] with constraints alpha*m <= beta."""
    lo, hi = m_lo, m_hi
    for alpha, beta in constraints:
        if alpha > 0:
            hi = min(hi, beta / alpha)
        elif alpha < 0:
            lo = max(lo, beta / alpha)
        elif beta < 0:
            return None
    return (lo, hi) if lo <= hi else None


def lemma22_region(eps, cap=M1):
    # k13 <= (1-m)/2 against lo(m): m <= 1/3 and (1-m)/2 <= cap
    interval = _m_interval(-math.inf, -eps, [(3.0, 1.0), (-1.0, 2 * cap - 1.0)])
    if interval is None:
        raise InfeasibleRegionError(f"no Berger data with K12 <= -{eps} and K14 <= {cap}")
    return Region(interval[0], interval[1], cap=cap)


def lemma41_region(s, eps):
    ks = k_s(s)
    interval = _m_interval(0.0, EPS0 - eps, [(3.0, 1.0), (0.5 - s, 0.5 - ks)])
    if interval is None:
        raise InfeasibleRegionError(f"no Berger data for s={s}, eps={eps}")
    return Region(interval[0], interval[1], s=s, ks=ks)


def generic_region(m_lo=-1.0, m_hi=1.0 / 3.0):
    """All feasible Berger data with K12 in [m_lo, m_hi]."""
    return Region(m_lo, min(m_hi, 1.0 / 3.0))


def sample_berger_data(rng, n, region=None, kind="uniform"):
    region = region or generic_region()
    return [BergerData(m, k13, 1.0 - m - k13, x, y)
            for m, k13, x, y in zip(*region.sample(rng, n, kind))]


# -- search -----------------------------------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    samples: int = 1_000_000
    case2_samples: Optional[int] = None   # default: samples // 4
    refinements: int = 100                # local descents per lemma case
    seed: int = 0
    threads: int = 1
    chunk_size: int = 1 << 16

    @property
    def n_case2(self):
        return self.samples // 4 if self.case2_samples is None else self.case2_samples


@dataclass
class _Candidates:
    margins: np.ndarray = field(default_factory=lambda: np.empty(0))
    index: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    points: np.ndarray = field(default_factory=lambda: np.empty((0, 4)))
    count: int = 0

    def merge(self, other, keep):
        margins = np.concatenate([self.margins, other.margins])
        index = np.concatenate([self.index, other.index])
        points = np.concatenate([self.points, other.points])
        order = np.lexsort((index, margins))[:keep]
        return _Candidates(margins[order], index[order], points[order], self.count + other.count)


def _evaluate_chunk(region, bounds, seed_seq, size, kind, offset, keep):
    rng = np.random.default_rng(seed_seq)
    m, k13, x, y = region.sample(rng, size, kind)
    a, c = profile_arrays(m, k13, x, y)
    I = invariant_arrays(a, c)
    case1 = is_case1(a, c)
    index = offset + np.arange(m.size, dtype=np.int64)
    pts = np.stack([m, k13, x, y], axis=1)
    out = {}
    for label, mask in (("case1", case1), ("case2", ~case1)):
        margin = I[mask] - bounds[label]
        sel = np.lexsort((index[mask], margin))[:keep]
        out[label] = _Candidates(margin[sel], index[mask][sel], pts[mask][sel], int(mask.sum()))
    return out


def _refine(region, bound, case, start):
    def objective(t):
        pt = region.from_cube(t, case)
        if pt is None:
            return 1e6
        m, k13, x, y = pt
        k14 = 1.0 - m - k13
        a1, a2, a3 = 2 * (m - x), 2 * (k13 - y), 2 * (k14 + x + y)
        c1, c2, c3 = 2 * (m + x), 2 * (k13 + y), 2 * (k14 - x - y)
        in_case1 = a2 >= 0 and c2 >= 0
        if in_case1 != (case == "case1"):
            return 1e6
        return (c2 - c1) * c3 + (c3 - c1) * c2 + (a2 - a1) * a3 + (a3 - a1) * a2 - bound

    t0 = region.to_cube(*start, case)
    res = minimize(objective, t0, method="Nelder-Mead", bounds=[(0.0, 1.0)] * 4,
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 2000})
    pt = region.from_cube(res.x, case)
    if pt is None or res.fun >= 1e6:
        return None
    return float(res.fun), pt


def run_search(region, bounds, cfg, lemma, params):
    """Minimum margin over ``region`` for each lemma case, plus the overall worst case."""
    keep = max(cfg.refinements, 1)
    uni_ss, strat_ss = np.random.SeedSequence(cfg.seed).spawn(2)
    jobs = []
    offset = 0
    for kind, total, ss in (("uniform", cfg.samples, uni_ss), ("case2", cfg.n_case2, strat_ss)):
        n_chunks = math.ceil(total / cfg.chunk_size) if total > 0 else 0
        for child, k in zip(ss.spawn(n_chunks), range(n_chunks)):
            size = min(cfg.chunk_size, total - k * cfg.chunk_size)
            jobs.append((child, size, kind, offset))
            offset += size

    def work(job):
        child, size, kind, off = job
        return _evaluate_chunk(region, bounds, child, size, kind, off, keep)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(job) for job in jobs]

    by_case = {}
    for label in CASES:
        cand = _Candidates()
        for res in results:
            cand = cand.merge(res[label], keep)
        if cand.count == 0:
            by_case[label] = None
            continue
        best_margin = float(cand.margins[0])
        best_pt = tuple(cand.points[0])
        for i in range(min(cfg.refinements, cand.margins.size)):
            refined = _refine(region, bounds[label], label, tuple(cand.points[i]))
            if refined is not None and refined[0] < best_margin:
                best_margin, best_pt = refined
        m, k13, x, y = (float(v) for v in best_pt)
        data = BergerData(m, k13, 1.0 - m - k13, x, y)
        by_case[label] = LemmaReport(lemma, label, best_margin + bounds[label], bounds[label],
                                     best_margin, data, samples=cand.count, params=dict(params))
        if lemma == "L22":
            by_case[label].proof_case = lemma22_proof_case(data)

    present = [by_case[c] for c in CASES if by_case[c] is not None]
    worst = min(present, key=lambda r: r.margin)
    return replace(worst, samples=sum(r.samples for r in present), by_case=by_case)


def lemma22_search(eps, cfg=SearchConfig(), ablate_upper_bound=False):
    if not 0 < eps < 1.0 / 3.0:
        raise DomainError("eps must lie in (0, 1/3)")
    cap = ABLATED_CAP if ablate_upper_bound else M1
    region = lemma22_region(eps, cap)
    params = {"eps": eps, "cap": cap, "ablate_upper_bound": ablate_upper_bound}
    return run_search(region, lemma22_bounds(eps), cfg, "L22", params)


def lemma41_search(s, eps, cfg=SearchConfig()):
    if s < 0:
        raise DomainError("s must be nonnegative")
    if not 0 < eps <= EPS0:
        raise DomainError("eps must lie in (0, eps0]")
    region = lemma41_region(s, eps)
    return run_search(region, lemma41_bounds(eps), cfg, "L41", {"s": s, "eps": eps})


def empirical_rate(report):
    """Smallest I / R seen in a search, with R = 4 for Ric = 1 data."""
    values = [r.I_value for r in report.by_case.values() if r is not None]
    return min(values) / 4.0
