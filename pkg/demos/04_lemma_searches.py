"""Falsification searches for the two pinching inequalities.

Each search samples the hypothesis region uniformly, adds draws aimed at the
thin part where a2 < 0 or c2 < 0, and polishes the worst points with
Nelder-Mead.  A negative margin would be a counterexample.
"""

from einpinch.search import SearchConfig, empirical_rate, lemma22_search, lemma41_search

cfg = SearchConfig(samples=200_000, refinements=20, seed=0)

for eps in (0.01, 0.05, 0.1):
    rep = lemma22_search(eps, cfg)
    cases = ", ".join(f"{k} {v.margin:.4f}" for k, v in rep.by_case.items())
    print(f"negative side, eps={eps}: {cases}; min I/R ~ {empirical_rate(rep):.4f}")

for s in (0.0, 0.5, 1.0):
    rep = lemma41_search(s, 0.01, cfg)
    cases = ", ".join(f"{k} {v.margin:.4f}" for k, v in rep.by_case.items() if v is not None)
    print(f"positive side, s={s}: {cases}")

# dropping the upper bound on K14 breaks the first inequality
rep = lemma22_search(0.3, cfg, ablate_upper_bound=True)
print(f"K14 <= 2 instead: margin {rep.margin:.3f} at {rep.argmin.to_dict()}")
