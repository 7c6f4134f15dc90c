"""Independent oracles used to pin expected values before the engine existed.

Everything here recomputes the pipeline with plain numpy double loops and
closed-form statistics -- no imports from cofact.matching or
cofact.diagnostics -- so the numbers frozen into the test suite come from a
second, independent path. The synthetic datasets themselves come from the
committed generator specs (their draws are pinned by the documented
counter-based RNG, not by library internals).

Run:  python3 tools/calibration_oracles.py
"""

from __future__ import annotations

import numpy as np

from cofact.causal.rng import CounterStream
from cofact.causal.scm import generate
from cofact.fixtures import fixture_spec


def brute_ratio(name: str, k: int) -> tuple[float, float, float]:
    """(naive gap, counterfactual gap, ratio) for filter T=1, covariate C,
    outcome H, computed with explicit loops over the raw columns."""
    dataset, _ = generate(fixture_spec(name))
    t = np.array([v == "1" for v in dataset.column("T")])
    c = dataset.column("C").astype(float)
    h = dataset.column("H").astype(float)

    included = np.flatnonzero(t)
    excluded = np.flatnonzero(~t)

    # full-population z-scoring of the single covariate
    z = (c - c.mean()) / c.std(ddof=1)

    scores = np.empty(len(excluded))
    for row, e in enumerate(excluded):
        best = np.inf
        for i in included:
            gap = abs(z[e] - z[i])
            if gap < best:
                best = gap
        scores[row] = best
    order = np.lexsort((excluded, scores))
    chosen = excluded[order[:k]]

    naive = h[included].mean() - h[excluded].mean()
    counter = h[included].mean() - h[chosen].mean()
    return naive, counter, abs(counter) / abs(naive)


def outcome_sd(name: str) -> float:
    dataset, _ = generate(fixture_spec(name))
    return float(np.std(dataset.column("H").astype(float), ddof=1))


def scan_default_k() -> None:
    print("== default-k scan (filter T=1, covariate C, outcome H) ==")
    for name in ("fig1b_confounded", "fig1a_direct"):
        dataset, _ = generate(fixture_spec(name))
        t = np.array([v == "1" for v in dataset.column("T")])
        n_inc, n_exc = int(t.sum()), int((~t).sum())
        print(f"{name}: |included|={n_inc} |excluded|={n_exc} "
              f"outcome sd={outcome_sd(name):.4f}")
        for divisor in (2, 3, 4, 6, 8, 10):
            k = max(1, min(n_inc, n_exc // divisor))
            naive, counter, ratio = brute_ratio(name, k)
            print(f"  k=|exc|//{divisor}={k}: naive={naive:+.4f} "
                  f"cf={counter:+.4f} ratio={ratio:.4f}")
    print()


def latent_outcome_correlation() -> None:
    """corr(T latent, H) on fig1b at the committed spec, plus a large-n
    Monte Carlo estimate of the population value for context."""
    dataset, truth = generate(fixture_spec("fig1b_confounded"))
    h = dataset.column("H").astype(float)
    fixture_corr = float(np.corrcoef(truth.treatment_latent, h)[0, 1])

    n = 400_000
    c = CounterStream(7, "mc:c").normals(n)
    noise_t = CounterStream(7, "mc:t").normals(n)
    noise_h = CounterStream(7, "mc:h").normals(n)
    latent = c + noise_t
    outcome = c + noise_h  # treatment weight into H is 0 in this scenario
    mc_corr = float(np.corrcoef(latent, outcome)[0, 1])
    print("== fig1b corr(T latent, H) ==")
    print(f"fixture (n=2000, seed 42): {fixture_corr:.4f}")
    print(f"Monte Carlo (n=400000):    {mc_corr:.4f}  (population 0.5)")
    print()


def cohens_d_draws() -> None:
    """Fixed-seed Gaussian two-sample effect size used by the diagnostics
    test: two 500-draw samples, means 0 and 1, unit sd."""
    a = CounterStream(1234, "cohens:a").normals(500)
    b = CounterStream(1234, "cohens:b").normals(500) + 1.0
    va, vb = a.var(ddof=1), b.var(ddof=1)
    sd = np.sqrt(((len(a) - 1) * va + (len(b) - 1) * vb) / (len(a) + len(b) - 2))
    d = (a.mean() - b.mean()) / sd
    print("== cohens_d oracle (500 vs 500, true gap -1) ==")
    print(f"mean_a={a.mean():+.6f} mean_b={b.mean():+.6f} d={d:.6f}")
    print()


def fig1a_zero_weight_independence() -> None:
    """With every weight 0, treatment and outcome should be uncorrelated."""
    spec = fixture_spec("fig1a_direct")
    import dataclasses
    from cofact.causal.graph import CausalGraph, Edge
    zero_graph = CausalGraph(
        nodes=spec.graph.nodes,
        edges=tuple(dataclasses.replace(e, weight=0.0) for e in spec.graph.edges),
        kind=spec.graph.kind,
    )
    zero = dataclasses.replace(spec, graph=zero_graph)
    dataset, _ = generate(zero)
    t = np.array([v == "1" for v in dataset.column("T")], dtype=float)
    h = dataset.column("H").astype(float)
    print("== zero-weight independence ==")
    print(f"corr(T, H) = {float(np.corrcoef(t, h)[0, 1]):+.4f} (expect |r| < 0.05)")
    print()


if __name__ == "__main__":
    scan_default_k()
    latent_outcome_correlation()
    cohens_d_draws()
    fig1a_zero_weight_independence()
