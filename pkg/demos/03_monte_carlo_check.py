"""
Checking the closed forms by simulation
=======================================

Play the race forward: the attacker's head start is Poisson (timed) or
negative binomial (time-free), then a random walk decides whether the
remaining gap closes. Estimates should sit within a few standard errors of
the exact values.
"""

from dsrisk.oracle import TrialConfig, nb_exact, poisson_exact, simulate_race

trials = 200_000

# one seed per point: a shared seed reuses the same draws and correlates the errors
for seed, (z, q, r) in enumerate([(1, 0.1, 1.0), (3, 0.2, 2.0), (6, 0.26, 3.5)]):
    kappa = (1 - q) * r
    out = simulate_race(z, q, TrialConfig(trials=trials, seed=seed, kappa=kappa))
    exact = poisson_exact(z, q, kappa)
    print(f"timed z={z} q={q} r={r}: {out.estimate:.5f} +/- {out.std_error:.5f}  exact {exact:.5f}")

for seed, (z, q) in enumerate([(1, 0.1), (6, 0.1), (4, 0.3)], start=100):
    out = simulate_race(z, q, TrialConfig(trials=trials, seed=seed))
    print(f"time-free z={z} q={q}: {out.estimate:.5f} +/- {out.std_error:.5f}  exact {nb_exact(z, q):.5f}")

# same seed, same answer, however many threads run the blocks
cfg = TrialConfig(trials=trials, seed=1, kappa=0.9)
assert simulate_race(2, 0.2, cfg, workers=1) == simulate_race(2, 0.2, cfg, workers=4)
