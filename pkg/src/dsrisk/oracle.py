"""Independent checks on the closed forms in :mod:`dsrisk.risk`.

The exact oracles are finite sums over the number of blocks the attacker
has mined when the honest chain reaches ``z``, each term weighted by the
gambler's-ruin chance ``(q/p)^d`` of erasing the remaining deficit ``d``.
They use only ``math`` and never touch :mod:`dsrisk.specfun`.

The simulator plays the race forward with random numbers. Trials are cut
into fixed blocks; block ``b`` draws from its own stream, spawned from
``SeedSequence(seed)`` with key ``b``, so results do not depend on how many
threads run them. Win counts are reduced by integer addition.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from dsrisk.errors import DomainError
from dsrisk.risk import as_share, check_confirmations

__all__ = [
    "TrialConfig",
    "RaceOutcome",
    "nb_exact",
    "poisson_exact",
    "simulate_race",
    "BLOCK_SIZE",
]

BLOCK_SIZE = 1 << 16
# below this mean the Poisson head start is sampled by CDF inversion
POISSON_INVERSION_MAX = 30.0


def nb_exact(z, share):
    """Time-free catch-up probability as a negative-binomial sum.

    While the honest side mines ``z`` blocks the attacker mines ``k`` with
    probability ``C(z+k-1, k) p^z q^k``. For ``k < z`` the attacker still
    has to close a gap of ``z - k``; for ``k >= z`` it has already caught up.
    """
    z = check_confirmations(z)
    share = as_share(share)
    q, p = share.q, share.p
    log_p, log_q = math.log(p), math.log(q)
    behind = []
    catch = []
    for k in range(z):
        log_c = math.lgamma(z + k) - math.lgamma(k + 1) - math.lgamma(z)
        weight = math.exp(log_c + z * log_p + k * log_q)
        behind.append(weight)
        catch.append(weight * (q / p) ** (z - k))
    return math.fsum(catch) + (1.0 - math.fsum(behind))


def poisson_exact(z, share, kappa):
    """Time-conditioned catch-up probability as a Poisson sum.

    In relative time ``kappa`` the attacker mines ``N ~ Poisson(kappa z q / p)``
    blocks. Sum ``P(N = k) (q/p)^(z-k)`` over ``k < z`` and add ``P(N >= z)``.
    """
    z = check_confirmations(z)
    share = as_share(share)
    if not math.isfinite(kappa) or kappa < 0:
        raise DomainError(f"kappa must be finite and non-negative, got {kappa!r}")
    q, p = share.q, share.p
    lam = kappa * z * q / p
    if lam == 0.0:
        pmf = [1.0] + [0.0] * (z - 1)
    else:
        log_lam = math.log(lam)
        log_term = -lam
        pmf = []
        for k in range(z):
            pmf.append(math.exp(log_term))
            log_term += log_lam - math.log(k + 1)
    catch = [w * (q / p) ** (z - k) for k, w in enumerate(pmf)]
    return math.fsum(catch) + (1.0 - math.fsum(pmf))


@dataclass(frozen=True)
class TrialConfig:
    """Monte Carlo settings. ``kappa=None`` selects the time-free race."""

    trials: int
    seed: int
    max_deficit: int = 200
    kappa: Optional[float] = None

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError(f"trials must be at least 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.max_deficit < 1:
            raise DomainError(f"max_deficit must be positive, got {self.max_deficit}")
        if self.kappa is not None and (not math.isfinite(self.kappa) or self.kappa < 0):
            raise DomainError(f"kappa must be finite and non-negative, got {self.kappa!r}")

    @property
    def mode(self):
        return "time_free" if self.kappa is None else "timed"


@dataclass(frozen=True)
class RaceOutcome:
    estimate: float
    std_error: float
    trials: int
    successes: int
    truncation_bias_bound: float


def _geometric(rng, scale, n):
    """Failures before the first success with ``P(G >= k) = exp(-k / scale)``.

    Flooring an exponential variate is exact and cheaper than numpy's
    geometric sampler. Counts are returned as floats; they stay integral.
    """
    draws = rng.standard_exponential(n)
    draws *= scale
    return np.floor(draws, out=draws)


def _poisson(rng, lam, n):
    if lam >= POISSON_INVERSION_MAX:
        return rng.poisson(lam, n).astype(np.float64)
    pmf = [math.exp(-lam)]
    k = 0
    # extend the table until the remaining tail is below double resolution
    while k < lam or pmf[-1] > 1e-17:
        k += 1
        pmf.append(pmf[-1] * lam / k)
    cdf = np.cumsum(pmf)
    return np.searchsorted(cdf, rng.random(n), side="right").astype(np.float64)


def _race_block(rng, n, z, q, lam, max_deficit):
    """Run ``n`` races and return how many the attacker won."""
    if lam is None:
        # attacker blocks found before each of the z honest blocks
        scale = -1.0 / math.log(q)
        mined = np.zeros(n)
        for _ in range(z):
            mined += _geometric(rng, scale, n)
    else:
        mined = _poisson(rng, lam, n)
    wins = int(np.count_nonzero(mined >= z))
    deficit = z - mined[mined < z]
    deficit = deficit[deficit < max_deficit]
    # honest blocks found before the attacker's next block
    scale = -1.0 / math.log1p(-q)
    while deficit.size:
        deficit += _geometric(rng, scale, deficit.size)
        deficit -= 1.0
        wins += int(np.count_nonzero(deficit == 0.0))
        # reaching max_deficit before the attacker's block ends the race
        deficit = deficit[(deficit > 0.0) & (deficit < max_deficit - 1)]
    return wins


def _block_rng(seed, block):
    return np.random.Generator(np.random.SFC64(np.random.SeedSequence(seed, spawn_key=(block,))))


def simulate_race(z, share, config, workers=None):
    """Estimate the catch-up probability by simulating ``config.trials`` races.

    Timed mode draws the attacker's head start from a Poisson law with mean
    ``kappa z q / p``; time-free mode plays block attribution until the
    honest side has ``z`` blocks. A remaining deficit is then walked one
    block at a time until it closes (a win, ties included) or grows to
    ``config.max_deficit`` (a loss). The loss cutoff biases the estimate
    down by at most ``truncation_bias_bound``.
    """
    z = check_confirmations(z)
    share = as_share(share)
    if config.max_deficit < z:
        raise DomainError(f"max_deficit={config.max_deficit} must be at least z={z}")
    q, p = share.q, share.p
    lam = None if config.kappa is None else config.kappa * z * q / p

    sizes = [BLOCK_SIZE] * (config.trials // BLOCK_SIZE)
    if config.trials % BLOCK_SIZE:
        sizes.append(config.trials % BLOCK_SIZE)

    def run(block):
        rng = _block_rng(config.seed, block)
        return _race_block(rng, sizes[block], z, q, lam, config.max_deficit)

    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(sizes) == 1:
        wins = sum(map(run, range(len(sizes))))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            wins = sum(pool.map(run, range(len(sizes))))

    estimate = wins / config.trials
    return RaceOutcome(
        estimate=estimate,
        std_error=math.sqrt(estimate * (1.0 - estimate) / config.trials),
        trials=config.trials,
        successes=wins,
        truncation_bias_bound=(q / p) ** (config.max_deficit - z + 1),
    )
