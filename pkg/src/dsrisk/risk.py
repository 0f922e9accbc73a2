"""Closed-form probability that a double-spend attacker catches up.

An attacker holding a share ``q`` of the hashrate races the honest network
after the merchant has seen ``z`` confirmations. Two answers are provided:
the time-free probability, which depends on ``z`` and ``q`` only, and the
time-conditioned one, which also uses how long those ``z`` blocks took.

The elapsed time enters through two dimensionless ratios:

* ``r = t / (z * tau0)``, the observed pace relative to the network block
  period ``tau0`` (600 s for Bitcoin);
* ``kappa = (1 - q) * r``, the same time measured in units of the honest
  miners' own expected block time ``tau0 / p``.
"""

import math
import numbers
from dataclasses import dataclass, field

from dsrisk import specfun
from dsrisk.errors import DomainError

__all__ = [
    "HashrateShare",
    "Timing",
    "MAX_CONFIRMATIONS",
    "DEFAULT_TAU0",
    "as_share",
    "check_confirmations",
    "timing_from",
    "catchup_time_free",
    "catchup_timed",
    "table_probability",
    "min_confirmations",
]

DEFAULT_TAU0 = 600.0
MAX_CONFIRMATIONS = 100
# rounding overshoot outside [0, 1] that may be clamped; anything larger is a bug
CLAMP_LIMIT = 1e-12


@dataclass(frozen=True)
class HashrateShare:
    """Attacker hashrate share ``q`` in (0, 1/2); the honest share is ``1 - q``."""

    q: float

    def __post_init__(self):
        q = self.q
        if not isinstance(q, numbers.Real) or not math.isfinite(q):
            raise DomainError(f"hashrate share must be a finite number, got {q!r}")
        if not 0.0 < q < 0.5:
            raise DomainError(
                f"hashrate share q={q!r} is outside (0, 0.5); the model assumes "
                "the attacker controls less than half of the hashrate"
            )
        object.__setattr__(self, "q", float(q))

    @property
    def p(self):
        return 1.0 - self.q


def as_share(share):
    """Accept a :class:`HashrateShare` or a bare float ``q``."""
    if isinstance(share, HashrateShare):
        return share
    return HashrateShare(share)


def check_confirmations(z):
    if isinstance(z, bool) or not isinstance(z, numbers.Integral):
        raise DomainError(f"confirmations must be an integer, got {z!r}")
    if not 1 <= z <= MAX_CONFIRMATIONS:
        raise DomainError(f"confirmations must lie in 1..{MAX_CONFIRMATIONS}, got {z}")
    return int(z)


def _check_nonneg(name, value):
    if not isinstance(value, numbers.Real) or not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be a finite non-negative number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class Timing:
    """Elapsed confirmation time with its derived pace ratios."""

    t: float
    z: int
    q: float
    tau0: float = DEFAULT_TAU0
    r: float = field(init=False)
    kappa: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "r", self.t / (self.z * self.tau0))
        object.__setattr__(self, "kappa", (1.0 - self.q) * self.r)


def timing_from(t, z, share, tau0=DEFAULT_TAU0):
    """Build a :class:`Timing` from the time ``t`` (seconds) that ``z`` blocks took.

    >>> tm = timing_from(600, 1, 0.1)
    >>> tm.r, round(tm.kappa, 12)
    (1.0, 0.9)
    """
    t = _check_nonneg("elapsed time t", t)
    if not isinstance(tau0, numbers.Real) or not math.isfinite(tau0) or tau0 <= 0:
        raise DomainError(f"block period tau0 must be positive, got {tau0!r}")
    z = check_confirmations(z)
    share = as_share(share)
    return Timing(t=t, z=z, q=share.q, tau0=float(tau0))


def _clamp_probability(value):
    if value < 0.0:
        if value < -CLAMP_LIMIT:
            raise ArithmeticError(f"probability {value!r} below 0 beyond rounding")
        return 0.0
    if value > 1.0:
        if value > 1.0 + CLAMP_LIMIT:
            raise ArithmeticError(f"probability {value!r} above 1 beyond rounding")
        return 1.0
    return value


def catchup_time_free(z, share):
    """Probability the attacker ever catches up ``z`` blocks, ignoring time.

    Equal to the regularized incomplete beta ``I_{4pq}(z, 1/2)``.
    """
    z = check_confirmations(z)
    share = as_share(share)
    q, p = share.q, share.p
    return _clamp_probability(specfun.reg_inc_beta(4.0 * p * q, z, 0.5))


def catchup_timed(z, share, kappa):
    """Catch-up probability given the honest ``z`` blocks took relative time ``kappa``.

    The value is ``P(z, x) + (q/p)^z exp(kappa z (p-q)/p) Q(z, kappa z)`` with
    ``x = kappa z q / p`` and ``P``, ``Q`` the regularized lower and upper
    incomplete gamma functions. The first term is the chance the attacker
    already mined ``z`` blocks in the elapsed time; the second is the
    gambler's-ruin chance of closing whatever gap remains.
    """
    z = check_confirmations(z)
    share = as_share(share)
    kappa = _check_nonneg("kappa", kappa)
    q, p = share.q, share.p
    ahead = specfun.reg_gamma_lower(z, kappa * z * q / p)
    # (q/p)^z * exp(...) * Q(z, kappa z) overflows/underflows separately for large z*kappa
    log_ruin = (
        z * math.log(q / p)
        + kappa * z * (p - q) / p
        + specfun.log_reg_gamma_upper(z, kappa * z)
    )
    return _clamp_probability(ahead + math.exp(log_ruin))


def table_probability(z, share, r):
    """Catch-up probability for pace ratio ``r = t / (z tau0)``; a table cell."""
    share = as_share(share)
    r = _check_nonneg("pace ratio r", r)
    return catchup_timed(z, share, share.p * r)


def min_confirmations(share, r, risk_target):
    """Smallest ``z`` in 1..100 whose table probability is at most ``risk_target``.

    ``r`` is held fixed as ``z`` grows, as when reading successive tables at
    the same pace. Returns ``None`` when no ``z <= 100`` qualifies.
    """
    share = as_share(share)
    r = _check_nonneg("pace ratio r", r)
    if (
        not isinstance(risk_target, numbers.Real)
        or not math.isfinite(risk_target)
        or not 0.0 < risk_target < 1.0
    ):
        raise DomainError(f"risk target must lie in (0, 1), got {risk_target!r}")
    for z in range(1, MAX_CONFIRMATIONS + 1):
        if table_probability(z, share, r) <= risk_target:
            return z
    return None
