"""Closed-form DPC rate bounds from second-order statistics.

The correlated-noise bound rewrites the channel as a virtual channel

    Y = eta~ X + W~ Z + N~,   eta~ = eta + rho_xn sigma_n / sigma_x,
                              W~   = 1 + rho_zn sigma_n / sigma_z,

whose noise ``N~`` is uncorrelated with ``X`` and ``Z`` and has variance
``(1 - rho_xn^2 - rho_zn^2) sigma_n^2``. The per-gain rate is then
``1/2 log2(1 + eta~^2 sigma_x^2 / sigma_n~^2)``; the 1/2 is dropped for
proper complex signals.

Rates are in bits. A zero noise variance yields a result flagged
``unbounded`` rather than an arithmetic infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .scenario import GainDistribution, SecondOrderStats

LN2 = math.log(2.0)

METHODS = ("theorem1", "corollary1", "lemma_mc", "oracle")


@dataclass(frozen=True)
class VirtualChannel:
    eta_tilde: float
    w_tilde: Optional[float]
    sigma_ntilde2: float


@dataclass(frozen=True)
class GainTerm:
    """Contribution of one gain atom to a :class:`BoundResult`."""

    eta: float
    p: float
    rate: float
    alpha: Optional[float] = None
    beta: Optional[float] = None
    entropy_nats: Optional[float] = None
    stderr_nats: float = 0.0
    stderr_bits: float = 0.0


@dataclass(frozen=True)
class BoundResult:
    rate: float
    per_gain: tuple[GainTerm, ...]
    method: str
    domain: str = "real"
    stderr_bits: float = 0.0
    unbounded: bool = False
    extra: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_terms(cls, terms, method, domain, **kw) -> "BoundResult":
        terms = tuple(terms)
        unbounded = any(t.p > 0 and math.isinf(t.rate) for t in terms)
        if unbounded:
            rate = math.inf
        else:
            rate = math.fsum(t.p * t.rate for t in terms)
        return cls(rate, terms, method, domain, unbounded=unbounded, **kw)


def domain_factor(domain: str) -> float:
    """Multiplier on ``log2(1 + snr)``: 1/2 for real signals, 1 for complex."""
    if domain == "real":
        return 0.5
    if domain == "complex":
        return 1.0
    raise ValueError(f"unknown signal domain {domain!r}")


def correlation_shift(stats: SecondOrderStats) -> float:
    """Gain offset ``rho_xn sigma_n / sigma_x`` induced by input-noise correlation."""
    return stats.rho_xn * stats.sigma_n / stats.sigma_x


def cancellation_gain(stats: SecondOrderStats) -> float:
    """The gain at which the correlated-noise bound collapses to zero."""
    return -correlation_shift(stats)


def residual_noise_variance(stats: SecondOrderStats) -> float:
    return (1.0 - stats.rho_xn**2 - stats.rho_zn**2) * stats.sigma_n2


def virtual_channel(stats: SecondOrderStats, eta: float, sigma_z2: Optional[float] = None) -> VirtualChannel:
    w_tilde = None
    if sigma_z2 is not None and 0 < sigma_z2 < math.inf:
        w_tilde = 1.0 + stats.rho_zn * stats.sigma_n / math.sqrt(sigma_z2)
    return VirtualChannel(eta + correlation_shift(stats), w_tilde, residual_noise_variance(stats))


def _rate_bits(snr: float, domain: str) -> float:
    return domain_factor(domain) * (math.log1p(snr) / LN2)


def _zero_noise_terms(gain: GainDistribution, shift: float, domain: str, sigma_x2: float):
    for eta, p in gain.atoms:
        rate = math.inf if (eta + shift) ** 2 * sigma_x2 > 0 else 0.0
        yield GainTerm(eta, p, rate)


def theorem1_bound(stats: SecondOrderStats, gain: GainDistribution, domain: str = "real") -> BoundResult:
    """Correlated-noise lower bound, averaged over the gain atoms.

    Never reads the interference variance.
    """
    domain_factor(domain)
    shift = correlation_shift(stats)
    if stats.sigma_n2 == 0:
        return BoundResult.from_terms(_zero_noise_terms(gain, shift, domain, stats.sigma_x2),
                                      "theorem1", domain)
    denom = 1.0 - stats.rho_xn**2 - stats.rho_zn**2
    ratio = stats.sigma_x2 / stats.sigma_n2
    terms = []
    for eta, p in gain.atoms:
        eta_t = eta + shift
        terms.append(GainTerm(eta, p, _rate_bits(eta_t * eta_t / denom * ratio, domain)))
    return BoundResult.from_terms(terms, "theorem1", domain)


def corollary1_bound(sigma_x2: float, sigma_n2: float, gain: GainDistribution,
                     domain: str = "real") -> BoundResult:
    """Bound for noise uncorrelated with the input: ``E[1/2 log2(1 + eta^2 sx2/sn2)]``."""
    domain_factor(domain)
    if sigma_n2 == 0:
        return BoundResult.from_terms(_zero_noise_terms(gain, 0.0, domain, sigma_x2),
                                      "corollary1", domain)
    if sigma_n2 < 0:
        raise ValueError("sigma_n2 must be >= 0")
    terms = [GainTerm(eta, p, _rate_bits(eta * eta * sigma_x2 / sigma_n2, domain))
             for eta, p in gain.atoms]
    return BoundResult.from_terms(terms, "corollary1", domain)


def beta_star(eta_tilde: float, sigma_x2: float, sigma_ntilde2: float) -> float:
    """Receiver scaling that minimises the residual variance (MMSE coefficient)."""
    return eta_tilde * sigma_x2 / (eta_tilde * eta_tilde * sigma_x2 + sigma_ntilde2)


def q_form(alpha, beta, eta, sigma_x2, sigma_z2_eff, sigma_ntilde2):
    """Variance of ``(1 - beta eta) X + (alpha - beta) W~ Z - beta N~``.

    ``sigma_z2_eff`` is ``W~^2 sigma_z^2``. Works elementwise on arrays.
    """
    return ((1 - beta * eta) ** 2 * sigma_x2
            + (alpha - beta) ** 2 * sigma_z2_eff
            + beta * beta * sigma_ntilde2)


def q_min(eta: float, sigma_x2: float, sigma_ntilde2: float) -> tuple[float, float]:
    """Minimum of :func:`q_form` over ``(alpha, beta)``; returns ``(q, beta*)``."""
    if sigma_ntilde2 <= 0:
        raise ValueError("sigma_ntilde2 must be > 0")
    b = beta_star(eta, sigma_x2, sigma_ntilde2)
    return sigma_ntilde2 * sigma_x2 / (eta * eta * sigma_x2 + sigma_ntilde2), b


def rate_from_q(sigma_x2: float, q: float, domain: str = "real") -> float:
    """``1/2 log2(sigma_x2 / q)``: Gaussian input entropy minus Gaussian residual entropy."""
    return domain_factor(domain) * math.log2(sigma_x2 / q)
