"""Exact Gel'fand-Pinsker rates for jointly Gaussian ``(X, Z, N)``.

With the linear auxiliary ``U = X + alpha Z`` and ``Y = eta X + Z + N`` the
rate ``I(U;Y) - I(U;Z)`` follows from two bivariate correlation
coefficients. This path shares no code with :mod:`dpcbound.closed_form` and
serves as its independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SingularCovariance, ValidationError, Violation
from .optimize import golden_section_max

ALPHA_RANGE = 10.0
WIDEN_RETRIES = 3
ALPHA_TOL = 1e-10


@dataclass(frozen=True)
class GaussianJoint:
    sigma_x2: float
    sigma_z2: float
    sigma_n2: float
    rho_xn: float = 0.0
    rho_zn: float = 0.0

    def __post_init__(self):
        bad = [n for n in ("sigma_x2", "sigma_z2", "sigma_n2") if not getattr(self, n) > 0]
        if bad:
            raise ValidationError([Violation("NonPositiveVariance", n, "must be > 0") for n in bad])
        # covariance of (X, Z, N) with X independent of Z is PSD iff this holds
        if self.rho_xn**2 + self.rho_zn**2 > 1:
            raise ValidationError([Violation("CorrelationOverflow", "rho", "covariance not PSD")])

    @classmethod
    def from_stats(cls, stats, sigma_z2: float) -> "GaussianJoint":
        return cls(stats.sigma_x2, sigma_z2, stats.sigma_n2, stats.rho_xn, stats.rho_zn)

    @property
    def cov_xn(self) -> float:
        return self.rho_xn * math.sqrt(self.sigma_x2 * self.sigma_n2)

    @property
    def cov_zn(self) -> float:
        return self.rho_zn * math.sqrt(self.sigma_z2 * self.sigma_n2)


def _mi_bits(rho2: float) -> float:
    if not rho2 < 1:
        raise SingularCovariance(f"squared correlation {rho2!r} >= 1")
    return -0.5 * math.log1p(-rho2) / math.log(2.0)


def gp_rate(j: GaussianJoint, eta: float, alpha: float) -> float:
    """``I(U;Y) - I(U;Z)`` in bits for ``U = X + alpha Z``."""
    var_u = j.sigma_x2 + alpha * alpha * j.sigma_z2
    var_y = eta * eta * j.sigma_x2 + j.sigma_z2 + j.sigma_n2 + 2 * eta * j.cov_xn + 2 * j.cov_zn
    if not (var_y > 0 and var_u > 0):
        raise SingularCovariance(f"Var(U)={var_u!r}, Var(Y)={var_y!r}")
    cov_uy = eta * j.sigma_x2 + j.cov_xn + alpha * (j.sigma_z2 + j.cov_zn)
    cov_uz = alpha * j.sigma_z2
    rho_uy2 = cov_uy * cov_uy / (var_u * var_y)
    rho_uz2 = cov_uz * cov_uz / (var_u * j.sigma_z2)
    return _mi_bits(rho_uy2) - _mi_bits(rho_uz2)


def gp_rate_max(j: GaussianJoint, eta: float) -> tuple[float, float]:
    """Maximise :func:`gp_rate` over ``alpha``; returns ``(rate, alpha*)``.

    Golden-section on ``[-10, 10]``; if the optimum lands on the boundary the
    interval is doubled, at most three times.
    """
    half = ALPHA_RANGE
    for _ in range(WIDEN_RETRIES + 1):
        alpha, rate = golden_section_max(lambda a: gp_rate(j, eta, a), -half, half, ALPHA_TOL)
        if abs(alpha) < half * (1 - 1e-6):
            break
        half *= 2
    return rate, alpha


def mmse_alpha(j: GaussianJoint, eta: float) -> float:
    """Costa's coefficient ``eta sx2 / (eta^2 sx2 + sn2)`` (independent noise)."""
    return eta * j.sigma_x2 / (eta * eta * j.sigma_x2 + j.sigma_n2)
