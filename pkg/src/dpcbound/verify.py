"""Cross-checks of the closed forms on a concrete scenario.

Each check is a named PASS/FAIL/SKIP/INFO line; ``cmd_verify`` prints them
and fails on any FAIL.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import closed_form as cf
from .errors import DpcError, ValidationError
from .optimize import golden_section_min
from .oracle import GaussianJoint, gp_rate_max
from .sampling import Seed, decorrelated_residual, draw, empirical_stats
from .scenario import ChannelScenario, GainDistribution, interference_variance, moment_algebra, validate

ORACLE_TOL = 1e-6
IDENTITY_TOL = 1e-12
QMIN_RTOL = 1e-9


@dataclass(frozen=True)
class Check:
    name: str
    status: str  # PASS | FAIL | SKIP | INFO
    detail: str = ""


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _oracle_sigma_z2(s: ChannelScenario) -> float:
    sz2 = interference_variance(s)
    return sz2 if 0 < sz2 < math.inf else 1.0


def run_checks(s: ChannelScenario, n_samples: int = 200_000, seed: Seed = Seed(0)) -> list[Check]:
    try:
        validate(s)
    except ValidationError as exc:
        return [Check("validate", "FAIL", str(exc))]
    out = [Check("validate", "PASS")]
    stats = moment_algebra(s, seed=seed)
    out.append(Check("stats", "INFO", f"sigma_x2={stats.sigma_x2!r} sigma_n2={stats.sigma_n2!r} "
                                      f"rho_xn={stats.rho_xn!r} rho_zn={stats.rho_zn!r}"))
    thm = cf.theorem1_bound(stats, s.gain, s.domain)
    if thm.unbounded:
        out.append(Check("theorem1", "INFO", "zero noise variance: bound is unbounded (+inf sentinel)"))
        return out
    out.append(Check("theorem1", "INFO", f"rate={thm.rate!r} bits"))

    sz2 = _oracle_sigma_z2(s)
    worst = 0.0
    for eta, _ in s.gain.atoms:
        try:
            rate, _ = gp_rate_max(GaussianJoint.from_stats(stats, sz2), eta)
        except DpcError as exc:
            out.append(Check("oracle_equivalence", "FAIL", f"eta={eta!r}: {exc}"))
            break
        term = cf.theorem1_bound(stats, GainDistribution.constant(eta), "real").rate
        worst = max(worst, abs(rate - term))
    else:
        out.append(Check("oracle_equivalence", _status(worst < ORACLE_TOL), f"max |diff|={worst:.3g} bits"))

    worst_q = 0.0
    worst_vc = 0.0
    for eta, _ in s.gain.atoms:
        vc = cf.virtual_channel(stats, eta, interference_variance(s))
        q, b = cf.q_min(vc.eta_tilde, stats.sigma_x2, vc.sigma_ntilde2)
        span = 10 * (abs(b) + 1)
        _, q_gs = golden_section_min(
            lambda t: cf.q_form(t, t, vc.eta_tilde, stats.sigma_x2, 0.0, vc.sigma_ntilde2),
            -span, span, 1e-12)
        worst_q = max(worst_q, abs(q_gs - q) / q)
        direct = 0.5 * math.log2(1 + vc.eta_tilde**2 * stats.sigma_x2 / vc.sigma_ntilde2)
        term = cf.theorem1_bound(stats, GainDistribution.constant(eta), "real").rate
        worst_vc = max(worst_vc, abs(direct - term))
    out.append(Check("q_min_vs_search", _status(worst_q < QMIN_RTOL), f"max rel err={worst_q:.3g}"))
    out.append(Check("virtual_channel", _status(worst_vc < IDENTITY_TOL), f"max |diff|={worst_vc:.3g}"))

    real = cf.theorem1_bound(stats, s.gain, "real").rate
    cplx = cf.theorem1_bound(stats, s.gain, "complex").rate
    out.append(Check("complex_factor", _status(cplx == 2 * real), f"complex={cplx!r} real={real!r}"))

    cor = cf.corollary1_bound(stats.sigma_x2, stats.sigma_n2, s.gain, s.domain).rate
    if stats.rho_xn == 0 and stats.rho_zn == 0:
        out.append(Check("corollary_reduction", _status(abs(cor - thm.rate) < IDENTITY_TOL),
                         f"|diff|={abs(cor - thm.rate):.3g}"))
    elif stats.rho_xn == 0:
        out.append(Check("corollary_ordering", _status(cor <= thm.rate), f"corollary={cor!r}"))
    else:
        out.append(Check("corollary_reduction", "SKIP", "rho_xn != 0"))

    out += _sampling_checks(s, stats, n_samples, seed)
    return out


def _sampling_checks(s, stats, n, seed) -> list[Check]:
    if s.interference.is_unbounded:
        return [Check("empirical_stats", "SKIP", "unbounded-variance interference cannot be sampled")]
    if s.stats_override is not None or not s.noise.is_linear:
        return [Check("empirical_stats", "SKIP", "no analytic moments to compare against")]
    if n < 2:
        return [Check("empirical_stats", "SKIP", "needs at least 2 samples")]
    b = draw(s, s.gain.atoms[0][0], n, seed, label="verify")
    try:
        emp = empirical_stats(b)
    except DpcError as exc:
        return [Check("empirical_stats", "FAIL", str(exc))]
    tol = 4 / math.sqrt(n)
    nc = b.noise - b.noise.mean()
    se_n2 = math.sqrt(max(np.mean(nc**4) - np.mean(nc**2) ** 2, 0.0) / n)
    ok = (abs(emp.rho_xn - stats.rho_xn) < tol and abs(emp.rho_zn - stats.rho_zn) < tol
          and abs(emp.sigma_n2 - stats.sigma_n2) < 4 * se_n2 + 1e-15)
    out = [Check("empirical_stats", _status(ok),
                 f"n={n} sigma_n2={emp.sigma_n2:.6g} rho_xn={emp.rho_xn:.6g} rho_zn={emp.rho_zn:.6g}")]

    resid = decorrelated_residual(b, stats, interference_variance(s))
    rc = resid - resid.mean()
    target = cf.residual_noise_variance(stats)
    var = float(rc @ rc) / (n - 1)
    se = math.sqrt(max(np.mean(rc**4) - np.mean(rc**2) ** 2, 0.0) / n)
    c_x = float(np.corrcoef(b.x, resid)[0, 1]) if var > 0 else 0.0
    c_z = float(np.corrcoef(b.z, resid)[0, 1]) if var > 0 and b.z.std() > 0 else 0.0
    ok = abs(var - target) <= 5 * se + 1e-15 and abs(c_x) < tol and abs(c_z) < tol
    out.append(Check("decorrelation", _status(ok),
                     f"Var(N~)={var:.6g} target={target:.6g} corr(X,N~)={c_x:.3g} corr(Z,N~)={c_z:.3g}"))
    return out
