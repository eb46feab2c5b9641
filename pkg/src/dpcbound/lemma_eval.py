"""Monte-Carlo evaluation of the general entropy lower bound.

For a Gaussian input independent of ``Z`` the rate at gain ``eta`` is

    h(X) - min_{alpha, beta} h((1 - beta eta) X + (alpha - beta) Z - beta N),

with the right-hand entropy estimated from samples. The search starts from
the closed-form MMSE point of the virtual channel and scores a local grid by
the entropy estimate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import closed_form as cf
from .entropy import DEFAULT_K, estimate_knn, gaussian_entropy
from .errors import DpcError, PreconditionError
from .sampling import SampleBatch, Seed, draw
from .scenario import ChannelScenario, interference_variance, moment_algebra, validate, with_stats

ALPHA_POLICIES = ("tied_to_beta", "free")
SWEEP_AXES = ("rho_zn", "rho_xn", "snr_db", "family")


@dataclass(frozen=True)
class LemmaConfig:
    n_samples: int = 200_000
    k: int = DEFAULT_K
    alpha_policy: str = "tied_to_beta"
    refine_grid: int = 21
    refine_span: float = 0.2
    seed: Seed = field(default_factory=Seed)
    workers: int = 1

    def __post_init__(self):
        if self.alpha_policy not in ALPHA_POLICIES:
            raise PreconditionError(f"alpha_policy must be one of {ALPHA_POLICIES}")
        if self.refine_grid < 3 or self.refine_grid % 2 == 0:
            raise PreconditionError("refine_grid must be odd and >= 3")
        if not 0 < self.refine_span <= 1:
            raise PreconditionError("refine_span must lie in (0, 1]")
        if self.n_samples < 50:
            raise PreconditionError(f"n_samples must be >= 50, got {self.n_samples}")


def objective_samples(b: SampleBatch, alpha: float, beta: float) -> np.ndarray:
    """``(1 - beta eta) x + (alpha - beta) z - beta noise``, row by row."""
    return (1 - beta * b.eta) * b.x + (alpha - beta) * b.z - beta * b.noise


def _grid(center: float, half_width: float, points: int) -> np.ndarray:
    g = center + half_width * np.linspace(-1.0, 1.0, points)
    g[points // 2] = center
    return g


def _atom_term(s, stats, sigma_z2, eta, p, atom, cfg) -> cf.GainTerm:
    batch = draw(s, eta, cfg.n_samples, cfg.seed, atom=atom, label="lemma")
    vc = cf.virtual_channel(stats, eta, sigma_z2)
    b0 = cf.beta_star(vc.eta_tilde, stats.sigma_x2, vc.sigma_ntilde2)
    w_tilde = vc.w_tilde if vc.w_tilde is not None else 1.0

    # fallback width when the warm start sits at beta = 0
    scale = abs(b0) if b0 != 0 else math.sqrt(stats.sigma_x2 / vc.sigma_ntilde2)
    betas = _grid(b0, cfg.refine_span * scale, cfg.refine_grid)
    if cfg.alpha_policy == "tied_to_beta":
        cands = [(b * w_tilde, b) for b in betas]
    else:
        a0 = b0 * w_tilde
        a_scale = abs(a0) if a0 != 0 else scale
        alphas = _grid(a0, cfg.refine_span * a_scale, cfg.refine_grid)
        cands = [(a, b) for b in betas for a in alphas]
    # stable sort on |beta| so equal scores resolve toward the smaller |beta|
    cands.sort(key=lambda ab: abs(ab[1]))

    scores = [estimate_knn(objective_samples(batch, a, b), cfg.k, with_stderr=False).nats
              for a, b in cands]
    best = int(np.argmin(scores))
    alpha, beta = cands[best]
    h = estimate_knn(objective_samples(batch, alpha, beta), cfg.k)

    factor = 2 * cf.domain_factor(s.domain)
    hx = gaussian_entropy(stats.sigma_x2).nats
    rate = max(0.0, factor * (hx - h.nats) / cf.LN2)
    return cf.GainTerm(eta, p, rate, alpha=alpha, beta=beta, entropy_nats=h.nats,
                       stderr_nats=h.stderr, stderr_bits=factor * h.stderr / cf.LN2)


def lemma_bound(s: ChannelScenario, cfg: LemmaConfig = LemmaConfig()) -> cf.BoundResult:
    """Entropy-based lower bound, one independent sample batch per gain atom.

    Per-atom rates are clamped at zero. ``stderr_bits`` of the result
    combines the per-atom standard errors as independent terms.
    """
    validate(s)
    stats = moment_algebra(s, seed=cfg.seed)
    if stats.sigma_n2 == 0:
        raise PreconditionError("zero-noise scenario: the bound is unbounded, nothing to estimate")
    sigma_z2 = interference_variance(s)
    jobs = [(eta, p, i) for i, (eta, p) in enumerate(s.gain.atoms)]

    def run(job):
        eta, p, i = job
        return _atom_term(s, stats, sigma_z2, eta, p, i, cfg)

    if cfg.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            terms = list(pool.map(run, jobs))
    else:
        terms = [run(j) for j in jobs]
    se = math.sqrt(math.fsum((t.p * t.stderr_bits) ** 2 for t in terms))
    return cf.BoundResult.from_terms(terms, "lemma_mc", s.domain, stderr_bits=se)


@dataclass(frozen=True)
class SweepPoint:
    axis: str
    value: object
    lemma: Optional[cf.BoundResult] = None
    theorem: Optional[cf.BoundResult] = None
    error: Optional[str] = None


def instantiate(template: ChannelScenario, axis: str, value) -> ChannelScenario:
    """The template scenario moved to ``value`` along ``axis``.

    ``snr_db`` sets the power to ``10^(value/10)`` times the template noise
    variance, keeping the correlation coefficients.
    """
    if axis == "rho_zn":
        return with_stats(template, rho_zn=float(value))
    if axis == "rho_xn":
        return with_stats(template, rho_xn=float(value))
    if axis == "snr_db":
        sn2 = moment_algebra(template).sigma_n2
        return with_stats(template, power=sn2 * 10 ** (float(value) / 10))
    if axis == "family":
        return with_stats(template, innovation_kind=str(value))
    raise PreconditionError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def sweep(template: ChannelScenario, axis: str, values: Sequence, cfg: LemmaConfig = LemmaConfig(),
          *, lemma: bool = True) -> list[SweepPoint]:
    """Evaluate (lemma, theorem) at each value; failures are recorded per point."""
    if axis not in SWEEP_AXES:
        raise PreconditionError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    inner = replace(cfg, workers=1)

    def run(value) -> SweepPoint:
        try:
            s = instantiate(template, axis, value)
            stats = moment_algebra(s)
            th = cf.theorem1_bound(stats, s.gain, s.domain)
            lm = lemma_bound(s, inner) if lemma and s.stats_override is None else None
            return SweepPoint(axis, value, lm, th)
        except DpcError as exc:
            return SweepPoint(axis, value, error=f"{type(exc).__name__}: {exc}")

    values = list(values)
    if cfg.workers > 1 and len(values) > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            return list(pool.map(run, values))
    return [run(v) for v in values]
