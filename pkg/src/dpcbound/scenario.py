"""Channel scenarios and their second-order statistics.

A scenario describes the memoryless channel ``Y = H X + Z + N`` through a
discrete gain law for ``H``, a marginal law for the known interference ``Z``
and a noise model that may load on the input and the interference:

    N = c_x X + c_z Z + W,    W independent of (X, Z).

The closed-form bounds only consume the second-order statistics of
``(X_G, Z, N_G)`` with ``X_G ~ Gaussian(0, power)``; :func:`moment_algebra`
computes them exactly for the linear-mixing model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ValidationError, Violation

PMF_TOL = 1e-9

FAMILY_KINDS = ("gaussian", "laplace", "uniform", "gaussian_mixture")
UNBOUNDED = "unbounded"
DOMAINS = ("real", "complex")


@dataclass(frozen=True)
class GainDistribution:
    """Finite discrete law ``{(eta_k, p_k)}`` of the channel gain."""

    atoms: tuple[tuple[float, float], ...]

    def __init__(self, atoms: Sequence[Sequence[float]]):
        object.__setattr__(self, "atoms", tuple((float(e), float(p)) for e, p in atoms))

    @classmethod
    def constant(cls, eta: float = 1.0) -> "GainDistribution":
        return cls([(eta, 1.0)])

    @property
    def etas(self) -> np.ndarray:
        return np.array([a[0] for a in self.atoms], dtype=float)

    @property
    def probs(self) -> np.ndarray:
        return np.array([a[1] for a in self.atoms], dtype=float)


@dataclass(frozen=True)
class MarginalFamily:
    """Scalar law used for the interference and for the noise innovation.

    gaussian, laplace and uniform are parameterised by ``mean`` and
    ``variance``; a gaussian mixture by per-component ``weights``, ``means``
    and ``variances``. ``kind="unbounded"`` marks interference whose variance
    is infinite; it is accepted by the closed forms and rejected by samplers.
    """

    kind: str
    mean: float = 0.0
    variance: float = 1.0
    weights: tuple[float, ...] = ()
    means: tuple[float, ...] = ()
    variances: tuple[float, ...] = ()

    @classmethod
    def gaussian(cls, mean: float = 0.0, variance: float = 1.0) -> "MarginalFamily":
        return cls("gaussian", float(mean), float(variance))

    @classmethod
    def laplace(cls, mean: float = 0.0, variance: float = 1.0) -> "MarginalFamily":
        return cls("laplace", float(mean), float(variance))

    @classmethod
    def uniform(cls, mean: float = 0.0, variance: float = 1.0) -> "MarginalFamily":
        return cls("uniform", float(mean), float(variance))

    @classmethod
    def gaussian_mixture(cls, weights, means, variances) -> "MarginalFamily":
        return cls(
            "gaussian_mixture",
            weights=tuple(float(w) for w in weights),
            means=tuple(float(m) for m in means),
            variances=tuple(float(v) for v in variances),
        )

    @classmethod
    def unbounded(cls) -> "MarginalFamily":
        return cls(UNBOUNDED, variance=math.inf)

    @property
    def is_unbounded(self) -> bool:
        return self.kind == UNBOUNDED

    def moments(self) -> tuple[float, float]:
        """Return ``(mean, variance)``."""
        if self.kind == "gaussian_mixture":
            w = np.asarray(self.weights)
            m = np.asarray(self.means)
            v = np.asarray(self.variances)
            mu = float(np.dot(w, m))
            return mu, float(np.dot(w, v + (m - mu) ** 2))
        if self.is_unbounded:
            return 0.0, math.inf
        return self.mean, self.variance

    def rescaled(self, variance: float) -> "MarginalFamily":
        """Same shape, rescaled about its mean to the requested variance."""
        mu, var = self.moments()
        if self.kind != "gaussian_mixture":
            return replace(self, variance=float(variance))
        a = math.sqrt(variance / var)
        return replace(
            self,
            means=tuple(mu + a * (m - mu) for m in self.means),
            variances=tuple(a * a * v for v in self.variances),
        )

    def with_kind(self, kind: str) -> "MarginalFamily":
        """Same mean and variance under a different built-in family.

        A mixture target gets a fixed symmetric two-component shape.
        """
        mu, var = self.moments()
        if kind == "gaussian_mixture":
            return two_component_mixture(mu, var)
        return MarginalFamily(kind, mu, var)

    def entropy_nats(self) -> float:
        """Closed-form differential entropy (not available for mixtures)."""
        if self.kind == "gaussian":
            return 0.5 * math.log(2 * math.pi * math.e * self.variance)
        if self.kind == "laplace":
            return 1.0 + math.log(2 * math.sqrt(self.variance / 2))
        if self.kind == "uniform":
            return math.log(math.sqrt(12 * self.variance))
        raise ValueError(f"no closed-form entropy for {self.kind!r}")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == "gaussian":
            return self.mean + math.sqrt(self.variance) * rng.standard_normal(n)
        if self.kind == "laplace":
            # inverse CDF
            u = rng.random(n) - 0.5
            b = math.sqrt(self.variance / 2)
            return self.mean - b * np.sign(u) * np.log1p(-2 * np.abs(u))
        if self.kind == "uniform":
            half = math.sqrt(3 * self.variance)
            return self.mean + half * (2 * rng.random(n) - 1)
        if self.kind == "gaussian_mixture":
            cdf = np.cumsum(self.weights)
            comp = np.searchsorted(cdf / cdf[-1], rng.random(n), side="right")
            comp = np.minimum(comp, len(self.weights) - 1)
            means = np.asarray(self.means)[comp]
            stds = np.sqrt(np.asarray(self.variances))[comp]
            return means + stds * rng.standard_normal(n)
        raise ValueError(f"cannot sample family {self.kind!r}")


def two_component_mixture(mean: float = 0.0, variance: float = 1.0) -> MarginalFamily:
    """Symmetric bimodal mixture: components at mean +- 0.9 sd, each with 0.19 of the variance."""
    sd = math.sqrt(variance)
    return MarginalFamily.gaussian_mixture(
        [0.5, 0.5], [mean - 0.9 * sd, mean + 0.9 * sd], [0.19 * variance, 0.19 * variance]
    )


NoiseSampler = Callable[[np.ndarray, np.ndarray, np.random.Generator], np.ndarray]


@dataclass(frozen=True)
class NoiseModel:
    """``N = c_x X + c_z Z + W``; or an arbitrary ``sampler(x, z, rng)``.

    With a custom sampler the loadings and innovation are ignored and the
    second-order statistics have to be estimated from samples.
    """

    c_x: float = 0.0
    c_z: float = 0.0
    innovation: MarginalFamily = field(default_factory=MarginalFamily.gaussian)
    sampler: Optional[NoiseSampler] = None

    @property
    def is_linear(self) -> bool:
        return self.sampler is None


@dataclass(frozen=True)
class SecondOrderStats:
    """Statistics of ``(X_G, Z, N_G)`` consumed by the closed-form bounds."""

    sigma_x2: float
    sigma_n2: float
    rho_xn: float = 0.0
    rho_zn: float = 0.0

    def __post_init__(self):
        problems = stats_violations(self.sigma_x2, self.sigma_n2, self.rho_xn, self.rho_zn)
        if problems:
            raise ValidationError(problems)

    @property
    def sigma_x(self) -> float:
        return math.sqrt(self.sigma_x2)

    @property
    def sigma_n(self) -> float:
        return math.sqrt(self.sigma_n2)


def stats_violations(sigma_x2, sigma_n2, rho_xn, rho_zn, prefix="stats") -> list[Violation]:
    out = []
    values = dict(sigma_x2=sigma_x2, sigma_n2=sigma_n2, rho_xn=rho_xn, rho_zn=rho_zn)
    for name, v in values.items():
        if not _finite(v):
            out.append(Violation("NonFinite", f"{prefix}.{name}", f"{v!r} is not a finite real"))
    if out:
        return out
    if sigma_x2 <= 0:
        out.append(Violation("NonPositivePower", f"{prefix}.sigma_x2", f"{sigma_x2} <= 0"))
    if sigma_n2 < 0:
        out.append(Violation("NegativeVariance", f"{prefix}.sigma_n2", f"{sigma_n2} < 0"))
    if rho_xn * rho_xn + rho_zn * rho_zn >= 1:
        out.append(
            Violation(
                "CorrelationOverflow",
                prefix,
                f"rho_xn^2 + rho_zn^2 = {rho_xn * rho_xn + rho_zn * rho_zn:.6g} >= 1",
            )
        )
    if sigma_n2 == 0 and (rho_xn != 0 or rho_zn != 0):
        out.append(Violation("CorrelationOverflow", prefix, "zero noise must have zero correlations"))
    return out


@dataclass(frozen=True)
class ChannelScenario:
    """Full generative description of one channel.

    ``stats_override`` = ``(sigma_n2, rho_xn, rho_zn)`` replaces the analytic
    moments (closed-form evaluation of hand-specified statistics).
    ``degenerate`` permits a zero-variance innovation.
    """

    gain: GainDistribution
    interference: MarginalFamily = field(default_factory=MarginalFamily.gaussian)
    noise: NoiseModel = field(default_factory=NoiseModel)
    power: float = 1.0
    domain: str = "real"
    degenerate: bool = False
    stats_override: Optional[tuple[float, float, float]] = None


def _finite(v) -> bool:
    try:
        return math.isfinite(float(v))
    except (TypeError, ValueError):
        return False


def _family_violations(fam: MarginalFamily, path: str, *, allow_unbounded: bool,
                       allow_zero: bool) -> list[Violation]:
    out = []
    if fam.kind == UNBOUNDED:
        if not allow_unbounded:
            out.append(Violation("UnboundedVariance", path, "only the interference may be unbounded"))
        return out
    if fam.kind not in FAMILY_KINDS:
        return [Violation("UnknownFamily", f"{path}.kind", f"{fam.kind!r} not in {FAMILY_KINDS}")]
    if fam.kind == "gaussian_mixture":
        n = len(fam.weights)
        if n == 0 or len(fam.means) != n or len(fam.variances) != n:
            return [Violation("BadMixture", path, "weights, means, variances need equal nonzero length")]
        vals = fam.weights + fam.means + fam.variances
        if not all(_finite(v) for v in vals):
            return [Violation("NonFinite", path, "mixture parameters must be finite")]
        if any(w < 0 for w in fam.weights) or abs(sum(fam.weights) - 1) > PMF_TOL:
            out.append(Violation("BadPmf", f"{path}.weights", f"weights sum to {sum(fam.weights)!r}"))
        if any(v < 0 for v in fam.variances):
            out.append(Violation("NegativeVariance", f"{path}.variances", "component variance < 0"))
        if out:
            return out
    elif not (_finite(fam.mean) and _finite(fam.variance)):
        return [Violation("NonFinite", path, "mean and variance must be finite")]
    _, var = fam.moments()
    if var < 0:
        out.append(Violation("NegativeVariance", f"{path}.variance", f"{var} < 0"))
    elif var == 0 and not allow_zero:
        out.append(Violation("DegenerateInnovation" if "innovation" in path else "ZeroVariance",
                             f"{path}.variance", "variance must be > 0"))
    return out


def violations(s: ChannelScenario) -> list[Violation]:
    """Every invariant violation of ``s``; empty when the scenario is valid.

    Never raises.
    """
    out: list[Violation] = []
    try:
        atoms = list(s.gain.atoms)
    except Exception:
        atoms = None
    if not atoms:
        out.append(Violation("BadPmf", "gain.atoms", "at least one atom required"))
    else:
        if not all(_finite(e) and _finite(p) for e, p in atoms):
            out.append(Violation("NonFinite", "gain.atoms", "gains and probabilities must be finite"))
        else:
            total = math.fsum(p for _, p in atoms)
            if any(p < 0 or p > 1 for _, p in atoms):
                out.append(Violation("BadPmf", "gain.atoms", "probabilities must lie in [0, 1]"))
            if abs(total - 1) > PMF_TOL:
                out.append(Violation("BadPmf", "gain.atoms", f"probabilities sum to {total!r}, not 1"))

    if not _finite(s.power) or s.power <= 0:
        out.append(Violation("NonPositivePower", "power", f"{s.power!r} must be a finite real > 0"))
    if s.domain not in DOMAINS:
        out.append(Violation("BadDomain", "domain", f"{s.domain!r} not in {DOMAINS}"))

    out += _family_violations(s.interference, "interference", allow_unbounded=True, allow_zero=True)
    noise = s.noise
    if noise.is_linear:
        for name in ("c_x", "c_z"):
            if not _finite(getattr(noise, name)):
                out.append(Violation("NonFinite", f"noise.{name}", "loading must be finite"))
        out += _family_violations(noise.innovation, "noise.innovation", allow_unbounded=False,
                                  allow_zero=s.degenerate)
        if _finite(noise.c_z) and noise.c_z != 0:
            if s.interference.is_unbounded:
                out.append(Violation("UnboundedVariance", "noise.c_z",
                                     "unbounded interference requires c_z = 0"))
            elif _finite(s.interference.moments()[1]) and s.interference.moments()[1] == 0:
                out.append(Violation("DegenerateInterference", "noise.c_z",
                                     "zero-variance interference requires c_z = 0"))

    if s.stats_override is not None:
        try:
            sn2, rx, rz = s.stats_override
        except (TypeError, ValueError):
            out.append(Violation("BadStats", "stats", "expected (sigma_n2, rho_xn, rho_zn)"))
        else:
            out += stats_violations(s.power if _finite(s.power) else 1.0, sn2, rx, rz)
            if _finite(sn2) and sn2 == 0 and not s.degenerate:
                out.append(Violation("DegenerateInnovation", "stats.sigma_n2",
                                     "zero noise requires degenerate: true"))
    elif not out and noise.is_linear:
        sn2, rx, rz = _linear_moments(s)
        if not all(map(_finite, (sn2, rx, rz))):
            out.append(Violation("NonFinite", "noise", "noise moments overflow double precision"))
        elif sn2 == 0 and not s.degenerate:
            out.append(Violation("DegenerateInnovation", "noise", "noise variance is zero"))
        elif sn2 > 0 and rx * rx + rz * rz >= 1:
            out.append(Violation("CorrelationOverflow", "noise",
                                 f"rho_xn^2 + rho_zn^2 = {rx * rx + rz * rz:.6g} >= 1"))
        if sn2 > 0 and _finite(noise.innovation.moments()[1]) and noise.innovation.moments()[1] == 0:
            out.append(Violation("CorrelationOverflow", "noise",
                                 "zero innovation variance with nonzero loadings gives |rho|^2 sum = 1"))
    return out


def validate(s: ChannelScenario) -> ChannelScenario:
    """Return ``s`` unchanged if valid, else raise a :class:`ValidationError`."""
    problems = violations(s)
    if problems:
        raise ValidationError(problems)
    return s


def interference_variance(s: ChannelScenario) -> float:
    return s.interference.moments()[1]


def _linear_moments(s: ChannelScenario) -> tuple[float, float, float]:
    noise = s.noise
    sx2 = float(s.power)
    sz2 = interference_variance(s)
    _, sw2 = noise.innovation.moments()
    zpart = noise.c_z * noise.c_z * sz2 if noise.c_z != 0 else 0.0
    sn2 = noise.c_x * noise.c_x * sx2 + zpart + sw2
    if sn2 == 0:
        return 0.0, 0.0, 0.0
    sn = math.sqrt(sn2)
    rx = noise.c_x * math.sqrt(sx2) / sn
    rz = noise.c_z * math.sqrt(sz2) / sn if noise.c_z != 0 else 0.0
    return sn2, rx, rz


def moment_algebra(s: ChannelScenario, *, n_empirical: int = 10**6, seed=None) -> SecondOrderStats:
    """Second-order statistics of ``(X_G, Z, N_G)`` for the Gaussian input.

    Exact for linear-mixing noise. A custom noise sampler falls back to
    :func:`dpcbound.sampling.empirical_stats` on ``n_empirical`` draws at the
    first gain atom.
    """
    validate(s)
    if s.stats_override is not None:
        sn2, rx, rz = s.stats_override
        return SecondOrderStats(float(s.power), float(sn2), float(rx), float(rz))
    if not s.noise.is_linear:
        from .sampling import Seed, draw, empirical_stats

        batch = draw(s, s.gain.atoms[0][0], n_empirical, seed or Seed(0))
        return empirical_stats(batch)
    sn2, rx, rz = _linear_moments(s)
    return SecondOrderStats(float(s.power), sn2, rx, rz)


def scenario_from_stats(
    stats: SecondOrderStats,
    gain: GainDistribution | None = None,
    interference: MarginalFamily | None = None,
    innovation: str | MarginalFamily = "gaussian",
    domain: str = "real",
) -> ChannelScenario:
    """Build a linear-mixing scenario whose moments reproduce ``stats``.

    ``innovation`` gives the shape of ``W``; it is rescaled to the residual
    variance ``(1 - rho_xn^2 - rho_zn^2) sigma_n2``.
    """
    interference = interference or MarginalFamily.gaussian()
    sz2 = interference.moments()[1]
    sn = stats.sigma_n
    c_x = stats.rho_xn * sn / stats.sigma_x
    if stats.rho_zn != 0:
        if not (0 < sz2 < math.inf):
            raise ValidationError([Violation("DegenerateInterference", "interference",
                                             "rho_zn != 0 needs finite positive interference variance")])
        c_z = stats.rho_zn * sn / math.sqrt(sz2)
    else:
        c_z = 0.0
    resid = (1 - stats.rho_xn**2 - stats.rho_zn**2) * stats.sigma_n2
    if isinstance(innovation, str):
        shape = (two_component_mixture() if innovation == "gaussian_mixture"
                 else MarginalFamily(innovation, 0.0, 1.0))
    else:
        shape = innovation
    w = shape.rescaled(resid) if resid > 0 else MarginalFamily.gaussian(shape.moments()[0], 0.0)
    return ChannelScenario(
        gain=gain or GainDistribution.constant(1.0),
        interference=interference,
        noise=NoiseModel(c_x, c_z, w),
        power=stats.sigma_x2,
        domain=domain,
        degenerate=resid == 0,
    )


def with_stats(s: ChannelScenario, *, sigma_n2=None, rho_xn=None, rho_zn=None, power=None,
               innovation_kind=None) -> ChannelScenario:
    """Re-derive the noise loadings of ``s`` so its moments hit new targets.

    Unspecified targets keep the current value; the innovation keeps its
    shape unless ``innovation_kind`` names another built-in family.
    """
    cur = moment_algebra(s)
    sx2 = cur.sigma_x2 if power is None else float(power)
    stats = SecondOrderStats(
        sx2,
        cur.sigma_n2 if sigma_n2 is None else float(sigma_n2),
        cur.rho_xn if rho_xn is None else float(rho_xn),
        cur.rho_zn if rho_zn is None else float(rho_zn),
    )
    shape = s.noise.innovation
    if innovation_kind is not None:
        shape = shape.with_kind(innovation_kind)
    out = scenario_from_stats(stats, s.gain, s.interference, shape, s.domain)
    if s.stats_override is not None:
        out = replace(out, stats_override=(stats.sigma_n2, stats.rho_xn, stats.rho_zn))
    return validate(out)
