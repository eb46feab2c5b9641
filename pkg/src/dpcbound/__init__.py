"""Lower bounds on dirty-paper-coding rates under general, dependent noise."""

from .closed_form import (
    BoundResult,
    GainTerm,
    VirtualChannel,
    beta_star,
    corollary1_bound,
    q_form,
    q_min,
    theorem1_bound,
    virtual_channel,
)
from .entropy import EntropyEstimate, estimate_histogram, estimate_knn, gaussian_entropy
from .lemma_eval import LemmaConfig, lemma_bound, objective_samples, sweep
from .oracle import GaussianJoint, gp_rate, gp_rate_max
from .sampling import SampleBatch, Seed, draw, empirical_stats
from .scenario import (
    ChannelScenario,
    GainDistribution,
    MarginalFamily,
    NoiseModel,
    SecondOrderStats,
    moment_algebra,
    scenario_from_stats,
    validate,
)

__version__ = "0.1.0"
