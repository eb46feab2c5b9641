"""Seeded joint sampling of ``(X_G, Z, N_G, Y)`` at a fixed gain atom.

Rows are generated in fixed-size blocks. Each block and column draws from
its own counter-based stream keyed on ``(root, label, atom, block, column)``,
so a batch depends only on the row positions it covers: drawing ``n`` rows
at once or as several chunks gives identical bytes, whatever the worker
count or scheduling.
"""

from __future__ import annotations

import csv
import math
import zlib
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateColumn, PreconditionError, UnsupportedSampling
from .scenario import ChannelScenario, SecondOrderStats, interference_variance, validate

BLOCK = 1 << 16
_COLUMNS = {"x": 0, "z": 1, "noise": 2}
UINT64_MAX = 2**64 - 1


@dataclass(frozen=True)
class Seed:
    """Root of the stream tree; child streams are derived, never shared."""

    root: int = 0

    def __post_init__(self):
        if not (0 <= int(self.root) <= UINT64_MAX):
            raise PreconditionError(f"seed {self.root!r} is not an unsigned 64-bit integer")

    def generator(self, label: str, atom: int, batch: int, column: int = 0) -> np.random.Generator:
        key = (zlib.crc32(label.encode()), int(atom), int(batch), int(column))
        ss = np.random.SeedSequence(entropy=int(self.root), spawn_key=key)
        return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True, eq=False)
class SampleBatch:
    eta: float
    x: np.ndarray
    z: np.ndarray
    noise: np.ndarray
    y: np.ndarray

    @property
    def n(self) -> int:
        return len(self.x)


def _block(s: ChannelScenario, seed: Seed, atom: int, b: int, label: str):
    sx = math.sqrt(s.power)
    x = sx * seed.generator(label, atom, b, _COLUMNS["x"]).standard_normal(BLOCK)
    z_rng = seed.generator(label, atom, b, _COLUMNS["z"])
    if interference_variance(s) == 0:
        z = np.full(BLOCK, s.interference.moments()[0])
    else:
        z = s.interference.sample(z_rng, BLOCK)
    n_rng = seed.generator(label, atom, b, _COLUMNS["noise"])
    noise_model = s.noise
    if noise_model.is_linear:
        w = noise_model.innovation
        if w.moments()[1] == 0:
            wv = np.full(BLOCK, w.moments()[0])
        else:
            wv = w.sample(n_rng, BLOCK)
        noise = noise_model.c_x * x + noise_model.c_z * z + wv
    else:
        noise = np.asarray(noise_model.sampler(x, z, n_rng), dtype=float)
        if noise.shape != x.shape:
            raise ValueError(f"noise sampler returned shape {noise.shape}, expected {x.shape}")
    return x, z, noise


def draw(s: ChannelScenario, eta: float, n: int, seed: Seed, *, atom: int = 0, start: int = 0,
         label: str = "sampling") -> SampleBatch:
    """Rows ``start .. start+n-1`` of the iid sample stream for gain atom ``atom``.

    ``X`` is Gaussian with variance ``s.power``, independent of ``Z``; the
    noise is realised from the scenario's noise model.
    """
    validate(s)
    if n < 1 or start < 0:
        raise PreconditionError(f"need n >= 1 and start >= 0, got n={n}, start={start}")
    if s.interference.is_unbounded:
        raise UnsupportedSampling("interference with unbounded variance cannot be sampled")
    if s.stats_override is not None:
        raise UnsupportedSampling("a stats-only scenario has no generative noise model")
    first, last = start // BLOCK, (start + n - 1) // BLOCK
    parts = [_block(s, seed, atom, b, label) for b in range(first, last + 1)]
    off = start - first * BLOCK
    x, z, noise = (np.concatenate(col)[off:off + n] for col in zip(*parts))
    y = eta * x + z + noise
    return SampleBatch(float(eta), x, z, noise, y)


def empirical_stats(b: SampleBatch) -> SecondOrderStats:
    """Sample variances (unbiased) and correlations from centred products.

    Zero interference variance maps to ``rho_zn = 0``; a constant input or
    noise column, or estimates that leave the valid correlation region,
    raise :class:`DegenerateColumn`.
    """
    if b.n < 2:
        raise PreconditionError("empirical_stats needs at least 2 rows")
    xc = b.x - b.x.mean()
    zc = b.z - b.z.mean()
    nc = b.noise - b.noise.mean()
    sxx, szz, snn = float(xc @ xc), float(zc @ zc), float(nc @ nc)
    for name, v in (("x", sxx), ("noise", snn)):
        if v == 0:
            raise DegenerateColumn(f"column {name!r} has zero sample variance")
    rho_xn = float(xc @ nc) / math.sqrt(sxx * snn)
    rho_zn = float(zc @ nc) / math.sqrt(szz * snn) if szz > 0 else 0.0
    if rho_xn**2 + rho_zn**2 >= 1:
        raise DegenerateColumn(
            f"estimated rho_xn={rho_xn:.12g}, rho_zn={rho_zn:.12g}: noise is (numerically) "
            "a deterministic function of the input and interference"
        )
    return SecondOrderStats(sxx / (b.n - 1), snn / (b.n - 1), rho_xn, rho_zn)


def decorrelated_residual(b: SampleBatch, stats: SecondOrderStats, sigma_z2: float) -> np.ndarray:
    """``N~ = N - rho_xn (sn/sx) X - rho_zn (sn/sz) Z`` evaluated on the batch."""
    out = b.noise - stats.rho_xn * stats.sigma_n / stats.sigma_x * b.x
    if stats.rho_zn != 0:
        out = out - stats.rho_zn * stats.sigma_n / math.sqrt(sigma_z2) * b.z
    return out


def write_batch_csv(b: SampleBatch, fh) -> None:
    """Export rows as CSV with header ``x,z,n,y`` (shortest round-trip floats)."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "z", "n", "y"])
    for row in zip(b.x.tolist(), b.z.tolist(), b.noise.tolist(), b.y.tolist()):
        w.writerow([repr(v) for v in row])
