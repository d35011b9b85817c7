"""Seeded Monte Carlo sweeps over SNR, resolution, and antenna grids.

Every design inside a trial sees the identical channel realization, so design
comparisons are paired. Per-trial seeds are derived from the master seed with
a splitmix-style mixer, which keeps results independent of execution order
and lets a shorter run reproduce the first trials of a longer one exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ArrayGeometry, ChannelParams, generate_channel
from .combiners import (
    DESIGN_TAGS,
    AngleCodebook,
    angle_codebook,
    arv_only_combiner,
    greedy_mi_combiner,
    svd_combiner,
    svd_dft_combiner,
    two_stage_arv_combiner,
)
from .metrics import MiContext, mutual_information
from .quantization import make_adc_model

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# designs whose first stage draws from the spatial-angle codebook
_CODEBOOK_DESIGNS = frozenset({"ARV_TSAC", "ARV", "GREEDY_MI"})


def _splitmix64(z: int) -> int:
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """Collision-free 64-bit stream seed for (master_seed, trial_index).

    Distinct indices under the same master seed map to distinct seeds (the
    mixer chains bijections), so trial streams never alias.
    """
    if trial_index < 0:
        raise ValueError(f"trial_index must be >= 0, got {trial_index}")
    mixed = _splitmix64(master_seed & _MASK64) ^ ((trial_index * _GOLDEN) & _MASK64)
    return _splitmix64(mixed)


def db_to_linear(snr_db: float) -> float:
    """Map an SNR in dB to the linear power ratio used by the rate formulas."""
    return float(10.0 ** (snr_db / 10.0))


@dataclass(frozen=True)
class SweepConfig:
    """Full description of one Monte Carlo sweep.

    The antenna grid comes either from a fixed n_r with an explicit n_rf list,
    or from a fixed chain ratio kappa applied to a list of array sizes
    (n_rf = ceil(kappa * n_r)). codebook_size None means "match each grid
    point's antenna count", which keeps ARV selections orthonormal.
    """

    n_u: int
    bits: int
    snr_db_list: tuple[float, ...]
    mean_paths: float
    master_seed: int
    n_r: int | None = None
    n_rf_list: tuple[int, ...] | None = None
    kappa: float | None = None
    n_r_list: tuple[int, ...] | None = None
    trials: int = 500
    designs: tuple[str, ...] = DESIGN_TAGS
    codebook_size: int | None = None

    def __post_init__(self) -> None:
        explicit = self.n_r is not None and self.n_rf_list is not None
        ratio = self.kappa is not None and self.n_r_list is not None
        if explicit == ratio:
            raise ValueError(
                "give either n_r with n_rf_list, or kappa with n_r_list (not both)"
            )
        if self.n_u < 1:
            raise ValueError(f"n_u must be >= 1, got {self.n_u}")
        if self.bits < 1:
            raise ValueError(f"bits must be >= 1, got {self.bits}")
        if not self.mean_paths > 0:
            raise ValueError(f"mean_paths must be > 0, got {self.mean_paths}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.snr_db_list:
            raise ValueError("snr_db_list must not be empty")
        if any(not math.isfinite(s) for s in self.snr_db_list):
            raise ValueError("snr_db values must be finite")
        if ratio and not 0.0 < self.kappa <= 1.0:
            raise ValueError(f"kappa must lie in (0, 1], got {self.kappa}")
        if not self.designs:
            raise ValueError("designs must not be empty")
        unknown = set(self.designs) - set(DESIGN_TAGS)
        if unknown:
            raise ValueError(f"unknown designs: {sorted(unknown)}")
        for n_r, n_rf in self.antenna_grid():
            if not self.n_u <= n_rf <= n_r:
                raise ValueError(
                    f"grid point needs n_u <= n_rf <= n_r, got "
                    f"n_u={self.n_u}, n_rf={n_rf}, n_r={n_r}"
                )
            if self._needs_codebook():
                size = self.codebook_size if self.codebook_size is not None else n_r
                if size < n_rf:
                    raise ValueError(
                        f"codebook of size {size} cannot supply {n_rf} chains"
                    )

    def _needs_codebook(self) -> bool:
        return bool(_CODEBOOK_DESIGNS & set(self.designs))

    def antenna_grid(self) -> list[tuple[int, int]]:
        """(n_r, n_rf) pairs of the sweep, in configuration order."""
        if self.n_r is not None:
            return [(self.n_r, n_rf) for n_rf in self.n_rf_list]
        return [(n_r, math.ceil(self.kappa * n_r)) for n_r in self.n_r_list]


@dataclass(frozen=True)
class SweepRow:
    """Aggregated rate statistics of one (design, grid point, SNR) cell."""

    design: str
    n_r: int
    n_rf: int
    snr_db: float
    bits: int
    trials: int
    mi_mean: float
    mi_std: float
    mi_sem: float


@dataclass
class SweepResult:
    """Sweep output: sorted aggregate rows plus per-trial values per cell."""

    rows: list[SweepRow]
    trial_values: dict[tuple[str, int, int, float], np.ndarray] = field(
        default_factory=dict
    )


def _build_static_combiner(design: str, channel, n_rf: int, codebook):
    if design == "SVD":
        return svd_combiner(channel, n_rf)
    if design == "SVD_DFT":
        return svd_dft_combiner(channel, n_rf)
    if design == "ARV_TSAC":
        return two_stage_arv_combiner(channel, n_rf, codebook)
    if design == "ARV":
        return arv_only_combiner(channel, n_rf, codebook)
    raise ValueError(f"unknown design {design!r}")


def run_sweep(config: SweepConfig) -> SweepResult:
    """Run the configured Monte Carlo sweep.

    For each trial and array size one channel is drawn from a seed derived
    from (master_seed, trial, n_r); every design and SNR cell then reuses that
    realization. Rate-seeking selection (GREEDY_MI) is rebuilt per SNR because
    its picks depend on the operating point; the other designs are built once
    per grid point.

    Returns per-cell mean, sample standard deviation, and standard error of
    the mean, plus the raw per-trial rates keyed by
    (design, n_r, n_rf, snr_db).
    """
    adc = make_adc_model(config.bits)
    grid = config.antenna_grid()
    contexts = {
        snr_db: MiContext(snr=db_to_linear(snr_db), adc=adc)
        for snr_db in config.snr_db_list
    }

    by_n_r: dict[int, list[int]] = {}
    for n_r, n_rf in grid:
        by_n_r.setdefault(n_r, []).append(n_rf)

    values = {
        (design, n_r, n_rf, snr_db): np.empty(config.trials)
        for design in config.designs
        for n_r, n_rf in grid
        for snr_db in config.snr_db_list
    }

    codebooks: dict[int, AngleCodebook] = {}
    if config._needs_codebook():
        for n_r in by_n_r:
            size = config.codebook_size if config.codebook_size is not None else n_r
            codebooks[n_r] = angle_codebook(ArrayGeometry(n_r), size)

    for trial in range(config.trials):
        trial_seed = derive_trial_seed(config.master_seed, trial)
        for n_r, n_rf_values in by_n_r.items():
            rng = np.random.default_rng(derive_trial_seed(trial_seed, n_r))
            params = ChannelParams(
                n_users=config.n_u,
                mean_paths=config.mean_paths,
                geometry=ArrayGeometry(n_r),
            )
            channel = generate_channel(params, rng)
            codebook = codebooks.get(n_r)
            for n_rf in n_rf_values:
                for design in config.designs:
                    if design == "GREEDY_MI":
                        for snr_db, ctx in contexts.items():
                            combiner = greedy_mi_combiner(
                                channel, n_rf, codebook, ctx.snr, adc
                            )
                            values[(design, n_r, n_rf, snr_db)][trial] = (
                                mutual_information(channel, combiner, ctx)
                            )
                    else:
                        combiner = _build_static_combiner(
                            design, channel, n_rf, codebook
                        )
                        for snr_db, ctx in contexts.items():
                            values[(design, n_r, n_rf, snr_db)][trial] = (
                                mutual_information(channel, combiner, ctx)
                            )

    rows = []
    for key in sorted(values):
        design, n_r, n_rf, snr_db = key
        cell = values[key]
        mean = float(np.mean(cell))
        std = float(np.std(cell, ddof=1)) if config.trials > 1 else 0.0
        rows.append(
            SweepRow(
                design=design,
                n_r=n_r,
                n_rf=n_rf,
                snr_db=snr_db,
                bits=config.bits,
                trials=config.trials,
                mi_mean=mean,
                mi_std=std,
                mi_sem=std / math.sqrt(config.trials),
            )
        )
    return SweepResult(rows=rows, trial_values=values)
