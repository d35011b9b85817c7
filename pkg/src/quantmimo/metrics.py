"""Mutual information of quantized combining and its closed-form bounds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.linalg import solve_triangular

from .quantization import AdcModel

_LOG2 = np.log(2.0)


@dataclass(frozen=True)
class MiContext:
    """Evaluation context: linear SNR, ADC model, optional RF-chain ratio."""

    snr: float
    adc: AdcModel
    kappa: float | None = None

    def __post_init__(self) -> None:
        if self.snr < 0:
            raise ValueError(f"snr must be >= 0, got {self.snr}")
        if self.kappa is not None and not 0.0 < self.kappa <= 1.0:
            raise ValueError(f"kappa must lie in (0, 1], got {self.kappa}")


@dataclass(frozen=True)
class SingularProfile:
    """Descending eigenvalues of H H^H plus the dimensions the rate forms use."""

    values: np.ndarray
    n_r: int
    n_u: int
    n_rf: int


def _channel_array(h) -> np.ndarray:
    return np.asarray(getattr(h, "h", h))


def _combiner_array(w) -> np.ndarray:
    return np.asarray(getattr(w, "effective", w))


def singular_profile(h, n_rf: int) -> SingularProfile:
    """Channel gain profile (eigenvalues of H H^H, largest first)."""
    h_mat = _channel_array(h)
    values = np.linalg.svd(h_mat, compute_uv=False) ** 2
    return SingularProfile(
        values=values, n_r=h_mat.shape[0], n_u=h_mat.shape[1], n_rf=n_rf
    )


def mutual_information(h, combiner, ctx: MiContext) -> float:
    """Achievable sum rate, in bits, of a quantized receive combiner.

    Evaluates log2 det(I + snr*alpha^2 * D^{-1} W^H H H^H W) with
    D = alpha^2 W^H W + R_qq, the noise-plus-quantization covariance after
    the combiner. The determinant is reduced through a Cholesky factor of D
    to an n_users-sized Gram form, which is exact and stays stable for wide
    combiners.

    Parameters
    ----------
    h : ChannelMatrix or ndarray
        Channel realization (antennas x users).
    combiner : Combiner or ndarray
        Effective analog combiner (antennas x chains).
    ctx : MiContext
        SNR and ADC resolution to evaluate at.
    """
    h_mat = _channel_array(h)
    w = _combiner_array(combiner)
    if w.shape[0] != h_mat.shape[0]:
        raise ValueError(
            f"combiner rows must match channel rows, got {w.shape} and {h_mat.shape}"
        )
    alpha, beta, rho = ctx.adc.alpha, ctx.adc.beta, ctx.snr
    s = w.conj().T @ h_mat
    gram = w.conj().T @ w
    noise_diag = alpha * beta * (
        rho * np.sum(np.abs(s) ** 2, axis=1) + np.real(np.diagonal(gram))
    )
    d = alpha**2 * gram + np.diag(noise_diag)
    try:
        chol = np.linalg.cholesky(d)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            "noise covariance is not positive definite; combiner or channel is corrupt"
        ) from exc
    half = solve_triangular(chol, s, lower=True, check_finite=False)
    gram_small = rho * alpha**2 * (half.conj().T @ half)
    eigs = np.maximum(np.linalg.eigvalsh(gram_small), 0.0)
    return float(np.sum(np.log1p(eigs)) / _LOG2)


def two_stage_rate_closed_form(profile: SingularProfile, ctx: MiContext) -> float:
    """Closed-form rate of singular-basis combining with constant-modulus spreading.

    sum_k log2(1 + alpha*snr*N_RF*(lam_k/N_r) / (kappa + beta*snr*sum_i lam_i/N_r))
    over the n_u strongest channel gains, with kappa = N_RF/N_r. Matches
    mutual_information evaluated on the corresponding combiner because the
    spreading stage equalizes the per-chain power exactly.
    """
    gains = np.zeros(profile.n_u)
    top = np.sort(profile.values)[::-1][: profile.n_u]
    gains[: top.shape[0]] = top
    kappa = ctx.kappa if ctx.kappa is not None else profile.n_rf / profile.n_r
    alpha = ctx.adc.alpha
    denom = kappa + (1.0 - alpha) * ctx.snr * np.sum(gains) / profile.n_r
    terms = np.log1p(alpha * ctx.snr * profile.n_rf * gains / profile.n_r / denom)
    return float(np.sum(terms) / _LOG2)


def optimal_mi_equal_gains(n_u: int, n_rf: int, gain: float, ctx: MiContext) -> float:
    """Best achievable rate when all n_u channel gains equal `gain`.

    n_u * log2(1 + alpha*gain*N_RF / (gain*n_u*(1-alpha) + N_RF/snr)); the
    maximum over semi-unitary combiners, attained by the two-stage design.
    Finite for snr -> inf, zero at snr = 0.
    """
    if n_u < 1 or n_rf < n_u:
        raise ValueError(f"need 1 <= n_u <= n_rf, got n_u={n_u}, n_rf={n_rf}")
    if gain < 0:
        raise ValueError(f"gain must be >= 0, got {gain}")
    if ctx.snr == 0 or gain == 0:
        return 0.0
    alpha = ctx.adc.alpha
    ratio = alpha * gain * n_rf / (gain * n_u * (1.0 - alpha) + n_rf / ctx.snr)
    return float(n_u * np.log1p(ratio) / _LOG2)


def svd_upper_bound(n_u: int, adc: AdcModel) -> float:
    """Saturation rate of pure singular-basis combining: n_u*log2(1 + alpha/beta).

    Independent of SNR and antenna count; quantization alone caps the rate.
    """
    if n_u < 1:
        raise ValueError(f"n_u must be >= 1, got {n_u}")
    if adc.beta <= 0:
        raise ValueError("bound diverges as the quantizer distortion vanishes")
    return float(n_u * np.log1p(adc.alpha / adc.beta) / _LOG2)


def general_upper_bound(m: int, n_rf: int, adc: AdcModel) -> float:
    """Rate cap m*log2(1 + alpha*N_RF/(beta*m)) for any semi-unitary combiner.

    Increasing in m, so m = n_u dominates every achievable rate.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if n_rf < 1:
        raise ValueError(f"n_rf must be >= 1, got {n_rf}")
    if adc.beta <= 0:
        raise ValueError("bound diverges as the quantizer distortion vanishes")
    return float(m * np.log1p(adc.alpha * n_rf / (adc.beta * m)) / _LOG2)


def scaling_slope(mi_by_nrf: Mapping[int, float]) -> float:
    """Least-squares slope of rate versus log2(N_RF).

    Spreading designs approach slope n_u (one extra bit per user per chain
    doubling); saturating designs flatten toward zero.
    """
    if len(mi_by_nrf) < 3:
        raise ValueError(f"need at least 3 points, got {len(mi_by_nrf)}")
    n_rf = np.array(sorted(mi_by_nrf))
    rates = np.array([mi_by_nrf[n] for n in n_rf])
    return float(np.polyfit(np.log2(n_rf), rates, 1)[0])


def haar_semi_unitary(
    n_rows: int, n_cols: int, rng: np.random.Generator
) -> np.ndarray:
    """Haar-distributed semi-unitary matrix via QR of a complex Gaussian."""
    if not 1 <= n_cols <= n_rows:
        raise ValueError(f"need 1 <= n_cols <= n_rows, got {n_rows}x{n_cols}")
    z = (
        rng.standard_normal((n_rows, n_cols))
        + 1j * rng.standard_normal((n_rows, n_cols))
    ) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def equal_gain_channel(
    n_r: int, n_u: int, gain: float, rng: np.random.Generator
) -> np.ndarray:
    """Synthetic channel whose n_u eigenvalues of H H^H all equal `gain`.

    Built from Haar-random singular bases; used to exercise the optimality
    results, which are exact in this regime.
    """
    if gain < 0:
        raise ValueError(f"gain must be >= 0, got {gain}")
    left = haar_semi_unitary(n_r, n_u, rng)
    right = haar_semi_unitary(n_u, n_u, rng)
    return np.sqrt(gain) * (left @ right.conj().T)
