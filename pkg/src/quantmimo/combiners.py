"""Analog combiner designs: two-stage constructions and one-stage baselines.

Every design factors as W = W1 * W2. The first stage aggregates channel
energy onto the RF chains (array response vectors picked greedily, or left
singular vectors); the second stage either spreads that energy uniformly
across chains with a unitary DFT or leaves it alone (identity). Spreading is
what keeps per-chain quantizers from saturating the rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ArrayGeometry, steering_vector
from .metrics import MiContext, mutual_information
from .quantization import AdcModel

DESIGN_TAGS = ("ARV_TSAC", "ARV", "SVD_DFT", "SVD", "GREEDY_MI")


@dataclass(frozen=True)
class AngleCodebook:
    """Steering vectors on an evenly spaced spatial-angle grid.

    Grid angles are 2n/size - 1 for n = 1..size; at size equal to the antenna
    count (with half-wavelength spacing) the vectors are orthonormal.
    """

    spatial_angles: np.ndarray
    vectors: np.ndarray

    @property
    def size(self) -> int:
        return self.spatial_angles.shape[0]


@dataclass
class Combiner:
    """A two-stage analog combiner and the design that produced it."""

    w1: np.ndarray
    w2: np.ndarray
    design_tag: str
    selected_angles: np.ndarray | None = None
    effective: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        if self.design_tag not in DESIGN_TAGS:
            raise ValueError(f"unknown design tag {self.design_tag!r}")
        if self.w1.shape[1] != self.w2.shape[0]:
            raise ValueError(
                f"stage shapes do not chain: {self.w1.shape} x {self.w2.shape}"
            )
        self.effective = self.w1 @ self.w2

    @property
    def n_rf(self) -> int:
        return self.w2.shape[1]


def angle_codebook(geometry: ArrayGeometry, size: int | None = None) -> AngleCodebook:
    """Build the even spatial-angle codebook; size defaults to the antenna count."""
    if size is None:
        size = geometry.n_antennas
    if size < 1:
        raise ValueError(f"codebook size must be >= 1, got {size}")
    angles = 2.0 * np.arange(1, size + 1) / size - 1.0
    vectors = np.stack([steering_vector(geometry, t) for t in angles], axis=1)
    return AngleCodebook(spatial_angles=angles, vectors=vectors)


def dft_matrix(n: int) -> np.ndarray:
    """Unitary DFT matrix; every entry has modulus 1/sqrt(n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    idx = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)


def _channel_array(h) -> np.ndarray:
    return np.asarray(getattr(h, "h", h))


def _fix_column_phases(u: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive.

    Removes the per-column phase ambiguity of the SVD so repeated runs return
    bit-identical combiners.
    """
    anchors = u[np.argmax(np.abs(u), axis=0), np.arange(u.shape[1])]
    phases = np.where(np.abs(anchors) > 0, anchors / np.abs(anchors), 1.0)
    return u * phases.conj()


def _left_singular_basis(h_mat: np.ndarray, n_cols: int) -> np.ndarray:
    """First n_cols left singular vectors, descending, phase-normalized.

    The full decomposition supplies an orthonormal completion when n_cols
    exceeds the channel rank.
    """
    if n_cols > h_mat.shape[0]:
        raise ValueError(
            f"cannot take {n_cols} combiner columns from {h_mat.shape[0]} antennas"
        )
    u, _, _ = np.linalg.svd(h_mat, full_matrices=True)
    return _fix_column_phases(u[:, :n_cols])


def svd_combiner(h, n_rf: int) -> Combiner:
    """Singular-basis combining without spreading (saturates under quantization)."""
    w1 = _left_singular_basis(_channel_array(h), n_rf)
    return Combiner(w1=w1, w2=np.eye(n_rf, dtype=complex), design_tag="SVD")


def svd_dft_combiner(h, n_rf: int) -> Combiner:
    """Singular-basis combining followed by DFT spreading."""
    w1 = _left_singular_basis(_channel_array(h), n_rf)
    return Combiner(w1=w1, w2=dft_matrix(n_rf), design_tag="SVD_DFT")


def optimal_two_stage_combiner(h, n_rf: int, n_u: int) -> Combiner:
    """Rate-optimal construction: top-n_u singular basis, orthonormal completion,
    DFT spreading.

    For equal channel gains this attains the maximum over semi-unitary
    combiners; in general it achieves the closed-form two-stage rate.
    """
    h_mat = _channel_array(h)
    if not 1 <= n_u <= n_rf:
        raise ValueError(f"need 1 <= n_u <= n_rf, got n_u={n_u}, n_rf={n_rf}")
    w1 = _left_singular_basis(h_mat, n_rf)
    return Combiner(w1=w1, w2=dft_matrix(n_rf), design_tag="SVD_DFT")


def _max_gain_arv_selection(
    h_mat: np.ndarray, n_rf: int, codebook: AngleCodebook
) -> tuple[np.ndarray, np.ndarray]:
    """Greedy max-gain ARV picks with projection deflation.

    Each round scores every remaining codebook vector by its aggregate channel
    gain ||a^H H_res||^2, keeps the best (ties break toward the lowest codebook
    index), and deflates the residual channel by the chosen direction.
    """
    if n_rf > codebook.size:
        raise ValueError(
            f"codebook of size {codebook.size} cannot supply {n_rf} chains"
        )
    if codebook.vectors.shape[0] != h_mat.shape[0]:
        raise ValueError("codebook and channel antenna counts differ")
    residual = h_mat.copy()
    remaining = list(range(codebook.size))
    columns, angles = [], []
    for _ in range(n_rf):
        candidates = codebook.vectors[:, remaining]
        gains = np.sum(np.abs(candidates.conj().T @ residual) ** 2, axis=1)
        best = remaining[int(np.argmax(gains))]
        chosen = codebook.vectors[:, best]
        columns.append(chosen)
        angles.append(codebook.spatial_angles[best])
        residual = residual - np.outer(chosen, chosen.conj() @ residual)
        remaining.remove(best)
    return np.stack(columns, axis=1), np.array(angles)


def two_stage_arv_combiner(h, n_rf: int, codebook: AngleCodebook) -> Combiner:
    """Max-gain ARV aggregation followed by DFT spreading."""
    w1, angles = _max_gain_arv_selection(_channel_array(h), n_rf, codebook)
    return Combiner(
        w1=w1, w2=dft_matrix(n_rf), design_tag="ARV_TSAC", selected_angles=angles
    )


def arv_only_combiner(h, n_rf: int, codebook: AngleCodebook) -> Combiner:
    """Max-gain ARV aggregation without spreading."""
    w1, angles = _max_gain_arv_selection(_channel_array(h), n_rf, codebook)
    return Combiner(
        w1=w1,
        w2=np.eye(n_rf, dtype=complex),
        design_tag="ARV",
        selected_angles=angles,
    )


def greedy_mi_combiner(
    h, n_rf: int, codebook: AngleCodebook, snr: float, adc: AdcModel
) -> Combiner:
    """One-stage baseline that grows the combiner by exact rate improvement.

    Each round appends the codebook vector whose addition maximizes the
    quantized mutual information of the partial combiner (ties break toward
    the lowest codebook index). Much costlier than the gain-based selection
    and dependent on the operating SNR.
    """
    h_mat = _channel_array(h)
    if n_rf > codebook.size:
        raise ValueError(
            f"codebook of size {codebook.size} cannot supply {n_rf} chains"
        )
    if codebook.vectors.shape[0] != h_mat.shape[0]:
        raise ValueError("codebook and channel antenna counts differ")
    ctx = MiContext(snr=snr, adc=adc)
    remaining = list(range(codebook.size))
    columns: list[np.ndarray] = []
    angles = []
    for step in range(n_rf):
        trial = np.empty((h_mat.shape[0], step + 1), dtype=complex)
        if columns:
            trial[:, :step] = np.stack(columns, axis=1)
        best_idx, best_rate = remaining[0], -np.inf
        for idx in remaining:
            trial[:, step] = codebook.vectors[:, idx]
            rate = mutual_information(h_mat, trial, ctx)
            if rate > best_rate:
                best_idx, best_rate = idx, rate
        columns.append(codebook.vectors[:, best_idx])
        angles.append(codebook.spatial_angles[best_idx])
        remaining.remove(best_idx)
    return Combiner(
        w1=np.stack(columns, axis=1),
        w2=np.eye(n_rf, dtype=complex),
        design_tag="GREEDY_MI",
        selected_angles=np.array(angles),
    )


def save_matrix_text(path, matrix: np.ndarray) -> None:
    """Write a complex matrix as text: a 'rows cols' header line, then
    row-major re+imj tokens, one row per line."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
    lines = [f"{matrix.shape[0]} {matrix.shape[1]}"]
    for row in matrix:
        lines.append(" ".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row))
    with open(path, "w") as handle:
        handle.write("\n".join(lines) + "\n")


def load_matrix_text(path) -> np.ndarray:
    """Read a matrix written by save_matrix_text."""
    with open(path) as handle:
        header = handle.readline().split()
        if len(header) != 2:
            raise ValueError(f"malformed matrix header in {path}")
        rows, cols = int(header[0]), int(header[1])
        tokens = handle.read().split()
    if len(tokens) != rows * cols:
        raise ValueError(
            f"expected {rows * cols} entries in {path}, found {len(tokens)}"
        )
    values = np.array([complex(tok) for tok in tokens])
    return values.reshape(rows, cols)
