"""Block modem with circular pulse shaping.

A block carries subcarriers x subsymbols payload symbols on N = K*M samples.
Column (m*K + k) of the modulation matrix is the prototype pulse circularly
shifted by m*K samples and modulated onto subcarrier k, so payloads are
ordered subsymbol-major.

Two payload conventions are supported: plain complex symbols ("qam") and the
offset mode ("croqam") where the real and imaginary halves of the payload
ride the same matrix with the imaginary branch circularly rotated by half a
subsymbol period.  The conventional offset scheme (symmetric half-Nyquist
pulse) is realized by folding the j^k subcarrier phase into the matrix
columns; the conjugate-root pulse needs no such factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from croqam.filters import PrototypeFilter

DETECTORS = ("zf", "mf")
MODULATION_MODES = ("qam", "croqam")

# ZF build refuses matrices with condition estimates beyond this
CONDITION_LIMIT = 1e9

DEFAULT_CP_LENGTH = 16


@dataclass(frozen=True)
class GfdmConfig:
    """Static description of one block modem."""

    subcarriers: int
    subsymbols: int
    filter: PrototypeFilter
    detector: str
    modulation_mode: str
    cp_length: int = DEFAULT_CP_LENGTH
    guard_subsymbols: int = 0

    def __post_init__(self) -> None:
        if self.subcarriers < 1 or self.subsymbols < 1:
            raise ValueError("subcarriers and subsymbols must be positive")
        if self.detector not in DETECTORS:
            raise ValueError(f"detector must be one of {DETECTORS}")
        if self.modulation_mode not in MODULATION_MODES:
            raise ValueError(f"modulation_mode must be one of {MODULATION_MODES}")
        if self.modulation_mode == "croqam":
            if self.subcarriers % 2:
                raise ValueError("croqam mode needs an even subcarrier count")
            if self.detector == "zf":
                raise ValueError(
                    "croqam mode is defined with matched-filter detection only"
                )
        n = self.block_length
        grid = self.filter.grid
        if grid.n_bins != n or grid.subcarriers != self.subcarriers:
            raise ValueError(
                f"filter grid ({grid.n_bins} bins, {grid.subcarriers} per period) "
                f"does not match K={self.subcarriers}, M={self.subsymbols}"
            )
        if not 0 <= self.cp_length < n:
            raise ValueError("cp_length must satisfy 0 <= cp_length < block length")
        if not 0 <= self.guard_subsymbols <= self.subsymbols:
            raise ValueError("guard_subsymbols must lie in [0, subsymbols]")

    @property
    def block_length(self) -> int:
        return self.subcarriers * self.subsymbols

    @property
    def fold_subcarrier_phase(self) -> bool:
        """Conventional offset mode: j^k absorbed into the matrix columns."""
        return self.modulation_mode == "croqam" and self.filter.family == "rrc"


@dataclass(frozen=True)
class GfdmModem:
    """Immutable modem: modulation matrix plus precomputed detectors."""

    config: GfdmConfig
    forward: np.ndarray
    adjoint: np.ndarray
    inverse: np.ndarray | None
    cond_estimate: float
    noise_enhancement_db: float

    @property
    def detector_matrix(self) -> np.ndarray:
        if self.config.detector == "zf":
            assert self.inverse is not None
            return self.inverse
        return self.adjoint


@dataclass(frozen=True)
class GfdmBlock:
    """One modulated block: payload, samples, and the CP-framed samples."""

    payload: np.ndarray
    samples: np.ndarray
    with_cp: np.ndarray


def modulation_matrix(cfg: GfdmConfig) -> np.ndarray:
    """Assemble the N x N matrix of circular time-frequency pulse shifts."""
    k, m = cfg.subcarriers, cfg.subsymbols
    n = cfg.block_length
    g = cfg.filter.time_response
    idx = np.arange(n)
    shifts = g[(idx[:, None] - k * np.arange(m)[None, :]) % n]
    phases = np.exp(2j * np.pi * np.outer(idx, np.arange(k)) / k)
    matrix = (shifts[:, :, None] * phases[:, None, :]).reshape(n, n)
    if cfg.fold_subcarrier_phase:
        matrix = matrix * (1j ** (np.arange(n) % k))[None, :]
    return matrix


def build_modem(cfg: GfdmConfig) -> GfdmModem:
    """Construct the modem, its detector matrices, and conditioning facts.

    Zero-forcing builds refuse condition estimates above 1e9.  The noise
    enhancement is the mean squared row norm of the inverse in dB for ZF;
    matched-filter rows are unit-norm conjugated columns, so 0 dB applies
    definitionally.
    """
    matrix = modulation_matrix(cfg)
    cond = float(np.linalg.cond(matrix))
    inverse = None
    enhancement_db = 0.0
    if cfg.detector == "zf":
        if not np.isfinite(cond) or cond > CONDITION_LIMIT:
            raise ValueError(
                "modulation matrix is too ill-conditioned for zero-forcing "
                f"(cond ~ {cond:.3e}) for K={cfg.subcarriers}, M={cfg.subsymbols}, "
                f"filter {cfg.filter.family} alpha={cfg.filter.rolloff}"
            )
        inverse = np.linalg.inv(matrix)
        mean_sq_row = float(np.mean(np.sum(np.abs(inverse) ** 2, axis=1)))
        enhancement_db = float(10.0 * np.log10(mean_sq_row))
        inverse.flags.writeable = False
    adjoint = matrix.conj().T
    matrix.flags.writeable = False
    adjoint.flags.writeable = False
    return GfdmModem(cfg, matrix, adjoint, inverse, cond, enhancement_db)


def modulate(payload: np.ndarray, modem: GfdmModem) -> GfdmBlock:
    """Map a length-N payload to block samples (and their CP framing)."""
    payload = np.asarray(payload, dtype=complex)
    cfg = modem.config
    if payload.shape != (cfg.block_length,):
        raise ValueError(f"payload must have length {cfg.block_length}")
    if cfg.modulation_mode == "qam":
        samples = modem.forward @ payload
    else:
        half = cfg.subcarriers // 2
        samples = modem.forward @ payload.real + 1j * np.roll(
            modem.forward @ payload.imag, half
        )
    return GfdmBlock(payload, samples, add_cp(samples, cfg.cp_length))


def detect(equalized: np.ndarray, modem: GfdmModem) -> np.ndarray:
    """Recover the payload from equalized, CP-stripped block samples."""
    equalized = np.asarray(equalized, dtype=complex)
    cfg = modem.config
    if equalized.shape != (cfg.block_length,):
        raise ValueError(f"input must have length {cfg.block_length}")
    det = modem.detector_matrix
    if cfg.modulation_mode == "qam":
        return det @ equalized
    half = cfg.subcarriers // 2
    real_part = (det @ equalized).real
    imag_part = (det @ np.roll(equalized, -half)).imag
    return real_part + 1j * imag_part


def apply_guard_symbols(payload: np.ndarray, n_guard: int, cfg: GfdmConfig) -> np.ndarray:
    """Zero the first n_guard subsymbols (all subcarriers); returns a copy."""
    if not 0 <= n_guard <= cfg.subsymbols:
        raise ValueError(f"n_guard must lie in [0, {cfg.subsymbols}]")
    out = np.array(payload, dtype=complex, copy=True)
    out[: n_guard * cfg.subcarriers] = 0.0
    return out


def add_cp(samples: np.ndarray, cp_length: int) -> np.ndarray:
    """Prefix the block with a copy of its last cp_length samples."""
    samples = np.asarray(samples)
    if not 0 <= cp_length < len(samples):
        raise ValueError("cp_length must satisfy 0 <= cp_length < block length")
    if cp_length == 0:
        return samples.copy()
    return np.concatenate([samples[-cp_length:], samples])


def remove_cp(framed: np.ndarray, cp_length: int) -> np.ndarray:
    """Drop the cyclic prefix."""
    framed = np.asarray(framed)
    if cp_length < 0 or cp_length >= len(framed):
        raise ValueError("cp_length must satisfy 0 <= cp_length < frame length")
    return framed[cp_length:]
