"""Burst-mode offset-QAM transceiver using linear (non-circular) pulse shaping.

Each complex data symbol is split into its real and imaginary parts; the
imaginary branch is delayed by half a symbol period.  In conventional mode a
j^k phase rotates adjacent subcarriers into quadrature; in conjugate-root
(CR) mode the complex half-Nyquist pulse makes that factor unnecessary.

Sample layout: the pulse array is the centered time response of the
prototype filter (length span*K for a span-period filter on K samples per
period), and the burst buffer is sized so every symbol keeps its full pulse
support: symbol (k, m)'s real branch occupies buffer samples
[m*K, m*K + span*K) and its imaginary branch starts K/2 later.  Nothing is
ever truncated, so reconstruction quality is set purely by the pulse span.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from croqam.filters import PrototypeFilter

PHASE_MODES = ("conventional", "cr")

# families admissible per phase mode: the conventional conditions need a
# symmetric real pulse, the relaxed ones the conjugate-root construction
_ALLOWED_FAMILIES = {"conventional": ("rrc", "rect"), "cr": ("crrc",)}


@dataclass(frozen=True)
class OqamBurstConfig:
    """Shape and phase convention of one offset-QAM burst.

    subcarriers: K, even (the half-period offset K/2 must be an integer
        number of samples; one symbol period is K samples).
    symbols: complex QAM symbols per subcarrier in the burst.
    phase_mode: "conventional" (j^k factor) or "cr" (no factor).
    filter: prototype pulse; its grid fixes the pulse span in periods.
    """

    subcarriers: int
    symbols: int
    phase_mode: str
    filter: PrototypeFilter

    def __post_init__(self) -> None:
        if self.subcarriers < 2 or self.subcarriers % 2:
            raise ValueError("subcarriers must be even and >= 2")
        if self.symbols < 1:
            raise ValueError("symbols must be >= 1")
        if self.phase_mode not in PHASE_MODES:
            raise ValueError(f"phase_mode must be one of {PHASE_MODES}")
        allowed = _ALLOWED_FAMILIES[self.phase_mode]
        if self.filter.family not in allowed:
            raise ValueError(
                f"{self.phase_mode} mode requires filter family in {allowed}, "
                f"got {self.filter.family!r}"
            )
        if self.pulse_span % 2:
            raise ValueError("filter span (grid periods) must be even")
        per_period = self.filter.grid.subcarriers
        if per_period != self.subcarriers:
            raise ValueError(
                f"filter grid carries {per_period} samples per period, "
                f"config expects {self.subcarriers}"
            )

    @property
    def samples_per_symbol(self) -> int:
        return self.subcarriers

    @property
    def pulse_span(self) -> int:
        """Pulse length in symbol periods (= the filter grid's bins per subcarrier)."""
        return self.filter.grid.bins_per_subcarrier

    @property
    def pulse_samples(self) -> int:
        return self.pulse_span * self.subcarriers

    @property
    def burst_length(self) -> int:
        """Samples needed to hold every symbol's full pulse support."""
        k = self.subcarriers
        return (self.symbols - 1) * k + k // 2 + self.pulse_samples

    def pulse(self) -> np.ndarray:
        """Centered unit-energy pulse, resampled from the filter grid.

        The filter grid must carry subcarriers samples per period.
        """
        per_period = self.filter.grid.subcarriers
        if per_period != self.subcarriers:
            raise ValueError(
                f"filter grid carries {per_period} samples per period, "
                f"config expects {self.subcarriers}"
            )
        return np.fft.fftshift(self.filter.time_response)


def _branch_matrix(cfg: OqamBurstConfig) -> np.ndarray:
    """(pulse_samples x K) synthesis matrix: column k is the pulse modulated
    onto subcarrier k, phases anchored at the branch window start."""
    pulse = cfg.pulse()
    idx = np.arange(cfg.pulse_samples)
    k = np.arange(cfg.subcarriers)
    return pulse[:, None] * np.exp(2j * np.pi * np.outer(idx, k) / cfg.subcarriers)


def _phases(cfg: OqamBurstConfig) -> tuple[np.ndarray, np.ndarray]:
    """Per-subcarrier phase factors for the real and imaginary branches.

    The imaginary branch starts K/2 samples late, which shifts its subcarrier
    phase reference by (-1)^k; the even pulse span keeps window-anchored
    phases consistent with absolute time.
    """
    k = np.arange(cfg.subcarriers)
    fold = 1j**k if cfg.phase_mode == "conventional" else np.ones(cfg.subcarriers)
    alternate = (-1.0) ** k
    return fold, fold * alternate


def oqam_modulate(symbols: np.ndarray, cfg: OqamBurstConfig) -> np.ndarray:
    """Synthesize the burst for a K x M grid of complex symbols.

    x[n] = sum_{k,m} (Re c_{k,m} g[n - mK] + j Im c_{k,m} g[n - mK - K/2])
           * (j^k)^phi * exp(2j pi k n / K)
    with g the centered pulse, zero-padded outside its span.
    """
    symbols = np.asarray(symbols, dtype=complex)
    if symbols.shape != (cfg.subcarriers, cfg.symbols):
        raise ValueError(
            f"symbol grid must be {cfg.subcarriers} x {cfg.symbols}, got {symbols.shape}"
        )
    synth = _branch_matrix(cfg)
    phase_re, phase_im = _phases(cfg)
    k = cfg.subcarriers
    span = cfg.pulse_samples
    out = np.zeros(cfg.burst_length, dtype=complex)
    for m in range(cfg.symbols):
        start = m * k
        out[start : start + span] += synth @ (symbols[:, m].real * phase_re)
        half = start + k // 2
        out[half : half + span] += 1j * (synth @ (symbols[:, m].imag * phase_im))
    return out


def oqam_demodulate(samples: np.ndarray, cfg: OqamBurstConfig) -> np.ndarray:
    """Matched-filter recovery of the K x M symbol grid.

    Real parts are read at the full-symbol instants, imaginary parts half a
    period later; conventional mode de-rotates by j^{-k}.  Sampling is
    anchored to the modulator's origin (perfect synchronization).
    """
    samples = np.asarray(samples, dtype=complex)
    if len(samples) != cfg.burst_length:
        raise ValueError(
            f"burst must be {cfg.burst_length} samples, got {len(samples)}"
        )
    synth = _branch_matrix(cfg)
    phase_re, phase_im = _phases(cfg)
    k = cfg.subcarriers
    span = cfg.pulse_samples
    grid = np.empty((cfg.subcarriers, cfg.symbols), dtype=complex)
    for m in range(cfg.symbols):
        start = m * k
        re_part = (np.conj(phase_re) * (synth.conj().T @ samples[start : start + span])).real
        half = start + k // 2
        im_part = (np.conj(phase_im) * (synth.conj().T @ samples[half : half + span])).imag
        grid[:, m] = re_part + 1j * im_part
    return grid


def orthogonality_report(filt: PrototypeFilter, phase_mode: str) -> float:
    """Worst violation of the discrete orthogonality conditions.

    Evaluates circular inner products on the filter's own grid between a
    transmit atom offset by (kappa subcarriers, m full periods or a half
    period) and the conjugating receive projection, for kappa, m in -2..2.
    Conventional mode checks the four j^k-phased real/imaginary leakage
    conditions; CR mode the two relaxed ones.  Identity gains have their
    Kronecker delta subtracted.
    """
    if phase_mode not in PHASE_MODES:
        raise ValueError(f"phase_mode must be one of {PHASE_MODES}")
    g = filt.time_response
    n = filt.grid.n_bins
    period = filt.grid.subcarriers
    half = period // 2
    if period % 2:
        raise ValueError("filter grid needs an even number of samples per period")
    mod = np.exp(2j * np.pi * np.outer(np.arange(5) - 2, np.arange(n)) / period)

    def cross_gain(kappa: int, tau: int) -> complex:
        return complex(np.sum(np.roll(g, tau) * np.conj(g) * mod[kappa + 2]))

    conventional = phase_mode == "conventional"
    worst = 0.0
    for kappa in range(-2, 3):
        fold = (1j**kappa) if conventional else 1.0
        for m in range(-2, 3):
            delta = 1.0 if (kappa == 0 and m == 0) else 0.0
            d_full = fold * cross_gain(kappa, m * period)
            worst = max(worst, abs(d_full.real - delta))
            if conventional:
                d_up = fold * cross_gain(kappa, m * period + half)
                d_dn = fold * cross_gain(kappa, m * period - half)
                worst = max(
                    worst,
                    abs((1j * d_up).real),
                    abs(d_dn.imag),
                    abs((1j * d_full).imag - delta),
                )
            else:
                d_up = cross_gain(kappa, m * period + half)
                worst = max(worst, abs((1j * d_up).real))
    return worst
