"""Prototype filters on a discrete DFT grid.

Every filter in this library lives on a :class:`FilterGrid` of ``n_bins``
DFT bins, where ``bins_per_subcarrier`` bins span one subcarrier spacing F.
All frequencies are expressed in units of F, so no physical sample rate is
ever needed.

Conventions:

* ``freq_response`` stores the raw frequency samples (peak 1 for the
  Nyquist families) in natural DFT (wrapped) bin order, i.e. bin ``i``
  carries the signed frequency index ``i`` for ``i < n_bins/2`` and
  ``i - n_bins`` otherwise.  Centered-order views for inspection and CSV
  dumps are available via the ``*_centered`` accessors.
* ``time_response`` is the inverse DFT of ``freq_response`` normalized to
  unit energy.  With ``bins_per_subcarrier = B`` the time response spans
  B symbol periods at ``n_bins / B`` samples per period.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

NYQUIST_FAMILIES = ("rc", "rect")
HALF_NYQUIST_FAMILIES = ("rrc", "crrc", "rect", "rect_td")

# Inputs count as band-limited when |H| stays below this outside one
# subcarrier spacing of the center.
BAND_LIMIT_TOL = 1e-12


@dataclass(frozen=True)
class FilterGrid:
    """Discrete frequency grid shared by all prototype filters.

    n_bins: total DFT bins of one block (N).
    bins_per_subcarrier: bins spanning one subcarrier spacing F; equals the
        number of symbol periods covered by the time response.
    """

    n_bins: int
    bins_per_subcarrier: int

    def __post_init__(self) -> None:
        if self.n_bins <= 0 or self.bins_per_subcarrier <= 0:
            raise ValueError("grid dimensions must be positive")
        if self.n_bins % self.bins_per_subcarrier:
            raise ValueError(
                "n_bins must be a multiple of bins_per_subcarrier, got "
                f"{self.n_bins} / {self.bins_per_subcarrier}"
            )

    @property
    def subcarriers(self) -> int:
        """Subcarrier slots spanned by the grid; also samples per period."""
        return self.n_bins // self.bins_per_subcarrier

    def signed_bins(self) -> np.ndarray:
        """Signed frequency index of each bin, in wrapped (DFT) order."""
        n = self.n_bins
        return (np.arange(n) + n // 2) % n - n // 2

    def freq_axis(self) -> np.ndarray:
        """Frequency of each bin in units of F, wrapped order."""
        return self.signed_bins() / self.bins_per_subcarrier


@dataclass(frozen=True)
class PrototypeFilter:
    """A frequency-sampled prototype pulse and its unit-energy time response."""

    family: str
    rolloff: float
    grid: FilterGrid
    freq_response: np.ndarray
    time_response: np.ndarray

    @property
    def n_bins(self) -> int:
        return self.grid.n_bins

    def freq_response_centered(self) -> np.ndarray:
        """Frequency samples reordered so bin -N/2 comes first."""
        return np.fft.fftshift(self.freq_response)

    def time_response_centered(self) -> np.ndarray:
        """Time samples reordered so the pulse peak sits mid-array."""
        return np.fft.fftshift(self.time_response)


@dataclass(frozen=True)
class IciResponse:
    """Inter-carrier interference seen by a receiver ``shift`` subcarriers away.

    spectrum[l] = G[(l + shift*B) mod N] * conj(G[l]) where G is the DFT of
    the unit-energy time response and B = bins_per_subcarrier; time is its
    inverse DFT, so time[0] = 1 at shift 0.
    """

    shift: int
    spectrum: np.ndarray
    time: np.ndarray

    def spectrum_centered(self) -> np.ndarray:
        return np.fft.fftshift(self.spectrum)

    def time_centered(self) -> np.ndarray:
        return np.fft.fftshift(self.time)


def _check_even_bins(grid: FilterGrid, allow_odd_bins: bool) -> None:
    if grid.bins_per_subcarrier % 2 == 0:
        return
    if not allow_odd_bins:
        raise ValueError(
            "bins_per_subcarrier must be even so the band edge F/2 is on-grid; "
            f"got {grid.bins_per_subcarrier} (pass allow_odd_bins=True to relax)"
        )
    warnings.warn(
        "odd bins_per_subcarrier: the band edge F/2 is off-grid; the discrete "
        "Nyquist pairing remains exact but band-edge samples are skipped",
        UserWarning,
        stacklevel=3,
    )


def _from_freq_response(
    family: str, rolloff: float, grid: FilterGrid, freq_response: np.ndarray
) -> PrototypeFilter:
    raw_time = np.fft.ifft(freq_response)
    energy = float(np.sum(np.abs(raw_time) ** 2))
    if energy <= 0.0:
        raise ValueError("filter has zero energy")
    time_response = raw_time / np.sqrt(energy)
    freq_response = freq_response.astype(complex)
    freq_response.flags.writeable = False
    time_response.flags.writeable = False
    return PrototypeFilter(family, float(rolloff), grid, freq_response, time_response)


def _raised_cosine_samples(rolloff: float, grid: FilterGrid) -> np.ndarray:
    f = np.abs(grid.freq_axis())
    h = np.zeros(grid.n_bins)
    if rolloff == 0.0:
        h[f < 0.5] = 1.0
        h[f == 0.5] = 0.5
        return h
    lo = (1.0 - rolloff) / 2.0
    hi = (1.0 + rolloff) / 2.0
    h[f <= lo] = 1.0
    roll = (f > lo) & (f <= hi)
    h[roll] = 0.5 * (1.0 + np.cos(np.pi / rolloff * (f[roll] - lo)))
    return h


def make_nyquist(
    family: str,
    rolloff: float,
    grid: FilterGrid,
    *,
    allow_odd_bins: bool = False,
) -> PrototypeFilter:
    """Build a Nyquist frequency response (raised cosine or brick wall).

    The raised cosine is 1 in the flat band |f| <= (1-rolloff)F/2, follows the
    cosine rolloff out to (1+rolloff)F/2 and is 0 beyond.  The brick wall is
    the 0/1 indicator of |f| < F/2 with exactly 1/2 at |f| = F/2 when that
    bin exists, which coincides with the rolloff -> 0 limit.

    Odd bins_per_subcarrier grids place F/2 off-grid and are rejected unless
    allow_odd_bins is set, in which case a UserWarning is emitted instead.
    """
    if family not in NYQUIST_FAMILIES:
        raise ValueError(f"unknown Nyquist family {family!r}, expected one of {NYQUIST_FAMILIES}")
    if family == "rect":
        rolloff = 0.0
    if not 0.0 <= rolloff <= 1.0:
        raise ValueError(f"rolloff must lie in [0, 1], got {rolloff}")
    _check_even_bins(grid, allow_odd_bins)
    h = _raised_cosine_samples(float(rolloff), grid)
    return _from_freq_response(family, rolloff, grid, h.astype(complex))


def make_rect_time(grid: FilterGrid) -> PrototypeFilter:
    """Rectangular pulse in TIME: one symbol period long, starting at n=0.

    Unlike the frequency brick wall from make_nyquist("rect", ...), this
    pulse tiles the block without overlap, so the block modem built on it is
    exactly unitary.  Its frequency response is full-band by construction.
    """
    period = grid.subcarriers
    u = np.zeros(grid.n_bins)
    u[:period] = 1.0
    freq_response = np.fft.fft(u)
    time_response = (u / np.sqrt(period)).astype(complex)
    freq_response.flags.writeable = False
    time_response.flags.writeable = False
    return PrototypeFilter("rect_td", 0.0, grid, freq_response, time_response)


def _require_real_nonnegative(h: PrototypeFilter, op: str) -> np.ndarray:
    values = h.freq_response
    if np.abs(values.imag).max() > 1e-12:
        raise ValueError(f"{op} requires a real frequency response")
    real = values.real
    if real.min() < -1e-12:
        raise ValueError(f"{op} requires a nonnegative frequency response")
    return np.clip(real, 0.0, None)


def sqrt_nyquist(h: PrototypeFilter) -> PrototypeFilter:
    """Elementwise nonnegative square root: the half-Nyquist (RRC) filter."""
    if h.family not in NYQUIST_FAMILIES:
        raise ValueError(f"sqrt_nyquist expects a Nyquist-family input, got {h.family!r}")
    real = _require_real_nonnegative(h, "sqrt_nyquist")
    return _from_freq_response("rrc", h.rolloff, h.grid, np.sqrt(real).astype(complex))


def conjugate_root(h: PrototypeFilter) -> PrototypeFilter:
    """Conjugate-root half-Nyquist filter built from a Nyquist response.

    Gc(f) = H(f) + j*sgn(f)*sqrt((1-H(f))H(f)), minus branch for f < 0 and
    plus branch at f = 0 (where H = 1 makes the root vanish anyway).  The
    result keeps |Gc|^2 = H at every bin and is conjugate-symmetric, hence
    its time response is real.
    """
    if h.family not in NYQUIST_FAMILIES:
        raise ValueError(f"conjugate_root expects a Nyquist-family input, got {h.family!r}")
    real = _require_real_nonnegative(h, "conjugate_root")
    outside = np.abs(h.grid.signed_bins()) > h.grid.bins_per_subcarrier
    if outside.any() and np.abs(real[outside]).max() >= BAND_LIMIT_TOL:
        raise ValueError("conjugate_root input must vanish beyond one subcarrier spacing")
    sign = np.where(h.grid.signed_bins() < 0, -1.0, 1.0)
    root = np.sqrt(np.clip((1.0 - real) * real, 0.0, None))
    gc = real + 1j * sign * root
    return _from_freq_response("crrc", h.rolloff, h.grid, gc)


def nyquist_residual(h: PrototypeFilter, response: np.ndarray | None = None) -> float:
    """Worst-case violation of the discrete first Nyquist criterion.

    Returns max over l in [0, B] of |h[l] + h[(l - B) mod N] - 1| where B is
    bins_per_subcarrier.  For complex (half / conjugate-root) filters pass
    the squared magnitude explicitly via ``response``.
    """
    values = h.freq_response if response is None else np.asarray(response, dtype=complex)
    if np.abs(values.imag).max() > 1e-12:
        raise ValueError("nyquist_residual needs a real response; pass |G|^2 for CR filters")
    real = values.real
    b = h.grid.bins_per_subcarrier
    idx = np.arange(b + 1)
    return float(np.abs(real[idx] + real[(idx - b) % h.grid.n_bins] - 1.0).max())


def ici_response(g: PrototypeFilter, shift: int) -> IciResponse:
    """Interference spectrum/time response between subcarriers ``shift`` apart.

    Computed from the DFT of the unit-energy time response, so the shift-0
    time response peaks at exactly 1.
    """
    max_shift = g.grid.subcarriers - 1
    if abs(shift) > max_shift:
        raise ValueError(f"|shift| must be <= {max_shift}, got {shift}")
    spectrum_base = np.fft.fft(g.time_response)
    spectrum = np.roll(spectrum_base, -shift * g.grid.bins_per_subcarrier) * np.conj(spectrum_base)
    time = np.fft.ifft(spectrum)
    spectrum.flags.writeable = False
    time.flags.writeable = False
    return IciResponse(int(shift), spectrum, time)
