"""Welch spectral estimation and out-of-band power summaries.

Spectra are measured on long streams of independently loaded multicarrier
blocks, concatenated back to back without cyclic prefixes so the measured
shoulders come from the pulse shaping alone.  Frequencies are expressed
in subcarrier spacings by setting the sample rate to the number of
subcarriers (one symbol period spans one sample per subcarrier).
"""

from dataclasses import dataclass

import numpy as np
from scipy.signal import welch

from croqam.gfdm import GfdmModem, apply_guard_symbols, modulate
from croqam.qam import Qam16Mapper


@dataclass(frozen=True)
class PsdEstimate:
    """Centered Welch estimate, peak-normalized in dB.

    ``peak_density`` keeps the linear density at the 0 dB reference so the
    absolute spectrum (and its integral) can be reconstructed.
    """

    freq_axis: np.ndarray
    psd_db: np.ndarray
    peak_density: float
    segment_len: int
    overlap: int
    window: str
    sample_rate: float


def estimate_psd(
    samples,
    segment_len: int,
    overlap: int | None = None,
    sample_rate: float = 1.0,
    window: str = "hann",
) -> PsdEstimate:
    """Averaged windowed periodogram of a complex baseband stream.

    ``samples`` may be an array or a zero-argument factory producing one.
    """
    if callable(samples):
        samples = samples()
    samples = np.asarray(samples)
    if overlap is None:
        overlap = segment_len // 2
    if len(samples) < segment_len:
        raise ValueError(
            f"need at least one full segment ({segment_len} samples), "
            f"got {len(samples)}"
        )
    freq, density = welch(
        samples,
        fs=sample_rate,
        window=window,
        nperseg=segment_len,
        noverlap=overlap,
        detrend=False,
        return_onesided=False,
        scaling="density",
    )
    freq = np.fft.fftshift(freq)
    density = np.fft.fftshift(density)
    peak = float(density.max())
    if peak <= 0.0:
        raise ValueError("signal has no power")
    with np.errstate(divide="ignore"):
        psd_db = 10.0 * np.log10(density / peak)
    freq.flags.writeable = False
    psd_db.flags.writeable = False
    return PsdEstimate(
        freq_axis=freq,
        psd_db=psd_db,
        peak_density=peak,
        segment_len=segment_len,
        overlap=overlap,
        window=window,
        sample_rate=sample_rate,
    )


def integrated_power(estimate: PsdEstimate) -> float:
    """Total linear power recovered from the normalized spectrum."""
    linear = estimate.peak_density * 10.0 ** (estimate.psd_db / 10.0)
    return float(np.sum(linear) * estimate.sample_rate / estimate.segment_len)


def active_subcarrier_set(subcarriers: int, edge_guards: int) -> tuple:
    """DFT indices of the subcarriers left active when ``edge_guards``
    subcarriers are deactivated at each edge of the centered band."""
    if edge_guards < 0 or 2 * edge_guards >= subcarriers:
        raise ValueError("edge guards must leave at least one active subcarrier")
    centered = np.arange(-subcarriers // 2 + edge_guards,
                         subcarriers // 2 - edge_guards)
    return tuple(int(c % subcarriers) for c in centered)


def allocation_band_edges(subcarriers: int, edge_guards: int) -> tuple:
    """Frequency span (in subcarrier spacings) covered by the active
    subcarriers, half a spacing beyond the outermost active centers."""
    low = -subcarriers // 2 + edge_guards - 0.5
    high = subcarriers // 2 - edge_guards - 1 + 0.5
    return (low, high)


def gfdm_block_stream(
    modem: GfdmModem,
    n_blocks: int,
    rng: np.random.Generator,
    active_subcarriers=None,
    guard_subsymbols: int = 0,
) -> np.ndarray:
    """Concatenated CP-free blocks with random payloads on the active
    subcarriers and zeros elsewhere."""
    if n_blocks < 1:
        raise ValueError("need at least one block")
    cfg = modem.config
    n = cfg.block_length
    k = cfg.subcarriers
    mask = np.zeros(n)
    active = range(k) if active_subcarriers is None else active_subcarriers
    for subcarrier in active:
        if not 0 <= subcarrier < k:
            raise ValueError(f"subcarrier index {subcarrier} out of range")
        mask[subcarrier::k] = 1.0
    mapper = Qam16Mapper()
    blocks = []
    for _ in range(n_blocks):
        _, payload = mapper.draw(rng, n)
        payload = apply_guard_symbols(payload * mask, guard_subsymbols, cfg)
        blocks.append(modulate(payload, modem).samples)
    return np.concatenate(blocks)


def oob_ratio(
    estimate: PsdEstimate, band_edges: tuple, exclusion: float = 0.0
) -> float:
    """Mean in-band level minus mean out-of-band level, in dB.

    The out-of-band region starts ``exclusion`` frequency units beyond
    each band edge, leaving a transition region that counts toward
    neither side.
    """
    low, high = band_edges
    if not low < high:
        raise ValueError("band edges must satisfy low < high")
    freq = estimate.freq_axis
    if low < freq[0] or high > freq[-1]:
        raise ValueError("band edges fall outside the frequency axis")
    in_band = (freq >= low) & (freq <= high)
    out_band = (freq < low - exclusion) | (freq > high + exclusion)
    if not in_band.any():
        raise ValueError("no bins inside the band")
    if not out_band.any():
        raise ValueError("no bins outside the band")
    return float(np.mean(estimate.psd_db[in_band]) - np.mean(estimate.psd_db[out_band]))
