"""Multipath fading, frequency-domain equalization, and time-reversal STC.

The channel model is a 16-tap Rayleigh profile with an exponential power
decay spanning 16 dB from the first tap to the last, normalized to unit
total power.  Blocks are protected by a cyclic prefix at least as long as
the channel memory, so the linear channel acts circularly on each block
and single-tap frequency-domain equalization applies.

The two-antenna scheme pairs blocks across two time slots.  The second
slot transmits conjugated, circularly time-reversed copies, which in the
DFT domain turns per-antenna channels into an orthogonal 2x2 system per
bin; the decoder combines the two slots bin by bin.
"""

from dataclasses import dataclass

import numpy as np

TAP_COUNT = 16
PROFILE_SPAN_DB = 16.0


def power_delay_profile(n_taps: int = TAP_COUNT) -> np.ndarray:
    """Exponentially decaying tap powers, normalized to sum to one.

    Tap ``i`` sits ``PROFILE_SPAN_DB * i / (n_taps - 1)`` dB below tap 0,
    so the full profile spans exactly ``PROFILE_SPAN_DB`` dB.
    """
    if n_taps < 2:
        raise ValueError("profile needs at least two taps")
    decibels = -PROFILE_SPAN_DB * np.arange(n_taps) / (n_taps - 1)
    powers = 10.0 ** (decibels / 10.0)
    return powers / powers.sum()


def draw_taps(rng: np.random.Generator, profile: np.ndarray) -> np.ndarray:
    """One Rayleigh-fading realization: E|h_i|^2 equals profile[i]."""
    scale = np.sqrt(np.asarray(profile, dtype=float) / 2.0)
    shape = scale.shape
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def complex_awgn(
    size: int, variance: float, rng: np.random.Generator
) -> np.ndarray:
    """Circular complex Gaussian noise with the given per-sample variance."""
    if variance < 0:
        raise ValueError("noise variance must be nonnegative")
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def transmit(
    signal: np.ndarray,
    taps: np.ndarray,
    noise_var: float = 0.0,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Linear convolution with the channel, truncated to the input length,
    plus white complex noise of total variance ``noise_var`` per sample."""
    signal = np.asarray(signal)
    out = np.convolve(signal, np.asarray(taps))[: len(signal)]
    if noise_var > 0.0:
        if rng is None:
            raise ValueError("rng is required when noise_var > 0")
        out = out + complex_awgn(len(signal), noise_var, rng)
    return out


def channel_frequency_response(taps: np.ndarray, n_bins: int) -> np.ndarray:
    return np.fft.fft(np.asarray(taps), n_bins)


def fde_equalize(block: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Single-tap zero-forcing equalizer in the DFT domain.

    Valid only for CP-framed blocks, where the channel is circular.  Deep
    per-bin fades are divided through as-is; the noise they amplify is the
    price of zero forcing, not an error.
    """
    block = np.asarray(block)
    response = channel_frequency_response(taps, len(block))
    return np.fft.ifft(np.fft.fft(block) / response)


def circular_reverse(signal: np.ndarray) -> np.ndarray:
    """Index reversal mod N: out[n] = in[(-n) mod N].  Sample 0 stays put."""
    signal = np.asarray(signal)
    return np.roll(signal[::-1], 1)


@dataclass(frozen=True)
class StcFrame:
    """Per-slot antenna signals produced by the space-time encoder.

    Each slot is an (antenna 1, antenna 2) pair.  Power is split evenly,
    so the frame radiates the same total energy as the two input blocks.
    """

    slot1: tuple
    slot2: tuple


def trstc_encode(block1: np.ndarray, block2: np.ndarray) -> StcFrame:
    block1 = np.asarray(block1)
    block2 = np.asarray(block2)
    if block1.shape != block2.shape:
        raise ValueError("paired blocks must have equal length")
    root_half = 1.0 / np.sqrt(2.0)
    return StcFrame(
        slot1=(block1 * root_half, block2 * root_half),
        slot2=(
            -np.conj(circular_reverse(block2)) * root_half,
            np.conj(circular_reverse(block1)) * root_half,
        ),
    )


def trstc_decode(
    received_slot1: np.ndarray,
    received_slot2: np.ndarray,
    taps1: np.ndarray,
    taps2: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-bin combining of the two received slots.

    Inputs are CP-stripped blocks.  Conjugating the second slot's spectrum
    makes the per-bin system orthogonal, so each block estimate costs one
    complex division per bin; the sqrt(2) restores the encoder's power
    split.
    """
    y1 = np.fft.fft(np.asarray(received_slot1))
    y2 = np.fft.fft(np.asarray(received_slot2))
    if y1.shape != y2.shape:
        raise ValueError("received slots must have equal length")
    h1 = channel_frequency_response(taps1, len(y1))
    h2 = channel_frequency_response(taps2, len(y1))
    gain = np.abs(h1) ** 2 + np.abs(h2) ** 2
    est1 = (np.conj(h1) * y1 + h2 * np.conj(y2)) / gain
    est2 = (np.conj(h2) * y1 - h1 * np.conj(y2)) / gain
    scale = np.sqrt(2.0)
    return scale * np.fft.ifft(est1), scale * np.fft.ifft(est2)
