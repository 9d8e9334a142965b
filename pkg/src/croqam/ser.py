"""Symbol-error-rate experiments over the multipath fading channel.

Monte-Carlo sweeps and a semi-analytic reference share the same channel
model and receiver chain.  The reference propagates the exact noise
covariance through the linear receiver to a per-symbol SNR and applies
the closed-form 16-QAM error probability, so it cross-validates the
Monte Carlo without sharing its sampling machinery.

Determinism contract: every trial owns the generator seeded by
``[base_seed, snr_index, trial]``, so results are bit-identical for any
worker count or batch schedule.  Error counts are summed as integers,
which makes the reduction order irrelevant.
"""

import multiprocessing
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, owens_t

from croqam.channel import (
    channel_frequency_response,
    complex_awgn,
    draw_taps,
    fde_equalize,
    power_delay_profile,
    transmit,
    trstc_decode,
    trstc_encode,
)
from croqam.filters import FilterGrid, conjugate_root, make_nyquist, sqrt_nyquist
from croqam.gfdm import (
    DEFAULT_CP_LENGTH,
    GfdmConfig,
    add_cp,
    build_modem,
    detect,
    modulate,
    remove_cp,
)
from croqam.qam import Qam16Mapper

SUBCARRIERS = 64
SUBSYMBOLS = 7
BATCH_TRIALS = 256
LOW_ERROR_THRESHOLD = 100

# Reference configurations: filter family, rolloff, detector, payload mode.
BASE_CONFIGS = {
    "qam-zf": ("rc", 0.5, "zf", "qam"),
    "oqam-mf": ("rrc", 1.0, "mf", "croqam"),
    "croqam-mf": ("crrc", 1.0, "mf", "croqam"),
}
TRSTC_SUFFIX = "-trstc"


def config_ids() -> tuple:
    singles = tuple(BASE_CONFIGS)
    return singles + tuple(base + TRSTC_SUFFIX for base in singles)


def parse_config_id(config_id: str):
    """Split a curve identifier into its base configuration and the
    two-antenna flag.  Unknown identifiers are rejected."""
    base = config_id
    trstc = False
    if config_id.endswith(TRSTC_SUFFIX):
        base = config_id[: -len(TRSTC_SUFFIX)]
        trstc = True
    if base not in BASE_CONFIGS:
        raise ValueError(
            f"unknown config id {config_id!r}; expected one of {config_ids()}"
        )
    return base, trstc


def build_reference_modem(base_id: str):
    """The K=64, M=7 modem for one reference column."""
    family, rolloff, detector, mode = BASE_CONFIGS[base_id]
    grid = FilterGrid(SUBCARRIERS * SUBSYMBOLS, SUBSYMBOLS)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # M=7 grid is intended
        nyquist = make_nyquist("rc", rolloff, grid, allow_odd_bins=True)
    if family == "rrc":
        filt = sqrt_nyquist(nyquist)
    elif family == "crrc":
        filt = conjugate_root(nyquist)
    else:
        filt = nyquist
    cfg = GfdmConfig(SUBCARRIERS, SUBSYMBOLS, filt, detector, mode)
    return build_modem(cfg)


@dataclass(frozen=True)
class SerCurve:
    """One SNR sweep: rates plus the raw counts behind them.

    ``error_sq_sums`` holds the per-point sum of squared per-trial error
    counts.  Decisions within a trial share one channel draw, so the
    honest uncertainty comes from trial-level moments, not from treating
    every decision as independent.  Analytic curves carry no counts:
    errors and decisions are zero and the flag says ``analytic``.
    """

    config_id: str
    snr_db: tuple
    ser: tuple
    errors: tuple
    decisions: tuple
    trials: int
    flags: tuple
    error_sq_sums: tuple | None = None
    sample_sq_sums: tuple | None = None


def mc_standard_error(curve: SerCurve) -> np.ndarray:
    """Cluster-robust standard error of each SER point."""
    if curve.error_sq_sums is None:
        raise ValueError("curve carries no per-trial moments (analytic curve?)")
    trials = curve.trials
    errors = np.asarray(curve.errors, dtype=float)
    sq = np.asarray(curve.error_sq_sums, dtype=float)
    per_trial = np.asarray(curve.decisions, dtype=float) / trials
    trial_var = sq / trials - (errors / trials) ** 2
    return np.sqrt(np.maximum(trial_var, 0.0) / trials) / per_trial


def theory_standard_error(curve: SerCurve) -> np.ndarray:
    """Channel-sampling standard error of a semi-analytic curve."""
    if curve.sample_sq_sums is None:
        raise ValueError("curve carries no per-channel moments (Monte-Carlo curve?)")
    n = curve.trials
    mean = np.asarray(curve.ser, dtype=float)
    sq = np.asarray(curve.sample_sq_sums, dtype=float)
    variance = np.maximum(sq / n - mean**2, 0.0)
    return np.sqrt(variance / n)


def qam16_symbol_error_probability(snr_linear: np.ndarray) -> np.ndarray:
    """Closed-form 16-QAM symbol error probability on the AWGN channel."""
    snr_linear = np.maximum(np.asarray(snr_linear, dtype=float), 0.0)
    q = 0.5 * erfc(np.sqrt(snr_linear / 5.0) / np.sqrt(2.0))
    per_axis = 1.5 * q
    return 1.0 - (1.0 - per_axis) ** 2


def detection_noise_weights(modem) -> np.ndarray:
    """Per-symbol weights mapping per-bin noise scaling to post-detection
    noise variance.

    Row j gives sigma^2 * sum_k W[j, k] * s[k] as symbol j's noise
    variance, where s[k] rescales bin k (1/|H|^2 after single-antenna FDE,
    2/(|H1|^2+|H2|^2) after two-antenna combining).  For orthogonal modems
    the rows sum to one; zero-forcing rows sum to the noise enhancement.
    """
    rows = modem.inverse if modem.config.detector == "zf" else modem.adjoint
    n = modem.config.block_length
    return n * np.abs(np.fft.ifft(rows, axis=1)) ** 2


def _detection_cross_spectra(modem) -> np.ndarray:
    """Companion to detection_noise_weights for the axis cross-covariance.

    Row j contracted with the same per-bin scaling gives E[u conj(v)],
    where u feeds symbol j's real-axis slicer and v its imaginary-axis
    slicer.  In plain QAM both axes read the same projection, so the
    result is real and the axes are uncorrelated; offset mapping reads the
    imaginary axis through a half-period-shifted projection of the same
    noise, which makes the imaginary part of this contraction, scaled by
    the variance, the correlation between the two slicer inputs.
    """
    rows = modem.inverse if modem.config.detector == "zf" else modem.adjoint
    n = modem.config.block_length
    spectra = np.fft.ifft(rows, axis=1)
    if modem.config.modulation_mode == "qam":
        return n * (spectra * np.conj(spectra))
    half = modem.config.subcarriers // 2
    shifted = np.fft.ifft(np.roll(rows, half, axis=1), axis=1)
    return n * (spectra * np.conj(shifted))


def _qam16_error_with_axis_correlation(margin, rho) -> np.ndarray:
    """16-QAM symbol error probability with correlated axis noise.

    margin is the slicer decision distance in per-axis noise standard
    deviations (sqrt(snr/5) when the axes carry equal variance), rho the
    correlation between the two axis noise components.  Boundary-crossing
    events pair through the bivariate normal orthant probability, which
    for equal margins reduces to Owen's T; the result is even in rho and
    at rho = 0 equals the independent-axis closed form.
    """
    margin = np.asarray(margin, dtype=float)
    q = 0.5 * erfc(margin / np.sqrt(2.0))
    rho = np.clip(np.asarray(rho, dtype=float), -0.999999999, 0.999999999)
    slope = np.sqrt((1.0 - rho) / (1.0 + rho))
    both = 2.25 * (q - owens_t(margin, slope) - owens_t(margin, 1.0 / slope))
    return 3.0 * q - both


def _run_trial(rng, modem, mapper, profile, trstc, noise_var, cp):
    n = modem.config.block_length
    if not trstc:
        indices, payload = mapper.draw(rng, n)
        framed = modulate(payload, modem).with_cp
        taps = draw_taps(rng, profile)
        received = transmit(framed, taps, noise_var, rng)
        equalized = fde_equalize(remove_cp(received, cp), taps)
        decided = mapper.demap(detect(equalized, modem))
        return int(np.count_nonzero(decided != indices))

    indices, payload = mapper.draw(rng, 2 * n)
    frame = trstc_encode(
        modulate(payload[:n], modem).samples,
        modulate(payload[n:], modem).samples,
    )
    taps1 = draw_taps(rng, profile)
    taps2 = draw_taps(rng, profile)
    received = []
    for first, second in (frame.slot1, frame.slot2):
        mixed = (
            transmit(add_cp(first, cp), taps1)
            + transmit(add_cp(second, cp), taps2)
            + complex_awgn(n + cp, noise_var, rng)
        )
        received.append(remove_cp(mixed, cp))
    block1, block2 = trstc_decode(received[0], received[1], taps1, taps2)
    decided = np.concatenate(
        [mapper.demap(detect(block1, modem)), mapper.demap(detect(block2, modem))]
    )
    return int(np.count_nonzero(decided != indices))


_MODEM_CACHE: dict = {}


def _cached_modem(base_id):
    if base_id not in _MODEM_CACHE:
        _MODEM_CACHE[base_id] = build_reference_modem(base_id)
    return _MODEM_CACHE[base_id]


def _run_batch(item):
    """One work unit: a contiguous range of trials at one SNR point.

    Returns integer error totals plus the sum of squared per-trial counts
    so the parent can form cluster-robust uncertainties.
    """
    base_id, trstc, snr_index, snr_db, base_seed, start, count = item
    modem = _cached_modem(base_id)
    mapper = Qam16Mapper()
    profile = power_delay_profile()
    noise_var = 10.0 ** (-snr_db / 10.0)
    cp = DEFAULT_CP_LENGTH
    errors = 0
    sq_sum = 0
    for trial in range(start, start + count):
        rng = np.random.default_rng([base_seed, snr_index, trial])
        trial_errors = _run_trial(rng, modem, mapper, profile, trstc, noise_var, cp)
        errors += trial_errors
        sq_sum += trial_errors * trial_errors
    return snr_index, errors, sq_sum


def run_ser(
    config_id: str,
    snr_db,
    trials: int,
    base_seed: int,
    workers: int = 1,
) -> SerCurve:
    """Monte-Carlo SER sweep for one reference configuration."""
    base_id, trstc = parse_config_id(config_id)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    snr_points = [float(s) for s in snr_db]
    if not snr_points:
        raise ValueError("need at least one SNR point")

    items = [
        (base_id, trstc, index, snr, base_seed, start,
         min(BATCH_TRIALS, trials - start))
        for index, snr in enumerate(snr_points)
        for start in range(0, trials, BATCH_TRIALS)
    ]
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            results = pool.map(_run_batch, items, chunksize=1)
    else:
        results = [_run_batch(item) for item in items]

    errors = np.zeros(len(snr_points), dtype=np.int64)
    sq_sums = np.zeros(len(snr_points), dtype=np.int64)
    for snr_index, batch_errors, batch_sq in results:
        errors[snr_index] += batch_errors
        sq_sums[snr_index] += batch_sq
    per_trial = 2 * SUBCARRIERS * SUBSYMBOLS if trstc else SUBCARRIERS * SUBSYMBOLS
    decisions = np.full(len(snr_points), trials * per_trial, dtype=np.int64)
    ser = errors / decisions
    flags = tuple(
        "ok" if count >= LOW_ERROR_THRESHOLD else "low_errors" for count in errors
    )
    return SerCurve(
        config_id=config_id,
        snr_db=tuple(snr_points),
        ser=tuple(float(v) for v in ser),
        errors=tuple(int(v) for v in errors),
        decisions=tuple(int(v) for v in decisions),
        trials=trials,
        flags=flags,
        error_sq_sums=tuple(int(v) for v in sq_sums),
    )


def semi_analytic_ser(
    config_id: str,
    snr_db,
    n_channels: int,
    seed: int,
) -> SerCurve:
    """Reference curve: exact noise second moments per channel draw, then
    the closed-form 16-QAM error probability per symbol, averaged over
    draws.

    Offset modems read the two symbol axes through different projections
    of the same equalized noise, so after a frequency-selective channel
    the axis noise components are correlated; each symbol therefore uses
    the joint-Gaussian error probability instead of the independent-axis
    product.  For plain QAM the correlation is identically zero and the
    two forms coincide.
    """
    base_id, trstc = parse_config_id(config_id)
    if n_channels < 1:
        raise ValueError("n_channels must be at least 1")
    snr_points = [float(s) for s in snr_db]
    if not snr_points:
        raise ValueError("need at least one SNR point")

    modem = build_reference_modem(base_id)
    weights = detection_noise_weights(modem)
    cross = _detection_cross_spectra(modem)
    n = modem.config.block_length
    profile = power_delay_profile()
    rng = np.random.default_rng(seed)
    noise_vars = 10.0 ** (-np.asarray(snr_points) / 10.0)

    totals = np.zeros(len(snr_points))
    sq_totals = np.zeros(len(snr_points))
    for _ in range(n_channels):
        if trstc:
            gain1 = np.abs(channel_frequency_response(draw_taps(rng, profile), n)) ** 2
            gain2 = np.abs(channel_frequency_response(draw_taps(rng, profile), n)) ** 2
            with np.errstate(divide="ignore"):
                bin_scale = 2.0 / (gain1 + gain2)
        else:
            gain = np.abs(channel_frequency_response(draw_taps(rng, profile), n)) ** 2
            with np.errstate(divide="ignore"):
                bin_scale = 1.0 / gain
        var_base = weights @ bin_scale
        cross_base = cross @ bin_scale
        with np.errstate(invalid="ignore"):
            rho = np.where(
                np.isfinite(var_base), -np.imag(cross_base) / var_base, 0.0
            )
        rho = np.nan_to_num(rho)
        for index, noise_var in enumerate(noise_vars):
            margin = np.sqrt(0.2 / (noise_var * var_base))
            channel_mean = np.mean(_qam16_error_with_axis_correlation(margin, rho))
            totals[index] += channel_mean
            sq_totals[index] += channel_mean * channel_mean

    ser = totals / n_channels
    count = len(snr_points)
    return SerCurve(
        config_id=config_id,
        snr_db=tuple(snr_points),
        ser=tuple(float(v) for v in ser),
        errors=(0,) * count,
        decisions=(0,) * count,
        trials=n_channels,
        flags=("analytic",) * count,
        error_sq_sums=None,
        sample_sq_sums=tuple(float(v) for v in sq_totals),
    )
