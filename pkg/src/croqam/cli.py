"""Command-line front end: verification checks and CSV experiment artifacts.

Every run writes ``manifest.cfg`` (the fully-resolved configuration) into
the output directory, so any result can be regenerated from the files
sitting next to it.  All floats are serialized with ``repr``, which is
the shortest round-trip form: reproducible runs therefore produce
byte-identical CSVs.

Exit codes: 0 success, 1 a verification check failed, 2 usage or
configuration error.
"""

import argparse
import configparser
import os
import sys
import warnings

import numpy as np

from croqam.config import (
    ExperimentConfig,
    apply_cli_overrides,
    load_config,
    manifest_text,
)
from croqam.filters import (
    FilterGrid,
    conjugate_root,
    ici_response,
    make_nyquist,
    sqrt_nyquist,
)
from croqam.oqam import orthogonality_report
from croqam.psd import (
    active_subcarrier_set,
    allocation_band_edges,
    estimate_psd,
    gfdm_block_stream,
    oob_ratio,
)
from croqam.qam import Qam16Mapper
from croqam.ser import (
    BASE_CONFIGS,
    SUBCARRIERS,
    build_reference_modem,
    parse_config_id,
    run_ser,
    semi_analytic_ser,
)
from croqam.gfdm import detect, modulate

ORTHOGONALITY_TOLERANCE = 1e-10
ROUNDTRIP_TOLERANCE = 1e-9
NOISE_ENHANCEMENT_BOUNDS_DB = (0.7, 0.9)
OOB_EXCLUSION = 2.0  # spacings between band edge and where "out of band" starts

SER_HEADER = "config_id,snr_db,ser,errors,decisions,trials,flag"
PSD_HEADER = "config_id,freq_norm,psd_db"
FILTER_HEADER = "bin,freq_over_F,re_G,im_G,re_g,im_g"
ORTHO_HEADER = "filter,alpha,phase_mode,max_violation"
MODEM_HEADER = "K,M,filter,alpha,detector,mode,xi_db,max_roundtrip_err,cond_estimate"


def _fmt(value) -> str:
    return repr(float(value))


def _write_csv(path: str, header: str, rows) -> None:
    with open(path, "w", newline="") as handle:
        handle.write(header + "\n")
        for row in rows:
            handle.write(",".join(row) + "\n")


def _half_nyquist_filter(family: str, rolloff: float, grid: FilterGrid):
    if family == "rect":
        return make_nyquist("rect", 0.0, grid)
    nyquist = make_nyquist("rc", rolloff, grid)
    if family == "rrc":
        return sqrt_nyquist(nyquist)
    if family == "crrc":
        return conjugate_root(nyquist)
    raise ValueError(f"unknown verify filter family {family!r}")


def cmd_verify(config: ExperimentConfig) -> int:
    failures = []

    grid = FilterGrid(
        config.verify_samples_per_period * config.verify_span, config.verify_span
    )
    ortho_rows = []
    for family, phase_mode in config.verify_pairs:
        filt = _half_nyquist_filter(family, config.verify_rolloff, grid)
        violation = orthogonality_report(filt, phase_mode)
        ortho_rows.append([family, _fmt(filt.rolloff), phase_mode, _fmt(violation)])
        label = f"orthogonality {family}/{phase_mode}"
        if violation < ORTHOGONALITY_TOLERANCE:
            print(f"PASS {label} (max violation {violation:.3e})")
        else:
            print(f"FAIL {label} (max violation {violation:.3e})")
            failures.append(label)
    _write_csv(os.path.join(config.out_dir, "orthogonality.csv"),
               ORTHO_HEADER, ortho_rows)

    mapper = Qam16Mapper()
    modem_rows = []
    for index, (base_id, spec) in enumerate(BASE_CONFIGS.items()):
        family, rolloff, detector, mode = spec
        modem = build_reference_modem(base_id)
        rng = np.random.default_rng([config.seed, index])
        worst = 0.0
        for _ in range(20):
            _, payload = mapper.draw(rng, modem.config.block_length)
            echoed = detect(modulate(payload, modem).samples, modem)
            worst = max(worst, float(np.abs(echoed - payload).max()))
        modem_rows.append([
            str(modem.config.subcarriers), str(modem.config.subsymbols),
            family, _fmt(rolloff), detector, mode,
            _fmt(modem.noise_enhancement_db), _fmt(worst),
            _fmt(modem.cond_estimate),
        ])
        label = f"round trip {base_id}"
        if worst < ROUNDTRIP_TOLERANCE:
            print(f"PASS {label} (max error {worst:.3e})")
        else:
            print(f"FAIL {label} (max error {worst:.3e})")
            failures.append(label)
        if detector == "zf":
            low, high = NOISE_ENHANCEMENT_BOUNDS_DB
            label = f"noise enhancement {base_id}"
            if low <= modem.noise_enhancement_db <= high:
                print(f"PASS {label} ({modem.noise_enhancement_db:.4f} dB)")
            else:
                print(f"FAIL {label} ({modem.noise_enhancement_db:.4f} dB)")
                failures.append(label)
    _write_csv(os.path.join(config.out_dir, "modems.csv"), MODEM_HEADER, modem_rows)

    if failures:
        print(f"{len(failures)} check(s) failed: " + "; ".join(failures))
        return 1
    print("all checks passed")
    return 0


def cmd_ser(config: ExperimentConfig) -> int:
    combined = []
    for config_id in config.ser_configs:
        _, trstc = parse_config_id(config_id)
        grid = config.snr_db_trstc if trstc else config.snr_db
        curve = run_ser(config_id, grid, config.trials, config.seed, config.workers)
        theory = semi_analytic_ser(config_id, grid, config.theory_channels, config.seed)

        rows = [
            [curve.config_id, _fmt(snr), _fmt(rate), str(errors),
             str(decisions), str(curve.trials), flag]
            for snr, rate, errors, decisions, flag in zip(
                curve.snr_db, curve.ser, curve.errors, curve.decisions, curve.flags
            )
        ]
        theory_rows = [
            [theory.config_id + "-theory", _fmt(snr), _fmt(rate), str(errors),
             str(decisions), str(theory.trials), flag]
            for snr, rate, errors, decisions, flag in zip(
                theory.snr_db, theory.ser, theory.errors, theory.decisions,
                theory.flags
            )
        ]
        _write_csv(os.path.join(config.out_dir, f"ser_{config_id}.csv"),
                   SER_HEADER, rows)
        _write_csv(os.path.join(config.out_dir, f"ser_{config_id}-theory.csv"),
                   SER_HEADER, theory_rows)
        combined.extend(rows)
        combined.extend(theory_rows)
        print(f"wrote ser_{config_id}.csv ({len(rows)} points)")
    _write_csv(os.path.join(config.out_dir, "ser_combined.csv"),
               SER_HEADER, combined)
    return 0


def cmd_psd(config: ExperimentConfig) -> int:
    active = active_subcarrier_set(SUBCARRIERS, config.psd_edge_guards)
    band = allocation_band_edges(SUBCARRIERS, config.psd_edge_guards)
    ratios = {}
    summary_rows = []
    for index, (name, base_id) in enumerate(
        (("oqam", "oqam-mf"), ("croqam", "croqam-mf"))
    ):
        modem = build_reference_modem(base_id)
        rng = np.random.default_rng([config.seed, index])
        stream = gfdm_block_stream(
            modem, config.psd_blocks, rng,
            active_subcarriers=active,
            guard_subsymbols=config.psd_guard_subsymbols,
        )
        estimate = estimate_psd(
            stream, config.psd_segment_len, config.psd_overlap,
            sample_rate=float(SUBCARRIERS),
        )
        rows = [
            [base_id, _fmt(freq), _fmt(level)]
            for freq, level in zip(estimate.freq_axis, estimate.psd_db)
        ]
        _write_csv(os.path.join(config.out_dir, f"psd_{name}.csv"),
                   PSD_HEADER, rows)
        ratios[name] = oob_ratio(estimate, band, exclusion=OOB_EXCLUSION)
        summary_rows.append([base_id, _fmt(ratios[name])])
        print(f"wrote psd_{name}.csv (oob ratio {ratios[name]:.2f} dB)")
    margin = ratios["croqam"] - ratios["oqam"]
    summary_rows.append(["margin-croqam-vs-oqam", _fmt(margin)])
    _write_csv(os.path.join(config.out_dir, "oob_summary.csv"),
               "config_id,oob_ratio_db", summary_rows)
    print(f"conjugate-root margin over conventional: {margin:.2f} dB")
    return 0


def cmd_filter_dump(config: ExperimentConfig) -> int:
    grid = FilterGrid(
        config.filter_subcarriers * config.filter_bins_per_subcarrier,
        config.filter_bins_per_subcarrier,
    )
    nyquist = make_nyquist("rc", config.filter_rolloff, grid)
    centered_bins = np.fft.fftshift(grid.signed_bins())
    scale = grid.bins_per_subcarrier
    for name, filt in (
        ("rrc", sqrt_nyquist(nyquist)),
        ("crrc", conjugate_root(nyquist)),
    ):
        freq = filt.freq_response_centered()
        time = filt.time_response_centered()
        rows = [
            [str(bin_index), _fmt(bin_index / scale),
             _fmt(value.real), _fmt(value.imag),
             _fmt(pulse.real), _fmt(pulse.imag)]
            for bin_index, value, pulse in zip(centered_bins, freq, time)
        ]
        _write_csv(os.path.join(config.out_dir, f"filter_{name}.csv"),
                   FILTER_HEADER, rows)

        ici = ici_response(filt, config.ici_shift)
        spectrum = ici.spectrum_centered()
        pulse_like = ici.time_centered()
        ici_rows = [
            [str(bin_index), _fmt(bin_index / scale),
             _fmt(value.real), _fmt(value.imag),
             _fmt(sample.real), _fmt(sample.imag)]
            for bin_index, value, sample in zip(centered_bins, spectrum, pulse_like)
        ]
        _write_csv(os.path.join(config.out_dir, f"ici_{name}.csv"),
                   FILTER_HEADER, ici_rows)
        print(f"wrote filter_{name}.csv and ici_{name}.csv ({grid.n_bins} bins)")
    return 0


_COMMANDS = {
    "verify": cmd_verify,
    "ser": cmd_ser,
    "psd": cmd_psd,
    "filter-dump": cmd_filter_dump,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="croqam",
        description="Multicarrier waveform experiments: verification reports, "
        "SER sweeps, PSD comparisons, and prototype filter dumps.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify", "run orthogonality and modem checks"),
        ("ser", "Monte-Carlo + semi-analytic SER sweeps"),
        ("psd", "power spectral density comparison"),
        ("filter-dump", "dump prototype filter and ICI responses"),
    ):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--config", help="INI configuration file")
        sub.add_argument("--out", help="output directory (overrides config)")
        sub.add_argument("--seed", type=int, help="base random seed")
        sub.add_argument("--trials", type=int, help="Monte-Carlo trials per point")
        sub.add_argument("--workers", type=int, help="parallel worker processes")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config) if args.config else ExperimentConfig()
        config = apply_cli_overrides(
            config, args.command,
            out_dir=args.out, seed=args.seed,
            trials=args.trials, workers=args.workers,
        )
    except (ValueError, configparser.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    os.makedirs(config.out_dir, exist_ok=True)
    with open(os.path.join(config.out_dir, "manifest.cfg"), "w") as handle:
        handle.write(manifest_text(config))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # reference grids use M=7
        try:
            return _COMMANDS[args.command](config)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2


if __name__ == "__main__":
    sys.exit(main())
