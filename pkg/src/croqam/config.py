"""Experiment configuration: INI files, defaults, and manifests.

One declarative document drives every subcommand.  Loading resolves all
defaults, so the manifest written next to results is complete: feeding it
back through the CLI reproduces the run byte for byte.  Unknown sections
or keys are rejected rather than ignored, since a typo that silently
falls back to a default would corrupt a reproduction recipe.
"""

import configparser
from dataclasses import dataclass, fields, replace

from croqam.ser import parse_config_id

_DEFAULT_SNR = tuple(float(v) for v in range(26, 45, 2))
_DEFAULT_SNR_TRSTC = tuple(float(v) for v in range(14, 29, 2))
_DEFAULT_SER_CONFIGS = (
    "qam-zf",
    "oqam-mf",
    "croqam-mf",
    "qam-zf-trstc",
    "croqam-mf-trstc",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully-resolved settings for one CLI run."""

    command: str = ""
    out_dir: str = "out"
    seed: int = 12345
    trials: int = 20000
    workers: int = 1

    ser_configs: tuple = _DEFAULT_SER_CONFIGS
    snr_db: tuple = _DEFAULT_SNR
    snr_db_trstc: tuple = _DEFAULT_SNR_TRSTC
    theory_channels: int = 2000

    psd_blocks: int = 120
    psd_segment_len: int = 448
    psd_overlap: int = 224
    psd_guard_subsymbols: int = 1
    psd_edge_guards: int = 8

    filter_rolloff: float = 1.0
    filter_bins_per_subcarrier: int = 64
    filter_subcarriers: int = 16
    ici_shift: int = 1

    verify_samples_per_period: int = 64
    verify_span: int = 64
    verify_rolloff: float = 1.0
    verify_pairs: tuple = (("rrc", "conventional"), ("crrc", "cr"))


def parse_snr_grid(text: str) -> tuple:
    """Either an inclusive ``lo:hi:step`` range or an explicit list."""
    text = text.strip()
    if not text:
        raise ValueError("empty SNR grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"SNR range must be lo:hi:step, got {text!r}")
        low, high, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("SNR step must be positive")
        if high < low:
            raise ValueError("SNR range must not be descending")
        count = int(round((high - low) / step)) + 1
        return tuple(low + i * step for i in range(count) if low + i * step <= high + 1e-9)
    return tuple(float(p) for p in text.replace(",", " ").split())


def _parse_id_list(text: str) -> tuple:
    ids = tuple(p for p in text.replace(",", " ").split() if p)
    if not ids:
        raise ValueError("empty config id list")
    for config_id in ids:
        parse_config_id(config_id)
    return ids


def _parse_pairs(text: str) -> tuple:
    pairs = []
    for chunk in text.replace(",", " ").split():
        if ":" not in chunk:
            raise ValueError(f"verify pair must be filter:phase_mode, got {chunk!r}")
        family, phase_mode = chunk.split(":", 1)
        pairs.append((family, phase_mode))
    if not pairs:
        raise ValueError("empty verify pair list")
    return tuple(pairs)


# section -> key -> (config field, parser)
_SCHEMA = {
    "run": {
        "command": ("command", str),
        "out_dir": ("out_dir", str),
        "seed": ("seed", int),
        "trials": ("trials", int),
        "workers": ("workers", int),
    },
    "ser": {
        "configs": ("ser_configs", _parse_id_list),
        "snr_db": ("snr_db", parse_snr_grid),
        "snr_db_trstc": ("snr_db_trstc", parse_snr_grid),
        "theory_channels": ("theory_channels", int),
    },
    "psd": {
        "blocks": ("psd_blocks", int),
        "segment_len": ("psd_segment_len", int),
        "overlap": ("psd_overlap", int),
        "guard_subsymbols": ("psd_guard_subsymbols", int),
        "edge_guards": ("psd_edge_guards", int),
    },
    "filter": {
        "rolloff": ("filter_rolloff", float),
        "bins_per_subcarrier": ("filter_bins_per_subcarrier", int),
        "subcarriers": ("filter_subcarriers", int),
        "ici_shift": ("ici_shift", int),
    },
    "verify": {
        "samples_per_period": ("verify_samples_per_period", int),
        "span": ("verify_span", int),
        "rolloff": ("verify_rolloff", float),
        "pairs": ("verify_pairs", _parse_pairs),
    },
}


def load_config(path: str) -> ExperimentConfig:
    """Parse an INI document into a fully-resolved configuration."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ValueError(f"config file not found: {path}")

    overrides = {}
    explicit_overlap = False
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ValueError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ValueError(f"unknown config key {key!r} in section [{section}]")
            field_name, parse = _SCHEMA[section][key]
            try:
                overrides[field_name] = parse(raw)
            except Exception as exc:
                raise ValueError(
                    f"bad value for [{section}] {key}: {raw!r} ({exc})"
                ) from exc
            if field_name == "psd_overlap":
                explicit_overlap = True

    config = replace(ExperimentConfig(), **overrides)
    if not explicit_overlap and "psd_segment_len" in overrides:
        config = replace(config, psd_overlap=config.psd_segment_len // 2)
    _validate(config)
    return config


def _validate(config: ExperimentConfig) -> None:
    if config.trials < 1:
        raise ValueError("trials must be at least 1")
    if config.workers < 1:
        raise ValueError("workers must be at least 1")
    if config.theory_channels < 1:
        raise ValueError("theory_channels must be at least 1")
    if not 0 <= config.psd_overlap < config.psd_segment_len:
        raise ValueError("overlap must lie in [0, segment_len)")
    if config.psd_blocks < 1:
        raise ValueError("blocks must be at least 1")
    for value, name in (
        (config.filter_rolloff, "filter rolloff"),
        (config.verify_rolloff, "verify rolloff"),
    ):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {value}")


def apply_cli_overrides(
    config: ExperimentConfig,
    command: str,
    out_dir=None,
    seed=None,
    trials=None,
    workers=None,
) -> ExperimentConfig:
    if config.command and config.command != command:
        raise ValueError(
            f"config file is for command {config.command!r}, not {command!r}"
        )
    updates = {"command": command}
    if out_dir is not None:
        updates["out_dir"] = out_dir
    if seed is not None:
        updates["seed"] = seed
    if trials is not None:
        updates["trials"] = trials
    if workers is not None:
        updates["workers"] = workers
    config = replace(config, **updates)
    _validate(config)
    return config


def _format_value(field_name: str, value) -> str:
    if field_name in ("snr_db", "snr_db_trstc"):
        return ", ".join(repr(float(v)) for v in value)
    if field_name == "ser_configs":
        return ", ".join(value)
    if field_name == "verify_pairs":
        return ", ".join(f"{family}:{mode}" for family, mode in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def manifest_text(config: ExperimentConfig) -> str:
    """Render the fully-resolved configuration back to INI."""
    lines = []
    for section, keys in _SCHEMA.items():
        lines.append(f"[{section}]")
        for key, (field_name, _) in keys.items():
            value = getattr(config, field_name)
            lines.append(f"{key} = {_format_value(field_name, value)}")
        lines.append("")
    return "\n".join(lines)


def config_fields() -> tuple:
    return tuple(f.name for f in fields(ExperimentConfig))
