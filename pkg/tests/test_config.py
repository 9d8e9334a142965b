"""Configuration parsing, validation, and manifest round trips."""

import dataclasses

import pytest

from croqam.config import (
    ExperimentConfig,
    apply_cli_overrides,
    load_config,
    manifest_text,
    parse_snr_grid,
)


class TestSnrGrid:
    def test_range_syntax(self):
        assert parse_snr_grid("26:44:2") == tuple(float(v) for v in range(26, 45, 2))

    def test_range_with_fractional_step(self):
        assert parse_snr_grid("0:1:0.5") == (0.0, 0.5, 1.0)

    def test_explicit_list(self):
        assert parse_snr_grid("10, 20,30") == (10.0, 20.0, 30.0)

    def test_bad_forms_rejected(self):
        for text in ("", "10:20", "10:20:0", "20:10:2", "10:20:2:4"):
            with pytest.raises(ValueError):
                parse_snr_grid(text)


class TestLoadConfig:
    def write(self, tmp_path, body):
        path = tmp_path / "run.cfg"
        path.write_text(body)
        return str(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValueError):
            load_config(str(tmp_path / "absent.cfg"))

    def test_defaults_when_empty_sections(self, tmp_path):
        config = load_config(self.write(tmp_path, "[run]\nseed = 9\n"))
        assert config.seed == 9
        assert config.trials == ExperimentConfig().trials

    def test_unknown_section_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="unknown config section"):
            load_config(self.write(tmp_path, "[plotting]\nx = 1\n"))

    def test_unknown_key_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="unknown config key"):
            load_config(self.write(tmp_path, "[run]\nseeed = 1\n"))

    def test_bad_value_names_the_key(self, tmp_path):
        with pytest.raises(ValueError, match="trials"):
            load_config(self.write(tmp_path, "[run]\ntrials = soon\n"))

    def test_validation_catches_zero_trials(self, tmp_path):
        with pytest.raises(ValueError, match="trials"):
            load_config(self.write(tmp_path, "[run]\ntrials = 0\n"))

    def test_validation_catches_bad_rolloff(self, tmp_path):
        with pytest.raises(ValueError, match="rolloff"):
            load_config(self.write(tmp_path, "[filter]\nrolloff = 1.5\n"))

    def test_validation_catches_bad_overlap(self, tmp_path):
        body = "[psd]\nsegment_len = 100\noverlap = 100\n"
        with pytest.raises(ValueError, match="overlap"):
            load_config(self.write(tmp_path, body))

    def test_overlap_follows_segment_length(self, tmp_path):
        config = load_config(self.write(tmp_path, "[psd]\nsegment_len = 256\n"))
        assert config.psd_overlap == 128

    def test_explicit_overlap_kept(self, tmp_path):
        body = "[psd]\nsegment_len = 256\noverlap = 64\n"
        assert load_config(self.write(tmp_path, body)).psd_overlap == 64

    def test_ser_config_ids_validated(self, tmp_path):
        with pytest.raises(ValueError):
            load_config(self.write(tmp_path, "[ser]\nconfigs = qam-dfe\n"))

    def test_verify_pairs_parsed(self, tmp_path):
        body = "[verify]\npairs = crrc:conventional\n"
        config = load_config(self.write(tmp_path, body))
        assert config.verify_pairs == (("crrc", "conventional"),)


class TestManifest:
    def test_round_trip_preserves_everything(self, tmp_path):
        original = dataclasses.replace(
            ExperimentConfig(),
            command="ser",
            out_dir=str(tmp_path / "results"),
            seed=777,
            trials=123,
            workers=3,
            ser_configs=("croqam-mf", "qam-zf-trstc"),
            snr_db=(10.0, 12.5, 15.0),
            snr_db_trstc=(4.0, 8.0),
            theory_channels=55,
            psd_segment_len=256,
            psd_overlap=96,
            filter_rolloff=0.75,
            verify_pairs=(("crrc", "cr"),),
        )
        path = tmp_path / "manifest.cfg"
        path.write_text(manifest_text(original))
        assert load_config(str(path)) == original

    def test_default_round_trip(self, tmp_path):
        original = dataclasses.replace(ExperimentConfig(), command="psd")
        path = tmp_path / "manifest.cfg"
        path.write_text(manifest_text(original))
        assert load_config(str(path)) == original


class TestCliOverrides:
    def test_overrides_apply(self):
        config = apply_cli_overrides(
            ExperimentConfig(), "ser",
            out_dir="elsewhere", seed=1, trials=2, workers=4,
        )
        assert (config.command, config.out_dir) == ("ser", "elsewhere")
        assert (config.seed, config.trials, config.workers) == (1, 2, 4)

    def test_none_means_keep(self):
        config = apply_cli_overrides(ExperimentConfig(seed=42), "psd")
        assert config.seed == 42

    def test_command_mismatch_rejected(self):
        loaded = ExperimentConfig(command="ser")
        with pytest.raises(ValueError, match="command"):
            apply_cli_overrides(loaded, "psd")

    def test_override_validation(self):
        with pytest.raises(ValueError):
            apply_cli_overrides(ExperimentConfig(), "ser", trials=0)
