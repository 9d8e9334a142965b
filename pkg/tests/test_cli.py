"""End-to-end subcommand runs: files, exit codes, reproducibility."""

import numpy as np
import pytest

from croqam.cli import main


def read_rows(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


def write_cfg(tmp_path, body, name="run.cfg"):
    path = tmp_path / name
    path.write_text(body)
    return str(path)


class TestUsageErrors:
    def test_missing_config_file(self, tmp_path):
        assert main(["verify", "--config", str(tmp_path / "nope.cfg")]) == 2

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as info:
            main(["render"])
        assert info.value.code == 2

    def test_bad_config_value(self, tmp_path):
        cfg = write_cfg(tmp_path, "[filter]\nrolloff = 2.0\n")
        assert main(["filter-dump", "--config", cfg]) == 2

    def test_command_mismatch(self, tmp_path):
        cfg = write_cfg(tmp_path, "[run]\ncommand = ser\n")
        assert main(["psd", "--config", cfg]) == 2


class TestVerify:
    def test_default_pairs_pass(self, tmp_path, capsys):
        out = tmp_path / "results"
        assert main(["verify", "--out", str(out), "--seed", "5"]) == 0
        printed = capsys.readouterr().out
        assert "all checks passed" in printed
        assert (out / "manifest.cfg").exists()

        header, rows = read_rows(out / "orthogonality.csv")
        assert header == ["filter", "alpha", "phase_mode", "max_violation"]
        assert [row[0] for row in rows] == ["rrc", "crrc"]
        assert all(float(row[3]) < 1e-10 for row in rows)

        header, rows = read_rows(out / "modems.csv")
        assert header == ["K", "M", "filter", "alpha", "detector", "mode",
                          "xi_db", "max_roundtrip_err", "cond_estimate"]
        assert len(rows) == 3
        assert all(float(row[7]) < 1e-9 for row in rows)
        by_filter = {row[2]: row for row in rows}
        assert 0.7 <= float(by_filter["rc"][6]) <= 0.9
        assert float(by_filter["crrc"][6]) == 0.0

    def test_mismatched_pair_fails(self, tmp_path, capsys):
        cfg = write_cfg(
            tmp_path,
            "[verify]\npairs = rrc:conventional, crrc:conventional\n",
        )
        out = tmp_path / "results"
        assert main(["verify", "--config", cfg, "--out", str(out)]) == 1
        printed = capsys.readouterr().out
        assert "FAIL orthogonality crrc/conventional" in printed

        _, rows = read_rows(out / "orthogonality.csv")
        violations = {row[0]: float(row[3]) for row in rows}
        assert violations["rrc"] < 1e-10
        assert violations["crrc"] > 0.1


SER_CFG = """
[run]
command = ser
seed = 31
trials = 40

[ser]
configs = croqam-mf, qam-zf-trstc
snr_db = 12, 24
snr_db_trstc = 6, 14
theory_channels = 25
"""


class TestSer:
    def test_outputs_and_reproducibility(self, tmp_path):
        cfg = write_cfg(tmp_path, SER_CFG)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["ser", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["ser", "--config", cfg, "--out", str(out2)]) == 0

        names = [
            "ser_croqam-mf.csv", "ser_croqam-mf-theory.csv",
            "ser_qam-zf-trstc.csv", "ser_qam-zf-trstc-theory.csv",
            "ser_combined.csv", "manifest.cfg",
        ]
        for name in names:
            assert (out1 / name).exists(), name
        for name in names[:-1]:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_row_contents(self, tmp_path):
        cfg = write_cfg(tmp_path, SER_CFG)
        out = tmp_path / "results"
        assert main(["ser", "--config", cfg, "--out", str(out)]) == 0

        header, rows = read_rows(out / "ser_croqam-mf.csv")
        assert header == ["config_id", "snr_db", "ser", "errors",
                          "decisions", "trials", "flag"]
        assert [row[0] for row in rows] == ["croqam-mf"] * 2
        assert [float(row[1]) for row in rows] == [12.0, 24.0]
        for row in rows:
            assert float(row[2]) == int(row[3]) / int(row[4])
            assert int(row[5]) == 40
            assert row[6] in ("ok", "low_errors")

        _, theory_rows = read_rows(out / "ser_croqam-mf-theory.csv")
        for row in theory_rows:
            assert row[0] == "croqam-mf-theory"
            assert (int(row[3]), int(row[4])) == (0, 0)
            assert row[6] == "analytic"

        # TRSTC grid honors its own SNR list
        _, trstc_rows = read_rows(out / "ser_qam-zf-trstc.csv")
        assert [float(row[1]) for row in trstc_rows] == [6.0, 14.0]

        _, combined = read_rows(out / "ser_combined.csv")
        assert len(combined) == 8

    def test_manifest_reproduces_run(self, tmp_path):
        cfg = write_cfg(tmp_path, SER_CFG)
        out1 = tmp_path / "a"
        assert main(["ser", "--config", cfg, "--out", str(out1)]) == 0
        out2 = tmp_path / "b"
        assert main(
            ["ser", "--config", str(out1 / "manifest.cfg"), "--out", str(out2)]
        ) == 0
        for name in ("ser_croqam-mf.csv", "ser_combined.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


PSD_CFG = """
[run]
command = psd
seed = 77

[psd]
blocks = 40
segment_len = 448
guard_subsymbols = 1
edge_guards = 8
"""


class TestPsd:
    def test_outputs(self, tmp_path):
        cfg = write_cfg(tmp_path, PSD_CFG)
        out = tmp_path / "results"
        assert main(["psd", "--config", cfg, "--out", str(out)]) == 0

        header, rows = read_rows(out / "psd_oqam.csv")
        assert header == ["config_id", "freq_norm", "psd_db"]
        assert len(rows) == 448
        assert rows[0][0] == "oqam-mf"
        freqs = [float(row[1]) for row in rows]
        assert freqs[0] == -32.0
        levels = [float(row[2]) for row in rows]
        assert max(levels) == 0.0

        header, rows = read_rows(out / "oob_summary.csv")
        assert header == ["config_id", "oob_ratio_db"]
        ratios = {row[0]: float(row[1]) for row in rows}
        assert ratios["croqam-mf"] > ratios["oqam-mf"]
        assert ratios["margin-croqam-vs-oqam"] == pytest.approx(
            ratios["croqam-mf"] - ratios["oqam-mf"], abs=1e-9
        )

    def test_window_longer_than_signal_rejected(self, tmp_path):
        body = PSD_CFG.replace("blocks = 40", "blocks = 1").replace(
            "segment_len = 448", "segment_len = 8192"
        )
        cfg = write_cfg(tmp_path, body)
        assert main(["psd", "--config", cfg, "--out", str(tmp_path / "x")]) == 2


FILTER_CFG = """
[run]
command = filter-dump
seed = 1

[filter]
rolloff = 0.75
bins_per_subcarrier = 16
subcarriers = 8
ici_shift = 1
"""


class TestFilterDump:
    def test_outputs(self, tmp_path):
        cfg = write_cfg(tmp_path, FILTER_CFG)
        out = tmp_path / "results"
        assert main(["filter-dump", "--config", cfg, "--out", str(out)]) == 0

        for name in ("filter_rrc.csv", "filter_crrc.csv",
                     "ici_rrc.csv", "ici_crrc.csv"):
            header, rows = read_rows(out / name)
            assert header == ["bin", "freq_over_F", "re_G", "im_G", "re_g", "im_g"]
            assert len(rows) == 128
            assert int(rows[0][0]) == -64
            assert float(rows[0][1]) == -4.0

    def test_crrc_magnitude_squared_is_nyquist(self, tmp_path):
        """|G|^2 from the CSV reproduces the raised-cosine response."""
        from croqam import FilterGrid, make_nyquist

        cfg = write_cfg(tmp_path, FILTER_CFG)
        out = tmp_path / "results"
        assert main(["filter-dump", "--config", cfg, "--out", str(out)]) == 0

        _, rows = read_rows(out / "filter_crrc.csv")
        got = np.array([float(r[2]) ** 2 + float(r[3]) ** 2 for r in rows])
        nyquist = make_nyquist("rc", 0.75, FilterGrid(128, 16))
        want = nyquist.freq_response_centered().real
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_deterministic_bytes(self, tmp_path):
        cfg = write_cfg(tmp_path, FILTER_CFG)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["filter-dump", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["filter-dump", "--config", cfg, "--out", str(out2)]) == 0
        for name in ("filter_rrc.csv", "ici_crrc.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
