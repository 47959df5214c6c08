"""CLI contract: subcommands, exit codes, CSV determinism, manifests."""

import csv
import json

import numpy as np

from qmudsim import cli

BER_CONFIG = """\
signature_kind = walsh
k_users = 1
n_chips = 2
sync_mode = synchronous
gain_model = fixed
detector = mf
ebn0_db_list = 0,4
trials = 500
seed = 77
"""


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


class TestGroverCommand:
    def test_n4_success_one_at_k1(self, tmp_path):
        out = tmp_path / "g.csv"
        rc = cli.main(["grover", "--n", "4", "--marked", "1",
                       "--trials", "2000", "--out", str(out)])
        assert rc == 0
        rows = read_csv(out)
        assert rows[0] == ["k", "predicted_success", "measured_success", "trials"]
        k1 = rows[2]
        assert float(k1[1]) == 1.0
        assert float(k1[2]) == 1.0

    def test_n1024_high_success_at_k25(self, tmp_path):
        out = tmp_path / "g1024.csv"
        rc = cli.main(["grover", "--n", "1024", "--marked", "1",
                       "--trials", "10000", "--out", str(out)])
        assert rc == 0
        rows = read_csv(out)
        last = rows[-1]
        assert int(last[0]) == 25
        assert float(last[2]) >= 0.999

    def test_missing_n_is_usage_error(self):
        assert cli.main(["grover"]) == 2

    def test_non_power_of_two_rejected(self):
        assert cli.main(["grover", "--n", "100"]) == 2

    def test_marked_out_of_range(self):
        assert cli.main(["grover", "--n", "16", "--marked", "17"]) == 2

    def test_scaling_mode(self, tmp_path):
        out = tmp_path / "scaling.csv"
        rc = cli.main(["grover", "--scaling", "--n", "64",
                       "--scaling-max-exp", "8", "--trials", "50",
                       "--out", str(out)])
        assert rc == 0
        rows = read_csv(out)
        assert rows[0][0] == "n"
        assert [int(r[0]) for r in rows[1:]] == [64, 128, 256]
        # exhaustive contrast column equals the space size
        assert all(int(r[0]) == int(r[3]) for r in rows[1:])


class TestBerCommand:
    def test_run_and_reproduce(self, tmp_path):
        cfg = tmp_path / "ber.cfg"
        cfg.write_text(BER_CONFIG)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.main(["ber", "--config", str(cfg), "--out", str(out1)]) == 0
        assert cli.main(["ber", "--config", str(cfg), "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_threads_do_not_change_output(self, tmp_path):
        cfg = tmp_path / "ber.cfg"
        cfg.write_text(BER_CONFIG)
        out1, out4 = tmp_path / "t1.csv", tmp_path / "t4.csv"
        assert cli.main(["ber", "--config", str(cfg), "--out", str(out1)]) == 0
        assert cli.main(["ber", "--config", str(cfg), "--out", str(out4),
                         "--threads", "4"]) == 0
        assert out1.read_bytes() == out4.read_bytes()

    def test_manifest_written(self, tmp_path):
        cfg = tmp_path / "ber.cfg"
        cfg.write_text(BER_CONFIG)
        out = tmp_path / "curve.csv"
        assert cli.main(["ber", "--config", str(cfg), "--out", str(out)]) == 0
        manifest = json.loads((tmp_path / "curve.csv.manifest.json").read_text())
        assert manifest["subcommand"] == "ber"
        assert manifest["config"]["seed"] == 77
        assert manifest["config"]["detector"] == "mf"

    def test_seed_flag_overrides_config(self, tmp_path):
        cfg = tmp_path / "ber.cfg"
        cfg.write_text(BER_CONFIG)
        out1, out2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
        assert cli.main(["ber", "--config", str(cfg), "--out", str(out1),
                         "--seed", "1234"]) == 0
        assert cli.main(["ber", "--config", str(cfg), "--out", str(out2)]) == 0
        assert out1.read_bytes() != out2.read_bytes()

    def test_noiseless_ml_column_zero(self, tmp_path):
        cfg = tmp_path / "clean.cfg"
        cfg.write_text("signature_kind = walsh\nk_users = 2\nn_chips = 4\n"
                       "detector = ml_exhaustive\nebn0_db_list = inf\n"
                       "trials = 50\n")
        out = tmp_path / "clean.csv"
        assert cli.main(["ber", "--config", str(cfg), "--out", str(out)]) == 0
        rows = read_csv(out)
        assert float(rows[1][1]) == 0.0

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(BER_CONFIG + "mystery = 1\n")
        assert cli.main(["ber", "--config", str(cfg)]) == 2

    def test_invalid_walsh_scenario_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("signature_kind = walsh\nk_users = 5\nn_chips = 4\n"
                       "detector = mf\nebn0_db_list = 0\ntrials = 10\n")
        assert cli.main(["ber", "--config", str(cfg)]) == 2

    def test_missing_config_file(self, tmp_path):
        assert cli.main(["ber", "--config", str(tmp_path / "nope.cfg")]) == 2


class TestBscCommand:
    def test_p_half(self, capsys, tmp_path):
        out = tmp_path / "demo.json"
        rc = cli.main(["bsc", "--p", "0.5", "--bits", "5000", "--out", str(out)])
        assert rc == 0
        captured = capsys.readouterr().out
        assert "quantum error rate" in captured
        report = json.loads(out.read_text())
        assert report["quantum_error_rate"] == 0.0
        assert abs(report["classical_error_rate"] - 0.5) < 0.05
        assert report["classical_capacity"] == 0.0

    def test_p_zero(self, capsys):
        rc = cli.main(["bsc", "--p", "0", "--bits", "200"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert report["classical_error_rate"] == 0.0
        assert report["quantum_error_rate"] == 0.0

    def test_p_out_of_range(self):
        assert cli.main(["bsc", "--p", "1.5"]) == 2


class TestQmudAgreeCommand:
    def test_small_run(self, tmp_path):
        out = tmp_path / "agree.csv"
        rc = cli.main(["qmud-agree", "--k", "5", "--trials", "30",
                       "--out", str(out)])
        assert rc == 0
        rows = read_csv(out)
        assert rows[0][0] == "k_users"
        assert float(rows[1][3]) >= 0.9  # agreement column

    def test_k_validated(self):
        assert cli.main(["qmud-agree", "--k", "0"]) == 2


class TestSeedDefault:
    def test_documented_default_used(self, tmp_path):
        from qmudsim import config
        out1, out2 = tmp_path / "d1.csv", tmp_path / "d2.csv"
        assert cli.main(["grover", "--n", "16", "--trials", "500",
                         "--out", str(out1)]) == 0
        assert cli.main(["grover", "--n", "16", "--trials", "500",
                         "--seed", str(config.DEFAULT_SEED),
                         "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
