"""Tests for the command-line front end."""

import json
from pathlib import Path

import pytest

from bifuq import cli

CONFIG_DIR = Path(cli.__file__).parent / "configs"


def run(args):
    return cli.main([str(a) for a in args])


def write_config(tmp_path, payload, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return p


WATT_MC = {
    "model": "watt_governor",
    "inputs": {
        "beta": {"kind": "uniform", "a": 0, "b": 1},
        "alpha": {"kind": "uniform", "a": 0, "b": 1},
    },
    "method": "monte_carlo",
    "params": {"n_samples": 2000, "seed": 3},
}


class TestConfigParsing:
    def test_bundled_configs_parse(self):
        for path in CONFIG_DIR.glob("*.json"):
            cfg = cli.load_config(str(path))
            assert cfg.method in cli.METHODS

    def test_bad_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{nope")
        assert run(["analyze", "--config", p, "--out", tmp_path / "o"]) == 2

    def test_unknown_model(self, tmp_path):
        p = write_config(tmp_path, {**WATT_MC, "model": "rossler"})
        assert run(["analyze", "--config", p, "--out", tmp_path / "o"]) == 2

    def test_unknown_method(self, tmp_path):
        p = write_config(tmp_path, {**WATT_MC, "method": "magic"})
        assert run(["analyze", "--config", p, "--out", tmp_path / "o"]) == 2

    def test_missing_input(self, tmp_path):
        broken = dict(WATT_MC, inputs={"beta": {"kind": "uniform", "a": 0, "b": 1}})
        p = write_config(tmp_path, broken)
        assert run(["analyze", "--config", p, "--out", tmp_path / "o"]) == 2

    def test_missing_file(self, tmp_path):
        assert run(["analyze", "--config", tmp_path / "nope.json"]) == 2


class TestAnalyze:
    def test_analytic_example(self, tmp_path):
        out = tmp_path / "out"
        code = run([
            "analyze", "--config", CONFIG_DIR / "example31.json", "--out", out,
        ])
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["subcritical_probability"] == pytest.approx(0.25, abs=1e-12)
        assert (out / "pdf.csv").exists()
        assert (out / "cdf.csv").exists()

    def test_unscented_watt(self, tmp_path):
        out = tmp_path / "out"
        code = run(["analyze", "--config", CONFIG_DIR / "watt_ut.json", "--out", out])
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["subcritical_probability"] == "1/5"
        assert (out / "sigma_points.csv").exists()

    def test_monte_carlo_small(self, tmp_path):
        p = write_config(tmp_path, WATT_MC)
        out = tmp_path / "out"
        assert run(["analyze", "--config", p, "--out", out]) == 0
        report = json.loads((out / "report.json").read_text())
        assert 0.0 <= report["subcritical_probability"] <= 1.0

    def test_mellin_pce_gmm_pipeline(self, tmp_path):
        cfg = json.loads((CONFIG_DIR / "ps_d.json").read_text())
        cfg["params"]["n_samples"] = 20000
        p = write_config(tmp_path, cfg)
        out = tmp_path / "out"
        assert run(["analyze", "--config", p, "--out", out]) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["moments_mellin"][0] == pytest.approx(-4.6247e-2, rel=2e-2)
        assert (out / "mixture.json").exists()

    def test_seed_override_and_determinism(self, tmp_path):
        p = write_config(tmp_path, WATT_MC)
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert run([
                "analyze", "--config", p, "--out", out, "--seed", 42,
            ]) == 0
            outs.append((out / "report.json").read_text())
        assert outs[0] == outs[1]
        out_c = tmp_path / "c"
        assert run(["analyze", "--config", p, "--out", out_c, "--seed", 43]) == 0
        assert (out_c / "report.json").read_text() != outs[0]

    def test_eval_cdf_flag(self, tmp_path):
        p = write_config(tmp_path, WATT_MC)
        out = tmp_path / "out"
        assert run([
            "analyze", "--config", p, "--out", out, "--eval-cdf=-3,0,3",
        ]) == 0
        report = json.loads((out / "report.json").read_text())
        assert set(report["cdf"]) == {"-3", "0", "3"}

    def test_numerical_failure_exit_code(self, tmp_path):
        # an inverse-gamma moment that does not exist trips exit code 3
        cfg = json.loads((CONFIG_DIR / "ps_b.json").read_text())
        cfg["inputs"]["theta"] = {"kind": "gamma", "shape": 2, "rate": 1}
        cfg["params"]["n_samples"] = 2000
        p = write_config(tmp_path, cfg)
        assert run(["analyze", "--config", p, "--out", tmp_path / "o"]) == 3

    def test_monte_carlo_never_touches_mellin_or_pce(self, tmp_path, monkeypatch):
        import bifuq.mellin
        import bifuq.pce

        def boom(*args, **kwargs):
            raise AssertionError("mellin/pce code path invoked")

        monkeypatch.setattr(bifuq.mellin, "mellin_eval", boom)
        monkeypatch.setattr(bifuq.pce, "project", boom)
        monkeypatch.setattr(bifuq.pce, "mellin_of_pce", boom)
        p = write_config(tmp_path, WATT_MC)
        assert run(["analyze", "--config", p, "--out", tmp_path / "o"]) == 0


class TestSubcommands:
    def test_pce(self, tmp_path):
        out = tmp_path / "out"
        assert run(["pce", "--config", CONFIG_DIR / "ps_b.json", "--out", out]) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["coefficients"][0] == pytest.approx(0.3188, abs=2e-3)

    def test_moments(self, tmp_path):
        cfg = json.loads((CONFIG_DIR / "ps_a.json").read_text())
        cfg["params"]["n_samples"] = 20000
        p = write_config(tmp_path, cfg)
        out = tmp_path / "out"
        assert run(["moments", "--config", p, "--out", out]) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["moments_mellin"]["mu"][0] == pytest.approx(
            1.1882e-1, rel=2e-2
        )

    def test_fit_gmm(self, tmp_path):
        out = tmp_path / "out"
        assert run([
            "fit-gmm", "--config", CONFIG_DIR / "ps_d.json", "--out", out,
        ]) == 0
        mix = json.loads((out / "mixture.json").read_text())
        assert set(mix) == {"pi", "mu", "sigma"}
        assert sum(mix["pi"]) == pytest.approx(1.0)

    def test_reconstruct(self, tmp_path):
        out = tmp_path / "out"
        assert run([
            "reconstruct", "--config", CONFIG_DIR / "ps_a.json", "--out", out,
        ]) == 0
        assert (out / "legendre_pdf.csv").exists()
        assert (out / "monic_pdf.csv").exists()

    def test_ut(self, tmp_path):
        out = tmp_path / "out"
        assert run(["ut", "--config", CONFIG_DIR / "watt_ut.json", "--out", out]) == 0

    def test_mc(self, tmp_path):
        p = write_config(tmp_path, WATT_MC)
        out = tmp_path / "out"
        assert run(["mc", "--config", p, "--out", out]) == 0
        assert (out / "histogram.csv").exists()
        assert (out / "ecdf.csv").exists()

    def test_mellin_product(self, tmp_path):
        out = tmp_path / "out"
        assert run([
            "mellin-product",
            "--config", CONFIG_DIR / "example31.json",
            "--out", out,
        ]) == 0
        assert (out / "pdf.csv").read_text().startswith("x,density")
