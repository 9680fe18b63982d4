import json
import math

import numpy as np
import pytest

from catparity import cli


def run_cli(args):
    return cli.main(args)


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = [list(map(float, ln.split(","))) for ln in lines[1:]]
    return header, np.array(rows)


class TestGridParsing:
    def test_inclusive_grid(self):
        g = cli.parse_grid("0:8:0.5", "phi_grid")
        assert g[0] == 0.0 and g[-1] == 8.0 and len(g) == 17

    def test_malformed_grid_names_field(self):
        with pytest.raises(ValueError, match="phi_grid"):
            cli.parse_grid("5:1:1", "phi_grid")
        with pytest.raises(ValueError, match="step"):
            cli.parse_grid("1:5:-1", "phi_grid")


class TestValidate:
    def test_default_config_clean(self):
        config = cli.RunConfig("fig1b", {"alpha": 2.0, "phi_grid": "1:2:0.5", "dim": None})
        assert cli.validate(config) == []

    def test_dispersive_guard_diagnostic(self):
        config = cli.RunConfig("fig3", {"alpha": 2.0, "phi_c": 1.0, "n_c": 1.0,
                                        "phi_grid": "3:4:0.5", "epsilons": [0.1]})
        diags = cli.validate(config)
        assert any("dispersive" in d for d in diags)

    def test_resonance_diagnostic_names_pair(self):
        config = cli.RunConfig(
            "rates",
            {"alpha": 2.0, "e_j": None, "omega_a_hz": 3e9 + 1.0, "omega_b_hz": 1e9,
             "l_max": 6},
        )
        diags = cli.validate(config)
        assert any("l_a=1" in d and "l_b=3" in d for d in diags)

    def test_truncation_guard(self):
        config = cli.RunConfig("fig1b", {"alpha": 3.0, "dim": 20, "phi_grid": "1:2:1"})
        diags = cli.validate(config)
        assert any("truncation" in d for d in diags)


class TestCommands:
    def test_fig1b_dataset(self, tmp_path):
        out = tmp_path / "fig1b.csv"
        code = run_cli(["fig1b", "--alpha", "2", "--phi-grid", "0.5:8:0.1",
                        "--output", str(out)])
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["phi_a", "c_plus_over_ej", "c_minus_over_ej"]
        phi = rows[:, 0]
        c_plus, c_minus = rows[:, 1], rows[:, 2]
        # the two curves straddle zero with opposite values around phi = 4
        window = (phi > 3) & (phi < 5)
        assert np.all(c_plus[window] < 0) and np.all(c_minus[window] > 0)
        mid = (phi > 3.8) & (phi < 4.2)
        np.testing.assert_allclose(c_plus[mid], -c_minus[mid], rtol=0.02)
        # while at small phi they coincide (identity-like action)
        small = phi < 0.8
        np.testing.assert_allclose(c_plus[small], c_minus[small], atol=0.02)
        assert (out.parent / (out.name + ".meta.json")).exists()

    def test_fig1d_log_linear(self, tmp_path):
        out = tmp_path / "fig1d.csv"
        code = run_cli(["fig1d", "--alpha-grid", "2:4:0.5", "--output", str(out)])
        assert code == 0
        header, rows = read_csv(out)
        alpha, ratio = rows[:, 0], rows[:, 4]
        slope, _ = np.polyfit(alpha ** 2, np.log(ratio), 1)
        assert -0.25 <= slope <= -0.1

    def test_malformed_grid_exits_2(self, tmp_path, capsys):
        code = run_cli(["fig1b", "--phi-grid", "5:1:1",
                        "--output", str(tmp_path / "x.csv")])
        assert code == 2
        assert "phi_grid" in capsys.readouterr().err

    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["not-a-command"])
        assert exc.value.code == 2

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep", "--alpha-grid", "1:2:0.5", "--phi-grid", "1:3:0.5"]
        assert run_cli(args + ["--output", str(a)]) == 0
        assert run_cli(args + ["--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_rates_with_joint_and_frequencies(self, tmp_path):
        out = tmp_path / "rates.csv"
        code = run_cli([
            "rates", "--e-j-hz", "300e6", "--alpha", "2", "--phi-a", "4",
            "--beta", "2", "--phi-b", "4", "--omega-a-hz", "9.10e9",
            "--omega-b-hz", "7.5e9", "--output", str(out),
        ])
        assert code == 0
        header, rows = read_csv(out)
        assert "gamma_phi_plus_over_m" in header
        ratio = rows[0, header.index("gamma_phi_plus_over_m")]
        assert 3e-4 <= ratio <= 3e-3

    def test_figs3_json_format(self, tmp_path):
        out = tmp_path / "figS3.json"
        code = run_cli(["figS3", "--grid2", "2:4:1", "--grid3", "2:4:1",
                        "--format", "json", "--output", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["columns"][3] == "feasible"
        assert payload["metadata"]["n_failed_verification"] == 0

    def test_figs2_small_grid(self, tmp_path):
        out = tmp_path / "figS2.csv"
        code = run_cli(["figS2", "--alphas", "2", "--grid-n", "21",
                        "--output", str(out)])
        assert code == 0
        header, rows = read_csv(out)
        assert len(rows) == 21 * 21
        q_jump = rows[:, header.index("q_jump_state")]
        # the jump state shows its dip at -alpha
        gamma = rows[:, 1] + 1j * rows[:, 2]
        at_dip = np.argmin(np.abs(gamma - (-2.0)))
        assert q_jump[at_dip] < 0.25 * q_jump.max()

    def test_fig1a_levels(self, tmp_path):
        out = tmp_path / "fig1a.csv"
        assert run_cli(["fig1a", "--phi-a", "4", "--output", str(out)]) == 0
        header, rows = read_csv(out)
        vals = rows[:, 1]
        assert header == ["n", "energy_over_ej"]
        assert vals[0] == pytest.approx(-math.exp(-8.0), rel=1e-12)

    def test_fig3_single_point(self, tmp_path):
        out = tmp_path / "fig3.csv"
        code = run_cli(["fig3", "--phi-grid", "4:4.5:0.5", "--epsilons", "0.2",
                        "--output", str(out)])
        assert code == 0
        header, rows = read_csv(out)
        eta = rows[:, header.index("eta_eps_0.2")]
        assert np.all((eta > 0.3) & (eta < 1.0))
