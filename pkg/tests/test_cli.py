"""End-to-end coverage of the command-line front end.

Everything runs in process through main(argv), so exit codes and the
exact bytes on stdout are both visible.  The heavyweight numerical
cases live in the library tests; here the point is parsing, schemas,
triage, and reproducibility of the emitted files.
"""

import json

import pytest

from asep2.cli import (_inject_config_file, _parse_positions, _parse_range,
                       main)

DIST2 = ["dist", "--p", "0.7", "--t", "0.5", "--y", "-1,0"]


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParsing:
    def test_positions(self):
        assert _parse_positions("-3,-1,0") == (-3, -1, 0)
        assert _parse_positions("0") == (0,)

    def test_positions_reject_disorder(self):
        with pytest.raises(ValueError):
            _parse_positions("0,0")
        with pytest.raises(ValueError):
            _parse_positions("1,0")
        with pytest.raises(ValueError):
            _parse_positions("a,b")

    def test_range(self):
        assert _parse_range("-5:5") == (-5, 5)
        assert _parse_range(None) is None
        with pytest.raises(ValueError):
            _parse_range("5")
        with pytest.raises(ValueError):
            _parse_range("5:-5")

    def test_negative_position_tokens_survive_argparse(self, capsys):
        code, out, _ = run(DIST2 + ["--x-range", "-3:2"], capsys)
        assert code == 0
        xs = [int(line.split(",")[0]) for line in out.splitlines()[1:]]
        assert xs == list(range(-3, 3))


class TestSchemas:
    def test_dist_csv(self, capsys):
        code, out, _ = run(DIST2, capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "x,probability,quad_error,imag_residual"
        for line in lines[1:]:
            x, prob, err, imag = line.split(",")
            int(x)
            assert 0.0 <= float(prob) <= 1.0 or abs(float(prob)) < 1e-8
            float(err), float(imag)

    def test_transition_csv(self, capsys):
        code, out, _ = run(["transition", "--p", "0.7", "--t", "0.5",
                            "--y", "-1,0", "--x", "0,1", "--sector", "1"],
                           capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "probability,quad_error,imag_residual"
        assert len(lines) == 2

    def test_simulate_csv(self, capsys):
        code, out, _ = run(["simulate", "--p", "0.7", "--t", "0.5",
                            "--y", "-1,0", "--replicas", "2000",
                            "--seed", "3"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "x,estimate,stderr,replicas"
        assert all(line.endswith(",2000") for line in lines[1:])

    def test_oracle_csv(self, capsys):
        code, out, _ = run(["oracle", "--p", "0.7", "--t", "0.5",
                            "--y", "-1,0"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "x,probability,quad_error,imag_residual"

    def test_compare_csv(self, capsys):
        code, out, _ = run(["compare", "--p", "0.7", "--t", "0.5",
                            "--y", "-1,0", "--replicas", "20000",
                            "--seed", "7"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "x,formula,oracle,mc,delta_oracle,z_mc"
        assert len(lines) > 10


class TestJson:
    def test_payload_shape_and_config_echo(self, capsys):
        code, out, _ = run(DIST2 + ["--format", "json"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert set(payload) == {"config", "rows", "diagnostics"}
        assert payload["config"]["p"] == 0.7
        assert payload["config"]["y"] == [-1, 0]
        assert payload["config"]["subcommand"] == "dist"
        assert payload["diagnostics"]["total_mass"] == pytest.approx(1.0)

    def test_json_matches_csv_bitwise(self, capsys):
        _, out_csv, _ = run(DIST2, capsys)
        _, out_json, _ = run(DIST2 + ["--format", "json"], capsys)
        csv_probs = {int(line.split(",")[0]): float(line.split(",")[1])
                     for line in out_csv.splitlines()[1:]}
        for row in json.loads(out_json)["rows"]:
            assert row["probability"] == csv_probs[row["x"]]


class TestDeterminism:
    def test_dist_rerun_is_byte_identical(self, capsys):
        _, first, _ = run(DIST2, capsys)
        _, second, _ = run(DIST2, capsys)
        assert first == second

    def test_simulate_seed_controls_bytes(self, capsys):
        base = ["simulate", "--p", "0.7", "--t", "0.5", "--y", "-1,0",
                "--replicas", "2000"]
        _, a, _ = run(base + ["--seed", "3"], capsys)
        _, b, _ = run(base + ["--seed", "3"], capsys)
        _, c, _ = run(base + ["--seed", "4"], capsys)
        assert a == b
        assert a != c

    def test_output_file_gets_the_bytes(self, capsys, tmp_path):
        target = tmp_path / "table.csv"
        code, out, _ = run(DIST2 + ["--output", str(target)], capsys)
        assert code == 0
        assert out == ""
        _, direct, _ = run(DIST2, capsys)
        assert target.read_text() == direct


class TestConfigFile:
    def test_injection_orders_flags_after_subcommand(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment\np=0.7\nx_range=-2:2\n")
        argv = _inject_config_file(["dist", "--config", str(cfg),
                                    "--t", "0.5"])
        assert argv == ["dist", "--p", "0.7", "--x-range", "-2:2",
                        "--t", "0.5"]

    def test_explicit_flags_win(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("p=0.5\nt=0.5\ny=-1,0\n")
        code, out, _ = run(["dist", "--config", str(cfg), "--p", "0.7",
                            "--format", "json"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["config"]["p"] == 0.7
        assert payload["config"]["t"] == 0.5

    def test_missing_file_is_a_usage_error(self, capsys):
        code, _, err = run(["dist", "--config", "/no/such/file"], capsys)
        assert code == 2
        assert "error" in err

    def test_malformed_line_is_a_usage_error(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("p 0.7\n")
        code, _, err = run(["dist", "--config", str(cfg)], capsys)
        assert code == 2
        assert "without '='" in err


class TestExitCodes:
    """0 success, 1 numerical alarm, 2 usage error."""

    def test_unsorted_positions(self, capsys):
        code, _, err = run(["dist", "--y", "1,0"], capsys)
        assert code == 2
        assert "increasing" in err

    def test_p_out_of_range(self, capsys):
        code, _, _ = run(["dist", "--p", "1.5", "--y", "0"], capsys)
        assert code == 2

    def test_bad_x_range(self, capsys):
        code, _, _ = run(DIST2 + ["--x-range", "5"], capsys)
        assert code == 2

    def test_missing_seed_is_an_argparse_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--y", "-1,0"])
        assert exc.value.code == 2

    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_misconfigured_contour_alarms(self, capsys):
        code, _, err = run(DIST2 + ["--radius", "0.5644", "--nodes", "32",
                                    "--t", "1.0"], capsys)
        assert code == 1
        assert "numerical alarm" in err

    def test_envelope_warning_alarms(self, capsys):
        code, _, err = run(["dist", "--p", "0.7", "--t", "6.0", "--y", "0"],
                           capsys)
        assert code == 1
        assert "numerical alarm" in err

    def test_compare_zero_threshold_alarms(self, capsys):
        code, _, err = run(["compare", "--p", "0.7", "--t", "0.25",
                            "--y", "-1,0", "--replicas", "5000",
                            "--seed", "2", "--max-delta", "0"], capsys)
        assert code == 1
        assert "outside thresholds" in err

    def test_oracle_refuses_four_particles(self, capsys):
        code, _, _ = run(["oracle", "--p", "0.7", "--t", "0.5",
                          "--y", "-3,-2,-1,0"], capsys)
        assert code == 2


class TestVerify:
    def test_full_suite_passes_at_defaults(self, capsys):
        code, out, _ = run(["verify", "--seed", "0"], capsys)
        assert code == 0
        assert "13/13 checks passed" in out
        assert "FAIL" not in out

    def test_failures_flip_the_exit_code(self, capsys, monkeypatch):
        import asep2.cli as cli
        monkeypatch.setattr(
            cli, "verify_identities",
            lambda params, **kw: [{"name": "stub identity",
                                   "max_rel_err": 1.0, "tol": 1e-10,
                                   "passed": None}])
        monkeypatch.setattr(cli, "_verify_braid", lambda params, rng: 0.0)
        monkeypatch.setattr(cli, "_verify_split", lambda params, rng: 0.0)
        monkeypatch.setattr(cli, "proposition41_check_N3",
                            lambda *a, **kw: {"abs_difference": 0.0})
        code, out, _ = run(["verify", "--seed", "0"], capsys)
        assert code == 1
        assert "FAIL  stub identity" in out
        assert "5/6 checks passed" in out
