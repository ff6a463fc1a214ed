"""
Command-line surface.

 Group 1 - Subcommand output
 Group 2 - Exit codes
 Group 3 - Reproducible validation
"""

import io
import json
import logging

import numpy as np
import pandas as pd
import pytest

from src.cli import main

INFEASIBLE = {
    "A": [[-1.0, 0.0], [0.0, -1.0]],
    "B": [[1.0], [0.0]],
    "Sigma": [[1.0, 0.0], [0.0, 1.0]],
    "x0": [0.0, 0.0],
    "T": 1.0,
    "event": {"w": [0.0, 1.0], "a": 0.0},
    "p1": 0.8,
}


def _write_config(tmp_path, payload, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


# ═══════════════════════════════════════════════════════════════════════════════
# Group 1 - Subcommand output
# ═══════════════════════════════════════════════════════════════════════════════


def test_translate_drone_json(capsys):
    assert main(["translate", "--fixture", "drone", "--format", "json"]) == 0
    values = json.loads(capsys.readouterr().out)
    assert values['r_squared'] == pytest.approx(0.25, abs=1e-10)
    assert values['e_min'] == pytest.approx(1.1465554, abs=1e-6)
    assert values['feasible'] is True


def test_translate_with_discretization(capsys):
    assert main(["translate", "--fixture", "drone", "--n", "50", "--format", "json"]) == 0
    values = json.loads(capsys.readouterr().out)
    assert values['N'] == 50
    assert values['r_squared_N'] == pytest.approx(0.25 - 0.02 ** 2 / 16, rel=1e-9)
    assert values['e_min_N'] > values['e_min']


def test_gramians_scalar_json(capsys):
    assert main(["gramians", "--fixture", "scalar", "--format", "json"]) == 0
    values = json.loads(capsys.readouterr().out)
    assert values['V'] == [[pytest.approx(1.0, abs=1e-12)]]
    assert values['W'] == [[pytest.approx(1.0, abs=1e-12)]]
    assert values['r_squared'] == pytest.approx(1.0, abs=1e-12)


def test_gramians_table(capsys):
    assert main(["gramians", "--fixture", "drone"]) == 0
    out = capsys.readouterr().out
    assert "GRAMIANS" in out and "V =" in out and "W =" in out


def test_sweep_scalar_csv(capsys):
    assert main(["sweep", "--fixture", "scalar", "--p1", "0.55:0.95:0.05"]) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame.columns) == ['p1', 'e_min', 'beta']
    assert len(frame) == 9
    assert frame['p1'].iloc[-1] == pytest.approx(0.95)
    assert frame['e_min'].is_monotonic_increasing


def test_sweep_csv_uses_shortest_round_trip_floats(capsys):
    assert main(["sweep", "--fixture", "scalar", "--p1", "0.55:0.95:0.05"]) == 0
    text = capsys.readouterr().out
    assert "\n0.55," in text
    assert "0.55000000000000004" not in text
    frame = pd.read_csv(io.StringIO(text))
    assert frame['p1'].iloc[0] == 0.55


def test_synthesize_discrete_to_file(tmp_path, capsys):
    out = tmp_path / "law" / "scalar.csv"
    assert main(["synthesize", "--fixture", "scalar", "--n", "10", "--out", str(out)]) == 0
    frame = pd.read_csv(out)
    assert list(frame.columns) == ['k', 't', 'U_1', 'energy']
    assert len(frame) == 10
    assert frame['energy'].sum() == pytest.approx(0.5, abs=1e-10)
    assert "[OK]" in capsys.readouterr().out


def test_synthesize_continuous_samples(capsys):
    assert main(["synthesize", "--fixture", "drone", "--samples", "11"]) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame.columns) == ['s', 'u_1', 'power']
    assert len(frame) == 11
    # u*(s) is proportional to T - s for the double integrator
    assert frame['u_1'].iloc[-1] == pytest.approx(0.0, abs=1e-12)


def test_discretize_drone_json(capsys):
    assert main(["discretize", "--fixture", "drone", "--dt", "0.1", "--format", "json"]) == 0
    values = json.loads(capsys.readouterr().out)
    assert values['N'] == 10
    assert np.allclose(values['A_d'], [[1.0, 0.1], [0.0, 1.0]], atol=1e-12)
    assert values['M'][0][0] == pytest.approx(0.4, rel=1e-10)
    assert values['rule_violation'] is False


def test_config_file_with_overrides(tmp_path, capsys):
    path = _write_config(tmp_path, {**INFEASIBLE, "B": [[1.0], [1.0]], "p1": 0.6})
    assert main(["translate", "--config", path, "--p0", "0.5", "--p1", "0.7", "--format", "json"]) == 0
    values = json.loads(capsys.readouterr().out)
    assert values['p0'] == 0.5 and values['p1'] == 0.7


# ═══════════════════════════════════════════════════════════════════════════════
# Group 2 - Exit codes
# ═══════════════════════════════════════════════════════════════════════════════


def test_zero_horizon_is_input_error(tmp_path, capsys):
    path = _write_config(tmp_path, {**INFEASIBLE, "T": 0.0})
    assert main(["gramians", "--config", path]) == 2
    assert "[ERROR]" in capsys.readouterr().err


def test_unknown_config_key_is_input_error(tmp_path):
    path = _write_config(tmp_path, {**INFEASIBLE, "horizon": 2.0})
    assert main(["gramians", "--config", path]) == 2


def test_p1_outside_unit_interval(capsys):
    assert main(["translate", "--fixture", "scalar", "--p1", "1.5"]) == 2


def test_missing_model_source():
    assert main(["translate"]) == 2


def test_unreachable_direction_exits_3(tmp_path, capsys):
    path = _write_config(tmp_path, INFEASIBLE)
    assert main(["translate", "--config", path]) == 3
    err = capsys.readouterr().err
    assert "R^2" in err


def test_non_integer_steps_rejected():
    assert main(["discretize", "--fixture", "drone", "--dt", "0.3"]) == 2


def test_discretize_needs_a_step():
    assert main(["discretize", "--fixture", "drone"]) == 2


def test_argument_errors_exit_through_argparse():
    with pytest.raises(SystemExit):
        main([])
    with pytest.raises(SystemExit):
        main(["translate", "--fixture", "drone", "--bogus"])
    with pytest.raises(SystemExit):
        main(["translate", "--fixture", "nonexistent"])


# ═══════════════════════════════════════════════════════════════════════════════
# Group 3 - Reproducible validation
# ═══════════════════════════════════════════════════════════════════════════════


def _validate(workers, capsys):
    argv = ["validate", "--fixture", "drone", "--seed", "42", "--paths", "2000", "--n", "20",
            "--directions", "2", "--workers", str(workers), "--format", "json"]
    assert main(argv) == 0
    return capsys.readouterr().out


def test_validate_json_is_byte_stable(capsys):
    first = _validate(1, capsys)
    assert first == _validate(4, capsys)
    report = json.loads(first)
    assert len(report['rows']) == 7
    assert report['metadata']['seed'] == 42


def test_validate_table_shows_seed(capsys):
    argv = ["validate", "--fixture", "scalar", "--seed", "7", "--paths", "2000", "--n", "10",
            "--directions", "1", "--workers", "2"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "VALIDATION SUMMARY" in out and "[SEED] 7" in out


def test_quiet_flag_raises_log_threshold(capsys):
    from src.cli import commands

    assert main(["gramians", "--fixture", "scalar", "-q"]) == 0
    assert commands.logger.level == logging.WARNING
    assert main(["gramians", "--fixture", "scalar"]) == 0
    assert commands.logger.level == logging.INFO
