"""Tests for scenario parsing, spectra of scenarios and CSV output."""

import csv
import json
import math

import numpy as np
import pytest

from geometric_phase.cyclic import analyze_state
from geometric_phase.dynamics import phase_ledger, propagate_exact
from geometric_phase.models import DenseHamiltonian, DiagonalHamiltonian, Scenario
from geometric_phase.operators import two_level_sweep
from geometric_phase.scenario import (
    SWEEP_COLUMNS,
    TRAJECTORY_COLUMNS,
    ScenarioError,
    parse_scenario,
    parse_scenario_text,
    scenario_spectrum,
    serialize_scenario,
    write_matrix_csv,
    write_sweep_csv,
    write_trajectory_csv,
)


def read_rows(path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.reader(f))


class TestScenarioModel:
    """Test cases for Scenario validation."""

    def test_diagonal_scenario(self, three_level_scenario):
        scenario = Scenario.model_validate(three_level_scenario)
        assert isinstance(scenario.hamiltonian, DiagonalHamiltonian)
        assert scenario.dimension == 3
        assert scenario.hbar == 1.0
        assert scenario.options.samples_per_period == 2048
        assert np.allclose(scenario.state_vector(), np.ones(3) / math.sqrt(3.0))

    def test_dense_scenario(self, pauli_x_scenario):
        scenario = Scenario.model_validate(pauli_x_scenario)
        assert isinstance(scenario.hamiltonian, DenseHamiltonian)
        assert np.array_equal(scenario.hamiltonian.to_array(), np.array([[0, 1], [1, 0]], dtype=complex))

    def test_flat_dense_matrix(self):
        scenario = Scenario.model_validate(
            {
                "hamiltonian": {"type": "dense", "matrix": [[1, 0], [0, -1], [0, 1], [2, 0]]},
                "state": [[1, 0], [0, 0]],
            }
        )
        assert np.array_equal(scenario.hamiltonian.to_array(), np.array([[1, -1j], [1j, 2]]))

    def test_complex_amplitudes(self):
        scenario = Scenario.model_validate(
            {
                "hamiltonian": {"type": "diagonal", "eigenvalues": ["0", "1/2"]},
                "state": [[0.6, 0.0], [0.0, 0.8]],
                "normalize": False,
            }
        )
        assert np.allclose(scenario.state_vector(), [0.6, 0.8j])

    def test_normalize_off_requires_unit_norm(self):
        with pytest.raises(ValueError, match="normalize is off"):
            Scenario.model_validate(
                {
                    "hamiltonian": {"type": "diagonal", "eigenvalues": ["0", "1"]},
                    "state": [[1, 0], [1, 0]],
                    "normalize": False,
                }
            )

    @pytest.mark.parametrize(
        "payload, message",
        [
            ({"hamiltonian": {"type": "diagonal", "eigenvalues": ["0", "1"]}, "state": [[1, 0]]}, "dimension"),
            ({"hamiltonian": {"type": "diagonal", "eigenvalues": ["0", "1"]}, "state": [[0, 0], [0, 0]]}, "zero"),
            ({"hamiltonian": {"type": "diagonal", "eigenvalues": ["0", "x"]}, "state": [[1, 0], [0, 0]]}, "rational"),
            (
                {"hamiltonian": {"type": "dense", "matrix": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}, "state": [[1, 0], [0, 0]]},
                "not Hermitian",
            ),
            (
                {"hamiltonian": {"type": "dense", "matrix": [[[0, 0], [1, 0]], [[1, 0]]]}, "state": [[1, 0], [0, 0]]},
                "row 1",
            ),
            ({"hamiltonian": {"type": "sparse"}, "state": [[1, 0]]}, "type"),
        ],
    )
    def test_invalid_payloads(self, payload, message):
        with pytest.raises(ValueError, match=message):
            Scenario.model_validate(payload)

    def test_unknown_fields_rejected(self, three_level_scenario):
        three_level_scenario["colour"] = "blue"
        with pytest.raises(ValueError, match="colour"):
            Scenario.model_validate(three_level_scenario)

    def test_dimension_limit(self, three_level_scenario):
        three_level_scenario["options"] = {"max_dimension": 2}
        with pytest.raises(ValueError, match="max_dimension"):
            Scenario.model_validate(three_level_scenario)


class TestParseScenario:
    """Test cases for reading scenario files."""

    def test_reads_file(self, write_scenario, three_level_scenario):
        path = write_scenario(three_level_scenario, "three.json")
        scenario = parse_scenario(path)
        assert scenario.name == "three-level-uniform"

    def test_malformed_json_reports_position(self):
        with pytest.raises(ScenarioError, match=r"bad\.json:2:\d+: malformed scenario file"):
            parse_scenario_text('{\n  "state": [1,, 2]\n}', "bad.json")

    def test_validation_error_names_field(self, three_level_scenario):
        three_level_scenario["options"] = {"rat_tol": -1.0}
        with pytest.raises(ScenarioError, match=r"options\.rat_tol"):
            parse_scenario_text(json.dumps(three_level_scenario), "s.json")

    def test_non_object_rejected(self):
        with pytest.raises(ScenarioError, match="single JSON object"):
            parse_scenario_text("[1, 2]")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError, match="cannot read scenario file"):
            parse_scenario(tmp_path / "absent.json")

    def test_scenario_error_is_value_error(self):
        assert issubclass(ScenarioError, ValueError)

    def test_serialize_round_trip(self, pauli_x_scenario, three_level_scenario):
        for payload in (pauli_x_scenario, three_level_scenario):
            scenario = Scenario.model_validate(payload)
            assert parse_scenario_text(serialize_scenario(scenario)) == scenario


class TestScenarioSpectrum:
    """Test cases for turning a scenario into a spectrum."""

    def test_diagonal_is_exact(self, three_level_scenario):
        spectrum = scenario_spectrum(Scenario.model_validate(three_level_scenario))
        assert spectrum.levels == (0, 1, 3)
        assert spectrum.base_unit == 1.0

    def test_dense_is_diagonalized(self, pauli_x_scenario):
        spectrum = scenario_spectrum(Scenario.model_validate(pauli_x_scenario), method="lapack")
        assert spectrum.commensurate
        assert spectrum.eigenvalues == pytest.approx([-1.0, 1.0])

    def test_hbar_override(self, three_level_scenario):
        three_level_scenario["hbar"] = 2.0
        scenario = Scenario.model_validate(three_level_scenario)
        assert scenario_spectrum(scenario).hbar == 2.0
        assert scenario_spectrum(scenario, hbar=0.5).hbar == 0.5

    def test_incommensurate(self, incommensurate_scenario):
        spectrum = scenario_spectrum(Scenario.model_validate(incommensurate_scenario))
        assert not spectrum.commensurate


class TestCsvWriters:
    """Test cases for trajectory, sweep and matrix CSV files."""

    def test_trajectory_csv(self, tmp_path, three_level_spectrum, uniform_three_state, three_level_analysis):
        trajectory = propagate_exact(three_level_spectrum, uniform_three_state, np.linspace(0.0, 1.0, 5))
        ledger = phase_ledger(trajectory, three_level_analysis)
        path = tmp_path / "out" / "trajectory.csv"
        write_trajectory_csv(path, trajectory, ledger)

        rows = read_rows(path)
        assert rows[0] == TRAJECTORY_COLUMNS + ["re_0", "im_0", "re_1", "im_1", "re_2", "im_2"]
        assert len(rows) == 6
        assert float(rows[1][0]) == 0.0
        assert float(rows[1][2]) == pytest.approx(1.0)
        assert float(rows[-1][0]) == pytest.approx(1.0)
        assert float(rows[1][8]) == pytest.approx(1 / math.sqrt(3.0))

    def test_sweep_csv(self, tmp_path):
        path = tmp_path / "sweep.csv"
        write_sweep_csv(path, two_level_sweep(3))
        rows = read_rows(path)
        assert rows[0] == SWEEP_COLUMNS
        assert len(rows) == 4
        assert rows[1][3] == ""
        assert float(rows[2][1]) == pytest.approx(math.pi)

    def test_matrix_csv(self, tmp_path):
        path = tmp_path / "g.csv"
        write_matrix_csv(path, np.array([[1 + 2j, 0], [0, -1j]]))
        rows = read_rows(path)
        assert rows[0] == ["re_0", "im_0", "re_1", "im_1"]
        assert [float(x) for x in rows[1]] == [1.0, 2.0, 0.0, 0.0]
        assert [float(x) for x in rows[2]] == [0.0, 0.0, 0.0, -1.0]


def test_analysis_of_dense_scenario(pauli_x_scenario):
    scenario = Scenario.model_validate(pauli_x_scenario)
    analysis = analyze_state(scenario.state_vector(), scenario_spectrum(scenario))
    assert analysis.period == pytest.approx(math.pi)
    assert analysis.geometric_phase == pytest.approx(math.pi)
