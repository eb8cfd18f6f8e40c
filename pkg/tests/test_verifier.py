"""Tests for the scenario verifier."""

from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest

from geometric_phase.models import CheckStatus, Scenario, VerifyReport
from geometric_phase.verifier import ScenarioVerifier


def dense_payload(levels: list[float], rng: np.random.Generator) -> dict:
    """Dense scenario U diag(levels) U^dagger with a random state."""
    n = len(levels)
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    unitary, _ = np.linalg.qr(z)
    matrix = unitary @ np.diag(levels) @ unitary.conj().T
    matrix = (matrix + matrix.conj().T) / 2
    state = rng.normal(size=n) + 1j * rng.normal(size=n)
    return {
        "name": f"dense-{n}",
        "hamiltonian": {
            "type": "dense",
            "matrix": [[[float(x.real), float(x.imag)] for x in row] for row in matrix],
        },
        "state": [[float(a.real), float(a.imag)] for a in state],
    }


class TestScenarioVerifier:
    """Test cases for ScenarioVerifier."""

    def test_init_defaults(self):
        verifier = ScenarioVerifier()
        assert verifier.hbar is None
        assert verifier.method == "jacobi"
        assert verifier.max_concurrent == 4
        assert len(verifier.checks) > 0

    def test_init_rejects_zero_concurrency(self):
        with pytest.raises(ValueError, match="max_concurrent"):
            ScenarioVerifier(max_concurrent=0)

    def test_verify_three_level(self, three_level_scenario):
        """The reference three-level scenario passes every applicable check."""
        report = ScenarioVerifier().verify(Scenario.model_validate(three_level_scenario))
        assert report.scenario == "three-level-uniform"
        assert report.success
        assert report.exit_code == 0
        assert report.failed == 0
        assert report.get("two_level_closed_form").status == CheckStatus.SKIP
        assert report.passed + report.skipped == len(report.checks)

    def test_get_unknown_check(self, three_level_scenario):
        report = ScenarioVerifier().verify(Scenario.model_validate(three_level_scenario))
        with pytest.raises(KeyError):
            report.get("no_such_check")

    def test_verify_with_hbar_override(self, three_level_scenario):
        report = ScenarioVerifier(hbar=0.5).verify(Scenario.model_validate(three_level_scenario))
        assert report.success

    def test_verify_with_lapack(self, pauli_x_scenario):
        report = ScenarioVerifier(method="lapack").verify(Scenario.model_validate(pauli_x_scenario))
        assert report.success
        assert report.get("two_level_closed_form").status == CheckStatus.PASS

    def test_verify_file(self, write_scenario, three_level_scenario):
        path = write_scenario(three_level_scenario, "three.json")
        report = ScenarioVerifier().verify_file(path)
        assert report.scenario == str(path)
        assert report.success

    def test_verify_invalid_file(self, tmp_path):
        """A malformed file yields an error report instead of raising."""
        path = tmp_path / "broken.json"
        path.write_text("{ not json", encoding="utf-8")
        report = ScenarioVerifier().verify_file(path)
        assert report.error_message is not None
        assert "malformed scenario file" in report.error_message
        assert report.checks == []
        assert not report.success
        assert report.exit_code == 1

    def test_verify_missing_file(self, tmp_path):
        report = ScenarioVerifier().verify_file(tmp_path / "absent.json")
        assert report.exit_code == 1

    def test_random_dense_scenarios_pass(self, rng):
        """Scenarios U diag(levels) U^dagger with small rational levels pass every check."""
        verifier = ScenarioVerifier()
        pool = [0.0, 0.5, 1.0, 2.0, 3.0]
        for _ in range(6):
            n = int(rng.integers(2, 4))
            levels = sorted(rng.choice(pool, size=n, replace=False).tolist())
            report = verifier.verify(Scenario.model_validate(dense_payload(levels, rng)))
            failures = [c.line() for c in report.checks if c.status == CheckStatus.FAIL]
            assert failures == []
            assert report.success


class TestVerifyMultiple:
    """Test cases for concurrent batch verification."""

    @pytest.mark.asyncio
    async def test_order_is_preserved(self, write_scenario, three_level_scenario, pauli_x_scenario):
        first = write_scenario(three_level_scenario, "a.json")
        second = write_scenario(pauli_x_scenario, "b.json")
        verifier = ScenarioVerifier(max_concurrent=1)

        reports = await verifier.verify_multiple([second, first, second])

        assert [r.scenario for r in reports] == [str(second), str(first), str(second)]
        assert all(r.success for r in reports)

    @pytest.mark.asyncio
    async def test_mixed_results(self, write_scenario, three_level_scenario, tmp_path):
        good = write_scenario(three_level_scenario, "good.json")
        bad = tmp_path / "bad.json"
        bad.write_text("[]", encoding="utf-8")

        reports = await ScenarioVerifier(max_concurrent=2).verify_multiple([good, bad])

        assert reports[0].success
        assert not reports[1].success
        assert "single JSON object" in reports[1].error_message

    @pytest.mark.asyncio
    async def test_exceptions_become_error_reports(self):
        """A crash in one verification does not abort the batch."""
        verifier = ScenarioVerifier()
        ok = VerifyReport(scenario="ok.json")

        def fake_verify_file(path: Path) -> VerifyReport:
            if path.name == "crash.json":
                raise RuntimeError("worker died")
            return ok

        with patch.object(verifier, "verify_file", side_effect=fake_verify_file):
            reports = await verifier.verify_multiple([Path("ok.json"), Path("crash.json")])

        assert reports[0] is ok
        assert reports[1].scenario == "crash.json"
        assert reports[1].error_message == "worker died"
        assert not reports[1].success

    @pytest.mark.asyncio
    async def test_empty_batch(self):
        assert await ScenarioVerifier().verify_multiple([]) == []
