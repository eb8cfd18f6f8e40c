"""Tests for the check base class, the registry and individual checks."""

import math

import pytest

from geometric_phase.checks import (
    CHECK_REGISTRY,
    BaseCheck,
    CheckSkipped,
    VerificationContext,
    get_all_checks,
    register_all_checks,
    register_check,
)
from geometric_phase.checks.operators import interior_indices, interior_times
from geometric_phase.models import CheckStatus, Scenario

EXPECTED_CHECKS = [
    "p_algebra",
    "gauge_invariance",
    "period_return",
    "period_minimality",
    "phase_energy_identity",
    "sb_oracle",
    "selection_rule",
    "two_level_closed_form",
    "operator_construction",
    "operator_expectation",
    "length_identity",
    "time_operator",
    "commutator_HT",
    "commutator_GT",
    "commutator_matrix_representation",
    "energy_representation",
    "fs_length",
    "constant_speed",
    "eom_distance",
    "eom_time",
    "rk4_oracle",
    "cycle_detection",
]


class ConcreteCheck(BaseCheck):
    """Concrete check returning a fixed measurement."""

    name = "concrete"
    reference = "measured <= 0.5"
    tolerance = 0.5

    def __init__(self, measured: float = 0.1, requires_cycle: bool = True) -> None:
        self.measured = measured
        self._requires_cycle = requires_cycle

    @property
    def requires_cycle(self) -> bool:
        return self._requires_cycle

    def measure(self, ctx: VerificationContext) -> float:
        return self.measured


class SkippingCheck(ConcreteCheck):
    name = "skipping"

    def measure(self, ctx: VerificationContext) -> float:
        raise CheckSkipped("not applicable here")


class CrashingCheck(ConcreteCheck):
    name = "crashing"

    def measure(self, ctx: VerificationContext) -> float:
        raise ArithmeticError("boom")


def check_named(name: str) -> BaseCheck:
    return next(check for check in get_all_checks() if check.name == name)


@pytest.fixture
def context(three_level_scenario) -> VerificationContext:
    return VerificationContext(Scenario.model_validate(three_level_scenario))


@pytest.fixture
def incommensurate_context(incommensurate_scenario) -> VerificationContext:
    return VerificationContext(Scenario.model_validate(incommensurate_scenario))


class TestBaseCheck:
    """Test cases for BaseCheck.run."""

    def test_pass(self, context):
        """A measurement within tolerance passes and carries the numbers."""
        result = ConcreteCheck(0.1).run(context)
        assert result.status == CheckStatus.PASS
        assert result.measured == 0.1
        assert result.tolerance == 0.5
        assert result.reference == "measured <= 0.5"

    def test_fail(self, context):
        result = ConcreteCheck(0.9).run(context)
        assert result.status == CheckStatus.FAIL
        assert result.measured == 0.9

    def test_skip_raised_inside_measure(self, context):
        result = SkippingCheck().run(context)
        assert result.status == CheckStatus.SKIP
        assert result.detail == "not applicable here"

    def test_exception_becomes_failure(self, context):
        """Unexpected errors fail only the check that raised them."""
        result = CrashingCheck().run(context)
        assert result.status == CheckStatus.FAIL
        assert result.detail == "ArithmeticError: boom"
        assert result.measured is None

    def test_cycle_requirement(self, incommensurate_context):
        assert ConcreteCheck(requires_cycle=True).run(incommensurate_context).status == CheckStatus.SKIP
        assert ConcreteCheck(requires_cycle=False).run(incommensurate_context).status == CheckStatus.PASS

    def test_result_line(self, context):
        line = ConcreteCheck(0.1).run(context).line()
        assert line.startswith("PASS concrete measured=1.000000e-01 tol=5.0e-01")
        assert "ref='measured <= 0.5'" in line


class TestCheckRegistry:
    """Test cases for the check registry."""

    def test_builtin_checks_in_order(self):
        names = [check.name for check in get_all_checks()]
        assert names == EXPECTED_CHECKS
        assert list(CHECK_REGISTRY) == EXPECTED_CHECKS

    def test_fresh_instances(self):
        first = get_all_checks()
        second = get_all_checks()
        assert all(a is not b for a, b in zip(first, second, strict=True))

    def test_register_custom_check(self, monkeypatch):
        monkeypatch.setattr("geometric_phase.checks.registry.CHECK_REGISTRY", dict(CHECK_REGISTRY))
        from geometric_phase.checks import registry

        register_check("concrete", ConcreteCheck)
        assert "concrete" in registry.CHECK_REGISTRY
        assert "concrete" not in CHECK_REGISTRY

    def test_register_all_is_idempotent(self):
        register_all_checks()
        register_all_checks()
        assert len(CHECK_REGISTRY) == len(EXPECTED_CHECKS)


class TestContext:
    """Test cases for the lazily computed verification context."""

    def test_three_level_quantities(self, context):
        assert context.analysis.period == pytest.approx(2 * math.pi)
        assert context.window == pytest.approx(2 * math.pi)
        assert context.shifted_norm == 3.0
        assert context.samples == 2049
        assert context.trajectory.samples == 2049
        assert context.selection.omega == 3

    def test_non_cyclic_window(self, incommensurate_context):
        assert not incommensurate_context.moving_cycle
        assert incommensurate_context.window == pytest.approx(2 * math.pi / math.sqrt(2.0))

    def test_hbar_override(self, three_level_scenario):
        ctx = VerificationContext(Scenario.model_validate(three_level_scenario), hbar=2.0)
        assert ctx.spectrum.hbar == 2.0
        assert ctx.analysis.period == pytest.approx(4 * math.pi)

    def test_interior_sampling(self):
        assert interior_indices(11, count=3) == [1, 5, 9]
        assert interior_times(2.0, count=4) == pytest.approx([0.25, 0.75, 1.25, 1.75])


class TestBuiltinChecks:
    """Test cases running every built-in check on reference scenarios."""

    def test_three_level_all_pass(self, context):
        results = {check.name: check.run(context) for check in get_all_checks()}
        failures = {name: r.detail or r.measured for name, r in results.items() if r.status == CheckStatus.FAIL}
        assert failures == {}
        skipped = [name for name, r in results.items() if r.status == CheckStatus.SKIP]
        assert skipped == ["two_level_closed_form"]

    def test_two_level_closed_form_applies(self, pauli_x_scenario):
        ctx = VerificationContext(Scenario.model_validate(pauli_x_scenario))
        check = check_named("two_level_closed_form")
        result = check.run(ctx)
        assert result.status == CheckStatus.PASS
        assert result.measured <= 1e-10

    def test_incommensurate_runs_only_dynamics(self, incommensurate_context):
        results = {check.name: check.run(incommensurate_context) for check in get_all_checks()}
        ran = sorted(name for name, r in results.items() if r.status != CheckStatus.SKIP)
        assert ran == ["constant_speed", "cycle_detection", "fs_length", "rk4_oracle"]
        assert all(results[name].status == CheckStatus.PASS for name in ran)
        assert results["period_return"].detail == "state is not cyclic"

    def test_stationary_state(self, stationary_scenario):
        ctx = VerificationContext(Scenario.model_validate(stationary_scenario))
        results = {check.name: check.run(ctx) for check in get_all_checks()}
        passed = sorted(name for name, r in results.items() if r.status == CheckStatus.PASS)
        assert passed == ["constant_speed", "fs_length"]
        assert results["gauge_invariance"].detail == "stationary state"
        assert results["rk4_oracle"].detail == "stationary state"
        assert not any(r.status == CheckStatus.FAIL for r in results.values())

    def test_minimality_detects_wrong_period(self, context, monkeypatch):
        """A period twice too long returns at half of it, which minimality catches."""
        doubled = context.analysis.model_copy(update={"period": 4 * math.pi})
        monkeypatch.setattr(context, "analysis", doubled)
        result = check_named("period_minimality").run(context)
        assert result.status == CheckStatus.FAIL
        assert result.measured == pytest.approx(0.0, abs=1e-12)

    def test_rk4_full_window_has_no_detail(self, context):
        result = check_named("rk4_oracle").run(context)
        assert result.status == CheckStatus.PASS
        assert result.detail is None

    def test_rk4_step_cap_reports_truncated_window(self, context, monkeypatch):
        """When the step cap binds, the result says how much of the window was compared."""
        monkeypatch.setattr("geometric_phase.checks.dynamics.RK4_MAX_STEPS", 50)
        result = check_named("rk4_oracle").run(context)
        assert result.status == CheckStatus.PASS
        assert result.detail is not None
        assert "window truncated to" in result.detail
        assert "step cap 50" in result.detail
        assert "window truncated" in result.line()
