import math

import numpy as np

from ..dynamics import detect_cycle, eom_residual, fs_length, propagate_exact, propagate_rk4
from .base import BaseCheck, CheckSkipped
from .context import VerificationContext

RK4_STEP_FRACTION = 1e-3
RK4_MAX_STEPS = 20_000
DETECTION_WINDOW = 1.25


class FSLengthCheck(BaseCheck):
    """Integrated Fubini-Study length over the reference window"""

    name = "fs_length"
    reference = "integral of Delta H / hbar dt = S_psi"
    tolerance = 1e-6

    @property
    def requires_cycle(self) -> bool:
        return False

    def measure(self, ctx: VerificationContext) -> float:
        expected = ctx.analysis.speed * ctx.window
        measured = fs_length(ctx.trajectory).total_length
        if expected == 0.0:
            return abs(measured)
        return abs(measured - expected) / expected


class ConstantSpeedCheck(BaseCheck):
    name = "constant_speed"
    reference = "ds/dt = Delta H / hbar at every sample"
    tolerance = 1e-6

    @property
    def requires_cycle(self) -> bool:
        return False

    def measure(self, ctx: VerificationContext) -> float:
        length = fs_length(ctx.trajectory)
        if length.expected_speed == 0.0:
            return length.max_speed_deviation
        return length.max_speed_deviation / length.expected_speed


class EomResidualSCheck(BaseCheck):
    name = "eom_distance"
    reference = "i S d/ds psi = G psi"
    tolerance = 1e-8

    def measure(self, ctx: VerificationContext) -> float:
        residual = eom_residual(ctx.trajectory, ctx.operator)
        scale = max(1.0, float(np.max(np.abs(ctx.operator.support_entries))))
        return residual.max_residual_s / scale


class EomResidualTCheck(BaseCheck):
    name = "eom_time"
    reference = "i tau d/dt psi = G psi"
    tolerance = 1e-8

    def measure(self, ctx: VerificationContext) -> float:
        residual = eom_residual(ctx.trajectory, ctx.operator)
        scale = max(1.0, float(np.max(np.abs(ctx.operator.support_entries))))
        return residual.max_residual_t / scale


class RK4OracleCheck(BaseCheck):
    """
    RK4 integration against exact spectral propagation.

    The step is a thousandth of hbar/|H'| and the run is capped, so long
    periods are compared over their leading part only; the result detail
    then records the window actually covered.
    """

    name = "rk4_oracle"
    reference = "max |psi_rk4(t) - psi_exact(t)|"
    tolerance = 1e-8

    @property
    def requires_cycle(self) -> bool:
        return False

    @staticmethod
    def plan(ctx: VerificationContext) -> tuple[float, int]:
        """Step size and step count for the reference window"""
        dt = RK4_STEP_FRACTION * ctx.hbar / ctx.shifted_norm
        steps = min(RK4_MAX_STEPS, max(1, math.ceil(ctx.window / dt)))
        if steps < RK4_MAX_STEPS:
            dt = ctx.window / steps
        return dt, steps

    def note(self, ctx: VerificationContext) -> str | None:
        dt, steps = self.plan(ctx)
        covered = dt * steps
        if steps == RK4_MAX_STEPS and covered < ctx.window:
            return f"window truncated to {covered:.6g} of {ctx.window:.6g} (step cap {RK4_MAX_STEPS})"
        return None

    def measure(self, ctx: VerificationContext) -> float:
        if ctx.shifted_norm == 0.0:
            raise CheckSkipped("stationary state")
        dt, steps = self.plan(ctx)

        hamiltonian = ctx.spectrum.matrix()
        numeric = propagate_rk4(hamiltonian, ctx.state, dt, steps, gauge=ctx.gauge, hbar=ctx.hbar)
        exact = propagate_exact(ctx.spectrum, ctx.state, numeric.times, gauge=ctx.gauge)
        return float(np.max(np.linalg.norm(numeric.states - exact.states, axis=1)))


class CycleDetectionCheck(BaseCheck):
    """
    Scanning for the first return finds tau on cyclic states and nothing on
    the others. The measured value is the relative period error.
    """

    name = "cycle_detection"
    reference = "first return of |<psi(0)|psi(t)>| to 1 at t = tau"
    tolerance = 1e-6

    @property
    def requires_cycle(self) -> bool:
        return False

    def measure(self, ctx: VerificationContext) -> float:
        analysis = ctx.analysis
        if analysis.stationary:
            raise CheckSkipped("stationary state")

        if not analysis.cyclic:
            detection = detect_cycle(ctx.trajectory, ctx.options.fidelity_tol)
            if detection.detected:
                raise AssertionError(f"return detected at t = {detection.period!r} for a non-cyclic state")
            return 0.0

        tau = analysis.period
        assert tau is not None
        samples = math.ceil(DETECTION_WINDOW * (ctx.samples - 1)) + 1
        times = np.linspace(0.0, DETECTION_WINDOW * tau, samples)
        trajectory = propagate_exact(ctx.spectrum, ctx.state, times, gauge=ctx.gauge)
        detection = detect_cycle(trajectory, ctx.options.fidelity_tol)
        if not detection.detected or detection.period is None:
            raise AssertionError(f"no return detected; best fidelity {detection.best_fidelity!r}")
        return abs(detection.period - tau) / tau
