"""Data models for verification reports, clock readings and the two-level sweep."""

from enum import Enum

from pydantic import BaseModel, Field


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"


class CheckResult(BaseModel):
    """Outcome of one named invariant check."""

    name: str
    status: CheckStatus
    measured: float | None = Field(default=None, description="Measured deviation or value")
    tolerance: float | None = None
    reference: str = Field(description="The relation being checked")
    detail: str | None = None

    def line(self) -> str:
        """Single machine-parsable line."""
        measured = "-" if self.measured is None else f"{self.measured:.6e}"
        tolerance = "-" if self.tolerance is None else f"{self.tolerance:.1e}"
        text = f"{self.status.value.upper()} {self.name} measured={measured} tol={tolerance} ref={self.reference!r}"
        if self.detail:
            text += f" detail={self.detail!r}"
        return text


class VerifyReport(BaseModel):
    """All checks run on one scenario."""

    scenario: str
    checks: list[CheckResult] = Field(default_factory=list)
    error_message: str | None = Field(default=None, description="Set when the scenario itself was invalid")

    @property
    def passed(self) -> int:
        return sum(1 for c in self.checks if c.status == CheckStatus.PASS)

    @property
    def failed(self) -> int:
        return sum(1 for c in self.checks if c.status == CheckStatus.FAIL)

    @property
    def skipped(self) -> int:
        return sum(1 for c in self.checks if c.status == CheckStatus.SKIP)

    @property
    def success(self) -> bool:
        return self.error_message is None and self.failed == 0

    @property
    def exit_code(self) -> int:
        return 0 if self.success else 1

    def get(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


class ClockReading(BaseModel):
    """Elapsed time read off the time operator at two instants."""

    t1: float
    t2: float
    expect_T1: float
    expect_T2: float

    @property
    def estimate(self) -> float:
        return self.expect_T2 - self.expect_T1

    @property
    def elapsed(self) -> float:
        return self.t2 - self.t1

    @property
    def error(self) -> float:
        return abs(self.estimate - self.elapsed)


class SweepRow(BaseModel):
    """Two-level phase at one Bloch angle by three independent routes."""

    theta: float
    closed_form: float
    pipeline: float
    sb_oracle: float | None = None
    max_discrepancy: float
