from abc import ABC, abstractmethod

from ..models.report import CheckResult, CheckStatus
from .context import VerificationContext


class CheckSkipped(Exception):
    """Raised inside a check when it does not apply to the scenario."""


class BaseCheck(ABC):
    """Base class for all verification checks"""

    tolerance: float | None = None

    @property
    @abstractmethod
    def name(self) -> str:
        """Stable check identifier printed in reports"""
        pass

    @property
    @abstractmethod
    def reference(self) -> str:
        """The relation being checked"""
        pass

    @property
    def requires_cycle(self) -> bool:
        """Skip on non-cyclic and stationary states"""
        return True

    def applies(self, ctx: VerificationContext) -> str | None:
        """Reason to skip, or None when the check applies"""
        if not self.requires_cycle:
            return None
        if not ctx.analysis.cyclic:
            return "state is not cyclic"
        if ctx.analysis.stationary:
            return "stationary state"
        return None

    @abstractmethod
    def measure(self, ctx: VerificationContext) -> float:
        """Measured deviation (or value) compared against the tolerance"""
        pass

    def note(self, ctx: VerificationContext) -> str | None:
        """Detail attached to a measured result, e.g. a reduced comparison window"""
        return None

    def passes(self, measured: float) -> bool:
        return self.tolerance is None or measured <= self.tolerance

    def result(self, status: CheckStatus, measured: float | None = None, detail: str | None = None) -> CheckResult:
        return CheckResult(
            name=self.name,
            status=status,
            measured=measured,
            tolerance=self.tolerance,
            reference=self.reference,
            detail=detail,
        )

    def run(self, ctx: VerificationContext) -> CheckResult:
        """Run the check; exceptions become failures carrying their message"""
        try:
            reason = self.applies(ctx)
            if reason is not None:
                return self.result(CheckStatus.SKIP, detail=reason)
            measured = float(self.measure(ctx))
            detail = self.note(ctx)
        except CheckSkipped as e:
            return self.result(CheckStatus.SKIP, detail=str(e))
        except Exception as e:
            return self.result(CheckStatus.FAIL, detail=f"{type(e).__name__}: {e}")

        status = CheckStatus.PASS if self.passes(measured) else CheckStatus.FAIL
        return self.result(status, measured=measured, detail=detail)
