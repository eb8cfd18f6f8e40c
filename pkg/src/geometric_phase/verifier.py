import asyncio
from pathlib import Path

from .checks import BaseCheck, VerificationContext, get_all_checks
from .logging_config import get_logger
from .models import CheckStatus, Scenario, VerifyReport
from .scenario import ScenarioError, parse_scenario


class ScenarioVerifier:
    """Runs the registered invariant checks on scenarios, one at a time or in batches."""

    def __init__(
        self,
        hbar: float | None = None,
        method: str = "jacobi",
        max_concurrent: int = 4,
        checks: list[BaseCheck] | None = None,
    ) -> None:
        if max_concurrent < 1:
            raise ValueError("max_concurrent must be at least 1")
        self.hbar = hbar
        self.method = method
        self.max_concurrent = max_concurrent
        self.checks = checks if checks is not None else get_all_checks()
        self.logger = get_logger(__name__)

    def verify(self, scenario: Scenario, name: str | None = None) -> VerifyReport:
        """Run every check; a scenario that cannot be set up yields a report with an error message"""
        label = name or scenario.name or "<scenario>"
        try:
            ctx = VerificationContext(scenario, hbar=self.hbar, method=self.method)
        except ValueError as e:
            self.logger.error(f"Cannot verify {label}: {e}")
            return VerifyReport(scenario=label, error_message=str(e))

        results = []
        for check in self.checks:
            result = check.run(ctx)
            if result.status == CheckStatus.FAIL:
                self.logger.warning(f"{label}: check {result.name} failed ({result.detail or result.measured})")
            results.append(result)

        report = VerifyReport(scenario=label, checks=results)
        self.logger.debug(
            f"{label}: {report.passed} passed, {report.failed} failed, {report.skipped} skipped"
        )
        return report

    def verify_file(self, path: Path | str) -> VerifyReport:
        path = Path(path)
        try:
            scenario = parse_scenario(path)
        except ScenarioError as e:
            self.logger.error(str(e))
            return VerifyReport(scenario=str(path), error_message=str(e))
        return self.verify(scenario, name=str(path))

    async def verify_multiple(self, paths: list[Path]) -> list[VerifyReport]:
        """Verify scenario files concurrently; reports come back in input order"""
        semaphore = asyncio.Semaphore(self.max_concurrent)

        async def verify_with_semaphore(path: Path) -> VerifyReport:
            """Verify one file with the semaphore limiting concurrency"""
            async with semaphore:
                self.logger.debug(f"Starting verification of {path}")
                return await asyncio.to_thread(self.verify_file, path)

        tasks = [verify_with_semaphore(path) for path in paths]
        results = await asyncio.gather(*tasks, return_exceptions=True)

        reports: list[VerifyReport] = []
        for path, result in zip(paths, results, strict=True):
            if isinstance(result, BaseException):
                self.logger.error(f"Verification of {path} crashed: {result}")
                reports.append(VerifyReport(scenario=str(path), error_message=str(result)))
            else:
                reports.append(result)

        failed = sum(1 for r in reports if not r.success)
        self.logger.info(f"Verified {len(reports)} scenarios, {failed} with failures")
        return reports
