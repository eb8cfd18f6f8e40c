from .cycle import CyclicAnalysis, NearRecurrence, SelectionReport, SupportDecomposition
from .operators import CommutatorExpectations, GeometricOperator, OperatorExpectations, OperatorStatistics
from .report import CheckResult, CheckStatus, ClockReading, SweepRow, VerifyReport
from .scenario import DenseHamiltonian, DiagonalHamiltonian, Scenario, ScenarioOptions
from .spectrum import Eigensystem, RationalizationResult, Spectrum
from .trajectory import (
    CycleDetection,
    EomResidual,
    FubiniStudyLength,
    PhaseLedger,
    Trajectory,
    TrajectoryMethod,
)

__all__ = [
    # Spectral models
    "Eigensystem",
    "RationalizationResult",
    "Spectrum",
    # Cyclic analysis models
    "CyclicAnalysis",
    "NearRecurrence",
    "SelectionReport",
    "SupportDecomposition",
    # Operator models
    "CommutatorExpectations",
    "GeometricOperator",
    "OperatorExpectations",
    "OperatorStatistics",
    # Dynamics models
    "CycleDetection",
    "EomResidual",
    "FubiniStudyLength",
    "PhaseLedger",
    "Trajectory",
    "TrajectoryMethod",
    # Scenario and report models
    "CheckResult",
    "CheckStatus",
    "ClockReading",
    "DenseHamiltonian",
    "DiagonalHamiltonian",
    "Scenario",
    "ScenarioOptions",
    "SweepRow",
    "VerifyReport",
]
