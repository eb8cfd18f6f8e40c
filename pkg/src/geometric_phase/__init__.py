from .cyclic import analyze_cycle, analyze_state, selection_rule, support
from .logging_config import get_logger, setup_logging
from .models import CyclicAnalysis, Scenario, SelectionReport, Spectrum, SupportDecomposition, VerifyReport
from .spectral import build_spectrum, commensurate_structure, diagonalize

__version__ = "0.1.0"

__all__ = [
    "Spectrum",
    "SupportDecomposition",
    "CyclicAnalysis",
    "SelectionReport",
    "Scenario",
    "VerifyReport",
    "diagonalize",
    "build_spectrum",
    "commensurate_structure",
    "support",
    "analyze_cycle",
    "analyze_state",
    "selection_rule",
    "get_logger",
    "setup_logging",
]
