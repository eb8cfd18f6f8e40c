from .base import BaseCheck
from .cycle import (
    GaugeInvarianceCheck,
    PAlgebraCheck,
    PeriodMinimalityCheck,
    PeriodReturnCheck,
    PhaseEnergyCheck,
    SamuelBhandariCheck,
    SelectionRuleCheck,
)
from .dynamics import (
    ConstantSpeedCheck,
    CycleDetectionCheck,
    EomResidualSCheck,
    EomResidualTCheck,
    FSLengthCheck,
    RK4OracleCheck,
)
from .operators import (
    CommutatorGTCheck,
    CommutatorHTCheck,
    EnergyRepresentationCheck,
    LengthIdentityCheck,
    MatrixCommutatorCheck,
    OperatorConstructionCheck,
    OperatorExpectationCheck,
    TimeOperatorCheck,
    TwoLevelClosedFormCheck,
)

# Global registry of verification checks, run in insertion order
CHECK_REGISTRY: dict[str, type[BaseCheck]] = {}


def register_check(name: str, check_class: type[BaseCheck]) -> None:
    """Register a verification check"""
    CHECK_REGISTRY[name] = check_class


def get_all_checks() -> list[BaseCheck]:
    """Get instances of all registered checks"""
    if not CHECK_REGISTRY:
        register_all_checks()
    return [check_class() for check_class in CHECK_REGISTRY.values()]


def register_all_checks() -> None:
    """Register all built-in checks"""
    # Cycle and phase identities
    register_check("p_algebra", PAlgebraCheck)
    register_check("gauge_invariance", GaugeInvarianceCheck)
    register_check("period_return", PeriodReturnCheck)
    register_check("period_minimality", PeriodMinimalityCheck)
    register_check("phase_energy_identity", PhaseEnergyCheck)
    register_check("sb_oracle", SamuelBhandariCheck)
    register_check("selection_rule", SelectionRuleCheck)
    register_check("two_level_closed_form", TwoLevelClosedFormCheck)
    # Geometric and time operators
    register_check("operator_construction", OperatorConstructionCheck)
    register_check("operator_expectation", OperatorExpectationCheck)
    register_check("length_identity", LengthIdentityCheck)
    register_check("time_operator", TimeOperatorCheck)
    register_check("commutator_HT", CommutatorHTCheck)
    register_check("commutator_GT", CommutatorGTCheck)
    register_check("commutator_matrix_representation", MatrixCommutatorCheck)
    register_check("energy_representation", EnergyRepresentationCheck)
    # Dynamics oracles
    register_check("fs_length", FSLengthCheck)
    register_check("constant_speed", ConstantSpeedCheck)
    register_check("eom_distance", EomResidualSCheck)
    register_check("eom_time", EomResidualTCheck)
    register_check("rk4_oracle", RK4OracleCheck)
    register_check("cycle_detection", CycleDetectionCheck)
