from .base import BaseCheck, CheckSkipped
from .context import VerificationContext
from .registry import CHECK_REGISTRY, get_all_checks, register_all_checks, register_check

__all__ = [
    "BaseCheck",
    "CheckSkipped",
    "VerificationContext",
    "CHECK_REGISTRY",
    "get_all_checks",
    "register_all_checks",
    "register_check",
]
