from .engine import (
    PlanRegistry,
    apply_plan,
    approve,
    propose_plan,
    validate_plan,
    verify_or_rollback,
)
from .plan import AuditEntry, Evidence, Move, MoveOutcome, RecommendationPlan
from .policy import OffloadPolicy

__all__ = [
    "AuditEntry",
    "Evidence",
    "Move",
    "MoveOutcome",
    "OffloadPolicy",
    "PlanRegistry",
    "RecommendationPlan",
    "apply_plan",
    "approve",
    "propose_plan",
    "validate_plan",
    "verify_or_rollback",
]
