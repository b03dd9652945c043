"""Deterministic simulator and benchmark harness for the AriDeM element
model of parallel computation, with a von Neumann instruction-model
baseline for comparison."""

from .core import (
    BINARY_OPERATIONS,
    INT64_MAX,
    INT64_MIN,
    DuplicateOperandError,
    DuplicateOutputError,
    Element,
    ElementModelError,
    IndexTransform,
    IntegerOverflowError,
    JoinDeadlockError,
    Operation,
    PartialStore,
    ProgramError,
    Relation,
    RelationStore,
    TransformKind,
    apply_relation,
)
from .engine import Execution, Program, RunResult, run
from .machine import (
    CostModel,
    MachineConfig,
    Metrics,
    SimulationLimitError,
    simulate,
    validate_metrics,
    worker_busy_profile,
)
from .programs import (
    MATMUL_NAMES,
    MM_LEFT,
    MM_LEFT_REP,
    MM_PARTIAL,
    MM_PRODUCT,
    MM_RESULT,
    MM_RIGHT,
    MM_RIGHT_REP,
    Lcg64,
    Matrix,
    build_matmul_program,
    build_negate_demo,
    build_square_demo,
    generate_matrix,
    matmul_element_count,
    matmul_program,
)
from .baseline import (
    ELEMENT_COUNT_MODEL,
    INSTRUCTION_COUNT_MODEL,
    REFERENCE_TABLES,
    CountModel,
    ReferenceTables,
    element_count_reference,
    fit_count_model,
    instruction_count,
    matmul_oracle,
    ratio_report,
    simulate_instruction_model,
)

__version__ = "0.1.0"

__all__ = [
    "BINARY_OPERATIONS",
    "CostModel",
    "CountModel",
    "DuplicateOperandError",
    "DuplicateOutputError",
    "ELEMENT_COUNT_MODEL",
    "Element",
    "ElementModelError",
    "Execution",
    "INSTRUCTION_COUNT_MODEL",
    "INT64_MAX",
    "INT64_MIN",
    "IndexTransform",
    "IntegerOverflowError",
    "JoinDeadlockError",
    "Lcg64",
    "MATMUL_NAMES",
    "MM_LEFT",
    "MM_LEFT_REP",
    "MM_PARTIAL",
    "MM_PRODUCT",
    "MM_RESULT",
    "MM_RIGHT",
    "MM_RIGHT_REP",
    "MachineConfig",
    "Matrix",
    "Metrics",
    "Operation",
    "PartialStore",
    "Program",
    "ProgramError",
    "REFERENCE_TABLES",
    "ReferenceTables",
    "Relation",
    "RelationStore",
    "RunResult",
    "SimulationLimitError",
    "TransformKind",
    "apply_relation",
    "build_matmul_program",
    "build_negate_demo",
    "build_square_demo",
    "element_count_reference",
    "fit_count_model",
    "generate_matrix",
    "instruction_count",
    "matmul_element_count",
    "matmul_oracle",
    "matmul_program",
    "ratio_report",
    "run",
    "simulate",
    "simulate_instruction_model",
    "validate_metrics",
    "worker_busy_profile",
]
