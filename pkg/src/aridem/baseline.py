"""Instruction-model baseline and published reference numbers.

The comparison between the element machine and a conventional
master/slave instruction machine runs on two polynomial count models of
the form i*n^3 + j*n^2, fitted exactly from the published matmul totals,
plus the published wall-clock grids kept here verbatim for regression
checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import _check_int64
from .machine import CostModel, Metrics
from .programs import Matrix, generate_matrix


@dataclass(frozen=True)
class CountModel:
    """Operation count of the form cubic*n^3 + quadratic*n^2."""

    cubic: int
    quadratic: int

    def __post_init__(self) -> None:
        if self.cubic < 1 or self.quadratic < 0:
            raise ValueError("cubic term must be positive, quadratic non-negative")

    def count(self, n: int) -> int:
        return self.cubic * n ** 3 + self.quadratic * n ** 2


# Exact fits of the published matmul totals (see fit_count_model).
INSTRUCTION_COUNT_MODEL = CountModel(40, 107)
ELEMENT_COUNT_MODEL = CountModel(14, 10)

PROCESSOR_COUNTS = (2, 4, 8, 16)


@dataclass(frozen=True)
class ReferenceTables:
    """Published measurements: totals by n, wall-clock ms by (n, processors)."""

    sizes: tuple[int, ...]
    instruction_counts: dict[int, int]
    element_counts: dict[int, int]
    instruction_model_ms: dict[int, dict[int, float]]
    element_model_ms: dict[int, dict[int, float]]


REFERENCE_TABLES = ReferenceTables(
    sizes=(40, 60, 80, 100),
    instruction_counts={
        40: 2_731_200,
        60: 9_025_200,
        80: 21_164_800,
        100: 41_070_000,
    },
    element_counts={
        40: 912_000,
        60: 3_060_000,
        80: 7_232_000,
        100: 14_100_000,
    },
    instruction_model_ms={
        40: {2: 4.72, 4: 2.56, 8: 3.409, 16: 3.2113},
        60: {2: 10.058, 4: 6.466, 8: 10.8121, 16: 7.774},
        80: {2: 20.794, 4: 9.016, 8: 14.717, 16: 16.559},
        100: {2: 73.357, 4: 15.62, 8: 21.03, 16: 24.272},
    },
    element_model_ms={
        40: {2: 88.733, 4: 70.086, 8: 324.738, 16: 25.423},
        60: {2: 826.578, 4: 315.925, 8: 607.044, 16: 292.929},
        80: {2: 1280.438, 4: 379.082, 8: 209.524, 16: 255.179},
        100: {2: 5515.629, 4: 3591.148, 8: 1461.293, 16: 1095.009},
    },
)


def fit_count_model(points: dict[int, int]) -> CountModel:
    """Solve i*n^3 + j*n^2 = total exactly from two (n, total) points.

    Raises ValueError if the system is singular, the solution is not
    integral, or any remaining point disagrees with the fit.
    """
    if len(points) < 2:
        raise ValueError("need at least two points")
    items = sorted(points.items())
    (n1, t1), (n2, t2) = items[0], items[1]
    det = n1 ** 3 * n2 ** 2 - n2 ** 3 * n1 ** 2
    if det == 0:
        raise ValueError("points do not determine the model")
    cubic = Fraction(t1 * n2 ** 2 - t2 * n1 ** 2, det)
    quadratic = Fraction(n1 ** 3 * t2 - n2 ** 3 * t1, det)
    if cubic.denominator != 1 or quadratic.denominator != 1:
        raise ValueError(f"fit is not integral: {cubic}, {quadratic}")
    model = CountModel(int(cubic), int(quadratic))
    for n, total in items[2:]:
        if model.count(n) != total:
            raise ValueError(f"point n={n} disagrees with fit {model}")
    return model


def instruction_count(n: int, model: CountModel = INSTRUCTION_COUNT_MODEL) -> int:
    """Instructions a conventional machine spends on an n x n matmul."""
    return model.count(n)


def element_count_reference(n: int) -> int:
    """Published element total for the n x n matmul (14n^3 + 10n^2)."""
    return ELEMENT_COUNT_MODEL.count(n)


def ratio_report(n: int) -> Fraction:
    """Exact instructions-per-element ratio (40n + 107) / (14n + 10)."""
    return Fraction(instruction_count(n), element_count_reference(n))


def matmul_oracle(a: Matrix, b: Matrix) -> Matrix:
    """Plain triple-loop integer matrix product, the correctness reference."""
    if a.n != b.n:
        raise ValueError(f"matrix sizes differ: {a.n} vs {b.n}")
    n = a.n
    out = []
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc += a.at(i, k) * b.at(k, j)
            _check_int64(acc, f"product cell ({i}, {j})")
            out.append(acc)
    return Matrix(n, tuple(out))


def simulate_instruction_model(n: int, workers: int,
                               costs: CostModel = CostModel(),
                               seed: int = 0,
                               model: CountModel = INSTRUCTION_COUNT_MODEL) -> Metrics:
    """Master/slave instruction machine on the same matmul workload.

    The master broadcasts B and a block of ceil(n / workers) rows of A to
    every slave (remainder rows trail off, so late slaves may sit empty),
    each slave computes its block, and one message returns it: three
    messages per slave, total 3 * workers. Slave s spends its share of
    the model's instruction count, one instruction per t_proc tick, and
    finishes at 3 * t_msg + work_s * t_proc; the run takes the longest
    slave's finish time. Outputs are the true product for the seeded
    matrices, so checksums line up with the element machine.
    """
    if n < 1:
        raise ValueError("matrix size must be positive")
    if workers < 1:
        raise ValueError("need at least one slave")

    block = -(-n // workers)  # ceil
    rows = [max(0, min(block, n - block * s)) for s in range(workers)]
    work = [model.cubic * n * n * r + model.quadratic * n * r for r in rows]
    busy = [w * costs.t_proc for w in work]
    sim_time = 3 * costs.t_msg + max(busy)

    a = generate_matrix(n, seed, 0)
    b = generate_matrix(n, seed, 1)
    product = matmul_oracle(a, b)
    outputs = {(i, j): product.at(i, j) for i in range(n) for j in range(n)}

    return Metrics(
        elements_processed=model.count(n),
        messages=3 * workers,
        sim_time=sim_time,
        idle_time_total=workers * sim_time - sum(busy),
        per_worker_processed=work,
        per_worker_busy=busy,
        result_checksum=sum(outputs.values()) % (1 << 32),
        outputs=outputs,
    )
