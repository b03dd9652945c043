from fractions import Fraction

import pytest

from aridem import (
    ELEMENT_COUNT_MODEL,
    INSTRUCTION_COUNT_MODEL,
    REFERENCE_TABLES,
    CostModel,
    CountModel,
    MachineConfig,
    Matrix,
    build_matmul_program,
    element_count_reference,
    fit_count_model,
    generate_matrix,
    instruction_count,
    matmul_oracle,
    ratio_report,
    simulate,
    simulate_instruction_model,
    validate_metrics,
)

SIZES = (40, 60, 80, 100)


class TestCountModels:
    def test_instruction_totals_match_reference(self):
        for n in SIZES:
            assert instruction_count(n) == REFERENCE_TABLES.instruction_counts[n]

    def test_element_totals_match_reference(self):
        for n in SIZES:
            assert element_count_reference(n) == REFERENCE_TABLES.element_counts[n]

    def test_specific_values(self):
        assert instruction_count(60) == 9_025_200
        assert element_count_reference(60) == 3_060_000

    def test_count_model_validation(self):
        with pytest.raises(ValueError):
            CountModel(0, 5)
        with pytest.raises(ValueError):
            CountModel(3, -1)

    def test_pure_cubic_model(self):
        assert CountModel(1, 0).count(10) == 1000
        assert instruction_count(10, CountModel(1, 0)) == 1000

    def test_smallest_size(self):
        assert element_count_reference(1) == 24


class TestFit:
    def test_rederives_instruction_coefficients(self):
        model = fit_count_model(REFERENCE_TABLES.instruction_counts)
        assert model == CountModel(40, 107)

    def test_rederives_element_coefficients(self):
        model = fit_count_model(REFERENCE_TABLES.element_counts)
        assert model == CountModel(14, 10)

    def test_extra_points_are_cross_checked(self):
        with pytest.raises(ValueError):
            fit_count_model({40: 2_731_200, 60: 9_025_200, 80: 1})

    def test_non_integral_fit_rejected(self):
        with pytest.raises(ValueError):
            fit_count_model({40: 2_731_201, 60: 9_025_200})

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            fit_count_model({40: 2_731_200})


class TestRatio:
    def test_exact_fractions(self):
        assert ratio_report(40) == Fraction(2_731_200, 912_000)
        assert ratio_report(40) == Fraction(569, 190)

    def test_window_and_direction(self):
        ratios = [ratio_report(n) for n in SIZES]
        assert all(Fraction(285, 100) <= r <= 3 for r in ratios)
        assert all(b < a for a, b in zip(ratios, ratios[1:]))

    def test_decreasing_over_dense_range(self):
        ratios = [ratio_report(n) for n in range(40, 101)]
        assert all(b < a for a, b in zip(ratios, ratios[1:]))

    def test_limit_is_ratio_of_leading_coefficients(self):
        floor = Fraction(40, 14)
        for n in (40, 1000, 10 ** 6):
            assert floor < ratio_report(n) <= 3
        assert ratio_report(10 ** 6) - floor < Fraction(1, 10_000)


class TestReferenceTables:
    def test_wallclock_grids_complete(self):
        for grid in (REFERENCE_TABLES.instruction_model_ms,
                     REFERENCE_TABLES.element_model_ms):
            assert sorted(grid) == list(SIZES)
            for row in grid.values():
                assert sorted(row) == [2, 4, 8, 16]

    def test_element_model_measured_slower_everywhere(self):
        for n in SIZES:
            for p in (2, 4, 8, 16):
                assert (REFERENCE_TABLES.element_model_ms[n][p]
                        > REFERENCE_TABLES.instruction_model_ms[n][p])

    def test_largest_size_row_monotone(self):
        row = REFERENCE_TABLES.element_model_ms[100]
        times = [row[p] for p in (2, 4, 8, 16)]
        assert all(b < a for a, b in zip(times, times[1:]))


class TestOracle:
    def test_hand_example(self):
        a = Matrix.from_rows([[1, 2], [3, 4]])
        b = Matrix.from_rows([[5, 6], [7, 8]])
        assert matmul_oracle(a, b).rows() == [[19, 22], [43, 50]]

    def test_identity(self):
        a = generate_matrix(4, 8, 0)
        assert matmul_oracle(a, Matrix.identity(4)) == a

    def test_zero(self):
        zero = Matrix(3, (0,) * 9)
        a = generate_matrix(3, 8, 0)
        assert matmul_oracle(a, zero) == zero

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            matmul_oracle(Matrix.identity(2), Matrix.identity(3))

    def test_overflow_aborts(self):
        from aridem import IntegerOverflowError

        big = Matrix.from_rows([[1 << 62, 1 << 62], [0, 0]])
        ones = Matrix.from_rows([[1, 1], [1, 1]])
        with pytest.raises(IntegerOverflowError):
            matmul_oracle(big, ones)


class TestInstructionMachine:
    def test_message_pattern(self):
        for P in (1, 2, 4, 8, 16):
            assert simulate_instruction_model(8, P).messages == 3 * P

    def test_processed_equals_count_model(self):
        for n in (4, 8, 40):
            m = simulate_instruction_model(n, 4)
            assert m.elements_processed == INSTRUCTION_COUNT_MODEL.count(n)
            assert sum(m.per_worker_processed) == m.elements_processed

    def test_sim_time_formula(self):
        costs = CostModel(t_proc=2, t_msg=7, t_master=0)
        m = simulate_instruction_model(6, 4, costs)
        block = 2  # ceil(6 / 4)
        peak = (40 * 36 + 107 * 6) * block * 2
        assert m.sim_time == 3 * 7 + peak

    def test_row_split_with_remainder(self):
        m = simulate_instruction_model(5, 4)
        rows = [w // (40 * 25 + 107 * 5) for w in m.per_worker_processed]
        assert rows == [2, 2, 1, 0]

    def test_more_workers_than_rows(self):
        m = simulate_instruction_model(2, 8)
        assert m.messages == 24
        assert sum(m.per_worker_processed) == INSTRUCTION_COUNT_MODEL.count(2)
        validate_metrics(m)

    def test_outputs_are_true_product(self):
        n, seed = 6, 17
        m = simulate_instruction_model(n, 3, seed=seed)
        want = matmul_oracle(generate_matrix(n, seed, 0), generate_matrix(n, seed, 1))
        assert m.outputs == {(i, j): want.at(i, j) for i in range(n) for j in range(n)}

    def test_checksum_agrees_with_element_machine(self):
        for n, seed in ((4, 0), (4, 5), (8, 3)):
            element = simulate(build_matmul_program(n, seed), MachineConfig(workers=2))
            instruction = simulate_instruction_model(n, 2, seed=seed)
            assert element.result_checksum == instruction.result_checksum

    def test_sim_time_decreases_with_workers(self):
        times = [simulate_instruction_model(40, P).sim_time for P in (1, 2, 4, 8, 16)]
        assert all(b < a for a, b in zip(times, times[1:]))

    def test_input_validation(self):
        with pytest.raises(ValueError):
            simulate_instruction_model(0, 2)
        with pytest.raises(ValueError):
            simulate_instruction_model(4, 0)
