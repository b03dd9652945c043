"""How matrix multiplication becomes a pile of elements and five relations.

C = A x B over n x n integer matrices, no loops, no program counter.
Each A entry is replicated across j, each B entry across i, matching
(i, j, k) triples are multiplied, and a chain of SumStep joins folds
the k axis into the final C(i, j) values.
"""

from aridem import (
    MATMUL_NAMES,
    Matrix,
    matmul_element_count,
    matmul_oracle,
    matmul_program,
    run,
)

a = Matrix.from_rows([[1, 2], [3, 4]])
b = Matrix.from_rows([[5, 6], [7, 8]])
program = matmul_program(a, b)

print("=== the five relations ===")
for rel in program.relations:
    ins = ", ".join(MATMUL_NAMES[i] for i in rel.input_identifiers)
    print(f"  {rel.operation.name:10s} ({ins}) -> {MATMUL_NAMES[rel.output_identifier]}"
          f"  [{rel.index_transform.kind.name}]")

print("\n=== initial elements (note B is laid out as (j, k)) ===")
for el in program.initial_elements:
    print(f"  {MATMUL_NAMES[el.identifier]}{el.indices} = {el.value}")

print("\n=== run it ===")
result = run(program)
cells = sorted(result.outputs.items())
for (i, j), v in cells:
    print(f"  C({i}, {j}) = {v}")

expect = matmul_oracle(a, b)
assert all(expect.at(i, j) == v for (i, j), v in cells)
print("matches the straightforward row-times-column product")

print("\n=== element economy ===")
n = a.n
print(f"n = {n}: created {result.elements_created} elements"
      f" (closed form 4n^3 + 3n^2 = {matmul_element_count(n)})")
print(f"peak queue depth {result.max_queue_depth},"
      f" peak partial store {result.max_partial_depth}")

print("\nscaling the closed form:")
for n in (4, 8, 16, 32, 64):
    print(f"  n={n:3d}: {matmul_element_count(n):>10,} elements")
