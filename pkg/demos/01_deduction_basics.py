"""Walk through the element model one deduction at a time.

An element is (identifier, indices, value). A relation consumes elements
of its input identifier(s) and deduces new ones. Execution is a loop:
pop an element, apply every relation that wants it, push what came out.
"""

from aridem import (
    Element,
    Execution,
    IndexTransform,
    Operation,
    Program,
    Relation,
    RelationStore,
    build_negate_demo,
)

print("=== negate: the smallest possible program ===")
program = build_negate_demo()
print(f"initial element: {program.initial_elements[0].describe(program.names)}")
for rel in program.relations:
    inputs = "/".join(program.identifier_name(i) for i in rel.input_identifiers)
    print(f"relation {rel.rid}: {rel.operation.name} on {inputs}"
          f" -> {program.identifier_name(rel.output_identifier)}")

print("\nstepping to quiescence:")
ex = Execution(program, trace=lambda kind, *a: print(f"  {kind}: {a}"))
while ex.step():
    pass
print(f"outputs: {ex.outputs}")
print(f"processed {ex.elements_processed}, created {ex.elements_created}")

print("\n=== a binary join: multiply two streams pairwise ===")
# MulPair fires once both operands with the same index list have arrived.
# Whichever shows up first waits in the partial store.
store = RelationStore()
store.add(Relation((0, 1), Operation.MUL_PAIR, (), 2, IndexTransform.keep()))
store.add(Relation((2,), Operation.SINK, (), 2, IndexTransform.keep()))
pairs = Program(
    relations=store,
    initial_elements=[
        Element(0, (0,), 6), Element(0, (1,), 7),
        Element(1, (1,), 10), Element(1, (0,), 10),
    ],
    arities={0: 1, 1: 1, 2: 1},
    result_identifier=2,
    names={0: "x", 1: "y", 2: "xy"},
)
ex = Execution(pairs)
while ex.step():
    peak = ex.partials.max_size
    print(f"  after step {ex.elements_processed}: "
          f"{len(ex.partials)} waiting (peak {peak})")
print(f"outputs: {ex.outputs}")

print("\n=== fan-out: Replicate turns one element into n ===")
rep = Relation((0,), Operation.REPLICATE, (3,), 1, IndexTransform.insert_varied(0, 3))
from aridem import apply_relation

for out in apply_relation(rep, Element(0, (5,), 42)):
    print(f"  {out}")
