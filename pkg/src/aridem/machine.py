"""Discrete-event simulation of a master/worker element machine.

The master owns the ready queue and the partial store. Work units are
fully gathered operand sets; the master dispatches one unit per message
to an idle worker, the worker computes for t_proc, and a single return
message carries the unit's outputs back. The queue is popped lazily:
elements stay queued until an idle worker exists to take the deduction
they trigger, so dispatch order (and therefore every counter) is a pure
function of the program and the configuration.

Message accounting per unit: 1 for the dispatch plus max(1, outputs) for
the return, so a unit that deduces nothing still sends one completion.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

from .core import (
    DuplicateOutputError,
    Element,
    ElementModelError,
    JoinDeadlockError,
    Operation,
    PartialStore,
    apply_relation,
)
from .engine import Program

DEFAULT_EVENT_LIMIT = 100_000_000

_FINISH = 0   # worker becomes idle; the return message is now in flight
_ARRIVAL = 1  # return message reaches the master


class SimulationLimitError(ElementModelError):
    """The event budget ran out before the machine went quiescent."""


@dataclass(frozen=True)
class MachineConfig:
    """Worker count and dispatch policy.

    dispatch "idle" always picks the lowest-numbered idle worker;
    "roundrobin" scans forward from the last pick. rng_seed is carried
    into run records so they are self-describing; the machine itself is
    deterministic.
    """

    workers: int
    rng_seed: int = 0
    dispatch: str = "idle"

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ValueError("need at least one worker")
        if self.dispatch not in ("idle", "roundrobin"):
            raise ValueError(f"unknown dispatch policy {self.dispatch!r}")
        if not 0 <= self.rng_seed < (1 << 64):
            raise ValueError("rng_seed must fit in 64 bits")


@dataclass(frozen=True)
class CostModel:
    """Integer time costs: per-unit compute, per-message latency, and the
    master's bookkeeping charge per dispatch."""

    t_proc: int = 1
    t_msg: int = 10
    t_master: int = 0

    def __post_init__(self) -> None:
        for name in ("t_proc", "t_msg", "t_master"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer")
        if self.t_proc == 0 and self.t_msg == 0 and self.t_master == 0:
            raise ValueError("at least one cost must be positive")


@dataclass
class Metrics:
    """Aggregate counters from one simulated run."""

    elements_processed: int
    messages: int
    sim_time: int
    idle_time_total: int
    per_worker_processed: list[int]
    per_worker_busy: list[int]
    result_checksum: int
    outputs: dict[tuple[int, ...], int] = field(default_factory=dict)


def validate_metrics(metrics: Metrics) -> Metrics:
    """Check the cross-field identities every emitted record must satisfy."""
    if metrics.elements_processed < 0 or metrics.messages < 0 or metrics.sim_time < 0:
        raise ValueError("counters must be non-negative")
    workers = len(metrics.per_worker_busy)
    if workers < 1 or len(metrics.per_worker_processed) != workers:
        raise ValueError("per-worker lists must be non-empty and equal length")
    if sum(metrics.per_worker_processed) != metrics.elements_processed:
        raise ValueError("per-worker processed counts do not sum to the total")
    busy_total = sum(metrics.per_worker_busy)
    if metrics.idle_time_total != workers * metrics.sim_time - busy_total:
        raise ValueError("idle time does not match the busy-time accounting")
    if metrics.idle_time_total < 0:
        raise ValueError("workers cannot be busy longer than the run")
    if not 0 <= metrics.result_checksum < (1 << 32):
        raise ValueError("checksum out of range")
    if metrics.result_checksum != sum(metrics.outputs.values()) % (1 << 32):
        raise ValueError("checksum does not match outputs")
    return metrics


def worker_busy_profile(metrics: Metrics) -> float:
    """Imbalance as max worker busy time over mean worker busy time.

    1.0 is a perfect split. Raises ValueError for a run that processed
    nothing; a run whose workers were never busy reports 1.0.
    """
    if metrics.elements_processed == 0:
        raise ValueError("no elements were processed")
    busy = metrics.per_worker_busy
    total = sum(busy)
    if total == 0:
        return 1.0
    return max(busy) * len(busy) / total


def simulate(program: Program, machine: MachineConfig,
             costs: CostModel = CostModel(), *,
             max_events: int = DEFAULT_EVENT_LIMIT,
             on_event=None) -> Metrics:
    """Run program on the simulated machine and return its Metrics.

    on_event, when given, receives ("dispatch", time, worker, operands),
    ("finish", time, worker), ("arrival", time, worker, outputs) and an
    ("idle_state", time, queued, idle_workers, pending_units) snapshot
    after each event settles; the snapshots let tests audit that no
    worker idles while dispatchable work exists.
    """
    workers = machine.workers
    t_proc, t_msg, t_master = costs.t_proc, costs.t_msg, costs.t_master
    roundrobin = machine.dispatch == "roundrobin"

    queue: deque[Element] = deque(program.initial_elements)
    pending: deque[tuple] = deque()  # ready units: (operand_count, outputs, sink_record)
    partials = PartialStore()
    store = program.relations
    result_id = program.result_identifier
    outputs: dict[tuple[int, ...], int] = {}

    idle = [True] * workers
    idle_count = workers
    cursor = workers - 1  # roundrobin: next scan starts after this worker
    heap: list[tuple] = []
    seq = 0
    now = 0
    master_free = 0
    pops = 0
    messages = 0
    per_processed = [0] * workers
    per_busy = [0] * workers

    def next_unit():
        """Pop queued elements until one yields at least one work unit."""
        nonlocal pops
        while queue:
            element = queue.popleft()
            pops += 1
            found = False
            for rel in store.relations_for(element.identifier):
                if rel.is_binary():
                    pair = partials.offer(rel, element)
                    if pair is None:
                        continue
                    operands = pair
                    operand_count = 2
                else:
                    operands = element
                    operand_count = 1
                created = tuple(apply_relation(rel, operands))
                sink_record = None
                if (rel.operation is Operation.SINK
                        and rel.input_identifiers[0] == result_id):
                    sink_record = (element.indices, element.value)
                pending.append((operand_count, created, sink_record))
                found = True
            if found:
                return pending.popleft()
        return None

    def pick_worker() -> int:
        nonlocal cursor
        if roundrobin:
            for step in range(1, workers + 1):
                w = (cursor + step) % workers
                if idle[w]:
                    cursor = w
                    return w
        else:
            for w in range(workers):
                if idle[w]:
                    return w
        raise AssertionError("pick_worker called with no idle worker")

    def dispatch_pass() -> None:
        nonlocal idle_count, master_free, messages, seq
        while idle_count > 0:
            unit = pending.popleft() if pending else next_unit()
            if unit is None:
                return
            w = pick_worker()
            idle[w] = False
            idle_count -= 1
            send = master_free if master_free > now else now
            send += t_master
            master_free = send
            messages += 1
            per_processed[w] += unit[0]
            per_busy[w] += t_proc
            heapq.heappush(heap, (send + t_msg + t_proc, _FINISH, w, seq, unit))
            seq += 1
            if on_event is not None:
                on_event(("dispatch", send, w, unit[0]))

    events = 0
    dispatch_pass()
    if on_event is not None:
        on_event(("idle_state", now, len(queue), idle_count, len(pending)))
    while heap:
        events += 1
        if events > max_events:
            raise SimulationLimitError(f"exceeded {max_events} events")
        now, kind, w, _, unit = heapq.heappop(heap)
        if kind == _FINISH:
            idle[w] = True
            idle_count += 1
            messages += max(1, len(unit[1]))
            heapq.heappush(heap, (now + t_msg, _ARRIVAL, w, seq, unit))
            seq += 1
            if on_event is not None:
                on_event(("finish", now, w))
        else:
            created, sink_record = unit[1], unit[2]
            queue.extend(created)
            if sink_record is not None:
                if sink_record[0] in outputs:
                    raise DuplicateOutputError(
                        f"result indices {sink_record[0]} produced twice"
                    )
                outputs[sink_record[0]] = sink_record[1]
            if on_event is not None:
                on_event(("arrival", now, w, len(created)))
        dispatch_pass()
        if on_event is not None:
            on_event(("idle_state", now, len(queue), idle_count, len(pending)))

    if len(partials):
        stuck = partials.pending()
        raise JoinDeadlockError(
            f"machine quiescent with {len(stuck)} unmatched operand(s), "
            f"first {stuck[0].describe(program.names)}"
        )

    sim_time = now
    return Metrics(
        elements_processed=pops,
        messages=messages,
        sim_time=sim_time,
        idle_time_total=workers * sim_time - sum(per_busy),
        per_worker_processed=per_processed,
        per_worker_busy=per_busy,
        result_checksum=sum(outputs.values()) % (1 << 32),
        outputs=outputs,
    )
