"""Square-sum balanced assignment through unit-capacity min-cost flow.

Tasks must each go to one related agent; the goal is the smallest sum of
squared agent loads. Agent ``a`` with ``b`` pre-assigned tasks receives one
source arc per related task, the ``i``-th costing ``2(b+i) - 1``. Because
these costs increase, a min-cost flow fills them in order and pays
``(b+k)^2 - b^2`` for ``k`` new tasks.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

from .errors import RefusalError

DEFAULT_BRUTE_TASKS = 12
DEFAULT_BRUTE_PRODUCT = 2_000_000


class InfeasibleError(ValueError):
    def __init__(self, task):
        super().__init__(f"task {task!r} has no related agent")
        self.task = task


@dataclass
class SbapInstance:
    agents: list
    tasks: list
    relation: set
    base_load: dict = field(default_factory=dict)

    def __post_init__(self):
        self.agents = list(self.agents)
        self.tasks = list(self.tasks)
        self.relation = set(self.relation)
        self.base_load = {a: int(self.base_load.get(a, 0)) for a in self.agents}
        known = set(self.agents)
        tasks = set(self.tasks)
        for a, t in self.relation:
            if a not in known or t not in tasks:
                raise ValueError(f"relation pair ({a!r}, {t!r}) refers to unknown agent or task")

    def candidates(self) -> dict:
        """Related agents per task, in agent-list order."""
        pos = {a: i for i, a in enumerate(self.agents)}
        out: dict = {t: [] for t in self.tasks}
        for a, t in self.relation:
            out[t].append(a)
        for t in out:
            out[t].sort(key=pos.__getitem__)
        return out

    def check_feasible(self) -> None:
        for t, cands in self.candidates().items():
            if not cands:
                raise InfeasibleError(t)


@dataclass
class SbapSolution:
    assignment: dict
    loads: dict
    square_sum: int
    flow_cost: int | None = None


def square_sum(inst: SbapInstance, assignment: Mapping[Hashable, Hashable]) -> int:
    loads = dict(inst.base_load)
    for a in assignment.values():
        loads[a] += 1
    return sum(x * x for x in loads.values())


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    cap: int
    cost: int


@dataclass
class FlowNetwork:
    """Directed multigraph; node 0 is the source and node 1 the sink."""

    num_nodes: int
    arcs: list[Arc]
    names: list = field(default_factory=list)
    source: int = 0
    sink: int = 1

    def dump(self) -> str:
        return "".join(f"{a.tail} {a.head} {a.cap} {a.cost}\n" for a in self.arcs)


@dataclass
class FlowResult:
    value: int
    cost: int
    flow: list[int]


def build_network(inst: SbapInstance) -> tuple[FlowNetwork, dict, dict]:
    """Nodes: source 0, sink 1, then agents, then tasks.

    Returns the network plus node-id maps for agents and tasks.
    """
    agent_node = {a: 2 + i for i, a in enumerate(inst.agents)}
    task_node = {t: 2 + len(inst.agents) + j for j, t in enumerate(inst.tasks)}
    names = ["source", "sink", *inst.agents, *inst.tasks]
    degree = {a: 0 for a in inst.agents}
    for a, _ in inst.relation:
        degree[a] += 1
    arcs = []
    for a in inst.agents:
        b = inst.base_load[a]
        for i in range(1, degree[a] + 1):
            arcs.append(Arc(0, agent_node[a], 1, 2 * (b + i) - 1))
    cands = inst.candidates()
    for t in inst.tasks:
        for a in cands[t]:
            arcs.append(Arc(agent_node[a], task_node[t], 1, 0))
    for t in inst.tasks:
        arcs.append(Arc(task_node[t], 1, 1, 0))
    return FlowNetwork(len(names), arcs, names), agent_node, task_node


def min_cost_max_flow(net: FlowNetwork) -> FlowResult:
    """Successive shortest augmenting paths, one unit per augmentation.

    Shortest paths come from a FIFO label-correcting search over the residual
    graph, so zero-cost and negative residual arcs need no special handling.
    Only strictly shorter labels replace a predecessor, which makes the
    chosen path depend only on node and arc order.
    """
    n = net.num_nodes
    # residual arcs: index 2i forward, 2i+1 backward
    head: list[int] = []
    cap: list[int] = []
    cost: list[int] = []
    out: list[list[int]] = [[] for _ in range(n)]
    for a in net.arcs:
        out[a.tail].append(len(head))
        head.append(a.head)
        cap.append(a.cap)
        cost.append(a.cost)
        out[a.head].append(len(head))
        head.append(a.tail)
        cap.append(0)
        cost.append(-a.cost)

    s, t = net.source, net.sink
    value = total = 0
    inf = float("inf")
    while True:
        dist = [inf] * n
        pred = [-1] * n
        inq = [False] * n
        dist[s] = 0
        queue = deque([s])
        inq[s] = True
        while queue:
            v = queue.popleft()
            inq[v] = False
            dv = dist[v]
            for e in out[v]:
                if cap[e] > 0:
                    w = head[e]
                    nd = dv + cost[e]
                    if nd < dist[w]:
                        dist[w] = nd
                        pred[w] = e
                        if not inq[w]:
                            inq[w] = True
                            queue.append(w)
        if dist[t] == inf:
            break
        w = t
        while w != s:
            e = pred[w]
            cap[e] -= 1
            cap[e ^ 1] += 1
            w = head[e ^ 1]
        value += 1
        total += dist[t]
    flow = [cap[2 * i + 1] for i in range(len(net.arcs))]
    return FlowResult(value, int(total), flow)


def solve_sbap(inst: SbapInstance) -> SbapSolution:
    inst.check_feasible()
    net, agent_node, task_node = build_network(inst)
    res = min_cost_max_flow(net)
    if res.value != len(inst.tasks):
        raise AssertionError("max flow does not saturate the tasks")  # pragma: no cover
    node_agent = {v: a for a, v in agent_node.items()}
    node_task = {v: t for t, v in task_node.items()}
    assignment = {}
    for arc, f in zip(net.arcs, res.flow):
        if f and arc.tail in node_agent and arc.head in node_task:
            assignment[node_task[arc.head]] = node_agent[arc.tail]
    loads = dict(inst.base_load)
    for a in assignment.values():
        loads[a] += 1
    ss = sum(x * x for x in loads.values())
    return SbapSolution(assignment, loads, ss, res.cost)


def brute_force_sbap(
    inst: SbapInstance,
    max_tasks: int = DEFAULT_BRUTE_TASKS,
    max_product: int = DEFAULT_BRUTE_PRODUCT,
) -> SbapSolution:
    """Exhaustive search; the first minimum in ``itertools.product`` order wins."""
    inst.check_feasible()
    cands = inst.candidates()
    tasks = inst.tasks
    if len(tasks) > max_tasks:
        raise RefusalError("brute_force_sbap tasks", len(tasks), max_tasks)
    product = 1
    for t in tasks:
        product *= len(cands[t])
    if product > max_product:
        raise RefusalError("brute_force_sbap assignments", product, max_product)

    base = inst.base_load
    best = None
    best_choice: Sequence = ()
    for choice in itertools.product(*(cands[t] for t in tasks)):
        loads = dict(base)
        for a in choice:
            loads[a] += 1
        ss = sum(x * x for x in loads.values())
        if best is None or ss < best:
            best, best_choice = ss, choice
    assignment = dict(zip(tasks, best_choice))
    loads = dict(base)
    for a in best_choice:
        loads[a] += 1
    return SbapSolution(assignment, loads, best)
