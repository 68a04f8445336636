"""Repair analysis: helper sets, repair degrees, repairability, subset-plan bounds."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Collection, Dict, FrozenSet, List, Optional, Tuple

import networkx as nx

from flowercode import kernels
from flowercode.core import FRCode
from flowercode.errors import ParameterError
from flowercode.flower import SubsetJumpPlan, single_ring, subset_packet_count

log = logging.getLogger(__name__)

# exact enumeration above this many nodes falls back to a greedy cover
EXACT_LIMIT = 20


def _external(code: FRCode, i: int, exclude: Collection[int] = ()) -> Tuple[List[int], List[int]]:
    """Split node ``i``'s distinct packets into (coverable, orphaned) given unavailable nodes."""
    own = sorted(set(code.node(i)))
    skip = set(exclude) | {i}
    others = set()
    for j, node in enumerate(code.nodes, start=1):
        if j not in skip:
            others.update(node)
    return [p for p in own if p in others], [p for p in own if p not in others]


def _sort_sets(sets) -> List[FrozenSet[int]]:
    return sorted((frozenset(s) for s in sets), key=lambda s: (len(s), sorted(s)))


def _helper_sets(code: FRCode, i: int, exclude: Collection[int] = ()) -> Tuple[List[FrozenSet[int]], bool]:
    need, _ = _external(code, i, exclude)
    helpers = [j for j in range(1, code.n + 1) if j != i and j not in exclude]
    bit = {p: k for k, p in enumerate(need)}
    target = (1 << len(need)) - 1
    masks = []
    for j in helpers:
        m = 0
        for p in set(code.node(j)):
            if p in bit:
                m |= 1 << bit[p]
        masks.append(m)
    if code.n > EXACT_LIMIT:
        return [_greedy_cover(target, masks, helpers)], True
    found = kernels.minimal_covers(target, masks)
    sets = [{helpers[k] for k in range(len(helpers)) if sel >> k & 1} for sel in found]
    return _sort_sets(sets), False


def _greedy_cover(target: int, masks: List[int], helpers: List[int]) -> FrozenSet[int]:
    chosen: List[int] = []
    covered = 0
    while covered != target:
        k = max(range(len(masks)), key=lambda q: ((masks[q] & ~covered).bit_count(), -q))
        chosen.append(k)
        covered |= masks[k]
    for k in list(chosen):
        rest = 0
        for q in chosen:
            if q != k:
                rest |= masks[q]
        if rest & target == target:
            chosen.remove(k)
    return frozenset(helpers[k] for k in chosen)


def minimal_helper_sets(code: FRCode, i: int, exclude: Collection[int] = ()) -> List[FrozenSet[int]]:
    """Inclusion-minimal sets of other nodes jointly holding node ``i``'s packets.

    Packets with no replica on an available node are left out of the covering
    requirement (see :func:`unrepairable_packets`). Sets are ordered by size,
    then lexicographically. Nodes in ``exclude`` are never used as helpers.
    """
    sets, approximate = _helper_sets(code, i, exclude)
    if approximate:
        log.warning("n=%d exceeds exact enumeration limit %d; greedy cover only", code.n, EXACT_LIMIT)
    return sets


def repair_degree_set(code: FRCode, i: int) -> FrozenSet[int]:
    return frozenset(len(s) for s in minimal_helper_sets(code, i))


def sdr_repair_degree(code: FRCode, i: int, exclude: Collection[int] = ()) -> Optional[int]:
    """Helpers needed when every helper sends exactly one packet, or None if impossible."""
    sdr = sdr_assignment(code, i, exclude)
    return None if sdr is None else len(sdr)


def sdr_assignment(code: FRCode, i: int, exclude: Collection[int] = ()) -> Optional[Dict[int, int]]:
    """Packet -> distinct helper node, via maximum bipartite matching."""
    need, orphan = _external(code, i, exclude)
    if orphan:
        return None
    if not need:
        return {}
    g = nx.Graph()
    top = [("p", p) for p in need]
    g.add_nodes_from(top)
    for j in range(1, code.n + 1):
        if j == i or j in exclude:
            continue
        for p in set(code.node(j)):
            if p in need:
                g.add_edge(("p", p), ("u", j))
    matching = nx.bipartite.hopcroft_karp_matching(g, top_nodes=top)
    assignment = {p: matching[("p", p)][1] for p in need if ("p", p) in matching}
    return assignment if len(assignment) == len(need) else None


def unrepairable_packets(code: FRCode) -> List[Tuple[int, int]]:
    """``(node, packet)`` pairs whose packet has no replica on any other node."""
    out = []
    for i in range(1, code.n + 1):
        _, orphan = _external(code, i)
        out.extend((i, p) for p in orphan)
    return out


@dataclass
class NodeRepair:
    node: int
    packets: Tuple[int, ...]
    minimal_helper_sets: List[FrozenSet[int]]
    unrepairable_packets: List[int]
    sdr_degree: Optional[int]

    @property
    def degree_set(self) -> FrozenSet[int]:
        return frozenset(len(s) for s in self.minimal_helper_sets)

    @property
    def d_i(self) -> int:
        return max(self.degree_set)


@dataclass
class RepairReport:
    n: int
    theta: int
    nodes: List[NodeRepair]
    approximate: bool = False
    warnings: List[str] = field(default_factory=list)

    @property
    def d(self) -> int:
        """Maximum repair degree over nodes that can be repaired at all."""
        return max((r.d_i for r in self.nodes if not r.unrepairable_packets), default=0)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "theta": self.theta,
            "approximate": self.approximate,
            "d": self.d,
            "warnings": self.warnings,
            "nodes": [
                {
                    "node": r.node,
                    "packets": list(r.packets),
                    "minimal_helper_sets": [sorted(s) for s in r.minimal_helper_sets],
                    "degree_set": sorted(r.degree_set),
                    "d_i": r.d_i,
                    "sdr_repair_degree": r.sdr_degree,
                    "unrepairable_packets": r.unrepairable_packets,
                }
                for r in self.nodes
            ],
        }

    def render_table(self) -> str:
        """Text table in the layout Nodes | Packets distribution | Set of repair degrees."""
        head = ("Node", "Packets distribution", "Set of repair degrees")
        body = []
        for r in self.nodes:
            degrees = "{" + ",".join(str(x) for x in sorted(r.degree_set)) + "}"
            if r.unrepairable_packets:
                degrees += "  unrepairable: " + ",".join(f"P{p}" for p in r.unrepairable_packets)
            body.append((f"U{r.node}", ", ".join(f"P{p}" for p in r.packets) or "-", degrees))
        widths = [max(len(row[c]) for row in [head, *body]) for c in range(3)]
        fmt = " | ".join(f"{{:<{w}}}" for w in widths)
        sep = "-+-".join("-" * w for w in widths)
        lines = [fmt.format(*row).rstrip() for row in [head, *body]]
        lines.insert(1, sep)
        lines.append(f"d = {self.d}" + ("  (approximate)" if self.approximate else ""))
        return "\n".join(lines) + "\n"


def analyze(code: FRCode) -> RepairReport:
    nodes = []
    approximate = False
    warnings = []
    for i in range(1, code.n + 1):
        sets, approx = _helper_sets(code, i)
        approximate |= approx
        _, orphan = _external(code, i)
        if orphan:
            warnings.append(f"U{i} has unrepairable packets " + ",".join(f"P{p}" for p in orphan))
        nodes.append(NodeRepair(i, code.node(i), sets, orphan, sdr_repair_degree(code, i)))
    if approximate:
        warnings.append(f"n={code.n} exceeds exact limit {EXACT_LIMIT}: greedy helper sets, degrees are upper bounds")
    return RepairReport(code.n, code.theta, nodes, approximate, warnings)


def system_repair_degree(code: FRCode) -> int:
    report = analyze(code)
    for w in report.warnings:
        log.warning(w)
    return report.d


@dataclass
class BoundCheck:
    name: str
    passed: bool
    witnesses: List[str] = field(default_factory=list)


def subset_bound_check(code: FRCode, plan: SubsetJumpPlan) -> List[BoundCheck]:
    """Check a single-ring code against the per-cycle ceil/floor count and its bounds.

    The lower bound ``floor(theta/|A_max|) <= alpha_i`` only holds for nodes in
    at least one subset, so nodes outside every subset are skipped (and named).
    """
    if (code.n, code.theta) != (plan.n, plan.theta):
        raise ParameterError("code and plan disagree on n or theta")
    expected, _ = single_ring(plan)
    if not code.same_distribution(expected):
        raise ParameterError("code was not produced by this subset plan")

    alpha_vec = code.profiles().alpha_vec
    alpha = code.alpha
    theta = plan.theta
    members = {i: [m for m, a in enumerate(plan.subsets) if i in a] for i in range(1, plan.n + 1)}
    touched = [i for i in members if members[i]]
    upper = sum(-(-theta // len(a)) for a in plan.subsets)
    a_max = max(len(a) for a in plan.subsets)
    checks = []

    bad = []
    for i in range(1, plan.n + 1):
        expected_i = sum(subset_packet_count(theta, len(plan.subsets[m]), plan.subsets[m].index(i) + 1)
                    for m in members[i])
        if expected_i != alpha_vec[i - 1]:
            bad.append(f"U{i}: alpha_i={alpha_vec[i - 1]}, count sum={expected_i}")
    checks.append(BoundCheck("alpha_i = sum_m P(U_i, A_m)", not bad, bad))

    bad = [f"U{i}: alpha_i={alpha_vec[i - 1]}" for i in touched
           if not theta // a_max <= alpha_vec[i - 1] <= alpha]
    skipped = [f"U{i} in no subset (lower bound not applicable)" for i in members if not members[i]]
    checks.append(BoundCheck(f"floor(theta/|A_max|)={theta // a_max} <= alpha_i <= alpha", not bad, bad + skipped))

    checks.append(BoundCheck(f"alpha={alpha} <= sum_m ceil(theta/|A_m|)={upper}", alpha <= upper,
                             [] if alpha <= upper else [f"alpha={alpha}"]))

    common = [i for i in members if len(members[i]) == plan.rho]
    bad = [f"U{i}: alpha_i={alpha_vec[i - 1]} != alpha={alpha}" for i in common if alpha_vec[i - 1] != alpha]
    checks.append(BoundCheck("U_i in every A_m => alpha_i = alpha", not bad, bad))

    bad = []
    for i in members:
        if len(members[i]) == 1:
            m = members[i][0]
            need = -(-theta // len(plan.subsets[m]))
            if alpha < need:
                bad.append(f"U{i} only in A_{m + 1}: alpha={alpha} < {need}")
    checks.append(BoundCheck("U_p in exactly one A_m => alpha >= ceil(theta/|A_m|)", not bad, bad))
    return checks

