"""Flower code constructions on a ring of nodes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from flowercode.core import FRCode, build_code, wrap
from flowercode.errors import ParameterError, RangeError
from flowercode.sequences import NodeSequence, decode_node


@dataclass(frozen=True)
class SubsetJumpPlan:
    n: int
    theta: int
    subsets: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1 or self.theta < 1:
            raise ParameterError("need n >= 1 and theta >= 1")
        if not self.subsets:
            raise ParameterError("a subset plan needs at least one cycle")
        subsets = []
        for m, a in enumerate(self.subsets, start=1):
            a = tuple(sorted(set(int(i) for i in a)))
            if not a:
                raise ParameterError(f"subset A_{m} is empty")
            if a[0] < 1 or a[-1] > self.n:
                raise RangeError(f"subset A_{m} has nodes outside 1..{self.n}")
            subsets.append(a)
        object.__setattr__(self, "subsets", tuple(subsets))

    @property
    def rho(self) -> int:
        return len(self.subsets)


@dataclass(frozen=True)
class CycleTrace:
    """Per cycle, the ``(packet, node)`` drops in order."""

    cycles: Tuple[Tuple[Tuple[int, int], ...], ...]


@dataclass(frozen=True)
class Jump:
    """A jump function given either as a constant or as an explicit table."""

    const: Optional[int] = None
    table: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.const is not None and self.const < 0:
            raise ParameterError("jump values must be nonnegative")
        if any(v < 0 for v in self.table.values()):
            raise ParameterError("jump values must be nonnegative")

    def __call__(self, x: int) -> int:
        if self.const is not None:
            return self.const
        try:
            return self.table[x]
        except KeyError:
            raise ParameterError(f"jump function undefined at {x}") from None

    @classmethod
    def from_json(cls, obj) -> "Jump":
        if isinstance(obj, int):
            return cls(const=obj)
        if "const" in obj:
            return cls(const=int(obj["const"]))
        if "table" in obj:
            return cls(table={int(k): int(v) for k, v in obj["table"].items()})
        raise ParameterError(f"jump function must be {{'const': k}} or {{'table': {{...}}}}, got {obj!r}")

    def to_json(self):
        if self.const is not None:
            return {"const": self.const}
        return {"table": {str(k): v for k, v in sorted(self.table.items())}}


@dataclass(frozen=True)
class JumpFunctions:
    f_in: Jump
    f_ex: Jump

    def check(self, theta: int, rho: int) -> None:
        """Every domain point the construction evaluates must be defined."""
        for i in range(1, rho * theta):
            if i % theta:
                self.f_in(i)
            else:
                self.f_ex(i // theta)


def subset_packet_count(theta: int, subset_size: int, t: int) -> int:
    """Packets landing on the ``t``-th node of a subset during one cycle."""
    if not 1 <= t <= subset_size:
        raise RangeError(f"position {t} outside 1..{subset_size}")
    q, r = divmod(theta, subset_size)
    return q + 1 if t <= r else q


def single_ring(plan: SubsetJumpPlan) -> Tuple[FRCode, CycleTrace]:
    """Each cycle deals packets ``1..theta`` round-robin over ``A_m`` in ascending node order."""
    nodes: List[List[int]] = [[] for _ in range(plan.n)]
    cycles = []
    for a in plan.subsets:
        drops = []
        for p in range(1, plan.theta + 1):
            node = a[(p - 1) % len(a)]
            nodes[node - 1].append(p)
            drops.append((p, node))
        cycles.append(tuple(drops))
    return build_code(nodes, plan.theta, strict=False), CycleTrace(tuple(cycles))


def cycle_table(plan: SubsetJumpPlan) -> List[List[Optional[int]]]:
    """Node-by-column grid of a single-ring code.

    Cycle ``m`` contributes ``ceil(theta / |A_m|)`` columns; column ``p`` of the
    group holds the packet a node receives on the ``p``-th pass over ``A_m``.
    """
    rows: List[List[Optional[int]]] = [[] for _ in range(plan.n)]
    for a in plan.subsets:
        width = -(-plan.theta // len(a))
        pos = {node: t for t, node in enumerate(a)}
        for i in range(1, plan.n + 1):
            for p in range(width):
                packet = pos[i] + 1 + p * len(a) if i in pos else None
                rows[i - 1].append(packet if packet is not None and packet <= plan.theta else None)
    return rows


def _node_seq_recursive(n: int, theta: int, rho: int, jumps: JumpFunctions) -> List[int]:
    terms = [1]
    for m in range(2, rho * theta + 1):
        prev = m - 1
        jump = jumps.f_ex(prev // theta) if prev % theta == 0 else jumps.f_in(prev)
        terms.append(wrap(terms[-1] + jump + 1, n))
    return terms


def _node_seq_closed(n: int, theta: int, rho: int, jumps: JumpFunctions) -> List[int]:
    terms = [1]
    for m in range(2, rho * theta + 1):
        # the i = 0 term lies outside both domains and contributes nothing
        total = m
        for i in range(1, m):
            total += jumps.f_ex(i // theta) if i % theta == 0 else jumps.f_in(i)
        terms.append(wrap(total, n))
    return terms


def multi_ring_node_seq(n: int, theta: int, rho: int, jumps: JumpFunctions,
                        method: str = "recursive") -> NodeSequence:
    if n < 1 or theta < 1 or rho < 1:
        raise ParameterError("need n, theta, rho >= 1")
    jumps.check(theta, rho)
    if method == "recursive":
        terms = _node_seq_recursive(n, theta, rho, jumps)
    elif method == "closed":
        terms = _node_seq_closed(n, theta, rho, jumps)
    else:
        raise ParameterError(f"unknown method {method!r}")
    return NodeSequence(tuple(terms), n, theta)


def multi_ring(n: int, theta: int, rho: int, jumps: JumpFunctions) -> FRCode:
    return decode_node(multi_ring_node_seq(n, theta, rho, jumps))


def construct(spec: Dict) -> FRCode:
    """Build a code from a JSON construction spec (``kind`` = single_ring | multi_ring)."""
    kind = spec.get("kind")
    try:
        if kind == "single_ring":
            plan = SubsetJumpPlan(int(spec["n"]), int(spec["theta"]), tuple(tuple(a) for a in spec["subsets"]))
            return single_ring(plan)[0]
        if kind == "multi_ring":
            jumps = JumpFunctions(Jump.from_json(spec.get("f_in", 0)), Jump.from_json(spec.get("f_ex", 0)))
            return multi_ring(int(spec["n"]), int(spec["theta"]), int(spec["rho"]), jumps)
    except KeyError as exc:
        raise ParameterError(f"construction spec missing field {exc}") from None
    raise ParameterError(f"unknown construction kind {kind!r}")


def plan_from_spec(spec: Dict) -> SubsetJumpPlan:
    return SubsetJumpPlan(int(spec["n"]), int(spec["theta"]), tuple(tuple(a) for a in spec["subsets"]))


def rendered_rows(grid: Sequence[Sequence[Optional[int]]]) -> List[str]:
    return [" ".join(f"P{p}" if p is not None else "-" for p in row) for row in grid]
