"""DRESS storage simulation: outer MDS code, inner FR placement, table-based repair."""

from __future__ import annotations

import itertools
import struct
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from flowercode import kernels
from flowercode.core import FRCode, build_code
from flowercode.errors import CoverageError, InsufficientDataError, ParameterError, PlacementError, UnrepairableError
from flowercode.gf256 import FileBlob, MDSCode
from flowercode.repair import minimal_helper_sets, sdr_assignment

MAGIC = b"FRDS"
VERSION = 1
_HEAD = struct.Struct("<4sHIIIQ")
_U32 = struct.Struct("<I")
_ENTRY = struct.Struct("<II")


@dataclass
class RepairResult:
    node: int
    contents: List[Tuple[int, bytes]]
    helpers: Tuple[int, ...]
    blocks_transferred: int
    sources: Dict[int, int] = field(default_factory=dict)


class DressSystem:
    """Coded packets placed on nodes according to an FR code.

    ``node_store[i - 1]`` holds ``(packet, block)`` pairs in the node's order.
    Failed nodes are emptied until repaired.
    """

    def __init__(self, code: FRCode, mds: MDSCode, length: int,
                 node_store: List[List[Tuple[int, bytes]]], failed: Iterable[int] = ()):
        self.code = code
        self.mds = mds
        self.length = length
        self.node_store = node_store
        self.failed: Set[int] = set(failed)

    @property
    def B(self) -> int:
        return self.mds.B

    def stored_blocks(self) -> int:
        return sum(len(s) for s in self.node_store)

    def contents(self, i: int) -> List[Tuple[int, bytes]]:
        self.code.node(i)
        return list(self.node_store[i - 1])

    def _block(self, helper: int, packet: int) -> bytes:
        for p, block in self.node_store[helper - 1]:
            if p == packet:
                return block
        raise CoverageError(f"U{helper} does not hold P{packet}")

    def fail_node(self, i: int) -> None:
        self.code.node(i)
        self.failed.add(i)
        self.node_store[i - 1] = []

    def repair_node(self, i: int, strategy: str = "min_contact",
                    helpers: Optional[Sequence[int]] = None) -> RepairResult:
        """Rebuild node ``i`` by copying replicas from helper nodes.

        ``strategy`` is ``min_contact`` (a smallest covering helper set),
        ``sdr`` (one packet from each of ``alpha_i`` distinct helpers) or
        ``fixed_set`` (the given ``helpers``, checked for coverage).
        """
        wanted = self.code.node(i)
        exclude = self.failed - {i}
        available = [j for j in range(1, self.code.n + 1) if j != i and j not in exclude]
        held = set()
        for j in available:
            held.update(self.code.node(j))
        orphan = sorted(set(wanted) - held)
        if orphan:
            raise UnrepairableError(i, orphan)

        if strategy == "min_contact":
            chosen = sorted(minimal_helper_sets(self.code, i, exclude=exclude)[0])
            sources = self._first_holder(wanted, chosen)
        elif strategy == "sdr":
            assignment = sdr_assignment(self.code, i, exclude=exclude)
            if assignment is None:
                raise CoverageError(f"no one-packet-per-helper assignment exists for U{i}")
            sources = assignment
            chosen = sorted(set(assignment.values()))
        elif strategy == "fixed_set":
            if helpers is None:
                raise ParameterError("fixed_set strategy needs helpers")
            chosen = sorted(set(helpers))
            bad = [j for j in chosen if j not in available]
            if bad:
                raise CoverageError(f"helpers {bad} are unavailable")
            missing = set(wanted) - {p for j in chosen for p in self.code.node(j)}
            if missing:
                raise CoverageError(f"helpers {chosen} do not hold " + ",".join(f"P{p}" for p in sorted(missing)))
            sources = self._first_holder(wanted, chosen)
        else:
            raise ParameterError(f"unknown repair strategy {strategy!r}")

        downloaded = {p: self._block(src, p) for p, src in sources.items()}
        restored = [(p, downloaded[p]) for p in wanted]
        self.node_store[i - 1] = list(restored)
        self.failed.discard(i)
        return RepairResult(i, restored, tuple(chosen), len(downloaded), dict(sources))

    def _first_holder(self, wanted: Iterable[int], chosen: Sequence[int]) -> Dict[int, int]:
        out = {}
        for p in wanted:
            if p not in out:
                out[p] = next(j for j in chosen if p in self.code.node(j))
        return out

    def distinct_packets(self, nodes: Iterable[int]) -> Set[int]:
        got = set()
        for j in nodes:
            self.code.node(j)
            got.update(p for p, _ in self.node_store[j - 1])
        return got

    def collect(self, nodes: Iterable[int]) -> FileBlob:
        """Reconstruct the file from the packets stored on ``nodes``."""
        nodes = list(nodes)
        got = self.distinct_packets(nodes)
        if len(got) < self.B:
            raise InsufficientDataError(len(got), self.B)
        blocks = {}
        for j in nodes:
            for p, block in self.node_store[j - 1]:
                blocks.setdefault(p, np.frombuffer(block, dtype=np.uint8))
        return FileBlob.from_message(self.mds.decode(blocks), self.length)

    def min_reconstruction_degree(self) -> int:
        """Smallest k such that every k nodes jointly hold at least B distinct packets."""
        masks = []
        for node in self.code.nodes:
            m = 0
            for p in node:
                m |= 1 << (p - 1)
            masks.append(m)
        return kernels.min_union_degree(masks, self.B)

    def to_bytes(self) -> bytes:
        out = [_HEAD.pack(MAGIC, VERSION, self.code.n, self.code.theta, self.B, self.length)]
        for i, store in enumerate(self.node_store, start=1):
            out.append(bytes([1 if i in self.failed else 0]))
            planned = self.code.node(i)
            out.append(_U32.pack(len(planned)))
            for p in planned:
                out.append(_U32.pack(p))
            out.append(_U32.pack(len(store)))
            for p, block in store:
                out.append(_ENTRY.pack(p, len(block)))
                out.append(block)
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "DressSystem":
        magic, version, n, theta, B, length = _HEAD.unpack_from(data, 0)
        if magic != MAGIC or version != VERSION:
            raise ParameterError("not a DRESS snapshot (bad magic or version)")
        off = _HEAD.size
        plan, stores, failed = [], [], []
        for i in range(1, n + 1):
            if data[off]:
                failed.append(i)
            off += 1
            (count,) = _U32.unpack_from(data, off)
            off += 4
            plan.append(list(struct.unpack_from(f"<{count}I", data, off)))
            off += 4 * count
            (count,) = _U32.unpack_from(data, off)
            off += 4
            store = []
            for _ in range(count):
                p, size = _ENTRY.unpack_from(data, off)
                off += _ENTRY.size
                store.append((p, bytes(data[off:off + size])))
                off += size
            stores.append(store)
        if off != len(data):
            raise ParameterError(f"{len(data) - off} trailing bytes in snapshot")
        code = build_code(plan, theta, strict=False)
        return cls(code, MDSCode(theta, B), length, stores, failed)


def build_system(code: FRCode, blob: FileBlob, mds: Optional[MDSCode] = None) -> DressSystem:
    if mds is None:
        mds = MDSCode(code.theta, blob.B)
    if mds.theta != code.theta:
        raise ParameterError(f"MDS length {mds.theta} != code theta {code.theta}")
    if mds.B != blob.B:
        raise ParameterError(f"MDS dimension {mds.B} != file stripe size {blob.B}")
    missing = [j for j, r in enumerate(code.profiles().rho_vec, start=1) if r == 0]
    if missing:
        raise PlacementError("coded packets never stored: " + ",".join(f"P{j}" for j in missing))
    coded = mds.encode(blob.message())
    packets = [row.tobytes() for row in coded]
    store = [[(p, packets[p - 1]) for p in node] for node in code.nodes]
    return DressSystem(code, mds, len(blob.payload), store)


def mds_subset_check(mds: MDSCode, message: np.ndarray, limit: int = 5000) -> Tuple[bool, int]:
    """Decode ``message`` from every B-subset of its coded packets.

    At most ``limit`` subsets are tried, in lexicographic order.
    """
    coded = mds.encode(message)
    checked = 0
    subsets = itertools.combinations(range(1, mds.theta + 1), mds.B)
    for subset in itertools.islice(subsets, limit):
        checked += 1
        if not np.array_equal(mds.decode({j: coded[j - 1] for j in subset}), message):
            return False, checked
    return True, checked


def run_scenario(code: FRCode, payload: bytes, B: int, fail: int, strategy: str = "min_contact") -> dict:
    """Build, fail one node, repair it, collect; return a JSON-ready transcript."""
    blob = FileBlob(payload, B)
    system = build_system(code, blob)
    before = system.contents(fail)
    k_star = system.min_reconstruction_degree()
    mds_ok, mds_checked = mds_subset_check(system.mds, blob.message())
    system.fail_node(fail)
    result = system.repair_node(fail, strategy)
    restored = result.contents == before
    full = system.collect(range(1, code.n + 1)).payload == payload
    checks = {
        "mds_any_B_subset_decodes": mds_ok,
        "repair_bit_identical": restored,
        "collect_all_nodes": full,
    }
    return {
        "n": code.n,
        "theta": code.theta,
        "B": B,
        "file_bytes": len(payload),
        "stripes": blob.stripes,
        "stored_blocks": system.stored_blocks(),
        "failed_node": fail,
        "strategy": strategy,
        "helpers": list(result.helpers),
        "blocks_transferred": result.blocks_transferred,
        "sources": {str(p): h for p, h in sorted(result.sources.items())},
        "k_star": k_star,
        "mds_subsets_checked": mds_checked,
        "checks": {name: ("pass" if ok else "fail") for name, ok in checks.items()},
    }
