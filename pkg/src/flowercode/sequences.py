"""Sequence encodings of FR codes and the conversions between them.

Three encodings are supported:

* dropping sequence: binary, one entry per ring position; a 1 drops the next
  packet (round-robin over ``1..theta``) on node ``position mod n``.
* node sequence: the node receiving the 1st, 2nd, ... dropped packet; the
  ``i``-th drop carries packet ``i mod theta``.
* chi sequence: binary; a 1 at position ``m`` drops packet ``m mod theta`` on
  node ``m mod n`` (packet replication may be non-uniform).

All residues live in ``1..n`` / ``1..theta`` (0 maps to the modulus).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from flowercode.core import FRCode, build_code, wrap
from flowercode.errors import EmptyCodeError, ParameterError, RangeError


def _check_params(n: int, theta: int) -> None:
    if n < 1 or theta < 1:
        raise ParameterError(f"need n >= 1 and theta >= 1, got n={n}, theta={theta}")


def _check_bits(bits: Sequence[int]) -> Tuple[int, ...]:
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise ParameterError("binary sequence entries must be 0 or 1")
    return out


@dataclass(frozen=True)
class DroppingSequence:
    """Binary dropping sequence; trailing zeros are stripped so the last entry is 1."""

    bits: Tuple[int, ...]
    n: int
    theta: int

    def __post_init__(self):
        _check_params(self.n, self.theta)
        bits = _check_bits(self.bits)
        while bits and bits[-1] == 0:
            bits = bits[:-1]
        object.__setattr__(self, "bits", bits)

    @property
    def weight(self) -> int:
        return sum(self.bits)

    @property
    def replication(self) -> Optional[int]:
        """``weight / theta`` when the sequence encodes a uniform FR code, else None."""
        w = self.weight
        return w // self.theta if w and w % self.theta == 0 else None

    def drops(self):
        """Yield ``(position, node, packet)`` for each 1, positions 1-based."""
        w = 0
        for r, b in enumerate(self.bits, start=1):
            if b:
                w += 1
                yield r, wrap(r, self.n), wrap(w, self.theta)


@dataclass(frozen=True)
class NodeSequence:
    terms: Tuple[int, ...]
    n: int
    theta: int

    def __post_init__(self):
        _check_params(self.n, self.theta)
        terms = tuple(int(s) for s in self.terms)
        for s in terms:
            if not 1 <= s <= self.n:
                raise RangeError(f"node sequence term {s} outside 1..{self.n}")
        object.__setattr__(self, "terms", terms)

    @property
    def replication(self) -> Optional[int]:
        L = len(self.terms)
        return L // self.theta if L and L % self.theta == 0 else None


@dataclass(frozen=True)
class ChiSequence:
    bits: Tuple[int, ...]
    n: int
    theta: int

    def __post_init__(self):
        _check_params(self.n, self.theta)
        object.__setattr__(self, "bits", _check_bits(self.bits))


def decode_dropping(d: DroppingSequence) -> FRCode:
    if d.weight == 0:
        raise EmptyCodeError("dropping sequence has zero weight")
    nodes: List[List[int]] = [[] for _ in range(d.n)]
    for _, node, packet in d.drops():
        nodes[node - 1].append(packet)
    return build_code(nodes, d.theta, strict=False)


def canonicalize_dropping(d: DroppingSequence) -> DroppingSequence:
    """Puncture ``n`` consecutive zeros, leftmost first, until no run of ``n`` zeros is left.

    Each removal shifts later positions by exactly ``n``, so node residues and
    prefix weights, hence the decoded code, are unchanged.
    """
    out: List[int] = []
    run = 0
    for b in d.bits:
        out.append(b)
        if b:
            run = 0
        else:
            run += 1
            if run == d.n:
                del out[-d.n:]
                run = 0
    return DroppingSequence(tuple(out), d.n, d.theta)


def dropping_to_node(d: DroppingSequence) -> NodeSequence:
    return NodeSequence(tuple(node for _, node, _ in d.drops()), d.n, d.theta)


def node_to_dropping(s: NodeSequence) -> DroppingSequence:
    """Place the ``i``-th one at the cumulative sum of node steps.

    A step is ``(s_i - s_{i-1}) mod n`` with ``s_0 = 0``; a zero residue (same
    node twice in a row) becomes a full turn of ``n`` positions.
    """
    positions = []
    pos = 0
    prev = 0
    for term in s.terms:
        pos += wrap(term - prev, s.n)
        positions.append(pos)
        prev = term
    bits = [0] * (positions[-1] if positions else 0)
    for p in positions:
        bits[p - 1] = 1
    return DroppingSequence(tuple(bits), s.n, s.theta)


def decode_node(s: NodeSequence) -> FRCode:
    nodes: List[List[int]] = [[] for _ in range(s.n)]
    for i, node in enumerate(s.terms, start=1):
        nodes[node - 1].append(wrap(i, s.theta))
    return build_code(nodes, s.theta, strict=False)


def incidence_from_dropping(d: DroppingSequence) -> np.ndarray:
    """Incidence matrix straight from the dropping sequence (non-binary entries allowed)."""
    a = np.zeros((d.n, d.theta), dtype=np.int64)
    weight = 0
    for t, bit in enumerate(d.bits, start=1):
        if bit == 0:
            continue
        weight += 1
        i = wrap(t, d.n)
        j = wrap(weight, d.theta)
        a[i - 1, j - 1] += 1
    return a


def decode_chi(x: ChiSequence) -> FRCode:
    nodes: List[List[int]] = [[] for _ in range(x.n)]
    for m, b in enumerate(x.bits, start=1):
        if b:
            nodes[wrap(m, x.n) - 1].append(wrap(m, x.theta))
    return build_code(nodes, x.theta, strict=False)


def chi_profiles(x: ChiSequence) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Node sizes and packet replications as strided sums over the chi sequence."""
    chi = x.bits
    ell = len(chi)
    alpha = tuple(sum(chi[i - 1 + x.n * m] for m in range((ell - i) // x.n + 1)) if i <= ell else 0
                  for i in range(1, x.n + 1))
    rho = tuple(sum(chi[j - 1 + x.theta * m] for m in range((ell - j) // x.theta + 1)) if j <= ell else 0
                for j in range(1, x.theta + 1))
    return alpha, rho


def node_sequence_of(code: FRCode) -> NodeSequence:
    """A node sequence for a uniformly replicated code.

    Drop ``i`` carries packet ``i mod theta`` in cycle ``(i - 1) // theta``; it
    goes to the cycle-th holder of that packet, counting holders with
    multiplicity in node order.
    """
    if not (code.uniform_replication and code.all_packets_stored):
        raise ParameterError("only codes with equal, nonzero packet replication have a node sequence")
    holders = {j: [] for j in range(1, code.theta + 1)}
    for i, node in enumerate(code.nodes, start=1):
        for p in node:
            holders[p].append(i)
    for lst in holders.values():
        lst.sort()
    terms = [holders[wrap(i, code.theta)][(i - 1) // code.theta]
             for i in range(1, code.rho * code.theta + 1)]
    return NodeSequence(tuple(terms), code.n, code.theta)


def ring_layout(d: DroppingSequence) -> List[List[Optional[int]]]:
    """Lay the dropping sequence out as ring rounds.

    Row ``i`` lists, for each full turn of the ring, the packet dropped on node
    ``i`` during that turn (None for a skipped position).
    """
    rounds = -(-len(d.bits) // d.n)
    grid: List[List[Optional[int]]] = [[None] * rounds for _ in range(d.n)]
    for r, node, packet in d.drops():
        grid[node - 1][(r - 1) // d.n] = packet
    return grid


_HEADER = re.compile(r"^\s*n\s*=\s*(\d+)\s+theta\s*=\s*(\d+)\s*$")


def format_sequence(seq) -> str:
    values = seq.terms if isinstance(seq, NodeSequence) else seq.bits
    return f"n={seq.n} theta={seq.theta}\n" + ",".join(str(v) for v in values) + "\n"


def parse_sequence(text: str, kind: str):
    """Parse the two-line text format into a sequence of the given kind."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParameterError("empty sequence file")
    m = _HEADER.match(lines[0])
    if not m:
        raise ParameterError(f"bad header line {lines[0]!r}; expected 'n=<int> theta=<int>'")
    n, theta = int(m.group(1)), int(m.group(2))
    body = ",".join(lines[1:])
    try:
        values = [int(v) for v in body.replace(" ", "").split(",") if v]
    except ValueError as exc:
        raise ParameterError(f"non-integer sequence entry: {exc}") from None
    cls = {"dropping": DroppingSequence, "node": NodeSequence, "chi": ChiSequence}.get(kind)
    if cls is None:
        raise ParameterError(f"unknown sequence kind {kind!r}")
    return cls(tuple(values), n, theta)
