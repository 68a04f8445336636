"""FR code data model: node multisets, incidence matrices, replication profiles."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from flowercode.errors import ParameterError, RangeError


def wrap(x: int, modulus: int) -> int:
    """Reduce ``x`` into ``1..modulus``: residue 0 maps to ``modulus``."""
    r = x % modulus
    return modulus if r == 0 else r


@dataclass(frozen=True)
class Profiles:
    alpha_vec: Tuple[int, ...]
    rho_vec: Tuple[int, ...]

    @property
    def alpha(self) -> int:
        return max(self.alpha_vec, default=0)

    @property
    def rho(self) -> int:
        return max(self.rho_vec, default=0)


@dataclass(frozen=True)
class FRCode:
    """``n`` storage nodes, each holding a multiset of packet indices from ``1..theta``.

    Node contents keep insertion order; ``nodes[i - 1]`` is node ``U_i``.
    """

    n: int
    theta: int
    nodes: Tuple[Tuple[int, ...], ...]
    _profiles: Profiles = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1 or self.theta < 1:
            raise ParameterError(f"need n >= 1 and theta >= 1, got n={self.n}, theta={self.theta}")
        if len(self.nodes) != self.n:
            raise ParameterError(f"expected {self.n} nodes, got {len(self.nodes)}")
        alpha = []
        rho = [0] * self.theta
        for i, node in enumerate(self.nodes, start=1):
            for p in node:
                if not 1 <= p <= self.theta:
                    raise RangeError(f"packet index {p} on node {i} outside 1..{self.theta}")
                rho[p - 1] += 1
            alpha.append(len(node))
        object.__setattr__(self, "_profiles", Profiles(tuple(alpha), tuple(rho)))

    def node(self, i: int) -> Tuple[int, ...]:
        if not 1 <= i <= self.n:
            raise RangeError(f"node index {i} outside 1..{self.n}")
        return self.nodes[i - 1]

    def profiles(self) -> Profiles:
        return self._profiles

    @property
    def alpha(self) -> int:
        return self._profiles.alpha

    @property
    def rho(self) -> int:
        return self._profiles.rho

    @property
    def all_packets_stored(self) -> bool:
        return all(r >= 1 for r in self._profiles.rho_vec)

    @property
    def is_strict(self) -> bool:
        """Every packet stored at least once and no node is empty."""
        return self.all_packets_stored and all(a >= 1 for a in self._profiles.alpha_vec)

    @property
    def uniform_replication(self) -> bool:
        return len(set(self._profiles.rho_vec)) == 1

    @property
    def binary(self) -> bool:
        return all(len(set(node)) == len(node) for node in self.nodes)

    def canonical(self) -> Tuple[Tuple[int, ...], ...]:
        """Node contents as sorted tuples (multiset equality)."""
        return tuple(tuple(sorted(node)) for node in self.nodes)

    def same_distribution(self, other: "FRCode") -> bool:
        return (self.n, self.theta) == (other.n, other.theta) and self.canonical() == other.canonical()

    def holders(self, packet: int) -> List[int]:
        """Nodes that store ``packet`` (ascending, each node once)."""
        return [i for i, node in enumerate(self.nodes, start=1) if packet in node]

    def to_dict(self) -> dict:
        return {"n": self.n, "theta": self.theta, "nodes": [list(node) for node in self.nodes]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict, strict: bool = False) -> "FRCode":
        code = build_code(data["nodes"], data["theta"], strict=strict)
        if code.n != data.get("n", code.n):
            raise ParameterError(f"declared n={data['n']} but {code.n} node lists given")
        return code

    @classmethod
    def from_json(cls, text: str, strict: bool = False) -> "FRCode":
        return cls.from_dict(json.loads(text), strict=strict)


def build_code(node_lists: Sequence[Iterable[int]], theta: int, strict: bool = True) -> FRCode:
    """Build an FR code from per-node packet lists.

    In strict mode every packet must be stored at least once and no node may be
    empty; otherwise such codes are allowed (decoders produce them routinely).
    """
    if len(node_lists) == 0:
        raise ParameterError("an FR code needs at least one node")
    nodes = tuple(tuple(int(p) for p in node) for node in node_lists)
    code = FRCode(len(nodes), int(theta), nodes)
    if strict:
        problems = validate(code, strict=True)
        if problems:
            raise ParameterError("; ".join(problems))
    return code


def incidence_matrix(code: FRCode) -> np.ndarray:
    """``n x theta`` integer matrix; entry ``[i-1, j-1]`` counts packet ``j`` on node ``i``."""
    m = np.zeros((code.n, code.theta), dtype=np.int64)
    for i, node in enumerate(code.nodes):
        for p in node:
            m[i, p - 1] += 1
    return m


def profiles(code: FRCode) -> Profiles:
    prof = code.profiles()
    assert sum(prof.alpha_vec) == sum(prof.rho_vec)
    return prof


def validate(code: FRCode, strict: bool = True) -> List[str]:
    """Report violations; an empty list means the code is well formed."""
    prof = code.profiles()
    problems = []
    if strict:
        for j, r in enumerate(prof.rho_vec, start=1):
            if r == 0:
                problems.append(f"rho_{j} = 0")
        for i, a in enumerate(prof.alpha_vec, start=1):
            if a == 0:
                problems.append(f"node {i} is empty")
    if sum(prof.alpha_vec) != sum(prof.rho_vec):
        problems.append(f"sum(alpha)={sum(prof.alpha_vec)} != sum(rho)={sum(prof.rho_vec)}")
    return problems


def validate_matrix(matrix: np.ndarray, rho_vec: Sequence[int] | None = None,
                    alpha_vec: Sequence[int] | None = None, strict: bool = True) -> List[str]:
    """Check a deserialized matrix against declared profiles.

    Declared column (row) sums that disagree with the entries are reported as
    identity violations.
    """
    m = np.asarray(matrix)
    problems = []
    if m.ndim != 2 or (m < 0).any():
        return ["matrix must be 2-D with nonnegative entries"]
    cols = m.sum(axis=0)
    rows = m.sum(axis=1)
    if rho_vec is not None:
        for j, (declared, actual) in enumerate(zip(rho_vec, cols), start=1):
            if declared != actual:
                problems.append(f"identity violation: declared rho_{j}={declared}, column sum {actual}")
        if sum(rho_vec) != m.sum():
            problems.append(f"identity violation: sum(rho)={sum(rho_vec)} != total {m.sum()}")
    if alpha_vec is not None:
        for i, (declared, actual) in enumerate(zip(alpha_vec, rows), start=1):
            if declared != actual:
                problems.append(f"identity violation: declared alpha_{i}={declared}, row sum {actual}")
    if strict:
        problems += [f"rho_{j} = 0" for j, c in enumerate(cols, start=1) if c == 0]
    return problems


def code_from_matrix(matrix: np.ndarray, strict: bool = False) -> FRCode:
    m = np.asarray(matrix, dtype=np.int64)
    if m.ndim != 2 or (m < 0).any():
        raise ParameterError("incidence matrix must be 2-D with nonnegative entries")
    nodes = [[j + 1 for j in range(m.shape[1]) for _ in range(m[i, j])] for i in range(m.shape[0])]
    return build_code(nodes, m.shape[1], strict=strict)


def matrix_to_csv(matrix: np.ndarray) -> str:
    m = np.asarray(matrix)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node"] + [f"P{j}" for j in range(1, m.shape[1] + 1)])
    for i, row in enumerate(m, start=1):
        w.writerow([f"U{i}"] + [int(x) for x in row])
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][:1] != ["node"]:
        raise ParameterError("CSV matrix must start with a 'node,P1..' header")
    return np.array([[int(x) for x in row[1:]] for row in rows[1:] if row], dtype=np.int64)

