"""GF(2^8) arithmetic and a systematic evaluation MDS code.

Field: reduction polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11d), generator 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Mapping, Sequence

import numpy as np

from flowercode import kernels
from flowercode.errors import FieldSizeError, InsufficientDataError, IntegrityError, ParameterError

PRIM = 0x11D

EXP = np.zeros(512, dtype=np.uint8)
LOG = np.zeros(256, dtype=np.int64)
_x = 1
for _i in range(255):
    EXP[_i] = _x
    LOG[_x] = _i
    _x <<= 1
    if _x & 0x100:
        _x ^= PRIM
EXP[255:510] = EXP[0:255]
del _x, _i

MUL = np.zeros((256, 256), dtype=np.uint8)
_nz = np.arange(1, 256)
MUL[1:, 1:] = EXP[(LOG[_nz][:, None] + LOG[_nz][None, :]) % 255]
del _nz


def mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return int(EXP[LOG[a] + LOG[b]])


def inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(256)")
    return int(EXP[255 - LOG[a]])


def power(a: int, e: int) -> int:
    if e == 0:
        return 1
    if a == 0:
        return 0
    return int(EXP[(LOG[a] * e) % 255])


def mat_inv(m: Sequence[Sequence[int]]) -> List[List[int]]:
    """Gauss-Jordan inverse of a square matrix over GF(256)."""
    size = len(m)
    aug = [list(map(int, row)) + [1 if i == j else 0 for j in range(size)] for i, row in enumerate(m)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col]), None)
        if pivot is None:
            raise ParameterError("matrix is singular over GF(256)")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        f = inv(aug[col][col])
        aug[col] = [mul(f, v) for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                g = aug[r][col]
                aug[r] = [v ^ mul(g, w) for v, w in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def vandermonde(points: Sequence[int], cols: int) -> List[List[int]]:
    return [[power(x, c) for c in range(cols)] for x in points]


@dataclass(frozen=True)
class MDSCode:
    """Systematic code of length ``theta`` and dimension ``B``.

    Coded symbol ``j`` (1-based) is the degree < B interpolant of the message,
    evaluated at field element ``j - 1``; the message sits at points ``0..B-1``,
    so the first ``B`` coded symbols equal the message.
    """

    theta: int
    B: int
    generator: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.theta > 256:
            raise FieldSizeError(f"theta={self.theta} exceeds the 256 field elements")
        if not 1 <= self.B <= self.theta:
            raise ParameterError(f"need 1 <= B <= theta, got B={self.B}, theta={self.theta}")
        full = vandermonde(range(self.theta), self.B)
        top_inv = mat_inv(full[: self.B])
        gen = kernels.gf_matmul(np.array(full, dtype=np.uint8), np.array(top_inv, dtype=np.uint8), MUL)
        object.__setattr__(self, "generator", gen)

    def encode(self, message: np.ndarray) -> np.ndarray:
        """``B x S`` message symbols -> ``theta x S`` coded symbols (row j-1 is packet j)."""
        message = np.asarray(message, dtype=np.uint8)
        if message.ndim != 2 or message.shape[0] != self.B:
            raise ParameterError(f"message must have shape (B={self.B}, stripes)")
        return kernels.gf_matmul(self.generator, message, MUL)

    def decode(self, packets: Mapping[int, np.ndarray]) -> np.ndarray:
        """Recover the ``B x S`` message from any ``B`` or more packets keyed by 1-based index.

        Extra packets beyond the first ``B`` are checked against the re-encoding.
        """
        idx = sorted(packets)
        if any(not 1 <= j <= self.theta for j in idx):
            raise ParameterError(f"packet indices must lie in 1..{self.theta}")
        if len(idx) < self.B:
            raise InsufficientDataError(len(idx), self.B)
        use = idx[: self.B]
        rows = np.stack([np.asarray(packets[j], dtype=np.uint8) for j in use])
        sub_inv = np.array(mat_inv(self.generator[[j - 1 for j in use]]), dtype=np.uint8)
        message = kernels.gf_matmul(sub_inv, rows, MUL)
        extra = idx[self.B:]
        if extra:
            coded = self.encode(message)
            for j in extra:
                if not np.array_equal(coded[j - 1], np.asarray(packets[j], dtype=np.uint8)):
                    raise IntegrityError(f"packet {j} is inconsistent with the other packets")
        return message


@dataclass(frozen=True)
class FileBlob:
    """A payload cut into stripes of ``B`` field symbols (zero padded)."""

    payload: bytes
    B: int

    def __post_init__(self):
        if self.B < 1:
            raise ParameterError("B must be at least 1")

    @property
    def stripes(self) -> int:
        return max(1, -(-len(self.payload) // self.B))

    def message(self) -> np.ndarray:
        """``B x stripes`` matrix; column ``s`` is stripe ``s``."""
        buf = np.zeros(self.stripes * self.B, dtype=np.uint8)
        buf[: len(self.payload)] = np.frombuffer(self.payload, dtype=np.uint8)
        return buf.reshape(self.stripes, self.B).T.copy()

    @classmethod
    def from_message(cls, message: np.ndarray, length: int) -> "FileBlob":
        flat = np.asarray(message, dtype=np.uint8).T.reshape(-1)
        return cls(flat[:length].tobytes(), message.shape[0])


def mds_encode(blob: FileBlob, theta: int) -> List[bytes]:
    """Encode a file into ``theta`` packet blocks, one byte per stripe."""
    coded = MDSCode(theta, blob.B).encode(blob.message())
    return [row.tobytes() for row in coded]


def mds_decode(packets: Mapping[int, bytes], mds: MDSCode, length: int) -> FileBlob:
    arrays = {j: np.frombuffer(b, dtype=np.uint8) for j, b in packets.items()}
    return FileBlob.from_message(mds.decode(arrays), length)
