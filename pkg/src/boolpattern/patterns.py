"""Pattern bit vectors: truth tables of Boolean functions and their algebra.

A :class:`PatternVector` of arity ``n`` stores the ``2**n`` values of a
Boolean function ``f`` indexed by the integer input, so ``bits[i] == f(i)``.
Text output is the MSB-first string ``p_{2^n-1} ... p_1 p_0`` used in the
literature, e.g. ``x1 AND x0`` is ``"1000"``.

The block product ``p (.) q`` replaces every bit of ``p`` by a copy of ``q``
(bit 0) or its complement (bit 1); block ``i`` occupies indices
``[i * len(q), (i + 1) * len(q))`` and so is printed *rightmost* for ``i = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import limits
from .limits import SizeLimitError

__all__ = [
    "PatternVector",
    "PatternBasis",
    "FunctionClassId",
    "I2",
    "B2",
    "from_truth_table",
    "parse",
    "evaluate",
    "negate",
    "xor",
    "is_orthogonal",
    "product",
    "extended_product",
    "basis_I",
    "basis_B",
    "basis_product",
    "verify_basis",
]


class PatternError(ValueError):
    """Malformed pattern input."""


class ArityMismatchError(ValueError):
    """Two patterns of different arity were combined element-wise."""


def _log2_exact(length: int) -> int:
    if length < 2 or length & (length - 1):
        raise PatternError(f"pattern length must be a power of two >= 2, got {length}")
    return length.bit_length() - 1


class PatternVector:
    """Immutable truth table of an ``arity``-input Boolean function."""

    __slots__ = ("_bits", "_arity")

    def __init__(self, bits: np.ndarray | Sequence[int]):
        arr = np.array(bits, dtype=np.uint8).ravel()
        arity = _log2_exact(arr.size)
        limits.check_rank(arity)
        if arr.size and arr.max(initial=0) > 1:
            raise PatternError("pattern bits must be 0 or 1")
        arr.setflags(write=False)
        self._bits = arr
        self._arity = arity

    @classmethod
    def _wrap(cls, arr: np.ndarray, arity: int) -> PatternVector:
        # Internal fast path for arrays already known to be valid.
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        obj._bits = arr
        obj._arity = arity
        return obj

    @property
    def arity(self) -> int:
        return self._arity

    @property
    def bits(self) -> np.ndarray:
        """Read-only ``uint8`` view, ``bits[i] == f(i)``."""
        return self._bits

    def __len__(self) -> int:
        return self._bits.size

    def __getitem__(self, i: int) -> int:
        return int(self._bits[i])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PatternVector):
            return NotImplemented
        return self._arity == other._arity and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self) -> int:
        return hash((self._arity, self._bits.tobytes()))

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        text = self.format() if self._arity <= 6 else f"<{len(self)} bits>"
        return f"PatternVector({text!r})"

    def popcount(self) -> int:
        return int(self._bits.sum(dtype=np.int64))

    def format(self) -> str:
        """Canonical MSB-first binary string, no separators."""
        return (self._bits[::-1] + ord("0")).tobytes().decode("ascii")

    def to_json(self) -> dict:
        return {"arity": self._arity, "bits": self.format()}

    @classmethod
    def from_json(cls, obj: dict) -> PatternVector:
        p = parse(obj["bits"])
        if p.arity != obj["arity"]:
            raise PatternError(f"arity {obj['arity']} does not match {len(p)}-bit string")
        return p

    def blocks(self, block_length: int) -> np.ndarray:
        """View as ``(len // block_length, block_length)``; row ``r`` is block ``r``."""
        return self._bits.reshape(-1, block_length)


def parse(text: str) -> PatternVector:
    """Parse an MSB-first bit string; whitespace between digits is ignored."""
    digits = "".join(text.split())
    if not digits or set(digits) - {"0", "1"}:
        raise PatternError(f"not a binary pattern string: {text!r}")
    _log2_exact(len(digits))
    arr = np.frombuffer(digits.encode("ascii"), dtype=np.uint8)[::-1] - ord("0")
    return PatternVector(arr)


def from_truth_table(values: Iterable[int]) -> PatternVector:
    """Pattern whose bit ``i`` is ``values[i]`` (LSB-first truth table)."""
    return PatternVector(list(values))


def evaluate(p: PatternVector, x: int) -> int:
    if not 0 <= x < len(p):
        raise IndexError(f"input {x} out of range for arity {p.arity}")
    return int(p.bits[x])


def negate(p: PatternVector) -> PatternVector:
    return PatternVector._wrap(p.bits ^ 1, p.arity)


def _same_arity(p: PatternVector, q: PatternVector) -> None:
    if p.arity != q.arity:
        raise ArityMismatchError(f"arity {p.arity} != {q.arity}")


def xor(p: PatternVector, q: PatternVector) -> PatternVector:
    _same_arity(p, q)
    return PatternVector._wrap(p.bits ^ q.bits, p.arity)


def is_orthogonal(p: PatternVector, q: PatternVector) -> bool:
    """True iff ``p XOR q`` has exactly half of its bits set."""
    _same_arity(p, q)
    ones = int(np.count_nonzero(p.bits != q.bits))
    return ones == len(p) // 2


def product(p: PatternVector, q: PatternVector) -> PatternVector:
    """Block product: block ``i`` is ``q`` if ``p[i] == 0`` else ``~q``."""
    arity = p.arity + q.arity
    limits.check_rank(arity)
    flipped = q.bits ^ 1
    out = np.empty((len(p), len(q)), dtype=np.uint8)
    out[:] = q.bits
    out[p.bits.astype(bool)] = flipped
    return PatternVector._wrap(out.ravel(), arity)


def extended_product(f: PatternVector, g: PatternVector) -> PatternVector:
    """Truth table of ``h(j + i * 2**arity(g)) = g(j) XOR f(i)``.

    Built from function values rather than blocks, so it serves as an
    independent route to :func:`product`.
    """
    arity = f.arity + g.arity
    limits.check_rank(arity)
    h = np.bitwise_xor.outer(f.bits, g.bits)
    return PatternVector._wrap(h.ravel(), arity)


@dataclass(frozen=True)
class FunctionClassId:
    """Names ``f_index`` of F_rank (family ``"F"``) or ``g_index`` of G_rank (``"G"``)."""

    family: str
    rank: int
    index: int

    def __post_init__(self):
        if self.family not in ("F", "G"):
            raise ValueError(f"family must be 'F' or 'G', got {self.family!r}")
        if self.rank < 2 or self.rank % 2:
            raise ValueError(f"class rank must be even and >= 2, got {self.rank}")
        if not 0 <= self.index < 2**self.rank:
            raise ValueError(f"index {self.index} out of range for rank {self.rank}")

    def pattern(self) -> PatternVector:
        basis = basis_I if self.family == "F" else basis_B
        return basis(self.rank // 2).member(self.index)


class PatternBasis:
    """Ordered list of ``2**rank`` patterns of arity ``rank``.

    A basis is stored as a tuple of *factors*, each an explicit list of
    patterns; the basis itself is their iterated block product.  Member
    ``index`` is looked up digit by digit (first factor most significant),
    so large product bases are never materialized unless asked.
    """

    __slots__ = ("_factors", "_rank")

    def __init__(self, members: Sequence[PatternVector]):
        members = tuple(members)
        if not members:
            raise PatternError("a basis needs at least one member")
        arity = members[0].arity
        if any(m.arity != arity for m in members):
            raise ArityMismatchError("basis members must share one arity")
        self._factors = (members,)
        self._rank = arity

    @classmethod
    def _from_factors(cls, factors: tuple) -> PatternBasis:
        obj = cls.__new__(cls)
        obj._factors = factors
        obj._rank = sum(f[0].arity for f in factors)
        return obj

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def factors(self) -> tuple:
        return self._factors

    def __len__(self) -> int:
        n = 1
        for f in self._factors:
            n *= len(f)
        return n

    def member(self, index: int) -> PatternVector:
        size = len(self)
        if not 0 <= index < size:
            raise IndexError(f"basis index {index} out of range [0, {size})")
        digits = []
        for f in reversed(self._factors):
            index, d = divmod(index, len(f))
            digits.append(f[d])
        result = digits[0]
        for p in digits[1:]:
            result = product(p, result)
        return result

    __getitem__ = member

    def __iter__(self) -> Iterator[PatternVector]:
        for i in range(len(self)):
            yield self.member(i)

    @property
    def members(self) -> list[PatternVector]:
        """Materialize every member (refused above the basis size limit)."""
        limit = limits.max_basis_rank()
        if self._rank > limit:
            raise SizeLimitError(f"basis of rank {self._rank} exceeds materialization limit {limit}")
        if len(self._factors) == 1:
            return list(self._factors[0])
        return list(self)

    def sign_matrix(self) -> np.ndarray:
        """``(len, 2**rank)`` array of +-1, row ``i`` is ``(-1)**member(i)``."""
        limit = limits.max_basis_rank()
        if self._rank > limit:
            raise SizeLimitError(f"basis of rank {self._rank} exceeds materialization limit {limit}")
        mats = [1 - 2 * np.stack([m.bits for m in f]).astype(np.int64) for f in self._factors]
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out

    def __repr__(self) -> str:
        return f"PatternBasis(rank={self._rank}, size={len(self)})"


I2 = PatternBasis([parse(s) for s in ("0001", "0010", "0100", "1000")])
B2 = PatternBasis([parse(s) for s in ("0000", "0101", "0011", "0110")])


def basis_product(P: PatternBasis, Q: PatternBasis) -> PatternBasis:
    """Row-major product: member ``a * len(Q) + b`` is ``P[a] (.) Q[b]``."""
    limits.check_rank(P.rank + Q.rank, "basis")
    return PatternBasis._from_factors(P.factors + Q.factors)


def _power_basis(base: PatternBasis, half_rank: int) -> PatternBasis:
    if half_rank < 1:
        raise ValueError(f"half rank must be >= 1, got {half_rank}")
    limits.check_rank(2 * half_rank, "basis")
    return PatternBasis._from_factors(base.factors * half_rank)


def basis_I(half_rank: int) -> PatternBasis:
    """Imbalanced basis of rank ``2 * half_rank`` (I2, I2 (.) I2, ...)."""
    return _power_basis(I2, half_rank)


def basis_B(half_rank: int) -> PatternBasis:
    """Balanced basis of rank ``2 * half_rank``; member 0 is constant zero."""
    return _power_basis(B2, half_rank)


def verify_basis(P: PatternBasis | Sequence[PatternVector]) -> bool:
    """Check member count, member lengths and pairwise orthogonality."""
    members = P.members if isinstance(P, PatternBasis) else list(P)
    if not members:
        return False
    arity = members[0].arity
    if len(members) != 2**arity or any(m.arity != arity for m in members):
        return False
    # Orthogonal bit vectors <=> +-1 sign vectors with zero inner product.
    signs = 1 - 2 * np.stack([m.bits for m in members]).astype(np.int64)
    gram = signs @ signs.T
    return bool(np.array_equal(gram, len(members) * np.eye(len(members), dtype=np.int64)))


def all_patterns(arity: int) -> Iterator[PatternVector]:
    """Every pattern of the given arity (``2**2**arity`` of them)."""
    for bits in itertools.product((0, 1), repeat=2**arity):
        yield PatternVector(bits)
