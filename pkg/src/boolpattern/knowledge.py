"""What a cluster classification tells Alice about the hidden pattern.

For a left cluster function ``h = g_j * f_i`` the pattern of ``h`` is
``2**2m`` blocks of length ``2**2n``, each equal to ``p_{f_i}`` or to its
complement depending on the matching (unknown) bit of ``p_{g_j}``.  For a
right cluster function ``h = f_i * g_j`` it is ``2**2n`` blocks of length
``2**2m``; block ``r`` is ``p_{g_j}`` when bit ``r`` of ``p_{f_i}`` is 0 and its
complement otherwise, so the block flags are fully known while ``p_{g_j}``
itself is not.

Knowledge is kept as constraints (block signs, known bits) rather than as
a candidate set; :func:`enumerate_completions` expands it at small ranks.
Global bit positions count from the LSB of the whole pattern, and block
``r`` spans ``[r * block_length, (r + 1) * block_length)``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import limits
from .classifier import ClassificationResult, ClassTag, LeftCluster, RightCluster
from .limits import SizeLimitError
from .patterns import ArityMismatchError, PatternVector, basis_B, basis_I, extended_product

EQUAL = "equal"
NEGATED = "negated"


class KnowledgeConflictError(ValueError):
    """A revealed bit contradicts what is already known."""


@dataclass(frozen=True)
class ClusterKnowledge:
    side: str  # "left" | "right"
    n: int
    m: int
    f_index: int
    block_length: int
    num_blocks: int
    # Per block: EQUAL / NEGATED, or None while unresolved (left side only).
    block_relation: tuple
    # Left: p_{f_i}, the pattern every block matches up to complement.
    # Right: None.
    xor_profile: PatternVector | None
    # Right: known bits of the unknown block pattern p_g (None = unknown).
    # Left: empty tuple.
    block_bits: tuple = ()

    @property
    def rank(self) -> int:
        return 2 * (self.n + self.m)

    @property
    def f_pattern(self) -> PatternVector:
        return basis_I(self.n).member(self.f_index)

    def resolved_bits(self) -> np.ndarray:
        """Full-length array of known bits, ``-1`` where a bit is undetermined."""
        out = np.full((self.num_blocks, self.block_length), -1, dtype=np.int8)
        if self.side == "left":
            ref = self.xor_profile.bits
            for r, rel in enumerate(self.block_relation):
                if rel is not None:
                    out[r] = ref ^ (rel == NEGATED)
        else:
            for k, b in enumerate(self.block_bits):
                if b is not None:
                    for r, rel in enumerate(self.block_relation):
                        out[r, k] = b ^ (rel == NEGATED)
        return out.ravel()

    def to_json(self, completions: list[PatternVector] | None = None) -> dict:
        out = {
            "side": self.side,
            "n": self.n,
            "m": self.m,
            "f_index": self.f_index,
            "block_length": self.block_length,
            "num_blocks": self.num_blocks,
            "block_flags": list(self.block_relation),
            "xor_profile": self.xor_profile.format() if self.xor_profile is not None else None,
            "known_bits": "".join(
                "x" if b < 0 else str(int(b)) for b in self.resolved_bits()[::-1]
            ),
        }
        if completions is not None:
            out["completions"] = [c.format() for c in completions]
        return out


def knowledge_for(tag: ClassTag, f_index: int) -> ClusterKnowledge:
    """Knowledge implied by learning ``f_index`` under a cluster announcement."""
    if isinstance(tag, LeftCluster):
        f = basis_I(tag.n).member(f_index)
        return ClusterKnowledge(
            side="left",
            n=tag.n,
            m=tag.m,
            f_index=f_index,
            block_length=2 ** (2 * tag.n),
            num_blocks=2 ** (2 * tag.m),
            block_relation=(None,) * 2 ** (2 * tag.m),
            xor_profile=f,
        )
    if isinstance(tag, RightCluster):
        f = basis_I(tag.n).member(f_index)
        flags = tuple(NEGATED if b else EQUAL for b in f.bits)
        return ClusterKnowledge(
            side="right",
            n=tag.n,
            m=tag.m,
            f_index=f_index,
            block_length=2 ** (2 * tag.m),
            num_blocks=2 ** (2 * tag.n),
            block_relation=flags,
            xor_profile=None,
            block_bits=(None,) * 2 ** (2 * tag.m),
        )
    raise ValueError(f"knowledge is only defined for cluster classes, got {tag}")


def derive_knowledge(result: ClassificationResult, announced: ClassTag | None = None) -> ClusterKnowledge:
    announced = result.announced if announced is None else announced
    kind = result.verdict.kind
    if kind == "partial_left" and isinstance(announced, LeftCluster):
        return knowledge_for(announced, result.verdict.f_index)
    if kind == "partial_right" and isinstance(announced, RightCluster):
        return knowledge_for(announced, result.verdict.f_index)
    raise ValueError(f"verdict {result.verdict} under {announced} is not a cluster verdict")


def check_consistency(k: ClusterKnowledge, candidate: PatternVector) -> bool:
    if candidate.arity != k.rank:
        raise ArityMismatchError(f"candidate arity {candidate.arity} vs knowledge rank {k.rank}")
    blocks = candidate.blocks(k.block_length)
    if k.side == "left":
        diff = blocks ^ k.xor_profile.bits
        signs = diff[:, 0]
        if not np.all(diff == signs[:, None]):
            return False
        for sign, rel in zip(signs, k.block_relation):
            if rel is not None and bool(sign) != (rel == NEGATED):
                return False
        return True
    flags = np.array([rel == NEGATED for rel in k.block_relation], dtype=np.uint8)
    g = blocks ^ flags[:, None]
    if not np.all(g == g[0]):
        return False
    return all(b is None or g[0, i] == b for i, b in enumerate(k.block_bits))


def propagate_bit(k: ClusterKnowledge, position: int, value: int) -> ClusterKnowledge:
    """Fold one revealed bit of the hidden pattern into the knowledge."""
    if not 0 <= position < 2**k.rank:
        raise IndexError(f"position {position} outside pattern of rank {k.rank}")
    if value not in (0, 1):
        raise ValueError(f"bit value must be 0 or 1, got {value!r}")
    r, offset = divmod(position, k.block_length)
    if k.side == "left":
        rel = NEGATED if value ^ k.xor_profile[offset] else EQUAL
        current = k.block_relation[r]
        if current is not None and current != rel:
            raise KnowledgeConflictError(f"block {r} is already known to be {current}")
        relations = list(k.block_relation)
        relations[r] = rel
        return replace(k, block_relation=tuple(relations))
    g_bit = value ^ (k.block_relation[r] == NEGATED)
    current = k.block_bits[offset]
    if current is not None and current != g_bit:
        raise KnowledgeConflictError(f"bit {position} contradicts an earlier reveal")
    bits = list(k.block_bits)
    bits[offset] = int(g_bit)
    return replace(k, block_bits=tuple(bits))


def enumerate_completions(k: ClusterKnowledge) -> list[PatternVector]:
    """All cluster functions with the known f-component that fit ``k``."""
    if k.rank > limits.MAX_ENUMERATION_RANK:
        raise SizeLimitError(f"enumeration limited to rank {limits.MAX_ENUMERATION_RANK}, got {k.rank}")
    f = k.f_pattern
    out = []
    for g in basis_B(k.m):
        h = extended_product(g, f) if k.side == "left" else extended_product(f, g)
        if check_consistency(k, h):
            out.append(h)
    return out
