"""The single-query pattern classifier and the Alice/Bob classification game.

Bob hides a Boolean function behind a phase oracle and announces the class
it comes from.  Alice prepares ``H^{(x)k}|0...0>``, queries the oracle once,
applies ``C_{I2}^{(x)k/2}`` and measures:

* a member ``f_i`` of the promised class ``F_2n`` yields ``|i>`` with certainty;
* a member of ``G_2m`` yields every outcome with probability ``2**(-2m)``;
* a left cluster function ``g_j * f_i`` yields ``x i`` (``x`` uniform on the
  ``2m`` high qubits), a right cluster function ``f_i * g_j`` yields ``i x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import limits
from .patterns import PatternVector, basis_B, basis_I, extended_product
from .statevector import (
    OutcomeDistribution,
    PhaseOracle,
    StateVector,
    apply_classifier,
    bitstring,
    hadamard_all,
    measure_distribution,
    sample,
)

POINT_MASS_TOL = 1e-6
UNIFORM_TOL = 1e-6


@dataclass(frozen=True)
class Promised:
    """``F_2n`` for ``n = half_rank``."""

    n: int

    @property
    def rank(self) -> int:
        return 2 * self.n

    def __str__(self) -> str:
        return f"F:{self.n}"


@dataclass(frozen=True)
class Balanced:
    """``G_2m``; Alice still runs the promised-class test on it."""

    m: int

    @property
    def rank(self) -> int:
        return 2 * self.m

    def __str__(self) -> str:
        return f"G:{self.m}"


@dataclass(frozen=True)
class LeftCluster:
    """``G_2m * F_2n``: functions ``g * f``, f-component on the low qubits."""

    m: int
    n: int

    @property
    def rank(self) -> int:
        return 2 * (self.m + self.n)

    def __str__(self) -> str:
        return f"left:{self.m},{self.n}"


@dataclass(frozen=True)
class RightCluster:
    """``F_2n * G_2m``: functions ``f * g``, f-component on the high qubits."""

    n: int
    m: int

    @property
    def rank(self) -> int:
        return 2 * (self.n + self.m)

    def __str__(self) -> str:
        return f"right:{self.n},{self.m}"


ClassTag = Union[Promised, Balanced, LeftCluster, RightCluster]


def parse_class_tag(text: str, arity: int | None = None) -> ClassTag:
    """Parse ``F``, ``F:n``, ``G``, ``G:m``, ``left:m,n`` or ``right:n,m``.

    The bare ``F``/``G`` forms take their rank from ``arity``.
    """
    head, _, rest = text.strip().partition(":")
    family = head.lower()
    try:
        nums = [int(v) for v in rest.split(",")] if rest else []
    except ValueError:
        raise ValueError(f"bad class tag {text!r}") from None
    if family in ("f", "g"):
        if not nums:
            if arity is None or arity % 2:
                raise ValueError(f"class {text!r} needs an even-arity pattern or an explicit half rank")
            nums = [arity // 2]
        if len(nums) != 1 or nums[0] < 1:
            raise ValueError(f"bad class tag {text!r}")
        return Promised(nums[0]) if family == "f" else Balanced(nums[0])
    if family in ("left", "right"):
        if len(nums) != 2 or min(nums) < 1:
            raise ValueError(f"cluster tag needs two positive half ranks: {text!r}")
        return LeftCluster(*nums) if family == "left" else RightCluster(*nums)
    raise ValueError(f"unknown class family in {text!r}")


def promised_function(n: int, i: int) -> PatternVector:
    return basis_I(n).member(i)


def balanced_function(m: int, j: int) -> PatternVector:
    return basis_B(m).member(j)


def left_cluster_function(m: int, n: int, j: int, i: int) -> PatternVector:
    """``g_j * f_i`` with ``g_j`` in ``G_2m`` and ``f_i`` in ``F_2n``."""
    return extended_product(balanced_function(m, j), promised_function(n, i))


def right_cluster_function(n: int, m: int, i: int, j: int) -> PatternVector:
    """``f_i * g_j`` with ``f_i`` in ``F_2n`` and ``g_j`` in ``G_2m``."""
    return extended_product(promised_function(n, i), balanced_function(m, j))


@dataclass(frozen=True)
class OracleSpec:
    """Bob's hidden function together with his announced class."""

    pattern: PatternVector
    announced: ClassTag

    def __post_init__(self):
        if self.pattern.arity != self.announced.rank:
            raise ValueError(
                f"pattern arity {self.pattern.arity} does not match announced {self.announced} "
                f"(rank {self.announced.rank})"
            )

    @classmethod
    def promised(cls, n: int, i: int) -> OracleSpec:
        return cls(promised_function(n, i), Promised(n))

    @classmethod
    def balanced(cls, m: int, j: int) -> OracleSpec:
        return cls(balanced_function(m, j), Balanced(m))

    @classmethod
    def left(cls, m: int, n: int, j: int, i: int) -> OracleSpec:
        return cls(left_cluster_function(m, n, j, i), LeftCluster(m, n))

    @classmethod
    def right(cls, n: int, m: int, i: int, j: int) -> OracleSpec:
        return cls(right_cluster_function(n, m, i, j), RightCluster(n, m))


@dataclass(frozen=True)
class Verdict:
    kind: str  # "identified" | "partial_left" | "partial_right" | "inconclusive"
    f_index: int | None = None
    random_part: int | None = None

    @property
    def conclusive(self) -> bool:
        return self.kind != "inconclusive"

    def __str__(self) -> str:
        names = {
            "identified": "Identified",
            "partial_left": "PartialLeft",
            "partial_right": "PartialRight",
        }
        if self.kind == "inconclusive":
            return "Inconclusive"
        return f"{names[self.kind]}({self.f_index})"


@dataclass(frozen=True)
class ClassificationResult:
    verdict: Verdict
    distribution: OutcomeDistribution
    announced: ClassTag
    shot: str | None = None

    @property
    def winner(self) -> str:
        return "alice" if self.verdict.conclusive else "bob"

    def to_json(self) -> dict:
        out = {
            "announced": str(self.announced),
            "verdict": self.verdict.kind,
            "f_index": self.verdict.f_index,
            "winner": self.winner,
            "distribution": self.distribution.to_json(),
        }
        if self.shot is not None:
            out["shot"] = self.shot
            out["random_part"] = self.verdict.random_part
        return out


def run_circuit(o: OracleSpec, oracle: PhaseOracle | None = None) -> OutcomeDistribution:
    """Prepare, query once, classify, and return the exact outcome distribution.

    ``oracle`` may be passed to observe the query count; it must hide
    ``o.pattern``.
    """
    k = o.pattern.arity
    if k % 2:
        raise ValueError(f"classifier circuit needs an even rank, got {k}")
    limits.check_qubits(k)
    if oracle is None:
        oracle = PhaseOracle(o.pattern)
    calls_before = oracle.calls
    state = hadamard_all(StateVector.basis_state(k))
    state = oracle(state)
    state = apply_classifier(state)
    assert oracle.calls - calls_before == 1
    return measure_distribution(state)


def _is_point_mass(p: np.ndarray, tol: float) -> bool:
    return float(p.max()) >= 1.0 - tol


def _is_uniform(p: np.ndarray, tol: float) -> bool:
    return float(np.max(np.abs(p - 1.0 / p.size))) <= tol


def classify(
    d: OutcomeDistribution,
    announced: ClassTag,
    *,
    point_mass_tol: float = POINT_MASS_TOL,
    uniform_tol: float = UNIFORM_TOL,
) -> ClassificationResult:
    """Decide from the exact distribution what Alice learns.

    Bob's announcement fixes which sub-register is read; a distribution that
    does not have the expected shape is reported as inconclusive.
    """
    if d.num_qubits != announced.rank:
        raise ValueError(f"{d.num_qubits}-qubit distribution vs announced rank {announced.rank}")
    probs = d.probabilities
    verdict = Verdict("inconclusive")
    if isinstance(announced, (Promised, Balanced)):
        if _is_point_mass(probs, point_mass_tol):
            verdict = Verdict("identified", d.argmax())
    elif isinstance(announced, LeftCluster):
        low = d.marginal(2 * announced.n, "low")
        high = d.marginal(2 * announced.n, "high")
        if _is_point_mass(low, point_mass_tol) and _is_uniform(high, uniform_tol):
            verdict = Verdict("partial_left", int(np.argmax(low)))
    elif isinstance(announced, RightCluster):
        low_bits = 2 * announced.m
        high = d.marginal(low_bits, "high")
        low = d.marginal(low_bits, "low")
        if _is_point_mass(high, point_mass_tol) and _is_uniform(low, uniform_tol):
            verdict = Verdict("partial_right", int(np.argmax(high)))
    else:
        raise TypeError(f"unknown class tag {announced!r}")
    return ClassificationResult(verdict, d, announced)


def _random_part(verdict: Verdict, announced: ClassTag, outcome: int) -> int | None:
    if verdict.kind == "partial_left":
        return outcome >> (2 * announced.n)
    if verdict.kind == "partial_right":
        return outcome & ((1 << (2 * announced.m)) - 1)
    return None


def play_game(bob: OracleSpec, seed: int | None = None) -> ClassificationResult:
    """One round: a single oracle query, one sampled shot, verdict from exact odds."""
    oracle = PhaseOracle(bob.pattern)
    d = run_circuit(bob, oracle)
    result = classify(d, bob.announced)
    (shot,) = sample(d, 1, seed)
    outcome = int(shot, 2)
    verdict = Verdict(
        result.verdict.kind,
        result.verdict.f_index,
        _random_part(result.verdict, bob.announced, outcome),
    )
    return ClassificationResult(verdict, d, bob.announced, shot=bitstring(outcome, d.num_qubits))
