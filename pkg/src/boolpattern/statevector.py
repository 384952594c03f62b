"""Real-amplitude state-vector simulation of the pattern classifier circuit.

Every gate involved (H, Z, CZ, the phase oracle and the 4x4 classifier
block) is real, so amplitudes are stored as ``float64``.  Qubit ``q`` is bit
``q`` of the basis-state index (little endian); bit strings are printed
MSB-first.

The output register of the usual ``|x>|y> -> |x>|y XOR f(x)>`` oracle is
never simulated: with the register held in ``|->`` the oracle reduces to
the phase flip ``|x> -> (-1)**f(x) |x>`` on the input register.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from . import limits
from .limits import SizeLimitError
from .patterns import PatternVector

NORM_TOL = 1e-9
PRINT_FLOOR = 1e-12

# C_{I2} columns are the pattern kets of I2 = (0001, 0010, 0100, 1000).
CI2 = np.full((4, 4), 0.5) - np.eye(4)

H1 = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
Z1 = np.diag([1.0, -1.0])
CZ = np.diag([1.0, 1.0, 1.0, -1.0])


class DimensionError(ValueError):
    """State and operator sizes do not agree."""


def bitstring(index: int, width: int) -> str:
    return format(index, f"0{width}b")


class StateVector:
    """``2**num_qubits`` real amplitudes with unit norm."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, amplitudes, *, check_norm: bool = True):
        amps = np.array(amplitudes, dtype=np.float64).ravel()
        size = amps.size
        if size < 2 or size & (size - 1):
            raise DimensionError(f"state length must be a power of two >= 2, got {size}")
        k = size.bit_length() - 1
        limits.check_qubits(k)
        if check_norm:
            norm2 = float(amps @ amps)
            if abs(norm2 - 1.0) > NORM_TOL:
                raise ValueError(f"state is not normalized (|psi|^2 = {norm2!r})")
        self.num_qubits = k
        self.amplitudes = amps

    @classmethod
    def basis_state(cls, num_qubits: int, index: int = 0) -> StateVector:
        limits.check_qubits(num_qubits)
        amps = np.zeros(2**num_qubits)
        amps[index] = 1.0
        return cls(amps, check_norm=False)

    @classmethod
    def _wrap(cls, amps: np.ndarray) -> StateVector:
        obj = cls.__new__(cls)
        obj.amplitudes = amps
        obj.num_qubits = amps.size.bit_length() - 1
        return obj

    def __len__(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.sqrt(self.amplitudes @ self.amplitudes))

    def inner(self, other: StateVector) -> float:
        if other.num_qubits != self.num_qubits:
            raise DimensionError(f"{self.num_qubits} vs {other.num_qubits} qubits")
        return float(self.amplitudes @ other.amplitudes)

    def tensor(self, other: StateVector) -> StateVector:
        """``self (x) other``; ``self`` lands on the more significant qubits."""
        limits.check_qubits(self.num_qubits + other.num_qubits)
        return StateVector._wrap(np.kron(self.amplitudes, other.amplitudes))

    def allclose(self, other: StateVector, atol: float = NORM_TOL) -> bool:
        return self.num_qubits == other.num_qubits and bool(
            np.allclose(self.amplitudes, other.amplitudes, rtol=0.0, atol=atol)
        )

    def to_json(self) -> dict:
        return {
            "qubits": self.num_qubits,
            "amplitudes": {
                bitstring(i, self.num_qubits): float(a)
                for i, a in enumerate(self.amplitudes)
                if abs(a) > PRINT_FLOOR
            },
        }

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits})"


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Exact Born-rule probabilities over the computational basis."""

    num_qubits: int
    probabilities: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=np.float64)
        if p.size != 2**self.num_qubits:
            raise DimensionError(f"{p.size} probabilities for {self.num_qubits} qubits")
        if p.min() < -NORM_TOL or p.max() > 1.0 + NORM_TOL:
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(p.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    def __eq__(self, other):
        if not isinstance(other, OutcomeDistribution):
            return NotImplemented
        return self.num_qubits == other.num_qubits and np.array_equal(self.probabilities, other.probabilities)

    __hash__ = None

    def __getitem__(self, outcome: int | str) -> float:
        if isinstance(outcome, str):
            outcome = int(outcome, 2)
        return float(self.probabilities[outcome])

    def argmax(self) -> int:
        return int(np.argmax(self.probabilities))

    def support(self, floor: float = PRINT_FLOOR) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.probabilities > floor)]

    def marginal(self, low_bits: int, keep: str) -> np.ndarray:
        """Marginal over the ``low_bits`` least significant qubits (``keep="low"``)
        or over the remaining most significant ones (``keep="high"``)."""
        if not 0 < low_bits < self.num_qubits:
            raise DimensionError(f"cannot split {self.num_qubits} qubits at {low_bits}")
        table = self.probabilities.reshape(-1, 2**low_bits)
        if keep == "low":
            return table.sum(axis=0)
        if keep == "high":
            return table.sum(axis=1)
        raise ValueError(f"keep must be 'low' or 'high', got {keep!r}")

    def to_json(self) -> dict:
        return {
            "qubits": self.num_qubits,
            "probs": {
                bitstring(i, self.num_qubits): round(float(p), 12)
                for i, p in enumerate(self.probabilities)
                if p > PRINT_FLOOR
            },
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["bitstring", "probability"])
        for key, p in self.to_json()["probs"].items():
            writer.writerow([key, repr(p)])
        return buf.getvalue()


def pattern_ket(p: PatternVector) -> StateVector:
    """Amplitude ``i`` is ``+2**(-n/2)`` if ``p[i] == 0`` and ``-2**(-n/2)`` otherwise."""
    limits.check_qubits(p.arity)
    scale = 2.0 ** (-p.arity / 2)
    return StateVector._wrap(scale * (1.0 - 2.0 * p.bits))


def perfect_superposition(k: int) -> StateVector:
    if k < 1:
        raise ValueError(f"need at least one qubit, got {k}")
    limits.check_qubits(k)
    return StateVector._wrap(np.full(2**k, 2.0 ** (-k / 2)))


def apply_phase_oracle(p: PatternVector, s: StateVector) -> StateVector:
    if p.arity != s.num_qubits:
        raise DimensionError(f"oracle arity {p.arity} vs {s.num_qubits}-qubit state")
    return StateVector._wrap(np.where(p.bits.astype(bool), -s.amplitudes, s.amplitudes))


class PhaseOracle:
    """Black-box phase oracle for a hidden pattern that counts its queries."""

    def __init__(self, pattern: PatternVector):
        self._pattern = pattern
        self.calls = 0

    @property
    def num_qubits(self) -> int:
        return self._pattern.arity

    def __call__(self, s: StateVector) -> StateVector:
        self.calls += 1
        return apply_phase_oracle(self._pattern, s)


def _ci2_inplace(amps: np.ndarray, low_qubit: int) -> None:
    # C_{I2} = J/2 - I: each amplitude of a 4-group becomes (group sum)/2 minus itself.
    view = amps.reshape(-1, 4, 2**low_qubit)
    half_sum = view.sum(axis=1, keepdims=True) * 0.5
    np.subtract(half_sum, view, out=view)


def apply_ci2(s: StateVector, low_qubit: int) -> StateVector:
    """Apply the 4x4 classifier block to qubits ``(low_qubit, low_qubit + 1)``."""
    if low_qubit < 0 or low_qubit + 1 >= s.num_qubits:
        raise IndexError(f"qubit pair ({low_qubit}, {low_qubit + 1}) outside {s.num_qubits} qubits")
    amps = s.amplitudes.copy()
    _ci2_inplace(amps, low_qubit)
    return StateVector._wrap(amps)


def apply_classifier(s: StateVector) -> StateVector:
    """Apply ``C_{I2}`` to every adjacent pair ``(0, 1), (2, 3), ...``."""
    if s.num_qubits % 2:
        raise DimensionError(f"classifier needs an even qubit count, got {s.num_qubits}")
    amps = s.amplitudes.copy()
    for q in range(0, s.num_qubits, 2):
        _ci2_inplace(amps, q)
    return StateVector._wrap(amps)


def hadamard_all(s: StateVector) -> StateVector:
    """``H`` on every qubit via an in-place fast Walsh-Hadamard transform."""
    amps = s.amplitudes.copy()
    k = s.num_qubits
    for q in range(k):
        view = amps.reshape(-1, 2, 2**q)
        lo = view[:, 0, :].copy()
        view[:, 0, :] += view[:, 1, :]
        view[:, 1, :] = lo - view[:, 1, :]
    # One final rescale; 2**(-k/2) is exact for even k.
    amps *= 2.0 ** (-k / 2)
    return StateVector._wrap(amps)


def measure_distribution(s: StateVector) -> OutcomeDistribution:
    return OutcomeDistribution(s.num_qubits, s.amplitudes**2)


def sample(d: OutcomeDistribution, shots: int, seed: int | None = None) -> dict[str, int]:
    """Multinomial draw of ``shots`` outcomes, keyed by MSB-first bit string."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    rng = np.random.default_rng(seed)
    p = np.clip(d.probabilities, 0.0, None)
    counts = rng.multinomial(shots, p / p.sum())
    return {bitstring(int(i), d.num_qubits): int(counts[i]) for i in np.flatnonzero(counts)}


@dataclass(frozen=True)
class DenseOperator:
    """Explicit real matrix, used only to cross-check the matrix-free kernels."""

    matrix: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def apply(self, s: StateVector) -> StateVector:
        if s.amplitudes.size != self.dimension:
            raise DimensionError(f"{self.dimension}x{self.dimension} operator on length {s.amplitudes.size}")
        return StateVector._wrap(self.matrix @ s.amplitudes)

    def is_unitary(self, atol: float = NORM_TOL) -> bool:
        eye = np.eye(self.dimension)
        return bool(np.allclose(self.matrix.T @ self.matrix, eye, rtol=0.0, atol=atol))


def classifier_matrix(half_rank: int) -> DenseOperator:
    """``C_{I2}`` tensored ``half_rank`` times."""
    if half_rank < 1:
        raise ValueError(f"half rank must be >= 1, got {half_rank}")
    if half_rank > limits.MAX_DENSE_HALF_RANK:
        raise SizeLimitError(f"dense classifier limited to half rank {limits.MAX_DENSE_HALF_RANK}")
    return DenseOperator(reduce(np.kron, [CI2] * half_rank))


def ci2_from_gates() -> np.ndarray:
    """``(H (x) H) CZ (Z (x) Z) (H (x) H)`` multiplied out."""
    hh = np.kron(H1, H1)
    return hh @ CZ @ np.kron(Z1, Z1) @ hh


def hadamard_matrix(k: int) -> DenseOperator:
    if k > 2 * limits.MAX_DENSE_HALF_RANK:
        raise SizeLimitError(f"dense Hadamard limited to {2 * limits.MAX_DENSE_HALF_RANK} qubits")
    return DenseOperator(reduce(np.kron, [H1] * k))
