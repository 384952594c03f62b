import itertools
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolpattern.limits import SizeLimitError
from boolpattern.patterns import all_patterns, basis_B, basis_I, from_truth_table, is_orthogonal, parse, product
from boolpattern.statevector import (
    CI2,
    DimensionError,
    OutcomeDistribution,
    PhaseOracle,
    StateVector,
    apply_ci2,
    apply_classifier,
    apply_phase_oracle,
    ci2_from_gates,
    classifier_matrix,
    hadamard_all,
    hadamard_matrix,
    measure_distribution,
    pattern_ket,
    perfect_superposition,
    sample,
)

from conftest import CI4_SIGNS

TOL = 1e-9


def dense_classifier(half_rank):
    """Entry (r, c) is the product of C_{I2} entries over matching qubit pairs."""
    dim = 4**half_rank
    m = np.empty((dim, dim))
    for r in range(dim):
        for c in range(dim):
            v = 1.0
            for k in range(half_rank):
                a, b = (r >> 2 * k) & 3, (c >> 2 * k) & 3
                v *= -0.5 if a == b else 0.5
            m[r, c] = v
    return m


def random_state(rng, k):
    v = rng.standard_normal(2**k)
    return StateVector(v / np.linalg.norm(v))


@pytest.mark.parametrize(
    "pattern, amps",
    [
        ("1000", [0.5, 0.5, 0.5, -0.5]),
        ("0001", [-0.5, 0.5, 0.5, 0.5]),
        ("0000", [0.5, 0.5, 0.5, 0.5]),
    ],
)
def test_pattern_ket(pattern, amps):
    s = pattern_ket(parse(pattern))
    np.testing.assert_array_equal(s.amplitudes, amps)
    assert abs(s.norm() - 1) < TOL


def test_perfect_superposition():
    np.testing.assert_allclose(perfect_superposition(1).amplitudes, [2**-0.5] * 2, atol=1e-15)
    np.testing.assert_array_equal(perfect_superposition(2).amplitudes, [0.5] * 4)
    for k in range(1, 6):
        assert perfect_superposition(k).allclose(pattern_ket(from_truth_table([0] * 2**k)))
    with pytest.raises(ValueError):
        perfect_superposition(0)


def test_state_vector_validation():
    with pytest.raises(ValueError):
        StateVector([1.0, 1.0])
    with pytest.raises(DimensionError):
        StateVector([1.0, 0.0, 0.0])


def test_phase_oracle():
    p = parse("1000")
    assert apply_phase_oracle(p, perfect_superposition(2)).allclose(pattern_ket(p))
    rng = np.random.default_rng(1)
    s = random_state(rng, 2)
    assert apply_phase_oracle(parse("0000"), s).allclose(s)
    assert apply_phase_oracle(p, apply_phase_oracle(p, s)).allclose(s)
    with pytest.raises(DimensionError):
        apply_phase_oracle(parse("01"), s)


def test_phase_oracle_counts_queries():
    oracle = PhaseOracle(parse("0110"))
    s = oracle(perfect_superposition(2))
    assert oracle.calls == 1
    assert s.allclose(pattern_ket(parse("0110")))


def test_apply_ci2_examples():
    assert apply_ci2(pattern_ket(parse("0001")), 0).allclose(StateVector.basis_state(2, 0))
    assert apply_ci2(pattern_ket(parse("1000")), 0).allclose(StateVector.basis_state(2, 3))
    out = apply_ci2(pattern_ket(parse("0101")), 0)
    np.testing.assert_allclose(out.amplitudes, [0.5, -0.5, 0.5, -0.5], atol=TOL)
    # The published display of this state carries the opposite global sign.
    published = np.array([-0.5, 0.5, -0.5, 0.5])
    np.testing.assert_allclose(out.amplitudes, -published, atol=TOL)
    np.testing.assert_allclose(out.amplitudes**2, published**2, atol=TOL)


def test_apply_ci2_bad_qubit():
    s = perfect_superposition(3)
    with pytest.raises(IndexError):
        apply_ci2(s, 2)
    with pytest.raises(IndexError):
        apply_ci2(s, -1)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_apply_ci2_matches_dense_on_every_pair(k):
    rng = np.random.default_rng(k)
    s = random_state(rng, k)
    for low in range(k - 1):
        ident_hi = np.eye(2 ** (k - low - 2))
        ident_lo = np.eye(2**low)
        dense = np.kron(np.kron(ident_hi, CI2), ident_lo)
        np.testing.assert_allclose(apply_ci2(s, low).amplitudes, dense @ s.amplitudes, atol=TOL)


def test_apply_classifier_examples():
    r3 = basis_I(2).member(3)
    assert apply_classifier(pattern_ket(r3)).allclose(StateVector.basis_state(4, 3))
    out = apply_classifier(pattern_ket(parse("0000")))
    np.testing.assert_allclose(out.amplitudes, [0.5] * 4, atol=TOL)
    with pytest.raises(DimensionError):
        apply_classifier(perfect_superposition(3))


def test_ci2_is_an_involution():
    np.testing.assert_allclose(CI2 @ CI2, np.eye(4), atol=1e-15)
    rng = np.random.default_rng(2)
    for k in (2, 4, 6):
        s = random_state(rng, k)
        assert apply_classifier(apply_classifier(s)).allclose(s)


def test_classifier_matrix_half_rank_1():
    expected = np.array(
        [[-0.5, 0.5, 0.5, 0.5], [0.5, -0.5, 0.5, 0.5], [0.5, 0.5, -0.5, 0.5], [0.5, 0.5, 0.5, -0.5]]
    )
    np.testing.assert_array_equal(classifier_matrix(1).matrix, expected)
    np.testing.assert_allclose(ci2_from_gates(), expected, atol=1e-12)


def test_classifier_matrix_half_rank_2_printed():
    m = classifier_matrix(2).matrix
    assert m[0, 0] == 0.25
    signs = np.array([[1.0 if c == "+" else -1.0 for c in row] for row in CI4_SIGNS])
    np.testing.assert_array_equal(m, 0.25 * signs)


@pytest.mark.parametrize("h", [1, 2, 3])
def test_classifier_unitary_and_matches_entry_oracle(h):
    op = classifier_matrix(h)
    assert op.is_unitary()
    np.testing.assert_allclose(op.matrix, dense_classifier(h), atol=1e-15)
    assert set(np.unique(np.abs(op.matrix))) == {2.0**-h}


def test_classifier_matrix_limits():
    with pytest.raises(SizeLimitError):
        classifier_matrix(6)
    with pytest.raises(ValueError):
        classifier_matrix(0)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_hadamard_all(k):
    zero = StateVector.basis_state(k)
    assert hadamard_all(zero).allclose(perfect_superposition(k))
    rng = np.random.default_rng(k)
    s = random_state(rng, k)
    assert hadamard_all(hadamard_all(s)).allclose(s)
    np.testing.assert_allclose(hadamard_all(s).amplitudes, hadamard_matrix(k).matrix @ s.amplitudes, atol=TOL)


def test_hadamard_single_qubit():
    np.testing.assert_allclose(hadamard_all(StateVector([1.0, 0.0])).amplitudes, [2**-0.5] * 2, atol=1e-15)


def test_measure_distribution():
    d = measure_distribution(StateVector.basis_state(4, 3))
    assert d[3] == 1.0
    assert d["0011"] == 1.0
    np.testing.assert_allclose(measure_distribution(perfect_superposition(2)).probabilities, [0.25] * 4)
    d = measure_distribution(apply_ci2(pattern_ket(parse("0101")), 0))
    np.testing.assert_allclose(d.probabilities, [0.25] * 4, atol=TOL)


def test_distribution_validation_and_export():
    with pytest.raises(ValueError):
        OutcomeDistribution(1, np.array([0.6, 0.6]))
    with pytest.raises(DimensionError):
        OutcomeDistribution(2, np.array([0.5, 0.5]))
    d = OutcomeDistribution(2, np.array([0.0, 0.5, 0.0, 0.5]))
    assert d.to_json() == {"qubits": 2, "probs": {"01": 0.5, "11": 0.5}}
    assert d.to_csv() == "bitstring,probability\n01,0.5\n11,0.5\n"


def test_distribution_marginals():
    d = OutcomeDistribution(4, np.full(16, 1 / 16))
    np.testing.assert_allclose(d.marginal(2, "low"), [0.25] * 4)
    np.testing.assert_allclose(d.marginal(1, "high"), [0.125] * 8)
    with pytest.raises(DimensionError):
        d.marginal(4, "low")


def test_sample_point_mass():
    d = measure_distribution(StateVector.basis_state(4, 3))
    assert sample(d, 1024, seed=5) == {"0011": 1024}


def test_sample_deterministic_and_valid():
    d = measure_distribution(perfect_superposition(2))
    a, b = sample(d, 1000, seed=42), sample(d, 1000, seed=42)
    assert a == b
    assert sum(a.values()) == 1000
    with pytest.raises(ValueError):
        sample(d, 0)


def test_sample_uniform_chi_square():
    d = measure_distribution(perfect_superposition(2))
    shots = 40000
    counts = sample(d, shots, seed=2024)
    expected = shots / 4
    chi2 = sum((counts.get(format(i, "02b"), 0) - expected) ** 2 / expected for i in range(4))
    # chi-square critical value for 3 degrees of freedom at p = 0.001
    assert chi2 < 16.266


# --- properties --------------------------------------------------------------

def test_orthogonality_transfer_exhaustive_small():
    for n in (1, 2, 3):
        pats = list(all_patterns(n))
        kets = {p: pattern_ket(p) for p in pats}
        for p, q in itertools.product(pats, repeat=2):
            if is_orthogonal(p, q):
                assert abs(kets[p].inner(kets[q])) < TOL


@pytest.mark.parametrize("h", [1, 2, 3, 4])
def test_orthogonality_transfer_bases(h):
    for fam in (basis_I, basis_B):
        kets = np.stack([pattern_ket(p).amplitudes for p in fam(h)])
        np.testing.assert_allclose(kets @ kets.T, np.eye(4**h), atol=TOL)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_tensor_product_equivalence(data):
    a = data.draw(st.integers(1, 5))
    b = data.draw(st.integers(1, 8 - a))
    bits = lambda n: st.lists(st.integers(0, 1), min_size=2**n, max_size=2**n).map(from_truth_table)
    p, q = data.draw(bits(a)), data.draw(bits(b))
    assert pattern_ket(product(p, q)).allclose(pattern_ket(p).tensor(pattern_ket(q)))


@pytest.mark.parametrize("h", [1, 2, 3, 4, 5])
def test_matrix_free_vs_dense(h):
    dense = classifier_matrix(h)
    k = 2 * h
    for i in range(2**k):
        s = StateVector.basis_state(k, i)
        assert apply_classifier(s).allclose(dense.apply(s))
    rng = np.random.default_rng(100 + h)
    for _ in range(100):
        s = random_state(rng, k)
        assert apply_classifier(s).allclose(dense.apply(s))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_norm_preservation(k, seed):
    rng = np.random.default_rng(seed)
    s = random_state(rng, k)
    p = from_truth_table(rng.integers(0, 2, 2**k))
    outs = [hadamard_all(s), apply_phase_oracle(p, s)]
    if k >= 2:
        outs.append(apply_ci2(s, int(rng.integers(0, k - 1))))
    if k % 2 == 0:
        outs.append(apply_classifier(s))
    for out in outs:
        assert abs(out.norm() - 1) < TOL


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_classifier_action_on_promised_kets(n):
    for i, p in enumerate(basis_I(n)):
        out = apply_classifier(pattern_ket(p))
        assert abs(out.amplitudes[i] - 1) < TOL
        assert out.allclose(StateVector.basis_state(2 * n, i))


def test_balanced_kets_are_hadamard_columns():
    h2 = reduce(np.kron, [np.array([[1, 1], [1, -1]]) / np.sqrt(2)] * 2)
    kets = np.stack([pattern_ket(p).amplitudes for p in basis_B(1)], axis=1)
    overlap = np.abs(h2.T @ kets)
    # Each ket is a Hadamard column up to sign, and every column is hit once.
    np.testing.assert_allclose(np.sort(overlap, axis=0)[-1], 1.0, atol=1e-12)
    np.testing.assert_allclose(overlap.sum(axis=0), 1.0, atol=1e-12)
    assert sorted(np.argmax(overlap, axis=0)) == [0, 1, 2, 3]


def test_simulator_limit(monkeypatch):
    monkeypatch.setenv("BOOLPATTERN_MAX_QUBITS", "4")
    with pytest.raises(SizeLimitError):
        perfect_superposition(5)
    with pytest.raises(SizeLimitError):
        pattern_ket(parse("0" * 32))
