"""Self-check suite: every structural invariant, swept up to a half rank.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in a
fixed order so reports are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classifier import LeftCluster, OracleSpec, RightCluster, classify, run_circuit
from .knowledge import enumerate_completions, knowledge_for, propagate_bit
from .patterns import (
    all_patterns,
    basis_B,
    basis_I,
    basis_product,
    extended_product,
    is_orthogonal,
    product,
    verify_basis,
)
from .statevector import (
    StateVector,
    apply_classifier,
    classifier_matrix,
    pattern_ket,
)

TOL = 1e-9


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def to_json(self) -> dict:
        return {"invariant": self.name, "passed": self.passed, "cases": self.cases, "detail": self.detail}


def _check(name: str, cases: list) -> CheckResult:
    # A case is ``True`` or a string describing the failure.
    failures = [c for c in cases if isinstance(c, str) or not c]
    detail = "" if not failures else f"first failure: {failures[0]}"
    return CheckResult(name, not failures, len(cases), detail)


def _half_rank_pairs(max_half: int):
    return [(a, b) for a in range(1, max_half + 1) for b in range(1, max_half + 1) if a + b <= max_half]


def check_basis_closure(max_half: int) -> CheckResult:
    cases = []
    for a, b in _half_rank_pairs(max_half):
        for left, right in itertools.product((basis_I, basis_B), repeat=2):
            ok = verify_basis(basis_product(left(a), right(b)))
            cases.append(ok or f"{left.__name__}({a}) x {right.__name__}({b})")
    for h in range(1, max_half + 1):
        cases.append(verify_basis(basis_I(h)) or f"basis_I({h})")
        cases.append(verify_basis(basis_B(h)) or f"basis_B({h})")
    return _check("basis_product_closure", cases)


def check_basis_recursion(max_half: int) -> CheckResult:
    cases = []
    for h in range(1, max_half):
        for fam in (basis_I, basis_B):
            direct = fam(h + 1).members
            built = basis_product(fam(1), fam(h)).members
            cases.append(direct == built or f"{fam.__name__}({h + 1})")
    return _check("basis_recursion", cases)


def check_balance_profile(max_half: int) -> CheckResult:
    cases = []
    for h in range(1, max_half + 1):
        half = 2 ** (2 * h - 1)
        for i, p in enumerate(basis_B(h)):
            expected = 0 if i == 0 else half
            cases.append(p.popcount() == expected or f"B({h})[{i}] popcount {p.popcount()}")
        for i, p in enumerate(basis_I(h)):
            cases.append(p.popcount() != half or f"I({h})[{i}] is balanced")
    return _check("balanced_vs_imbalanced", cases)


def check_product_equivalence(max_arity: int = 4) -> CheckResult:
    cases = []
    for a in range(1, max_arity):
        for b in range(1, max_arity - a + 1):
            for p in all_patterns(a):
                for q in all_patterns(b):
                    ok = product(p, q) == extended_product(p, q)
                    cases.append(ok or f"{p} (.) {q}")
    return _check("product_equivalence", cases)


def check_orthogonality_transfer(max_half: int) -> CheckResult:
    cases = []
    pats = list(all_patterns(2)) + list(all_patterns(3))
    for p, q in itertools.product(pats, repeat=2):
        if p.arity == q.arity and is_orthogonal(p, q):
            ip = pattern_ket(p).inner(pattern_ket(q))
            cases.append(abs(ip) <= TOL or f"<{p}|{q}> = {ip}")
    for h in range(1, max_half + 1):
        for fam in (basis_I, basis_B):
            kets = np.stack([pattern_ket(m).amplitudes for m in fam(h)])
            gram = kets @ kets.T
            ok = np.allclose(gram, np.eye(len(kets)), atol=TOL, rtol=0)
            cases.append(bool(ok) or f"{fam.__name__}({h}) kets not orthonormal")
    return _check("orthogonality_transfer", cases)


def check_tensor_equivalence(max_arity: int = 4) -> CheckResult:
    cases = []
    for a in range(1, max_arity):
        for b in range(1, max_arity - a + 1):
            for p in all_patterns(a):
                for q in all_patterns(b):
                    lhs = pattern_ket(product(p, q))
                    rhs = pattern_ket(p).tensor(pattern_ket(q))
                    cases.append(lhs.allclose(rhs, TOL) or f"{p} (.) {q}")
    return _check("tensor_product_equivalence", cases)


def check_unitarity(max_half: int) -> CheckResult:
    cases = [classifier_matrix(h).is_unitary(TOL) or f"C^{h}" for h in range(1, min(max_half, 3) + 1)]
    return _check("classifier_unitarity", cases)


def check_matrix_free(max_half: int, seed: int = 0, random_states: int = 100) -> CheckResult:
    rng = np.random.default_rng(seed)
    cases = []
    for h in range(1, min(max_half, 5) + 1):
        dense = classifier_matrix(h)
        k = 2 * h
        for i in range(2**k):
            s = StateVector.basis_state(k, i)
            cases.append(apply_classifier(s).allclose(dense.apply(s), TOL) or f"basis {i} on {k} qubits")
        for t in range(random_states):
            v = rng.standard_normal(2**k)
            s = StateVector(v / np.linalg.norm(v))
            cases.append(apply_classifier(s).allclose(dense.apply(s), TOL) or f"random #{t} on {k} qubits")
    return _check("matrix_free_vs_dense", cases)


def check_classifier_action(max_half: int) -> CheckResult:
    cases = []
    for h in range(1, max_half + 1):
        for i, p in enumerate(basis_I(h)):
            out = apply_classifier(pattern_ket(p))
            cases.append(out.allclose(StateVector.basis_state(2 * h, i), TOL) or f"I({h})[{i}]")
    return _check("classifier_action", cases)


def check_promised_completeness(max_half: int) -> CheckResult:
    cases = []
    for n in range(1, max_half + 1):
        for i in range(4**n):
            d = run_circuit(OracleSpec.promised(n, i))
            v = classify(d, OracleSpec.promised(n, i).announced).verdict
            ok = d[i] >= 1 - TOL and v.kind == "identified" and v.f_index == i
            cases.append(ok or f"F({n})[{i}] -> {v}")
    return _check("promised_class_completeness", cases)


def check_outside_uniformity(max_half: int) -> CheckResult:
    cases = []
    for m in range(1, max_half + 1):
        for j in range(4**m):
            p = run_circuit(OracleSpec.balanced(m, j)).probabilities
            ok = bool(np.ptp(p) <= TOL and abs(p[0] - 4.0**-m) <= TOL)
            cases.append(ok or f"G({m})[{j}] spread {np.ptp(p)}")
    return _check("outside_class_uniformity", cases)


def _cluster_ok(probs: np.ndarray, support: set[int], value: float) -> bool:
    on = np.array(sorted(support))
    off = np.setdiff1d(np.arange(probs.size), on)
    return bool(np.all(np.abs(probs[on] - value) <= TOL) and np.all(probs[off] <= TOL))


def check_cluster_structure(max_half: int) -> list[CheckResult]:
    left, right = [], []
    for m, n in _half_rank_pairs(max_half):
        low_m, low_n = 2 * m, 2 * n
        for j in range(4**m):
            for i in range(4**n):
                p = run_circuit(OracleSpec.left(m, n, j, i)).probabilities
                support = {(x << low_n) | i for x in range(4**m)}
                left.append(_cluster_ok(p, support, 4.0**-m) or f"g{j}*f{i} ({m},{n})")
                p = run_circuit(OracleSpec.right(n, m, i, j)).probabilities
                support = {(i << low_m) | x for x in range(4**m)}
                right.append(_cluster_ok(p, support, 4.0**-m) or f"f{i}*g{j} ({n},{m})")
    return [_check("left_cluster_structure", left), _check("right_cluster_structure", right)]


def check_left_xor_law(max_half: int) -> CheckResult:
    cases = []
    for m, n in _half_rank_pairs(max_half):
        for j in range(4**m):
            for i in range(4**n):
                h = OracleSpec.left(m, n, j, i).pattern
                blocks = h.blocks(4**n).astype(np.int64)
                # XOR of positions k, l in a block; must not depend on the block.
                corr = blocks[:, :, None] ^ blocks[:, None, :]
                cases.append(bool(np.all(corr == corr[0])) or f"g{j}*f{i} ({m},{n})")
    return _check("left_cluster_xor_law", cases)


def check_non_reconstructibility(max_half: int) -> CheckResult:
    cases = []
    for m, n in _half_rank_pairs(max_half):
        for tag in (LeftCluster(m, n), RightCluster(n, m)):
            for i in range(4**n):
                k = knowledge_for(tag, i)
                before = len(enumerate_completions(k))
                cases.append(before == 4**m or f"{tag} f{i}: {before} completions")
                truth = enumerate_completions(k)[-1]
                k2 = propagate_bit(k, 0, truth[0])
                after = len(enumerate_completions(k2))
                cases.append((1 <= after <= before) or f"{tag} f{i}: {before} -> {after}")
    return _check("non_reconstructibility", cases)


def run_all(max_half: int = 2) -> list[CheckResult]:
    steps: list[Callable[[], CheckResult | list[CheckResult]]] = [
        lambda: check_basis_closure(max_half),
        lambda: check_basis_recursion(max_half),
        lambda: check_balance_profile(max_half),
        lambda: check_product_equivalence(),
        lambda: check_orthogonality_transfer(max_half),
        lambda: check_tensor_equivalence(),
        lambda: check_unitarity(max_half),
        lambda: check_matrix_free(max_half),
        lambda: check_classifier_action(max_half),
        lambda: check_promised_completeness(max_half),
        lambda: check_outside_uniformity(max_half),
        lambda: check_cluster_structure(max_half),
        lambda: check_left_xor_law(max_half),
        lambda: check_non_reconstructibility(max_half),
    ]
    results: list[CheckResult] = []
    for step in steps:
        out = step()
        results.extend(out if isinstance(out, list) else [out])
    return results
