"""Tour of the state-vector core: superposition, composition, entanglement.

A K-qubit register holds all 2^K bipolar hypothesis vectors at once with
equal weight; measuring it picks any one of them with probability 1/2^K.
Registers compose by the tensor product, and a 2-qubit state either factors
into two single-qubit states or it does not; the diagonal Bell state is the
classic non-factoring example.
"""

import numpy as np

from qmudsim import qcore

rng = np.random.default_rng(1)

print("== uniform superposition over K=3 qubits ==")
s = qcore.uniform_superposition(3)
print("amplitudes:", np.round(s.amplitudes.real, 4))
print("each outcome has probability 1/8 =", qcore.probabilities(s)[0])

print("\n== measurement collapses the register ==")
outcome = qcore.measure(s, rng)
print("observed index:", outcome.outcome)
print("post-measurement amplitudes:", outcome.post_state.amplitudes.real)

print("\n== 10000 measurements follow the Born rule ==")
tilted = qcore.StateVector(1, np.array([np.sqrt(0.3), np.sqrt(0.7)]))
draws = [qcore.measure(tilted, rng).outcome for _ in range(10000)]
print(f"P(0) ≈ {draws.count(0) / len(draws):.3f}  (amplitude² = 0.3)")

print("\n== tensor composition: high bits left, low bits right ==")
zero, one = qcore.basis_state(1, 0), qcore.basis_state(1, 1)
print("|0>⊗|1> amplitudes:", qcore.tensor(zero, one).amplitudes.real,
      "-> index 1 = binary 01")

print("\n== product vs entangled 2-qubit states ==")
product = qcore.tensor(qcore.uniform_superposition(1), one)
bell = qcore.StateVector(2, np.array([1, 0, 0, 1]) / np.sqrt(2))
print("(|0>+|1>)/√2 ⊗ |1> factors?    ", qcore.is_product_2qubit(product))
print("(|00>+|11>)/√2 factors?        ", qcore.is_product_2qubit(bell))
print("Bell measurements over 20 draws:",
      sorted({qcore.measure(bell, rng).outcome for _ in range(20)}),
      "(only 00 and 11 ever occur)")
