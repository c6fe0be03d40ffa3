"""
Left quotients and the Douglas solution
=======================================

Two small pairs where R(A) sits inside R(B).  ``B X = A`` has many
solutions; the left quotient picks the one whose range lies in R(B^*).
"""

import numpy as np

import opquot as oq
from opquot import oracle

np.set_printoptions(precision=4, suppress=True)

# A 2x2 pair with R(A) = R(B) = span(e1)
A = np.array([[0.0, 1.0], [0.0, 0.0]])
B = np.array([[1.0, 1.0], [0.0, 0.0]])

# every [[0, beta], [0, 1 - beta]] solves B X = A
for beta in (0.0, 0.5, 2.0):
    X = np.array([[0.0, beta], [0.0, 1.0 - beta]])
    print(f"beta = {beta}: |BX - A| = {np.linalg.norm(B @ X - A):.1e}")

# the quotient fixes beta = 1/2
lq = oq.left_quotient(A, B)
print("[B\\A] =\n", lq.q.real)

# perturbing along N(B) keeps BX = A but leaves R(B^*)
probe = oracle.douglas_uniqueness_probe(A, B, trials=5)
print(f"{probe.alternatives} alternative solutions, {probe.violations} rejected")

# squared norm against the smallest mu with AA^* <= mu BB^*
print("||q||^2 =", oq.left_norm(lq) ** 2, " mu =", oracle.mu_bisection(A, B))

# A 3x3 pair where R(A) is strictly smaller than R(B)
A2 = np.zeros((3, 3))
A2[0, 2] = 1.0
B2 = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
lq2 = oq.left_quotient(A2, B2)
print("[B2\\A2] =\n", lq2.q.real)
print("norm =", oq.left_norm(lq2))

# an independent QR-based least-squares solve agrees
print("oracle gap:", np.linalg.norm(oracle.least_squares_douglas(A2, B2) - lq2.q))

# without range inclusion there is nothing to divide
try:
    oq.left_quotient([[0.0], [1.0]], [[1.0], [0.0]])
except oq.RangeInclusionViolated as exc:
    print("rejected:", exc)
