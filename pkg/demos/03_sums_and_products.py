"""
Sums, products and simplification
=================================

Sums of left quotients go through the parallel sum of B^*B and D^*D.
The result is the plain sum projected onto R(B^*) cap R(D^*); the part
that falls outside is reported as a defect.
"""

import numpy as np

import opquot as oq
from opquot import algebra as al
from opquot.oracle import InstanceSpec, generate

np.set_printoptions(precision=4, suppress=True)

# scalars behave like fractions
res = al.sum_left(oq.left_quotient([[3.0]], [[2.0]]), oq.left_quotient([[5.0]], [[4.0]]))
print("3/2 + 5/4 =", res.quotient.q[0, 0].real, " defect", res.defect)

# with B = I and D = diag(1, 0) the second coordinate is lost
I2, E11 = np.eye(2), np.diag([1.0, 0.0])
lq1, lq2 = oq.left_quotient(I2, I2), oq.left_quotient(E11, E11)
res = al.sum_left(lq1, lq2)
print("plain sum:\n", (lq1.q + lq2.q).real)
print("quotient sum:\n", res.quotient.q.real)
print("defect:", res.defect)

ps = al.parallel_sum(I2, E11)
print("I : diag(1,0) =\n", ps.value.real)

# products need a witness pair (M, N) with MD = NA
inst = generate(InstanceSpec(m=4, n=3, p=3, rank_b=2, seed=5, mode="witness_compatible"))
p1, p2 = oq.left_quotient(inst.a, inst.b), oq.left_quotient(inst.c, inst.d)
w = al.auto_witness_left(p1, p2)
print("witness valid:", w.valid, " residuals", w.residuals)
prod = al.product_left(p1, p2, w)
print("|[NB\\MC] - q1 q2| =", np.linalg.norm(prod.q - p1.q @ p2.q))

# reverse-order law for pseudoinverses
S, T = generate(InstanceSpec(m=4, n=5, p=3, rank_b=2, seed=2, mode="pinv_product_pair"))
gap = np.linalg.norm(al.pinv_product(S, T) - np.linalg.pinv(S @ T))
print("|T^+ S^+ - (ST)^+| =", gap)

# multiplying through by B^* leaves the quotient alone
A, B = generate(InstanceSpec(m=5, n=2, p=4, rank_b=3, seed=8))
lq = oq.left_quotient(A, B)
print("simplify gap:", np.linalg.norm(al.simplify_left(B.conj().T, lq).q - lq.q))

# A and its pseudoinverse as left quotients
first, second = al.canonical_decomposition(A)
print("A gap:", np.linalg.norm(first.q - A), " A^+ gap:", np.linalg.norm(second.q - np.linalg.pinv(A)))
