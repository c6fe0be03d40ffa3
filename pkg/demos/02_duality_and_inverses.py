"""
Right quotients, adjoints and inverses
======================================

The right quotient [A/B] maps Bx to Ax.  It is defined on R(B) only and
exists when N(B) lies in N(A).  Taking adjoints swaps left and right.
"""

import numpy as np

import opquot as oq
from opquot.oracle import InstanceSpec, generate

np.set_printoptions(precision=4, suppress=True)

A, B = generate(InstanceSpec(m=2, n=4, p=3, rank_b=2, seed=1, mode="kernel_included"))
rq = oq.right_quotient(A, B)

x = np.arange(4.0)
print("[A/B](Bx) - Ax:", np.linalg.norm(rq(B @ x) - A @ x))

# a vector outside R(B) is outside the domain
outside = oq.numkernel.kernel_basis(B.conj().T)[:, 0]
try:
    rq(outside)
except oq.OutOfDomain as exc:
    print("out of domain:", exc)

# [A/B]^* = [B^*\A^*] at the matrix level
lq = oq.adjoint_right(rq)
print("duality gap:", np.linalg.norm(lq.q - rq.q.conj().T))
print("double adjoint gap:", np.linalg.norm(oq.adjoint_left(lq).q - rq.q))

# equal ranges make the left quotient invertible
A1 = np.array([[0.0, 1.0], [0.0, 0.0]])
B1 = np.array([[1.0, 1.0], [0.0, 0.0]])
lq1 = oq.left_quotient(A1, B1)
inv = oq.invert_left(lq1)
print("[A\\B] =\n", inv.q.real)
print("[B\\A][A\\B] =\n", (lq1.q @ inv.q).real)
print("[A\\B][B\\A] =\n", (inv.q @ lq1.q).real)

# the graph of [A/B] and its adjoint
g = oq.graph(A, B)
print("graph dimension", g.graph_basis.shape[1], "+ adjoint graph", g.adjoint_graph_basis.shape[1],
      "=", g.t.shape[0])
print("largest |A^*x - B^*y| over adjoint pairs:", g.adjoint_pair_residual(A, B))

# J x = (B R^+ x, A R^+ x) preserves length on R(A^*) + R(B^*)
v = A.conj().T @ np.ones(2) + B.conj().T @ np.ones(3)
print("J isometry defect:", oq.j_isometry_defect(A, B, v))
