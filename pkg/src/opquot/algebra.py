"""Sums, products and simplification rules for quotients.

Sums with different denominators go through the parallel sum
``P : Q = P (P + Q)^+ Q`` and its square root S.  Products are rewritten with a
pair of witness matrices (M, N); :func:`auto_witness_left` and
:func:`auto_witness_right` try the obvious candidates and report whether they
satisfy the conditions.

All quotient equalities are checked on the ``q`` matrices, never on the
(numerator, denominator) pairs, since many pairs represent the same quotient.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import numkernel as nk
from .errors import (
    DenominatorMismatch,
    DimensionMismatch,
    InvalidWitness,
    ReverseOrderConditionViolated,
    SimplificationConditionViolated,
)
from .numkernel import DEFAULT_TOL, adjoint, spectral_norm
from .quotient import left_quotient, right_quotient


@dataclass(frozen=True, eq=False)
class ParallelSumResult:
    """``value = P : Q``, its PSD square root ``s`` and the projector onto R(s).

    ``s_pinv`` comes from the same eigendecomposition as ``s``.
    """

    value: np.ndarray
    s: np.ndarray
    range_projector: np.ndarray
    s_pinv: np.ndarray

    @property
    def rank(self):
        return int(round(np.trace(self.range_projector).real))


def parallel_sum(p, q, tol=None):
    """Parallel sum of two Hermitian PSD matrices of equal size.

    >>> float(parallel_sum([[1.0]], [[1.0]]).value[0, 0].real)
    0.5
    """
    tol = tol or DEFAULT_TOL
    p = nk.as_matrix(p, "P")
    q = nk.as_matrix(q, "Q")
    if p.shape != q.shape:
        raise DimensionMismatch(f"parallel sum needs equal shapes, got {p.shape} and {q.shape}")
    # validates Hermitian + PSD for both arguments
    wp, _ = nk.psd_eigh(p, tol, "P")
    wq, _ = nk.psd_eigh(q, tol, "Q")
    value = p @ nk.pseudoinverse(p + q, tol) @ q
    value = (value + adjoint(value)) / 2
    # rounding in the product is relative to the operands, not to the result
    w, v = nk.psd_eigh(value, tol, "P:Q", scale=max(wp[-1], wq[-1]))
    keep = w > 0
    vk = v[:, keep]
    root = np.sqrt(w[keep])
    s = (vk * root) @ adjoint(vk)
    return ParallelSumResult(
        value=value,
        s=s,
        range_projector=vk @ adjoint(vk),
        s_pinv=(vk / root) @ adjoint(vk),
    )


def _s_tol(tol):
    # S = sqrt(P:Q) has eigenvalues either 0 or >= sqrt(psd_rel) * ||S||
    return tol.with_rank_floor(0.5 * np.sqrt(tol.psd_rel))


@dataclass(frozen=True, eq=False)
class SumWitness:
    """Auxiliary quotients B1, D1 entering the sum theorems."""

    b1: np.ndarray
    d1: np.ndarray


class SumResult(NamedTuple):
    quotient: object
    defect: float


def sum_witness_left(lq1, lq2, tol=None):
    """S = (B^*B : D^*D)^{1/2} with B1 = S B^+ and D1 = S D^+."""
    tol = tol or lq1.tol
    b, d = lq1.denominator, lq2.denominator
    if b.shape[1] != d.shape[1] or lq1.numerator.shape[1] != lq2.numerator.shape[1]:
        raise DimensionMismatch(
            f"left sum needs q matrices of equal shape, got {lq1.shape} and {lq2.shape}")
    ps = parallel_sum(adjoint(b) @ b, adjoint(d) @ d, tol)
    return ps, SumWitness(b1=ps.s @ nk.pseudoinverse(b, tol), d1=ps.s @ nk.pseudoinverse(d, tol))


def sum_left(lq1, lq2, tol=None):
    """``[B\\A] + [D\\C]`` as ``[S \\ (B1 A + D1 C)]``.

    The returned quotient equals ``P_{R(S)} (q1 + q2)``.  ``defect`` is
    ``||(I - P_{R(S)}) (q1 + q2)||``: zero exactly when the plain sum already
    maps into R(S) = N(B)^perp cap N(D)^perp.
    """
    tol = tol or lq1.tol
    ps, w = sum_witness_left(lq1, lq2, tol)
    x = w.b1 @ lq1.numerator + w.d1 @ lq2.numerator
    result = left_quotient(x, ps.s, _s_tol(tol))
    plain = lq1.q + lq2.q
    defect = spectral_norm(plain - ps.range_projector @ plain)
    return SumResult(result, defect)


def sum_witness_right(rq1, rq2, tol=None):
    """S = (B B^* : D D^*)^{1/2} with B1 = B^+ S and D1 = D^+ S."""
    tol = tol or rq1.tol
    b, d = rq1.denominator, rq2.denominator
    if b.shape[0] != d.shape[0] or rq1.numerator.shape[0] != rq2.numerator.shape[0]:
        raise DimensionMismatch(
            f"right sum needs q matrices of equal shape, got {rq1.shape} and {rq2.shape}")
    ps = parallel_sum(b @ adjoint(b), d @ adjoint(d), tol)
    return ps, SumWitness(b1=nk.pseudoinverse(b, tol) @ ps.s, d1=nk.pseudoinverse(d, tol) @ ps.s)


def sum_right(rq1, rq2, tol=None):
    """``[A/B] + [C/D]`` as ``[(A B1 + C D1) / S]`` on R(S) = R(B) cap R(D).

    The returned quotient equals ``(q1 + q2) P_{R(S)}``.  ``defect`` is
    ``||(q1 + q2) (I - P_{R(S)})||``, the part of the plain matrix sum acting
    outside the common domain.
    """
    tol = tol or rq1.tol
    ps, w = sum_witness_right(rq1, rq2, tol)
    y = rq1.numerator @ w.b1 + rq2.numerator @ w.d1
    result = right_quotient(y, ps.s, _s_tol(tol))
    plain = rq1.q + rq2.q
    defect = spectral_norm(plain - plain @ ps.range_projector)
    return SumResult(result, defect)


def _same_denominator(d1, d2):
    if d1.shape != d2.shape or not np.array_equal(d1, d2):
        gap = spectral_norm(d1 - d2) if d1.shape == d2.shape else float("inf")
        raise DenominatorMismatch("quotients do not share a denominator", gap, 0.0)


def sum_left_same_denominator(lq1, lq2, tol=None):
    """``[D\\A] + [D\\B] = [D\\(A + B)]``."""
    tol = tol or lq1.tol
    _same_denominator(lq1.denominator, lq2.denominator)
    return left_quotient(lq1.numerator + lq2.numerator, lq1.denominator, tol)


def sum_right_same_denominator(rq1, rq2, tol=None):
    """``[A/D] + [B/D] = [(A + B)/D]``."""
    tol = tol or rq1.tol
    _same_denominator(rq1.denominator, rq2.denominator)
    return right_quotient(rq1.numerator + rq2.numerator, rq1.denominator, tol)


def _dim_tol(tol, n):
    return tol.residual_rel * max(n, 1)


def pinv_product(s, t, tol=None):
    """Reverse-order law ``(S T)^+ = T^+ S^+``, valid when R(T) = N(S)^perp."""
    tol = tol or DEFAULT_TOL
    s = nk.as_matrix(s, "S")
    t = nk.as_matrix(t, "T")
    if s.shape[1] != t.shape[0]:
        raise DimensionMismatch(f"S T is not defined for shapes {s.shape} and {t.shape}")
    gap = nk.projector_distance(nk.projector_onto_range(t, tol), nk.projector_onto_corange(s, tol))
    if gap > _dim_tol(tol, t.shape[0]):
        raise ReverseOrderConditionViolated("R(T) differs from N(S)^perp", gap, _dim_tol(tol, t.shape[0]))
    return nk.pseudoinverse(t, tol) @ nk.pseudoinverse(s, tol)


@dataclass(frozen=True, eq=False)
class ProductWitness:
    """Witness pair for a product theorem, with the residuals that validate it."""

    m: np.ndarray
    n: np.ndarray
    valid: bool
    compatibility_residual: float
    kernel_residual: float
    compatibility_tolerance: float = 0.0
    kernel_tolerance: float = 0.0

    @property
    def residuals(self):
        return (self.compatibility_residual, self.kernel_residual)


def _check_left_product_shapes(lq1, lq2):
    if lq1.numerator.shape[1] != lq2.denominator.shape[1]:
        raise DimensionMismatch(
            f"[B\\A][D\\C] needs cols(A) == cols(D), got {lq1.numerator.shape} and {lq2.denominator.shape}")


def _check_right_product_shapes(rq1, rq2):
    if rq1.denominator.shape[0] != rq2.numerator.shape[0]:
        raise DimensionMismatch(
            f"[A/B][C/D] needs rows(B) == rows(C), got {rq1.denominator.shape} and {rq2.numerator.shape}")


def witness_left(lq1, lq2, m, n, tol=None):
    """Measure M D = N A and N(N)^perp = R(B) for ``[B\\A][D\\C]``."""
    tol = tol or lq1.tol
    _check_left_product_shapes(lq1, lq2)
    a, b, d = lq1.numerator, lq1.denominator, lq2.denominator
    m = nk.as_matrix(m, "M")
    n = nk.as_matrix(n, "N")
    if m.shape[1] != d.shape[0] or n.shape[1] != a.shape[0] or m.shape[0] != n.shape[0]:
        raise DimensionMismatch(f"witness shapes M {m.shape}, N {n.shape} do not fit D {d.shape}, A {a.shape}")
    na = n @ a
    compat = spectral_norm(m @ d - na)
    compat_tol = tol.residual_rel * (1.0 + spectral_norm(na))
    kern = nk.projector_distance(nk.projector_onto_corange(n, tol), nk.projector_onto_range(b, tol))
    kern_tol = _dim_tol(tol, b.shape[0])
    return ProductWitness(m, n, compat <= compat_tol and kern <= kern_tol, compat, kern, compat_tol, kern_tol)


def witness_right(rq1, rq2, m, n, tol=None):
    """Measure B M = C N and R(N) = N(D)^perp for ``[A/B][C/D]``."""
    tol = tol or rq1.tol
    _check_right_product_shapes(rq1, rq2)
    b, c, d = rq1.denominator, rq2.numerator, rq2.denominator
    m = nk.as_matrix(m, "M")
    n = nk.as_matrix(n, "N")
    if m.shape[0] != b.shape[1] or n.shape[0] != c.shape[1] or m.shape[1] != n.shape[1]:
        raise DimensionMismatch(f"witness shapes M {m.shape}, N {n.shape} do not fit B {b.shape}, C {c.shape}")
    cn = c @ n
    compat = spectral_norm(b @ m - cn)
    compat_tol = tol.residual_rel * (1.0 + spectral_norm(cn))
    kern = nk.projector_distance(nk.projector_onto_range(n, tol), nk.projector_onto_corange(d, tol))
    kern_tol = _dim_tol(tol, d.shape[1])
    return ProductWitness(m, n, compat <= compat_tol and kern <= kern_tol, compat, kern, compat_tol, kern_tol)


def auto_witness_left(lq1, lq2, tol=None):
    """Candidate N = B^+, M = B^+ A D^+.

    N(N)^perp = R(B) holds by construction; M D = N A holds iff N(D) lies in
    N(A).  Invalidity is reported in the result, never raised.
    """
    tol = tol or lq1.tol
    _check_left_product_shapes(lq1, lq2)
    n = nk.pseudoinverse(lq1.denominator, tol)
    m = lq1.q @ nk.pseudoinverse(lq2.denominator, tol)
    return witness_left(lq1, lq2, m, n, tol)


def auto_witness_right(rq1, rq2, tol=None):
    """Candidate N = D^+ and M the least-squares solution of B M = C N.

    R(N) = N(D)^perp holds by construction; B M = C N is exact iff
    R(C D^+) lies in R(B).
    """
    tol = tol or rq1.tol
    _check_right_product_shapes(rq1, rq2)
    n = nk.pseudoinverse(rq2.denominator, tol)
    m = nk.pseudoinverse(rq1.denominator, tol) @ (rq2.numerator @ n)
    return witness_right(rq1, rq2, m, n, tol)


def _require_valid(w):
    if not w.valid:
        raise InvalidWitness(
            "witness pair does not satisfy the product conditions",
            w.compatibility_residual,
            w.kernel_residual,
            max(w.compatibility_tolerance, w.kernel_tolerance),
        )


def product_left(lq1, lq2, w=None, tol=None):
    """``[B\\A][D\\C] = [N B \\ M C]`` for a valid witness (M, N).

    With ``w=None`` the automatic witness is used.
    """
    tol = tol or lq1.tol
    if w is None:
        w = auto_witness_left(lq1, lq2, tol)
    else:
        w = witness_left(lq1, lq2, w.m, w.n, tol)
    _require_valid(w)
    return left_quotient(w.m @ lq2.numerator, w.n @ lq1.denominator, tol)


def product_right(rq1, rq2, w=None, tol=None):
    """``[A/B][C/D] = [A P_{N(B)^perp} M / D N]`` for a valid witness (M, N)."""
    tol = tol or rq1.tol
    if w is None:
        w = auto_witness_right(rq1, rq2, tol)
    else:
        w = witness_right(rq1, rq2, w.m, w.n, tol)
    _require_valid(w)
    a, b = rq1.numerator, rq1.denominator
    numerator = a @ nk.projector_onto_corange(b, tol) @ w.m
    return right_quotient(numerator, rq2.denominator @ w.n, tol)


def simplify_left(m, lq, tol=None):
    """``[M B \\ M A] = [B \\ A]`` whenever N(M)^perp = R(B)."""
    tol = tol or lq.tol
    m = nk.as_matrix(m, "M")
    b = lq.denominator
    if m.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"M {m.shape} cannot multiply B {b.shape}")
    gap = nk.projector_distance(nk.projector_onto_corange(m, tol), nk.projector_onto_range(b, tol))
    if gap > _dim_tol(tol, b.shape[0]):
        raise SimplificationConditionViolated("N(M)^perp differs from R(B)", gap, _dim_tol(tol, b.shape[0]))
    return left_quotient(m @ lq.numerator, m @ b, tol)


def simplify_right(m, rq, tol=None):
    """``[A M / B M] = [A / B]`` whenever R(M) = N(B)^perp."""
    tol = tol or rq.tol
    m = nk.as_matrix(m, "M")
    b = rq.denominator
    if m.shape[0] != b.shape[1]:
        raise DimensionMismatch(f"B {b.shape} cannot multiply M {m.shape}")
    gap = nk.projector_distance(nk.projector_onto_range(m, tol), nk.projector_onto_corange(b, tol))
    if gap > _dim_tol(tol, b.shape[1]):
        raise SimplificationConditionViolated("R(M) differs from N(B)^perp", gap, _dim_tol(tol, b.shape[1]))
    return right_quotient(rq.numerator @ m, b @ m, tol)


def canonical_decomposition(a, tol=None):
    """``A = [A^* \\ A^* A]`` and ``A^+ = [A^* A \\ A^*]``."""
    tol = tol or DEFAULT_TOL
    a = nk.as_matrix(a, "A")
    ah = adjoint(a)
    gram = ah @ a
    return left_quotient(gram, ah, tol), left_quotient(ah, gram, tol)

