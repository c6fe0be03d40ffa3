"""Brute-force verifiers and random instance generators.

The verifiers avoid the SVD path used by the main code: Douglas solutions are
recomputed from a complete orthogonal decomposition built on QR with column
pivoting, and the majorization constant is found by bisection on the Loewner
order.  Disagreement between the two paths therefore points at a real bug
rather than at a shared rounding pattern.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from . import numkernel as nk
from .errors import DimensionMismatch, InvalidSpec, RangeInclusionViolated
from .numkernel import DEFAULT_TOL

QR_RANK_REL = 1e-10
# bisection stops well below the 1e-9 * (1 + upper) resolution it must reach
BISECTION_WIDTH_REL = 1e-12

MODES = (
    "range_included",
    "kernel_included",
    "same_range",
    "same_kernel",
    "pinv_product_pair",
    "witness_compatible",
)


def _h(m):
    return np.conj(m).T


def _fro(m):
    return float(np.linalg.norm(m))


# --------------------------------------------------------------------------
# QR path
# --------------------------------------------------------------------------

def _pivoted_qr(b):
    q, r, piv = scipy.linalg.qr(b, pivoting=True, mode="full")
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0.0:
        k = 0
    else:
        k = int(np.count_nonzero(diag > QR_RANK_REL * diag[0]))
    return q, r, piv, k


def qr_range_basis(b):
    """Orthonormal basis of R(b) from pivoted QR."""
    q, _, _, k = _pivoted_qr(nk.as_matrix(b))
    return q[:, :k]


def qr_kernel_basis(b):
    """Orthonormal basis of N(b), taken as R(b^*)^perp via QR of b^*."""
    q, _, _, k = _pivoted_qr(_h(nk.as_matrix(b)))
    return q[:, k:]


def least_squares_douglas(a, b, tol=None):
    """Minimum-norm solution of ``B X = A`` by complete orthogonal decomposition.

    ``B P = Q [R11 R12; 0 0]``; the trapezoid ``[R11 R12]^*`` is factored again
    as ``Z L`` so that the minimum-norm solution is ``P Z L^{-*} Q1^* A``.
    """
    tol = tol or DEFAULT_TOL
    a = nk.as_matrix(a, "A")
    b = nk.as_matrix(b, "B")
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"BX = A needs equal row counts, got A {a.shape}, B {b.shape}")
    q, r, piv, k = _pivoted_qr(b)
    q1 = q[:, :k]
    residual = _fro(a - q1 @ (_h(q1) @ a))
    threshold = tol.residual_rel * (1.0 + _fro(a))
    if residual > threshold:
        raise RangeInclusionViolated("R(A) is not contained in R(B)", residual, threshold)
    p = b.shape[1]
    x = np.zeros((p, a.shape[1]), dtype=np.complex128)
    if k == 0:
        return x
    z, l = scipy.linalg.qr(_h(r[:k, :]), mode="economic")
    # [R11 R12] = L^* Z^*, so y = Z (L^*)^{-1} Q1^* A
    c = _h(q1) @ a
    y = z @ scipy.linalg.solve_triangular(_h(l), c, lower=True)
    x[piv, :] = y
    return x


# --------------------------------------------------------------------------
# majorization constant
# --------------------------------------------------------------------------

def mu_bisection(a, b, tol=None):
    """``inf{mu >= 0 : A A^* <= mu B B^*}`` by bisection; ``inf`` if none exists."""
    tol = tol or DEFAULT_TOL
    a = nk.as_matrix(a, "A")
    b = nk.as_matrix(b, "B")
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"needs equal row counts, got A {a.shape}, B {b.shape}")
    aa = a @ _h(a)
    bb = b @ _h(b)
    sb = np.linalg.svd(b, compute_uv=False)
    norm_a = float(np.linalg.svd(a, compute_uv=False)[0])
    kept = sb[sb > tol.rank_cutoff(b.shape) * sb[0]] if sb[0] > 0 else sb[:0]
    if kept.size == 0:
        return 0.0 if nk.loewner_leq(aa, np.zeros_like(aa), tol) else math.inf
    upper = (norm_a / kept[-1]) ** 2 + 1.0
    if not nk.loewner_leq(aa, upper * bb, tol):
        return math.inf
    lo, hi = 0.0, upper
    if nk.loewner_leq(aa, 0.0 * bb, tol):
        return 0.0
    width = BISECTION_WIDTH_REL * (1.0 + upper)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if nk.loewner_leq(aa, mid * bb, tol):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# --------------------------------------------------------------------------
# uniqueness of the Douglas solution
# --------------------------------------------------------------------------

@dataclass
class UniquenessReport:
    trials: int
    alternatives: int
    violations: int
    max_factorization_residual: float
    max_kernel_free_corange_residual: float
    consistent: bool
    corange_residuals: list = field(default_factory=list)


def douglas_uniqueness_probe(a, b, trials=20, seed=0, tol=None):
    """Perturb the Douglas solution along N(B) and check which condition breaks.

    Every ``X = B^+ A + (I - B^+ B) W`` solves ``B X = A``; condition (c),
    R(X) inside R(B^*), holds only when the kernel component vanishes.
    """
    tol = tol or DEFAULT_TOL
    a = nk.as_matrix(a, "A")
    b = nk.as_matrix(b, "B")
    x0 = least_squares_douglas(a, b, tol)
    rng = np.random.default_rng(seed)
    kb = qr_kernel_basis(b)
    corange = qr_range_basis(_h(b))
    p, n = x0.shape
    alternatives = violations = 0
    max_fact = max_free = 0.0
    corange_res = []
    consistent = True
    fact_tol = tol.residual_rel * (1.0 + _fro(a))
    for _ in range(trials):
        w = _complex_normal(rng, (p, n))
        kernel_part = kb @ (_h(kb) @ w)
        x = x0 + kernel_part
        fact = _fro(b @ x - a)
        max_fact = max(max_fact, fact)
        if fact > fact_tol:
            consistent = False
        c_res = _fro(x - corange @ (_h(corange) @ x))
        corange_res.append(c_res)
        c_tol = tol.residual_rel * (1.0 + _fro(x))
        is_alternative = _fro(kernel_part) > tol.residual_rel * (1.0 + _fro(w))
        if is_alternative:
            alternatives += 1
            if c_res > c_tol:
                violations += 1
            else:
                consistent = False
        else:
            max_free = max(max_free, c_res)
            if c_res > c_tol:
                consistent = False
    return UniquenessReport(trials, alternatives, violations, max_fact, max_free, consistent, corange_res)


# --------------------------------------------------------------------------
# generators
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class InstanceSpec:
    m: int
    n: int
    p: int
    rank_b: int
    seed: int = 0
    mode: str = "range_included"
    stress: bool = False


@dataclass(frozen=True, eq=False)
class Instance:
    """A generated instance.

    Field meaning depends on the mode:

    * ``range_included``, ``same_range``: ``a`` (m x n), ``b`` (m x p), for [B\\A].
    * ``kernel_included``, ``same_kernel``: ``a`` (m x n), ``b`` (p x n), for [A/B].
    * ``pinv_product_pair``: ``a`` is S (m x p), ``b`` is T (p x n), with R(T) = N(S)^perp.
    * ``witness_compatible``: left product [B\\A][D\\C] with ``a`` (m x n),
      ``b`` (m x p), ``c`` (p x n), ``d`` (p x n).
    """

    spec: InstanceSpec
    a: np.ndarray
    b: np.ndarray
    c: Optional[np.ndarray] = None
    d: Optional[np.ndarray] = None

    def __iter__(self):
        yield self.a
        yield self.b
        if self.c is not None:
            yield self.c
            yield self.d

    def right_pair(self):
        """Adjoint form of a witness-compatible instance, (A', B', C', D')
        with [A'/B'][C'/D'] = ([B\\A][D\\C])^*."""
        if self.c is None:
            raise InvalidSpec("right_pair needs a four-matrix instance")
        return _h(self.c), _h(self.d), _h(self.a), _h(self.b)


def _complex_normal(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _orthonormal(rng, rows, cols):
    if cols == 0:
        return np.zeros((rows, 0), dtype=np.complex128)
    q, _ = np.linalg.qr(_complex_normal(rng, (rows, cols)))
    return q


def _singular_values(r, stress):
    if r == 0:
        return np.zeros(0)
    return np.linspace(1.0, 1e-7 if stress else 0.1, r) if r > 1 else np.ones(1)


def random_rank(rng, rows, cols, r, stress=False):
    """rows x cols matrix ``U diag(s) V^*`` with r singular values from 1 down to 0.1."""
    u = _orthonormal(rng, rows, r)
    v = _orthonormal(rng, cols, r)
    return (u * _singular_values(r, stress)) @ _h(v)


def _validate(spec):
    if spec.mode not in MODES:
        raise InvalidSpec(f"unknown mode {spec.mode!r}; expected one of {MODES}")
    if min(spec.m, spec.n, spec.p) < 1:
        raise InvalidSpec(f"dimensions must be positive, got m={spec.m}, n={spec.n}, p={spec.p}")
    if not 0 <= spec.seed < 2**64:
        raise InvalidSpec("seed must be a 64-bit unsigned integer")
    bounds = {
        "range_included": (spec.m, spec.p),
        "kernel_included": (spec.p, spec.n),
        "same_range": (spec.m, spec.p, spec.n),
        "same_kernel": (spec.p, spec.n, spec.m),
        "pinv_product_pair": (spec.p, spec.n, spec.m),
        "witness_compatible": (spec.p, spec.n),
    }[spec.mode]
    if not 0 <= spec.rank_b <= min(bounds):
        raise InvalidSpec(f"rank_b={spec.rank_b} exceeds {min(bounds)} for mode {spec.mode}")


def generate(spec):
    """Build a deterministic random instance satisfying ``spec.mode``."""
    _validate(spec)
    rng = np.random.default_rng(spec.seed)
    m, n, p, r = spec.m, spec.n, spec.p, spec.rank_b
    mode = spec.mode
    if mode == "range_included":
        b = random_rank(rng, m, p, r, spec.stress)
        a = b @ _complex_normal(rng, (p, n))
        return Instance(spec, a, b)
    if mode == "kernel_included":
        b = random_rank(rng, p, n, r, spec.stress)
        a = _complex_normal(rng, (m, p)) @ b
        return Instance(spec, a, b)
    if mode == "same_range":
        ur = _orthonormal(rng, m, r)
        b = (ur * _singular_values(r, spec.stress)) @ _h(_orthonormal(rng, p, r))
        k = random_rank(rng, r, r, r) if r else np.zeros((0, 0))
        a = ur @ k @ _h(_orthonormal(rng, n, r))
        return Instance(spec, a, b)
    if mode == "same_kernel":
        vr = _orthonormal(rng, n, r)
        b = (_orthonormal(rng, p, r) * _singular_values(r, spec.stress)) @ _h(vr)
        k = random_rank(rng, r, r, r) if r else np.zeros((0, 0))
        a = _orthonormal(rng, m, r) @ k @ _h(vr)
        return Instance(spec, a, b)
    if mode == "pinv_product_pair":
        t = random_rank(rng, p, n, r, spec.stress)
        basis = nk.range_basis(t) if r else np.zeros((p, 0))
        f = random_rank(rng, m, basis.shape[1], basis.shape[1])
        s = f @ _h(basis) if basis.shape[1] else np.zeros((m, p), dtype=np.complex128)
        return Instance(spec, s, t)
    # witness_compatible: A = B Z D so that N(D) lies in N(A), C = D Y
    b = random_rank(rng, m, p, min(m, p))
    d = random_rank(rng, p, n, r, spec.stress)
    a = b @ _complex_normal(rng, (p, p)) @ d
    c = d @ _complex_normal(rng, (n, n))
    return Instance(spec, a, b, c, d)
