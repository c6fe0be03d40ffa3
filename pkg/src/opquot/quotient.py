"""Left and right quotients of matrices.

``[B\\A]`` (left quotient) is the Douglas solution of ``B X = A`` and is
represented by ``q = B^+ A``.  ``[A/B]`` (right quotient) is the map
``B x -> A x`` with domain R(B) and matrix form ``q = A B^+``.

Quotient objects are immutable; their matrices are stored read-only.
"""

from dataclasses import dataclass

import numpy as np

from . import numkernel as nk
from .errors import (
    DimensionMismatch,
    KernelInclusionViolated,
    KernelsNotEqual,
    OutOfDomain,
    RangeInclusionViolated,
    RangesNotEqual,
)
from .numkernel import DEFAULT_TOL, adjoint, spectral_norm
from .report import Check


def _projector(basis, n):
    if basis.shape[1] == 0:
        return np.zeros((n, n), dtype=np.complex128)
    return basis @ adjoint(basis)


def _frozen(m):
    m = np.array(m, dtype=np.complex128, copy=True)
    m.flags.writeable = False
    return m


def _image_of_kernel(f, ker_a):
    """Coordinates in ``f.range_basis()`` of an orthonormal basis of B(N(A)).

    ``f`` is the SVD of B and N(B) lies inside N(A), so N(A) splits as
    N(B) + (N(A) cap N(B)^perp).  The cosines between N(A) and N(B)^perp are
    then 0 or 1 and a fixed 1/2 cut separates the two parts without any
    relative rank decision on the (possibly pure rounding) product B ker(A).
    """
    r = f.rank
    if r == 0 or ker_a.shape[1] == 0:
        return np.zeros((r, 0), dtype=np.complex128)
    w, cosines, _ = np.linalg.svd(adjoint(f.corange_basis()) @ ker_a)
    k = int(np.count_nonzero(cosines > 0.5))
    if k == 0:
        return np.zeros((r, 0), dtype=np.complex128)
    q, _ = np.linalg.qr(f.sigma[:r, None] * w[:, :k])
    return q


@dataclass(frozen=True, eq=False)
class LeftQuotient:
    """``[B\\A]`` with ``numerator = A`` (m x n), ``denominator = B`` (m x p)
    and ``q = B^+ A`` (p x n)."""

    numerator: np.ndarray
    denominator: np.ndarray
    q: np.ndarray
    tol: nk.ToleranceConfig = DEFAULT_TOL

    @property
    def shape(self):
        return self.q.shape

    def __call__(self, x):
        return apply_left(self, x)

    def norm(self):
        return left_norm(self)

    def adjoint(self):
        return adjoint_left(self)

    def inverse(self):
        return invert_left(self)

    def checks(self):
        """Residuals of the Douglas conditions for this instance."""
        a, b, q, tol = self.numerator, self.denominator, self.q, self.tol
        scale_a = tol.residual_rel * (1.0 + spectral_norm(a))
        scale_q = tol.residual_rel * (1.0 + spectral_norm(q))
        p_ker_a = nk.identity(a.shape[1]) - nk.projector_onto_corange(a, tol)
        p_ker_b = nk.identity(b.shape[1]) - nk.projector_onto_corange(b, tol)
        return [
            Check("range_inclusion", nk.range_inclusion_residual(a, b, tol), scale_a),
            Check("douglas_factorization", spectral_norm(b @ q - a), scale_a),
            Check("douglas_kernel", spectral_norm(q @ p_ker_a), scale_q),
            Check("douglas_rank", abs(nk.rank(q, tol) - nk.rank(a, tol)), 0.0),
            Check("douglas_corange", spectral_norm(p_ker_b @ q), scale_q),
        ]


@dataclass(frozen=True, eq=False)
class RightQuotient:
    """``[A/B]`` with ``numerator = A`` (m x n), ``denominator = B`` (p x n),
    ``q = A B^+`` (m x p) and ``domain_projector`` onto R(B)."""

    numerator: np.ndarray
    denominator: np.ndarray
    q: np.ndarray
    domain_projector: np.ndarray
    tol: nk.ToleranceConfig = DEFAULT_TOL

    @property
    def shape(self):
        return self.q.shape

    def __call__(self, y):
        return apply_right(self, y)

    def adjoint(self):
        return adjoint_right(self)

    def inverse(self):
        return invert_right(self)

    def kernel_law_residual(self):
        """Projector distance between N(q) restricted to R(B) and B(N(A))."""
        a, b, q, tol = self.numerator, self.denominator, self.q, self.tol
        p = b.shape[0]
        f = nk.svd(b, tol)
        ub = f.range_basis()
        restricted = ub @ nk.kernel_basis(q @ ub, tol) if ub.shape[1] else ub
        image = ub @ _image_of_kernel(f, nk.kernel_basis(a, tol))
        return nk.projector_distance(_projector(restricted, p), _projector(image, p))

    def checks(self):
        a, b, q, tol = self.numerator, self.denominator, self.q, self.tol
        scale_a = tol.residual_rel * (1.0 + spectral_norm(a))
        scale_q = tol.residual_rel * (1.0 + spectral_norm(q))
        off_domain = nk.identity(b.shape[0]) - self.domain_projector
        return [
            Check("kernel_inclusion", nk.kernel_inclusion_residual(b, a, tol), scale_a),
            Check("defining_identity", spectral_norm(q @ b - a), scale_a),
            Check("off_domain_annihilated", spectral_norm(q @ off_domain), scale_q),
            Check("kernel_law", self.kernel_law_residual(), tol.residual_rel * b.shape[0]),
        ]


def left_quotient(a, b, tol=None):
    """Construct ``[B\\A] = B^+ A``.

    Raises
    ------
    RangeInclusionViolated
        If R(A) is not contained in R(B) within tolerance.
    """
    tol = tol or DEFAULT_TOL
    a = nk.as_matrix(a, "A")
    b = nk.as_matrix(b, "B")
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"[B\\A] needs equal row counts, got A {a.shape}, B {b.shape}")
    residual = nk.range_inclusion_residual(a, b, tol)
    threshold = nk.inclusion_threshold(a, tol)
    if residual > threshold:
        raise RangeInclusionViolated("R(A) is not contained in R(B)", residual, threshold)
    q = nk.pseudoinverse(b, tol) @ a
    return LeftQuotient(_frozen(a), _frozen(b), _frozen(q), tol)


def right_quotient(a, b, tol=None):
    """Construct ``[A/B] = A B^+``.

    Raises
    ------
    KernelInclusionViolated
        If N(B) is not contained in N(A) within tolerance.
    """
    tol = tol or DEFAULT_TOL
    a = nk.as_matrix(a, "A")
    b = nk.as_matrix(b, "B")
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(f"[A/B] needs equal column counts, got A {a.shape}, B {b.shape}")
    residual = nk.kernel_inclusion_residual(b, a, tol)
    threshold = nk.inclusion_threshold(a, tol)
    if residual > threshold:
        raise KernelInclusionViolated("N(B) is not contained in N(A)", residual, threshold)
    f = nk.svd(b, tol)
    r = f.rank
    b_pinv = (f.v[:, :r] / f.sigma[:r]) @ adjoint(f.u[:, :r])
    domain = f.range_basis() @ adjoint(f.range_basis())
    return RightQuotient(_frozen(a), _frozen(b), _frozen(a @ b_pinv), _frozen(domain), tol)


def apply_left(lq, x):
    x = nk.as_vector(x, lq.q.shape[1])
    return lq.q @ x


def apply_right(rq, y):
    """Evaluate ``[A/B] y``; ``y`` must lie in R(B)."""
    y = nk.as_vector(y, rq.q.shape[1])
    outside = spectral_norm(y - rq.domain_projector @ y)
    threshold = rq.tol.residual_rel * (1.0 + spectral_norm(y))
    if outside > threshold:
        raise OutOfDomain("vector is not in the domain R(B)", outside, threshold)
    return rq.q @ y


def left_norm(lq):
    """Operator norm of ``[B\\A]``; its square is inf{mu : AA^* <= mu BB^*}."""
    return spectral_norm(lq.q)


def adjoint_left(lq):
    """``[B\\A]^* = [A^*/B^*]``."""
    return right_quotient(adjoint(lq.numerator), adjoint(lq.denominator), lq.tol)


def adjoint_right(rq):
    """``[A/B]^* = [B^*\\A^*]``."""
    return left_quotient(adjoint(rq.numerator), adjoint(rq.denominator), rq.tol)


def invert_left(lq, tol=None):
    """``[B\\A]^{-1} = [A\\B]``, defined when R(A) = R(B).

    ``lq.q @ result.q`` is the projector onto N(B)^perp and
    ``result.q @ lq.q`` the projector onto N(A)^perp.
    """
    tol = tol or lq.tol
    a, b = lq.numerator, lq.denominator
    r1 = nk.range_inclusion_residual(a, b, tol)
    r2 = nk.range_inclusion_residual(b, a, tol)
    t1 = nk.inclusion_threshold(a, tol)
    t2 = nk.inclusion_threshold(b, tol)
    if r1 > t1:
        raise RangesNotEqual("R(A) is not contained in R(B)", r1, t1)
    if r2 > t2:
        raise RangesNotEqual("R(B) is not contained in R(A)", r2, t2)
    return left_quotient(b, a, tol)


def invert_right(rq, tol=None):
    """``[A/B]^{-1} = [B/A]``, defined when N(A) = N(B)."""
    tol = tol or rq.tol
    a, b = rq.numerator, rq.denominator
    r1 = nk.kernel_inclusion_residual(b, a, tol)
    r2 = nk.kernel_inclusion_residual(a, b, tol)
    t1 = nk.inclusion_threshold(a, tol)
    t2 = nk.inclusion_threshold(b, tol)
    if r1 > t1:
        raise KernelsNotEqual("N(B) is not contained in N(A)", r1, t1)
    if r2 > t2:
        raise KernelsNotEqual("N(A) is not contained in N(B)", r2, t2)
    return right_quotient(b, a, tol)


@dataclass(frozen=True, eq=False)
class GraphData:
    """Graph G(B, A) = R(T) with T = [B; A], and its adjoint V(N(T^*)).

    ``adjoint_graph_basis`` has ``m + p`` rows: the first ``m`` hold the
    H2-component x and the last ``p`` the H3-component y of each pair.
    """

    t: np.ndarray
    graph_basis: np.ndarray
    adjoint_graph_basis: np.ndarray
    p: int
    m: int

    def adjoint_pair_residual(self, a, b):
        """Largest ``||A^* x - B^* y||`` over the adjoint basis columns."""
        x = self.adjoint_graph_basis[: self.m]
        y = self.adjoint_graph_basis[self.m:]
        if x.shape[1] == 0:
            return 0.0
        return float(np.max(np.linalg.norm(adjoint(a) @ x - adjoint(b) @ y, axis=0)))


def graph(a, b, tol=None):
    tol = tol or DEFAULT_TOL
    a = nk.as_matrix(a, "A")
    b = nk.as_matrix(b, "B")
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(f"graph needs equal column counts, got A {a.shape}, B {b.shape}")
    p, m = b.shape[0], a.shape[0]
    t = np.vstack([b, a])
    f = nk.svd(t, tol)
    cok = f.cokernel_basis()
    # V(u, v) = (-v, u) maps N(T^*) in H3 x H2 onto the adjoint graph in H2 x H3
    adj = np.vstack([-cok[p:], cok[:p]])
    return GraphData(_frozen(t), _frozen(f.range_basis()), _frozen(adj), p, m)


def r_operator(a, b, tol=None):
    """``(A^* A + B^* B)^{1/2}``; its range is R(A^*) + R(B^*)."""
    a = nk.as_matrix(a, "A")
    b = nk.as_matrix(b, "B")
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(f"needs equal column counts, got A {a.shape}, B {b.shape}")
    return nk.hermitian_psd_sqrt(adjoint(a) @ a + adjoint(b) @ b, tol)


def j_isometry_defect(a, b, x, tol=None):
    """``| ||J x|| - ||x'|| |`` with ``J x = (B R^+ x, A R^+ x)``.

    ``x'`` is the projection of ``x`` onto R(R) = R(A^*) + R(B^*), where J is
    an isometry; ``x`` itself is projected first.
    """
    a = nk.as_matrix(a, "A")
    b = nk.as_matrix(b, "B")
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(f"needs equal column counts, got A {a.shape}, B {b.shape}")
    x = nk.as_vector(x, a.shape[1])
    w, v = nk.psd_eigh(adjoint(a) @ a + adjoint(b) @ b, tol)
    keep = w > 0
    vk = v[:, keep]
    coeff = adjoint(vk) @ x
    r_pinv_x = vk @ (coeff / np.sqrt(w[keep]))
    jx = np.concatenate([b @ r_pinv_x, a @ r_pinv_x])
    return abs(float(np.linalg.norm(jx)) - float(np.linalg.norm(coeff)))


@dataclass(frozen=True)
class ClosednessCertificate:
    """Dimension of R(A^*) + R(B^*); finite-dimensional sums are always closed."""

    rank: int
    closed: bool = True


def closedness_certificate(a, b, tol=None):
    a = nk.as_matrix(a, "A")
    b = nk.as_matrix(b, "B")
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(f"needs equal column counts, got A {a.shape}, B {b.shape}")
    return ClosednessCertificate(rank=nk.rank(np.vstack([a, b]), tol), closed=True)
