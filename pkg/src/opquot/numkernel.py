"""Dense complex linear-algebra kernel.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``; real
input is embedded with zero imaginary part.  The SVD and Hermitian
eigendecompositions come from LAPACK through ``numpy.linalg``.  Subspaces are
always compared through their orthogonal projectors, never through bases.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NonFiniteInput,
    NotHermitian,
    NotPositiveSemidefinite,
)

EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds shared by every operation.

    Parameters
    ----------
    rank_rel : float or None
        Relative singular-value cutoff.  ``None`` means ``max(rows, cols) * eps``
        of the matrix being factored.
    residual_rel : float
        Relative residual threshold for inclusion and identity checks.
    psd_rel : float
        Relative eigenvalue floor for Loewner-order and PSD tests.
    """

    rank_rel: Optional[float] = None
    residual_rel: float = 1e-8
    psd_rel: float = 1e-10

    def __post_init__(self):
        for name in ("rank_rel", "residual_rel", "psd_rel"):
            value = getattr(self, name)
            if value is not None and not value >= 0:
                raise ValueError(f"{name} must be nonnegative, got {value!r}")

    def rank_cutoff(self, shape):
        if self.rank_rel is not None:
            return self.rank_rel
        return max(shape) * EPS if shape else EPS

    def with_rank_floor(self, floor):
        """Copy whose relative rank cutoff is at least ``floor``."""
        current = self.rank_rel if self.rank_rel is not None else 0.0
        return replace(self, rank_rel=max(current, floor))


DEFAULT_TOL = ToleranceConfig()


def _tol(tol):
    return DEFAULT_TOL if tol is None else tol


def as_matrix(m, name="matrix"):
    """Validate ``m`` and return it as a 2-D complex128 array.

    Scalars become 1x1 matrices.  Empty shapes and non-finite entries are
    rejected.
    """
    arr = np.asarray(m)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionMismatch(f"{name} must have positive dimensions, got {arr.shape}")
    arr = arr.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return arr


def as_vector(x, length, name="x"):
    vec = np.asarray(x).astype(np.complex128, copy=False)
    if vec.ndim == 2 and 1 in vec.shape:
        vec = vec.reshape(-1)
    if vec.ndim != 1 or vec.shape[0] != length:
        raise DimensionMismatch(f"{name} must be a vector of length {length}, got shape {vec.shape}")
    return vec


def adjoint(m):
    """Conjugate transpose."""
    return np.conj(np.asarray(m)).T


def spectral_norm(m):
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    if m.ndim == 1:
        return float(np.linalg.norm(m))
    return float(np.linalg.norm(m, 2))


def frobenius_norm(m):
    return float(np.linalg.norm(m))


@dataclass(frozen=True)
class SvdFactorization:
    """Full SVD ``m = u @ diag(sigma) @ v^*`` plus the numerical rank."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray
    rank: int

    @property
    def shape(self):
        return (self.u.shape[0], self.v.shape[0])

    def range_basis(self):
        return self.u[:, : self.rank]

    def corange_basis(self):
        """Orthonormal basis of N(m)^perp = R(m^*)."""
        return self.v[:, : self.rank]

    def kernel_basis(self):
        return self.v[:, self.rank:]

    def cokernel_basis(self):
        """Orthonormal basis of R(m)^perp = N(m^*)."""
        return self.u[:, self.rank:]

    def reconstruct(self):
        k = len(self.sigma)
        return (self.u[:, :k] * self.sigma) @ adjoint(self.v[:, :k])


def svd(m, tol=None):
    """Full singular value decomposition with numerical rank.

    The rank counts singular values strictly above ``rank_rel * sigma[0]``.

    Raises
    ------
    ConvergenceFailure
        If LAPACK's iterative SVD does not converge.
    """
    tol = _tol(tol)
    m = as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD did not converge: {exc}") from exc
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > tol.rank_cutoff(m.shape) * s[0]))
    return SvdFactorization(u=u, sigma=s, v=adjoint(vh), rank=rank)


def rank(m, tol=None):
    return svd(m, tol).rank


def pseudoinverse(m, tol=None):
    """Moore-Penrose pseudoinverse ``v diag(1/sigma_kept) u^*``.

    >>> pseudoinverse([[1, 1], [0, 0]]).real
    array([[0.5, 0. ],
           [0.5, 0. ]])
    """
    f = svd(m, tol)
    r = f.rank
    return (f.v[:, :r] / f.sigma[:r]) @ adjoint(f.u[:, :r])


def _basis_projector(basis):
    return basis @ adjoint(basis)


def projector_onto_range(m, tol=None):
    """Orthogonal projector ``m m^+`` onto R(m)."""
    return _basis_projector(svd(m, tol).range_basis())


def projector_onto_corange(m, tol=None):
    """Orthogonal projector ``m^+ m`` onto N(m)^perp = R(m^*)."""
    return _basis_projector(svd(m, tol).corange_basis())


def range_basis(m, tol=None):
    return svd(m, tol).range_basis()


def kernel_basis(m, tol=None):
    return svd(m, tol).kernel_basis()


def projector_distance(p, q):
    """Frobenius distance between two projectors."""
    return frobenius_norm(np.asarray(p) - np.asarray(q))


def _check_hermitian(p, tol, name="matrix"):
    p = as_matrix(p, name)
    if p.shape[0] != p.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got {p.shape}")
    defect = spectral_norm(p - adjoint(p))
    if defect > tol.residual_rel * (1.0 + spectral_norm(p)):
        raise NotHermitian(f"{name} is not Hermitian (defect {defect:.3e})")
    return (p + adjoint(p)) / 2


def psd_eigh(p, tol=None, name="matrix", scale=None):
    """Eigendecomposition of a Hermitian PSD matrix with clamped spectrum.

    Eigenvalues with ``|lambda| <= psd_rel * ||p||`` are set to exactly zero;
    anything below ``-psd_rel * ||p||`` raises.  When ``p`` was computed from
    larger operands, pass their norm as ``scale`` so that rounding noise of
    that size is recognised as zero.

    Returns
    -------
    w : ndarray
        Clamped eigenvalues, ascending.
    v : ndarray
        Unitary eigenvector matrix.
    """
    tol = _tol(tol)
    p = _check_hermitian(p, tol, name)
    try:
        w, v = np.linalg.eigh(p)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"Hermitian eigensolver did not converge: {exc}") from exc
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    floor = tol.psd_rel * max(norm, scale or 0.0)
    if w.size and w[0] < -floor:
        raise NotPositiveSemidefinite(
            f"{name} has eigenvalue {w[0]:.3e} below -{floor:.3e}")
    w = np.where(w <= floor, 0.0, w)
    return w, v


def hermitian_psd_sqrt(p, tol=None):
    """Principal square root of a Hermitian positive semidefinite matrix.

    >>> hermitian_psd_sqrt(np.diag([4.0, 9.0])).real
    array([[2., 0.],
           [0., 3.]])
    """
    w, v = psd_eigh(p, tol)
    root = (v * np.sqrt(w)) @ adjoint(v)
    return (root + adjoint(root)) / 2


def loewner_leq(p, q, tol=None):
    """Decide ``p <= q`` in the Loewner order.

    True iff the smallest eigenvalue of ``q - p`` is at least
    ``-psd_rel * max(||p||, ||q||, 1)``.
    """
    tol = _tol(tol)
    p = _check_hermitian(p, tol, "p")
    q = _check_hermitian(q, tol, "q")
    if p.shape != q.shape:
        raise DimensionMismatch(f"loewner_leq needs equal shapes, got {p.shape} and {q.shape}")
    try:
        lam_min = np.linalg.eigvalsh(q - p)[0]
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    floor = tol.psd_rel * max(spectral_norm(p), spectral_norm(q), 1.0)
    return bool(lam_min >= -floor)


def range_inclusion_residual(a, b, tol=None):
    """``||(I - b b^+) a||`` for deciding R(a) in R(b)."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(
            f"range inclusion needs equal row counts, got {a.shape} and {b.shape}")
    ub = range_basis(b, tol)
    return spectral_norm(a - ub @ (adjoint(ub) @ a))


def kernel_inclusion_residual(b, a, tol=None):
    """``||a (I - b^+ b)||`` for deciding N(b) in N(a)."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch(
            f"kernel inclusion needs equal column counts, got {b.shape} and {a.shape}")
    kb = kernel_basis(b, tol)
    return spectral_norm(a @ kb) if kb.shape[1] else 0.0


def inclusion_threshold(a, tol=None):
    return _tol(tol).residual_rel * (1.0 + spectral_norm(a))


def range_included(a, b, tol=None):
    """True iff R(a) is contained in R(b) within tolerance."""
    return range_inclusion_residual(a, b, tol) <= inclusion_threshold(a, tol)


def kernel_included(b, a, tol=None):
    """True iff N(b) is contained in N(a), i.e. ``a`` annihilates N(b)."""
    return kernel_inclusion_residual(b, a, tol) <= inclusion_threshold(a, tol)


def subspace_equal_ranges(a, b, tol=None):
    return range_included(a, b, tol) and range_included(b, a, tol)


def subspace_equal_kernels(a, b, tol=None):
    return kernel_included(a, b, tol) and kernel_included(b, a, tol)


def identity(n):
    return np.eye(n, dtype=np.complex128)
