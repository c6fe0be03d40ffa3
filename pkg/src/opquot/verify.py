"""Full invariant suite for a single (A, B) instance."""

import math

import numpy as np

from . import numkernel as nk
from . import oracle
from .numkernel import adjoint, spectral_norm
from .quotient import (
    adjoint_left,
    adjoint_right,
    closedness_certificate,
    graph,
    j_isometry_defect,
    left_norm,
    left_quotient,
    r_operator,
    right_quotient,
)
from .report import VerificationReport

NORM_TOL = 1e-6
ORACLE_TOL = 1e-8
DUALITY_TOL = 1e-10
ISOMETRY_TOL = 1e-9


def _instance(a, b, mode, seed, paths):
    info = {
        "mode": mode,
        "dims": {"A": list(a.shape), "B": list(b.shape)},
        "seed": seed,
    }
    if paths:
        info["paths"] = dict(paths)
    return info


def verify_left(a, b, tol=None, seed=0, trials=20, paths=None):
    """Checks for ``[B\\A]``: Douglas conditions, oracle agreement, duality."""
    tol = tol or nk.DEFAULT_TOL
    a = nk.as_matrix(a, "A")
    b = nk.as_matrix(b, "B")
    report = VerificationReport(_instance(a, b, "left", seed, paths))
    lq = left_quotient(a, b, tol)
    report.extend(lq.checks())

    q = lq.q
    q_scale = 1.0 + spectral_norm(q)
    mu = oracle.mu_bisection(a, b, tol)
    norm2 = left_norm(lq) ** 2
    report.add("norm_vs_mu_bisection", abs(norm2 - mu) if math.isfinite(mu) else math.inf,
               NORM_TOL * (1.0 + norm2))
    report.add("oracle_least_squares", spectral_norm(oracle.least_squares_douglas(a, b, tol) - q),
               ORACLE_TOL * q_scale)

    probe = oracle.douglas_uniqueness_probe(a, b, trials, seed, tol)
    report.add("uniqueness_factorization", probe.max_factorization_residual,
               tol.residual_rel * (1.0 + spectral_norm(a)))
    # every alternative solution must violate the corange condition
    report.add("uniqueness_alternatives_rejected", probe.alternatives - probe.violations, 0)
    report.add("uniqueness_consistent", 0 if probe.consistent else 1, 0)

    rq = adjoint_left(lq)
    report.add("adjoint_duality", spectral_norm(rq.q - adjoint(q)), DUALITY_TOL * q_scale)
    report.add("adjoint_round_trip", spectral_norm(adjoint_right(rq).q - q), DUALITY_TOL * q_scale)
    report.add("closedness", 0 if closedness_certificate(adjoint(a), adjoint(b), tol).closed else 1, 0)
    return report


def verify_right(a, b, tol=None, seed=0, trials=20, paths=None):
    """Checks for ``[A/B]``: defining identity, kernel law, duality, graph, J."""
    tol = tol or nk.DEFAULT_TOL
    a = nk.as_matrix(a, "A")
    b = nk.as_matrix(b, "B")
    report = VerificationReport(_instance(a, b, "right", seed, paths))
    rq = right_quotient(a, b, tol)
    report.extend(rq.checks())

    q = rq.q
    q_scale = 1.0 + spectral_norm(q)
    lq = adjoint_right(rq)
    report.add("adjoint_duality", spectral_norm(lq.q - adjoint(q)), DUALITY_TOL * q_scale)
    report.add("adjoint_round_trip", spectral_norm(adjoint_left(lq).q - q), DUALITY_TOL * q_scale)
    report.add("dual_oracle_least_squares",
               spectral_norm(oracle.least_squares_douglas(adjoint(a), adjoint(b), tol) - lq.q),
               ORACLE_TOL * q_scale)

    g = graph(a, b, tol)
    report.add("graph_adjoint_pairs", g.adjoint_pair_residual(a, b), tol.residual_rel * (1.0 + spectral_norm(g.t)))
    dims = g.graph_basis.shape[1] + g.adjoint_graph_basis.shape[1]
    report.add("graph_dimension_count", abs(dims - g.t.shape[0]), 0)

    cert = closedness_certificate(a, b, tol)
    report.add("closedness", 0 if cert.closed else 1, 0)
    report.add("r_operator_rank", abs(nk.rank(r_operator(a, b, tol), tol.with_rank_floor(1e-8)) - cert.rank), 0)

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        u = rng.standard_normal(a.shape[0]) + 1j * rng.standard_normal(a.shape[0])
        v = rng.standard_normal(b.shape[0]) + 1j * rng.standard_normal(b.shape[0])
        x = adjoint(a) @ u + adjoint(b) @ v
        worst = max(worst, j_isometry_defect(a, b, x, tol) / (1.0 + np.linalg.norm(x)))
    report.add("j_isometry", worst, ISOMETRY_TOL)
    return report
