"""Expansivity diagnostics: eigenvalue gap, uniform growth search, and
central-window growth minimized over the unit sphere.

For invertible matrices the clean criterion is spectral: no eigenvalue on the
unit circle. The other two diagnostics probe the same property dynamically,
which also makes sense for operators given only through their action.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import KindMismatch, NotCertified
from .linalg import DenseVector, array_norm
from .operators import LinOp
from .optim import coordinate_directions, descend, diagonal_directions
from .sampling import dense_basis, rng_from_seed, unit_dense_samples, unit_seq_samples

EXPANSIVE = "Expansive"
NOT_EXPANSIVE = "NotExpansive"

UNIFORM_THRESHOLD = 2.0
WINDOW_GROWTH_MAX_DIM = 8


@dataclass(frozen=True)
class EigenExpansivity:
    verdict: str
    circle_gap: float
    moduli: tuple[float, ...]


def expansive_eigen_test(op: LinOp, gap: float = 1e-6) -> EigenExpansivity:
    """Spectral expansivity check at resolution gap.

    An eigenvalue whose modulus is within gap of 1 cannot be certified off
    the circle, so the verdict is NotExpansive at that resolution.
    """
    if op.vector_kind != "dense":
        raise KindMismatch("eigen test needs a dense operator")
    from .linalg import dense_eig

    pairs = dense_eig(op.dense_matrix())
    moduli = tuple(abs(lam) for lam, _ in pairs)
    circle_gap = min(abs(m - 1.0) for m in moduli)
    verdict = EXPANSIVE if circle_gap >= gap else NOT_EXPANSIVE
    return EigenExpansivity(verdict=verdict, circle_gap=circle_gap, moduli=moduli)


@dataclass(frozen=True)
class UniformExpansivity:
    """Least window half-length m such that every probed unit vector grows
    past the threshold somewhere in [-m, m], with the per-sample table."""

    m: int
    threshold: float
    table: tuple


def _default_unit_samples(op: LinOp, count: int, rng_seed: int):
    rng = rng_from_seed(rng_seed)
    if op.vector_kind == "dense":
        dim = op.dense_matrix().shape[0]
        return list(dense_basis(dim, op.norm_tag)) + list(
            unit_dense_samples(dim, op.norm_tag, count, rng)
        )
    return unit_seq_samples(-4, 4, op.norm_tag, count, rng, support=3)


def uniform_expansivity_search(
    op: LinOp,
    m_max: int,
    samples: Optional[Sequence] = None,
    threshold: float = UNIFORM_THRESHOLD,
    rng_seed: int = 0,
) -> UniformExpansivity:
    """Search for a uniform growth window over unit samples.

    For each unit sample, find the least n <= m_max with ||L^n x|| or
    ||L^-n x|| at or above the threshold. Raises NotCertified when some
    sample never reaches it; a rotation fails for every sample.
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    if samples is None:
        samples = _default_unit_samples(op, 64, rng_seed)
    inv = op.inverse() if op.invertible() else None
    table = []
    worst = 0
    for x in samples:
        fwd = x
        bwd = x
        found = None
        for n in range(1, m_max + 1):
            fwd = op.apply(fwd)
            if fwd.norm() >= threshold:
                found = n
                break
            if inv is not None:
                bwd = inv.apply(bwd)
                if bwd.norm() >= threshold:
                    found = n
                    break
        if found is None:
            raise NotCertified(
                f"sample never grew past {threshold} within {m_max} steps",
                sample=x,
            )
        table.append((x, found))
        worst = max(worst, found)
    return UniformExpansivity(m=worst, threshold=threshold, table=tuple(table))


def central_window_growth(
    op: LinOp,
    n_list: Sequence[int],
    rng_seed: int = 0,
    seeds_per_n: int = 12,
) -> dict[int, float]:
    """min over the unit sphere of max_{|n| <= N} ||L^n x||, per N.

    Dense only, dimension capped at 8. A hyperbolic operator forces growth
    so the value climbs with N; an isometry pins it at 1. Minimization runs
    the deterministic descent over normalized vectors from basis and random
    seeds, so reported values are upper bounds for the true min.
    """
    if op.vector_kind != "dense":
        raise KindMismatch("window growth needs a dense operator")
    matrix = op.dense_matrix()
    dim = matrix.shape[0]
    if dim > WINDOW_GROWTH_MAX_DIM:
        raise ValueError(f"window growth is limited to dimension {WINDOW_GROWTH_MAX_DIM}")
    if any(n < 0 for n in n_list):
        raise ValueError("window half-lengths must be nonnegative")
    inv_matrix = np.linalg.inv(matrix) if op.invertible() else None
    rng = rng_from_seed(rng_seed)
    out: dict[int, float] = {}
    for N in n_list:
        if N == 0:
            out[0] = 1.0
            continue
        powers = [np.eye(dim, dtype=complex)]
        for _ in range(N):
            powers.append(matrix @ powers[-1])
        if inv_matrix is not None:
            back = np.eye(dim, dtype=complex)
            for _ in range(N):
                back = inv_matrix @ back
                powers.append(back.copy())
        stack = np.stack(powers)

        def growth(v: np.ndarray) -> float:
            nv = array_norm(v, op.norm_tag)
            if nv < 1e-12:
                return np.inf
            images = stack @ v
            vals = [array_norm(images[i], op.norm_tag) for i in range(images.shape[0])]
            return max(vals) / nv

        seeds = [b.coords for b in dense_basis(dim, op.norm_tag)]
        seeds += [s.coords for s in unit_dense_samples(dim, op.norm_tag, seeds_per_n, rng)]
        dirs = coordinate_directions(dim) + diagonal_directions(dim)
        best = np.inf
        for s in seeds:
            x, val = descend(growth, s.astype(complex), dirs, scale=0.5)
            best = min(best, val)
        out[N] = best
    return out


@dataclass(frozen=True)
class EcsResult:
    member: bool
    first_violation_n: Optional[int]
    max_ratio: float


def ecs_membership(op: LinOp, x, c: float, beta: float, horizon: int) -> EcsResult:
    """Check the forward decay certificate ||L^n x|| <= c * beta^n * ||x||.

    Membership in the contracting cone at the stated constants, verified on
    the finite horizon. The zero vector is trivially a member.
    """
    if c <= 0 or beta <= 0:
        raise ValueError("certificate constants must be positive")
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    base = x.norm()
    if base == 0.0:
        return EcsResult(member=True, first_violation_n=None, max_ratio=0.0)
    cur = x
    max_ratio = 0.0
    first_violation = None
    for n in range(horizon + 1):
        bound = c * beta**n * base
        ratio = cur.norm() / bound
        max_ratio = max(max_ratio, ratio)
        if ratio > 1.0 + 1e-12 and first_violation is None:
            first_violation = n
        cur = op.apply(cur)
    return EcsResult(
        member=first_violation is None,
        first_violation_n=first_violation,
        max_ratio=max_ratio,
    )


@dataclass(frozen=True)
class ExpansivityReport:
    eigen: Optional[EigenExpansivity]
    uniform: Optional[UniformExpansivity]
    window_growth: tuple


def expansivity_scan(
    op: LinOp,
    n_list: Sequence[int] = (1, 2, 4),
    m_max: int = 64,
    rng_seed: int = 0,
) -> ExpansivityReport:
    """Run all applicable diagnostics, recording failures as absences."""
    eigen = None
    if op.vector_kind == "dense":
        eigen = expansive_eigen_test(op)
    uniform = None
    try:
        uniform = uniform_expansivity_search(op, m_max, rng_seed=rng_seed)
    except NotCertified:
        uniform = None
    growth: tuple = ()
    if op.vector_kind == "dense" and op.dense_matrix().shape[0] <= WINDOW_GROWTH_MAX_DIM:
        table = central_window_growth(op, n_list, rng_seed=rng_seed)
        growth = tuple(sorted(table.items()))
    return ExpansivityReport(eigen=eigen, uniform=uniform, window_growth=growth)
