"""Hypercyclicity: a constructive criterion witness for the scaled backward
shift, and the adjoint-eigenvalue obstruction that rules it out on dense
finite-dimensional operators.

The witness machinery is fully quantitative: given finitely supported
targets and a tolerance it builds one seed vector together with the exact
visit schedule, then replays the orbit to certify every visit error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BadFactor, CannotSeparate, KindMismatch, NotCertified
from .linalg import L2, SparseBiSeq, dense_eig
from .operators import BackwardScaledOp, LinOp

MODULUS_BAND = 1e-9


@dataclass(frozen=True)
class CriterionData:
    """Operator plus the dense-set right inverses S_n with L^n S_n = id.

    s_map(y, n) must satisfy ||S_n y|| -> 0 for fixed y, which is what the
    separation arithmetic in criterion_witness consumes.
    """

    op: LinOp
    s_map: Callable[[SparseBiSeq, int], SparseBiSeq]
    s_decay_factor: float
    name: str


def rolewicz(factor: float) -> CriterionData:
    """Scaled backward shift on one-sided square-summable sequences.

    Hypercyclic exactly when |factor| > 1; smaller factors are rejected
    because the criterion data would not separate targets.
    """
    if not abs(factor) > 1.0:
        raise BadFactor(f"|factor| must exceed 1, got {factor!r}", factor=factor)
    op = BackwardScaledOp(factor, L2)

    def s_map(y: SparseBiSeq, n: int) -> SparseBiSeq:
        if n < 0:
            raise ValueError("right inverses are indexed by nonnegative n")
        if y.support() and y.support()[0] < 0:
            raise KindMismatch("targets live on nonnegative indices")
        scale = factor ** (-n)
        return SparseBiSeq({k + n: scale * v for k, v in y.entries.items()}, y.norm_tag)

    shown = factor.real if isinstance(factor, complex) and factor.imag == 0 else factor
    return CriterionData(
        op=op, s_map=s_map, s_decay_factor=abs(factor), name=f"rolewicz({shown:g})"
    )


@dataclass(frozen=True)
class WitnessResult:
    seed: SparseBiSeq
    visit_times: tuple[int, ...]
    visit_errors: tuple[float, ...]


def criterion_witness(
    cd: CriterionData,
    targets: Sequence[SparseBiSeq],
    eps: float,
    max_step: int = 10_000,
) -> WitnessResult:
    """One seed whose orbit visits every target within eps, with certificate.

    The seed is sum_i S_{n_i}(y_i) on a schedule spaced so earlier targets
    have died off exactly (the backward shift annihilates their support) and
    later contributions are geometrically small. Every visit is replayed
    through op.apply_power and the observed errors are re-checked.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    targets = list(targets)
    if not targets:
        raise ValueError("need at least one target")
    for y in targets:
        if y.norm_tag != cd.op.norm_tag:
            raise KindMismatch("target norm tag does not match the operator")
        if y.support() and y.support()[0] < 0:
            raise KindMismatch("targets live on nonnegative indices")
    m = len(targets)
    max_support = max((y.support()[-1] for y in targets if y.support()), default=0)
    max_norm = max((y.norm() for y in targets), default=0.0)
    f = cd.s_decay_factor
    if max_norm == 0.0:
        decay_steps = 1
    else:
        decay_steps = max(
            1,
            math.ceil(math.log(2.0 * m * max_norm / eps) / math.log(f)),
            math.ceil(math.log(2.0) / math.log(f)),
        )
    gap = max_support + 1 + decay_steps
    times = tuple(gap * (i + 1) for i in range(m))
    if times[-1] > max_step:
        raise CannotSeparate(
            f"schedule needs {times[-1]} steps, over the budget {max_step}",
            required=times[-1],
            budget=max_step,
        )
    seed = SparseBiSeq.zero(cd.op.norm_tag)
    for y, n in zip(targets, times):
        seed = seed + cd.s_map(y, n)
    errors = []
    for y, n in zip(targets, times):
        reached = cd.op.apply_power(n, seed)
        err = (reached - y).norm()
        if err > eps:
            raise NotCertified(
                f"replayed visit error {err:.3g} at step {n} exceeds eps {eps:.3g}"
            )
        errors.append(err)
    return WitnessResult(seed=seed, visit_times=times, visit_errors=tuple(errors))


@dataclass(frozen=True)
class AdjointObstruction:
    """Functional row y with y^H L = conj(mu) y^H, so |y^H L^n x| evolves
    geometrically with ratio |mu| along every orbit."""

    eigenvalue: complex
    modulus_class: str
    functional: tuple


def adjoint_eigen_obstruction(op: LinOp) -> tuple[AdjointObstruction, ...]:
    """All adjoint eigenvalue obstructions of a dense operator.

    Each one pins the orbit projections to a geometric evolution, which is
    incompatible with a dense orbit; a matrix always has at least one, which
    is the classical reason no finite-dimensional operator is hypercyclic.
    """
    if op.vector_kind != "dense":
        raise KindMismatch("the adjoint obstruction works on dense operators")
    matrix = op.dense_matrix()
    out = []
    for lam, vec in dense_eig(matrix.conj().T):
        mod = abs(lam)
        if abs(mod - 1.0) <= MODULUS_BAND:
            klass = "constant"
        elif mod < 1.0:
            klass = "decreasing"
        else:
            klass = "increasing"
        out.append(
            AdjointObstruction(
                eigenvalue=complex(lam),
                modulus_class=klass,
                functional=tuple(complex(c) for c in vec),
            )
        )
    if not out:
        raise NotCertified("dense eigensolve returned no eigenpairs")
    return tuple(out)
