"""Structural stability at desk scale: bounded Lipschitz perturbations of a
split linear map, the correction functional built from its splitting, and
the conjugacies it generates.

The functional Gamma(alpha)(x) pushes the stable projection of a field
forward along the trajectory through x and the unstable projection backward,
so it satisfies Gamma(alpha)(R(x)) = L(Gamma(alpha)(x)) + alpha(x) exactly.
Fixed points of h -> Gamma(beta o (id + h)) conjugate L to L + beta; a
single Gamma application along the perturbed trajectory gives the inverse
direction. Everything is evaluated lazily with memoization, truncating the
series at horizons certified from the splitting's power norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    CircleEigenvalue,
    NoConvergence,
    NotCertified,
    NotContraction,
    NotContractiveSpectrum,
    TrajectoryBudget,
)
from .gallery import DifferentiableMap
from .linalg import DenseVector, array_norm
from .operators import DenseOp, LinOp
from .sampling import rng_from_seed, unit_dense_samples
from .shadowing import _sum_until_tail, series_constants
from .splitting import Splitting, spectral_split

PHI_LIP_MAX = 8.0 / (3.0 * math.sqrt(3.0))
MEMO_QUANTUM = 1e-12
MEMO_COORD_CAP = 1e6
TRAJECTORY_CAP = 10_000
POINTWISE_INVERSE_CAP = 300


def _bump(r: float) -> float:
    if r >= 1.0:
        return 0.0
    return (1.0 - r * r) ** 2


@dataclass(frozen=True)
class BumpPerturbation:
    """Compactly supported radial bump field A * phi(|x - c| / R) * u.

    phi(r) = (1 - r^2)^2 on [0, 1], zero beyond, measured in the ambient
    norm; |phi'| peaks at 8 / (3 sqrt 3), which certifies the Lipschitz
    constant amplitude * that / radius with no sampling involved.
    """

    center: DenseVector
    radius: float
    amplitude: float
    direction: DenseVector

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.amplitude < 0:
            raise ValueError("amplitude must be nonnegative")
        if abs(self.direction.norm() - 1.0) > 1e-9:
            raise ValueError("direction must have unit norm")
        if self.center.norm_tag != self.direction.norm_tag:
            raise ValueError("center and direction norm tags differ")

    @property
    def norm_tag(self) -> str:
        return self.direction.norm_tag

    @property
    def sup_norm(self) -> float:
        return self.amplitude

    @property
    def lip(self) -> float:
        return self.amplitude * PHI_LIP_MAX / self.radius

    @property
    def support_radius(self) -> float:
        return self.center.norm() + self.radius

    def __call__(self, x: DenseVector) -> DenseVector:
        r = (x - self.center).norm() / self.radius
        return self.direction * (self.amplitude * _bump(r))

    def verify_lipschitz(self, pairs: int = 1000, rng_seed: int = 0) -> float:
        """Sampled ratio check against the certified constant; returns the
        worst observed ratio and raises if it beats the certificate."""
        rng = rng_from_seed(rng_seed)
        dim = self.center.dim
        worst = 0.0
        for u, v in zip(
            unit_dense_samples(dim, self.norm_tag, pairs, rng),
            unit_dense_samples(dim, self.norm_tag, pairs, rng),
        ):
            x = self.center + u * (self.radius * 1.2 * rng.uniform(0.0, 1.0))
            y = self.center + v * (self.radius * 1.2 * rng.uniform(0.0, 1.0))
            gap = (x - y).norm()
            if gap < 1e-12:
                continue
            ratio = (self(x) - self(y)).norm() / gap
            worst = max(worst, ratio)
            if ratio > self.lip * (1.0 + 1e-9):
                raise NotCertified(
                    f"observed Lipschitz ratio {ratio:.9g} beats certificate {self.lip:.9g}"
                )
        return worst


@dataclass(frozen=True)
class ConstantField:
    """alpha(x) = v everywhere; Gamma of it has a resolvent closed form."""

    value: DenseVector

    @property
    def norm_tag(self) -> str:
        return self.value.norm_tag

    @property
    def sup_norm(self) -> float:
        return self.value.norm()

    @property
    def lip(self) -> float:
        return 0.0

    @property
    def support_radius(self) -> float:
        return math.inf

    def __call__(self, x: DenseVector) -> DenseVector:
        return self.value


class _NegatedField:
    def __init__(self, base):
        self.base = base
        self.norm_tag = base.norm_tag
        self.sup_norm = base.sup_norm
        self.lip = base.lip
        self.support_radius = base.support_radius

    def __call__(self, x):
        return -self.base(x)


class _ComposedField:
    """beta o (id + h) with the escape shortcut: outside the inflated
    support ball the composite vanishes without ever evaluating h."""

    def __init__(self, beta, h: Optional[Callable], h_bound: float):
        self.beta = beta
        self.h = h
        self.h_bound = h_bound
        self.norm_tag = beta.norm_tag
        self.sup_norm = beta.sup_norm
        self.support_radius = beta.support_radius + h_bound

    def __call__(self, y: DenseVector) -> DenseVector:
        if y.norm() > self.support_radius:
            return y * 0.0
        z = y if self.h is None else y + self.h(y)
        return self.beta(z)


# ---------------------------------------------------------------------------
# The correction functional
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaHorizons:
    k_fwd: int
    k_bwd: int
    gamma_bound: float
    series_A: float
    series_B: float
    proj_S_norm: float
    proj_U_norm: float


def compute_horizons(
    op: LinOp,
    split: Splitting,
    sup_alpha: float,
    tail_tol: float = 1e-9,
) -> GammaHorizons:
    """Truncation horizons making the discarded Gamma tail below tail_tol."""
    term_tail = tail_tol / (4.0 * max(1.0, sup_alpha))
    try:
        sc = series_constants(op, split, tail=term_tail, cap=TRAJECTORY_CAP)
    except NotCertified as exc:
        raise TrajectoryBudget(
            f"series horizons exceeded {TRAJECTORY_CAP} trajectory steps"
        ) from exc
    return GammaHorizons(
        k_fwd=len(sc.a_terms),
        k_bwd=len(sc.b_terms),
        gamma_bound=sc.gamma,
        series_A=sc.series_A,
        series_B=sc.series_B,
        proj_S_norm=sc.proj_S_norm,
        proj_U_norm=sc.proj_U_norm,
    )


def gamma_eval(
    op: LinOp,
    split: Splitting,
    alpha,
    x: DenseVector,
    horizons: Optional[GammaHorizons] = None,
    traj_forward: Optional[Callable] = None,
    traj_backward: Optional[Callable] = None,
    tail_tol: float = 1e-9,
) -> DenseVector:
    """Gamma(alpha)(x) along the trajectory maps (the operator by default).

    Forward part: sum_{k>=0} L^k P_S alpha(R^{-k-1} x); backward part:
    sum_{k>=1} L^{-k} P_U alpha(R^{k-1} x). Both Horner-evaluated with
    re-projection each step so roundoff stays on the contracting side.
    """
    if horizons is None:
        horizons = compute_horizons(op, split, alpha.sup_norm, tail_tol)
    inv = op.inverse()
    if traj_forward is None:
        traj_forward = op.apply
    if traj_backward is None:
        traj_backward = inv.apply
    zero = x * 0.0
    reach = getattr(alpha, "support_radius", math.inf)

    def field_at(pt: DenseVector) -> DenseVector:
        if pt.norm() > reach:
            return zero
        return alpha(pt)

    back_values = []
    pt = x
    for _ in range(horizons.k_fwd):
        pt = traj_backward(pt)
        back_values.append(split.apply_P_S(field_at(pt)))
    acc_f = zero
    for v in reversed(back_values):
        acc_f = split.apply_P_S(op.apply(acc_f)) + v

    fwd_values = []
    pt = x
    for k in range(1, horizons.k_bwd + 1):
        fwd_values.append(split.apply_P_U(field_at(pt)))
        if k < horizons.k_bwd:
            pt = traj_forward(pt)
    acc_b = zero
    for u in reversed(fwd_values):
        acc_b = split.apply_P_U(inv.apply(acc_b + u))
    return acc_f - acc_b


# ---------------------------------------------------------------------------
# Direct conjugacy by Picard iteration
# ---------------------------------------------------------------------------


def _memo_key(x: DenseVector, depth: int):
    coords = x.coords
    if np.abs(coords).max(initial=0.0) > MEMO_COORD_CAP:
        return None
    scaled = np.round(coords / MEMO_QUANTUM)
    return (depth, tuple(int(v.real) for v in scaled), tuple(int(v.imag) for v in scaled))


class ConjugacyField:
    """h_m from the Picard iteration h_{m+1} = Gamma(beta o (id + h_m)),
    evaluated lazily at query points with per-depth memoization."""

    def __init__(self, op: LinOp, split: Splitting, beta, depth: int, horizons: GammaHorizons):
        self.op = op
        self.split = split
        self.beta = beta
        self.depth = depth
        self.horizons = horizons
        self.h_bound = horizons.gamma_bound * beta.sup_norm
        self.sup_norm = self.h_bound
        self.norm_tag = beta.norm_tag
        self._memo: dict = {}

    def eval(self, x: DenseVector, depth: int) -> DenseVector:
        if depth <= 0:
            return x * 0.0
        key = _memo_key(x, depth)
        if key is not None and key in self._memo:
            return self._memo[key]
        prev = (lambda y: self.eval(y, depth - 1)) if depth > 1 else None
        composed = _ComposedField(self.beta, prev, self.h_bound)
        out = gamma_eval(self.op, self.split, composed, x, self.horizons)
        if key is not None:
            self._memo[key] = out
        return out

    def __call__(self, x: DenseVector) -> DenseVector:
        return self.eval(x, self.depth)


@dataclass(frozen=True)
class ConjugacySolution:
    """Near-identity conjugacy data: (id + field) o L = (L + beta) o (id + field)."""

    field: Callable
    depth: int
    factor: float
    h_bound: float
    horizons: GammaHorizons
    reached_tol: bool


def conjugacy_solve(
    op: LinOp,
    split: Splitting,
    beta,
    tol: float = 1e-8,
    max_depth: int = 12,
) -> ConjugacySolution:
    """Picard-solve the conjugacy equation to within tol.

    The iteration contracts with factor gamma_bound * lip(beta); the depth
    is chosen from the geometric residual bound and clamped at max_depth.
    A clamped depth is reported through reached_tol, and the honest arbiter
    either way is conjugacy_residual.
    """
    horizons = compute_horizons(op, split, beta.sup_norm, tail_tol=tol * 1e-2)
    factor = horizons.gamma_bound * beta.lip
    if factor >= 1.0 - 1e-12:
        raise NotContraction(
            f"Picard factor {factor:.6g} is not below 1", factor=factor
        )
    h_bound = horizons.gamma_bound * beta.sup_norm
    if h_bound <= tol:
        depth = 0
    elif factor == 0.0:
        depth = 1
    else:
        depth = math.ceil(math.log(tol * (1.0 - factor) / h_bound) / math.log(factor))
        depth = max(depth, 1)
    reached = depth <= max_depth
    depth = min(depth, max_depth)
    return ConjugacySolution(
        field=ConjugacyField(op, split, beta, depth, horizons),
        depth=depth,
        factor=factor,
        h_bound=h_bound,
        horizons=horizons,
        reached_tol=reached,
    )


def conjugacy_residual(op: LinOp, beta, h: Callable, points: Sequence[DenseVector]) -> float:
    """max over points of ||h(Lx) - L h(x) - beta(x + h(x))||."""
    worst = 0.0
    for x in points:
        hx = h(x)
        res = h(op.apply(x)) - op.apply(hx) - beta(x + hx)
        worst = max(worst, res.norm())
    return worst


# ---------------------------------------------------------------------------
# Inverse conjugacy: one Gamma application along the perturbed trajectory
# ---------------------------------------------------------------------------


def perturbed_backward_map(op: LinOp, beta, tol: float = 1e-13) -> Callable:
    """Pointwise inverse of M = L + beta by iterating y <- L^-1(z - beta(y)).

    Contracts with factor ||L^-1|| * lip(beta); callers must keep that below
    one, which conjugacy preconditions already enforce.
    """
    inv = op.inverse()

    def backward(z: DenseVector) -> DenseVector:
        y = inv.apply(z)
        for _ in range(POINTWISE_INVERSE_CAP):
            y_next = inv.apply(z - beta(y))
            step = (y_next - y).norm()
            y = y_next
            if step <= tol * (1.0 + y.norm()):
                return y
        raise NoConvergence(
            f"pointwise inverse did not settle in {POINTWISE_INVERSE_CAP} iterations"
        )

    return backward


class GammaField:
    """Memoized x -> Gamma(alpha)(x) along explicit trajectory maps."""

    def __init__(self, op, split, alpha, horizons, traj_forward, traj_backward):
        self.op = op
        self.split = split
        self.alpha = alpha
        self.horizons = horizons
        self.traj_forward = traj_forward
        self.traj_backward = traj_backward
        self.sup_norm = horizons.gamma_bound * alpha.sup_norm
        self.norm_tag = alpha.norm_tag
        self._memo: dict = {}

    def __call__(self, x: DenseVector) -> DenseVector:
        key = _memo_key(x, 0)
        if key is not None and key in self._memo:
            return self._memo[key]
        out = gamma_eval(
            self.op,
            self.split,
            self.alpha,
            x,
            self.horizons,
            traj_forward=self.traj_forward,
            traj_backward=self.traj_backward,
        )
        if key is not None:
            self._memo[key] = out
        return out


@dataclass(frozen=True)
class InverseConjugacy:
    """(id + field) o (L + beta) = L o (id + field), from one Gamma pass."""

    field: Callable
    horizons: GammaHorizons
    backward_factor: float


def inverse_conjugacy(
    op: LinOp,
    split: Splitting,
    beta,
    tol: float = 1e-8,
) -> InverseConjugacy:
    horizons = compute_horizons(op, split, beta.sup_norm, tail_tol=tol * 1e-2)
    backward_factor = op.inverse().operator_norm() * beta.lip
    if backward_factor >= 0.9:
        raise NotContraction(
            f"pointwise inverse factor {backward_factor:.6g} too close to 1",
            factor=backward_factor,
        )

    def forward(y: DenseVector) -> DenseVector:
        return op.apply(y) + beta(y)

    backward = perturbed_backward_map(op, beta)
    fld = GammaField(op, split, _NegatedField(beta), horizons, forward, backward)
    return InverseConjugacy(field=fld, horizons=horizons, backward_factor=backward_factor)


def inverse_residual(op: LinOp, beta, h_prime: Callable, points: Sequence[DenseVector]) -> float:
    """max over points of ||beta(x) + h'(Mx) - L h'(x)|| with M = L + beta."""
    worst = 0.0
    for x in points:
        mx = op.apply(x) + beta(x)
        res = beta(x) + h_prime(mx) - op.apply(h_prime(x))
        worst = max(worst, res.norm())
    return worst


# ---------------------------------------------------------------------------
# Local linearization of a differentiable map at a hyperbolic fixed point
# ---------------------------------------------------------------------------


def _cutoff(t: float) -> float:
    if t <= 1.0:
        return 1.0
    if t >= 2.0:
        return 0.0
    return (1.0 - (t - 1.0) ** 2) ** 2


class _CutoffField:
    """chi(|y| / r) * (G(y) - L y): the recentered nonlinearity, killed
    smoothly between radius r and 2r so it is globally bounded Lipschitz.

    sup and lip are sampled estimates with safety margins, not proofs; the
    downstream residual check is what certifies the result.
    """

    def __init__(self, G, matrix, radius, norm_tag, sup_norm, lip):
        self.G = G
        self.matrix = matrix
        self.radius = radius
        self.norm_tag = norm_tag
        self.sup_norm = sup_norm
        self.lip = lip
        self.support_radius = 2.0 * radius

    def __call__(self, y: DenseVector) -> DenseVector:
        t = y.norm() / self.radius
        if t >= 2.0:
            return y * 0.0
        lin = DenseVector(self.matrix @ y.coords, y.norm_tag)
        return (self.G(y) - lin) * _cutoff(t)


def _sample_field_constants(G, matrix, radius, dim, tag, rng):
    raw = _CutoffField(G, matrix, radius, tag, sup_norm=math.inf, lip=math.inf)
    sup = 0.0
    pts = []
    for u in unit_dense_samples(dim, tag, 160, rng):
        y = u * (2.0 * radius * rng.uniform(0.0, 1.0) ** 0.5)
        pts.append(y)
        sup = max(sup, raw(y).norm())
    lip = 0.0
    for i in range(len(pts)):
        x = pts[i]
        y = pts[(i + 1) % len(pts)]
        gap = (x - y).norm()
        if gap > 1e-9:
            lip = max(lip, (raw(x) - raw(y)).norm() / gap)
    for u in unit_dense_samples(dim, tag, 160, rng):
        y = u * (2.0 * radius * rng.uniform(0.0, 1.0))
        d = unit_dense_samples(dim, tag, 1, rng)[0] * (radius * 1e-4)
        gap = d.norm()
        lip = max(lip, (raw(y) - raw(y + d)).norm() / gap)
    return sup * 1.25, lip * 1.5


@dataclass(frozen=True)
class LocalLinearization:
    """Certified-by-residual local conjugacy K with K o G = L o K near the
    fixed point, in recentered coordinates (z = original - fixed point)."""

    map: DifferentiableMap
    fixed_point: DenseVector
    op: DenseOp
    radius: float
    solution: InverseConjugacy
    cutoff_sup: float
    cutoff_lip: float
    factor: float

    def conjugacy(self, z: DenseVector) -> DenseVector:
        return z + self.solution.field(z)

    def recentered_map(self, z: DenseVector) -> DenseVector:
        p = self.fixed_point.coords
        return DenseVector(self.map(z.coords + p) - p, z.norm_tag)

    def residual(self, points: Sequence[DenseVector]) -> float:
        """max over recentered points (inside the inner ball, where the
        cutoff is the identity) of ||K(G(z)) - L(K(z))||."""
        worst = 0.0
        for z in points:
            if z.norm() > self.radius:
                raise ValueError("residual points must lie in the inner ball")
            lhs = self.conjugacy(self.recentered_map(z))
            rhs = self.op.apply(self.conjugacy(z))
            worst = max(worst, (lhs - rhs).norm())
        return worst


def grobman_hartman_local(
    map_obj: DifferentiableMap,
    p: Optional[DenseVector] = None,
    box_radius: float = 1.0,
    tol: float = 1e-6,
    min_radius: float = 1e-4,
    rng_seed: int = 0,
) -> LocalLinearization:
    """Local linearization at a hyperbolic fixed point.

    Recenters the map, splits the derivative off the unit circle, then
    shrinks the cutoff radius until the sampled nonlinearity is small enough
    for the one-pass inverse conjugacy. Near-circle derivative spectrum is
    not certifiable and raises accordingly.
    """
    if p is None:
        if map_obj.fixed_point is None:
            raise ValueError("the map declares no fixed point; pass p explicitly")
        p = map_obj.fixed_point
    p_arr = np.asarray(p.coords if isinstance(p, DenseVector) else p, dtype=complex)
    p_vec = DenseVector(p_arr, map_obj.norm_tag)
    fp_defect = array_norm(map_obj(p_arr) - p_arr, map_obj.norm_tag)
    if fp_defect > 1e-9 * (1.0 + p_vec.norm()):
        raise ValueError(f"fixed-point defect {fp_defect:.3g} too large at p")
    matrix = map_obj.jac(p_arr)
    op = DenseOp(matrix, map_obj.norm_tag)
    try:
        split = spectral_split(op)
    except CircleEigenvalue as exc:
        raise NotCertified(
            "derivative spectrum touches the unit circle; no hyperbolic model"
        ) from exc
    sc = series_constants(op, split)
    gamma_bound = sc.gamma
    inv_norm = op.inverse().operator_norm()
    rng = rng_from_seed(rng_seed)
    dim = p_vec.dim

    def G(z: DenseVector) -> DenseVector:
        return DenseVector(map_obj(z.coords + p_arr) - p_arr, map_obj.norm_tag)

    radius = box_radius
    while True:
        sup_est, lip_est = _sample_field_constants(
            G, matrix, radius, dim, map_obj.norm_tag, rng
        )
        factor = gamma_bound * lip_est
        if factor <= 0.5 and inv_norm * lip_est <= 0.5:
            break
        radius /= 2.0
        if radius < min_radius:
            raise NotCertified(
                f"no certifiable radius above {min_radius:g}; last factor {factor:.3g}"
            )
    beta = _CutoffField(G, matrix, radius, map_obj.norm_tag, sup_est, lip_est)
    solution = inverse_conjugacy(op, split, beta, tol=tol)
    return LocalLinearization(
        map=map_obj,
        fixed_point=p_vec,
        op=op,
        radius=radius,
        solution=solution,
        cutoff_sup=sup_est,
        cutoff_lip=lip_est,
        factor=factor,
    )


# ---------------------------------------------------------------------------
# Contractive series replay
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContractiveSumReport:
    gamma: float
    spectral_radius: float
    trials: int
    violations: int
    max_ratio: float


def verify_contractive_sum(
    op: LinOp,
    trials: int = 20,
    seq_len: int = 20,
    rng_seed: int = 0,
) -> ContractiveSumReport:
    """Check ||sum_k L^k x_k|| <= gamma * sup ||x_k|| on random sequences,
    with gamma = sum ||L^k|| summed to a certified-small tail.

    The same gamma is the shadowing constant of the contraction: its
    spectral splitting is all stable, so the series upper bound collapses
    to exactly this sum.
    """
    radius, _ = op.spectral_radius()
    if radius >= 1.0 - 1e-9:
        raise NotContractiveSpectrum(
            f"spectral radius {radius:.9g} is not below 1", radius=radius
        )
    gamma, _ = _sum_until_tail(op.power_norm, 0, 1e-12, TRAJECTORY_CAP, None)
    if op.vector_kind != "dense":
        raise NotCertified("the replay harness samples dense vectors only")
    dim = op.dense_matrix().shape[0]
    rng = rng_from_seed(rng_seed)
    violations = 0
    max_ratio = 0.0
    for _ in range(trials):
        xs = unit_dense_samples(dim, op.norm_tag, seq_len, rng)
        acc = xs[0] * 0.0
        for x in reversed(xs):
            acc = op.apply(acc) + x
        ratio = acc.norm() / gamma
        max_ratio = max(max_ratio, ratio)
        if ratio > 1.0 + 1e-9:
            violations += 1
    return ContractiveSumReport(
        gamma=gamma,
        spectral_radius=radius,
        trials=trials,
        violations=violations,
        max_ratio=max_ratio,
    )
