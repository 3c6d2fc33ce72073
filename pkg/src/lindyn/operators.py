"""Operator families over the two vector kinds.

Dense matrices act on coordinate vectors. Diagonal weight maps, coordinate
shifts, the one-sided scaled backward shift, and compositions of these act on
finitely supported bilateral sequences. Every sequence operator here sends a
basis vector to a scalar multiple of a single basis vector, so norms and
powers reduce to suprema of finite weight products. That reduction is exact
and is what the splitting and shadowing layers lean on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import (
    ConfigInvalid,
    KindMismatch,
    NotInvertible,
)
from .linalg import (
    L1,
    L2,
    LINF,
    DenseVector,
    SparseBiSeq,
    as_square_matrix,
    check_norm_tag,
    check_scalar,
    dense_eig,
    mat_norm,
)

# ---------------------------------------------------------------------------
# Weight rules
#
# A rule assigns a weight to every integer index. Beyond a finite feature set
# the modulus must be either constant or monotone toward a finite limit; that
# is what makes suprema over half-lines computable exactly.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignWeights:
    """Weight a for indices <= 0, weight b for indices >= 1."""

    neg_and_zero: complex
    pos: complex

    def value(self, k: int) -> complex:
        return self.neg_and_zero if k <= 0 else self.pos

    @property
    def features(self) -> tuple[int, ...]:
        return (0, 1)

    @property
    def left_tail(self) -> Optional[complex]:
        return self.neg_and_zero

    @property
    def right_tail(self) -> Optional[complex]:
        return self.pos

    def to_config(self) -> dict:
        return {
            "neg_and_zero": scalar_to_json(self.neg_and_zero),
            "pos": scalar_to_json(self.pos),
        }


@dataclass(frozen=True)
class TableWeights:
    """Explicit finite table of exceptional weights over a constant default."""

    table: tuple[tuple[int, complex], ...]
    default: complex

    @classmethod
    def from_mapping(cls, table: Mapping[int, complex], default) -> "TableWeights":
        items = tuple(
            sorted((int(k), check_scalar(v)) for k, v in table.items())
        )
        return cls(table=items, default=check_scalar(default))

    def value(self, k: int) -> complex:
        for idx, v in self.table:
            if idx == k:
                return v
        return self.default

    @property
    def features(self) -> tuple[int, ...]:
        if not self.table:
            return (0,)
        return tuple(idx for idx, _ in self.table)

    @property
    def left_tail(self) -> Optional[complex]:
        return self.default

    @property
    def right_tail(self) -> Optional[complex]:
        return self.default

    def to_config(self) -> dict:
        return {
            "table": {str(k): scalar_to_json(v) for k, v in self.table},
            "default": scalar_to_json(self.default),
        }


@dataclass(frozen=True)
class ApproachOneWeights:
    """Negative weights whose moduli rise to 1 without reaching it.

    value(k) = -(|k| + 1) / (|k| + 2), so moduli live in [1/2, 1), the
    supremum 1 is not attained, and no weight is near +1 itself. Useful as a
    boundary case for classification: the stable radius estimate lands at 1.
    """

    def value(self, k: int) -> complex:
        a = abs(int(k))
        return complex(-(a + 1) / (a + 2))

    @property
    def features(self) -> tuple[int, ...]:
        return (0,)

    @property
    def left_tail(self) -> Optional[complex]:
        return None

    @property
    def right_tail(self) -> Optional[complex]:
        return None

    def to_config(self) -> dict:
        return {"named": "approach_one"}


@dataclass(frozen=True)
class InverseWeights:
    """Pointwise reciprocal of a base rule; exists when inf |w| > 0."""

    base: object

    def value(self, k: int) -> complex:
        return 1.0 / self.base.value(k)

    @property
    def features(self) -> tuple[int, ...]:
        return self.base.features

    @property
    def left_tail(self) -> Optional[complex]:
        t = self.base.left_tail
        return None if t is None else 1.0 / t

    @property
    def right_tail(self) -> Optional[complex]:
        t = self.base.right_tail
        return None if t is None else 1.0 / t

    def to_config(self) -> dict:
        raise ConfigInvalid("inverse weight rules are not serializable")


def _rule_limit_abs(rule, side: str) -> float:
    tail = rule.left_tail if side == "left" else rule.right_tail
    if tail is not None:
        return abs(tail)
    if isinstance(rule, ApproachOneWeights):
        return 1.0
    if isinstance(rule, InverseWeights):
        base = _rule_limit_abs(rule.base, side)
        return math.inf if base == 0.0 else 1.0 / base
    raise ValueError(f"rule {rule!r} has no tail information")


# ---------------------------------------------------------------------------
# Monomial form: L e_j = coeff(j) * e_{j + shift}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialForm:
    shift: int
    coeff: Callable[[int], complex]
    features: tuple[int, ...]
    left_limit_abs: float
    right_limit_abs: float
    # Complex coefficient limits toward -inf / +inf, used by resolvent sums.
    left_limit: Optional[complex] = None
    right_limit: Optional[complex] = None

    def product_abs(self, j: int, n: int) -> float:
        """|coeff(j)| * |coeff(j + shift)| * ... over n factors."""
        p = 1.0
        for i in range(n):
            p *= abs(self.coeff(j + i * self.shift))
        return p


def _rule_limit_value(rule, side: str) -> Optional[complex]:
    tail = rule.left_tail if side == "left" else rule.right_tail
    if tail is not None:
        return complex(tail)
    if isinstance(rule, ApproachOneWeights):
        return complex(-1.0)
    if isinstance(rule, InverseWeights):
        base = _rule_limit_value(rule.base, side)
        if base is None or base == 0:
            return None
        return 1.0 / base
    return None


def monomial_form(op: "LinOp") -> Optional[MonomialForm]:
    """Monomial reduction of a sequence operator, or None for dense ops."""
    if isinstance(op, DiagonalOp):
        rule = op.rule
        return MonomialForm(
            shift=0,
            coeff=rule.value,
            features=rule.features,
            left_limit_abs=_rule_limit_abs(rule, "left"),
            right_limit_abs=_rule_limit_abs(rule, "right"),
            left_limit=_rule_limit_value(rule, "left"),
            right_limit=_rule_limit_value(rule, "right"),
        )
    if isinstance(op, ShiftOp):
        return MonomialForm(
            shift=-op.offset,
            coeff=lambda _j: 1.0 + 0j,
            features=(0,),
            left_limit_abs=1.0,
            right_limit_abs=1.0,
            left_limit=1.0 + 0j,
            right_limit=1.0 + 0j,
        )
    if isinstance(op, BackwardScaledOp):
        fac = op.factor

        def coeff(j: int, _f=fac) -> complex:
            return _f if j >= 1 else 0.0 + 0j

        return MonomialForm(
            shift=-1,
            coeff=coeff,
            features=(0, 1),
            left_limit_abs=0.0,
            right_limit_abs=abs(fac),
            left_limit=0.0 + 0j,
            right_limit=complex(fac),
        )
    if isinstance(op, CompositionOp):
        forms = [monomial_form(f) for f in op.factors]
        if any(f is None for f in forms):
            return None
        # factors[0] is applied last; build up from the right.
        cur = forms[-1]
        for nxt in reversed(forms[:-1]):
            cur = _compose_monomials(nxt, cur)
        return cur
    return None


def _compose_monomials(outer: MonomialForm, inner: MonomialForm) -> MonomialForm:
    shift = outer.shift + inner.shift
    ic, oc, isft = inner.coeff, outer.coeff, inner.shift

    def coeff(j: int) -> complex:
        return ic(j) * oc(j + isft)

    feats = set(inner.features)
    feats.update(f - inner.shift for f in outer.features)

    def _mul(a: Optional[complex], b: Optional[complex]) -> Optional[complex]:
        if a is None or b is None:
            return None
        return a * b

    return MonomialForm(
        shift=shift,
        coeff=coeff,
        features=tuple(sorted(feats)),
        left_limit_abs=inner.left_limit_abs * outer.left_limit_abs,
        right_limit_abs=inner.right_limit_abs * outer.right_limit_abs,
        left_limit=_mul(inner.left_limit, outer.left_limit),
        right_limit=_mul(inner.right_limit, outer.right_limit),
    )


def _candidate_anchors(
    mono: MonomialForm, n: int, lo: Optional[int], hi: Optional[int]
) -> tuple[list[int], bool, bool]:
    """Anchor indices whose n-step windows can touch a feature, clipped to
    [lo, hi], plus flags saying whether the range sticks out into each tail."""
    reach = abs(mono.shift) * max(n - 1, 0) + 1
    feats = mono.features or (0,)
    span_lo = min(feats) - reach - 1
    span_hi = max(feats) + reach + 1
    cands = []
    for j in range(span_lo, span_hi + 1):
        if (lo is None or j >= lo) and (hi is None or j <= hi):
            cands.append(j)
    for e in (lo, hi):
        if e is not None and e not in cands:
            cands.append(e)
    into_left = lo is None or lo < span_lo
    into_right = hi is None or hi > span_hi
    return cands, into_left, into_right


def monomial_power_sup(
    mono: MonomialForm, n: int, lo: Optional[int] = None, hi: Optional[int] = None
) -> float:
    """sup over anchors j in [lo, hi] of the n-step weight product modulus.

    Equals the operator norm of the n-th power restricted to the span of
    basis vectors indexed by [lo, hi], under any of the three norm tags.
    """
    if n == 0:
        return 1.0
    cands, into_left, into_right = _candidate_anchors(mono, n, lo, hi)
    best = 0.0
    for j in cands:
        best = max(best, mono.product_abs(j, n))
    if into_left:
        best = max(best, mono.left_limit_abs**n)
    if into_right:
        best = max(best, mono.right_limit_abs**n)
    return best


def monomial_power_inf(
    mono: MonomialForm, n: int, lo: Optional[int] = None, hi: Optional[int] = None
) -> float:
    if n == 0:
        return 1.0
    cands, into_left, into_right = _candidate_anchors(mono, n, lo, hi)
    best = math.inf
    for j in cands:
        best = min(best, mono.product_abs(j, n))
    if into_left:
        best = min(best, mono.left_limit_abs**n)
    if into_right:
        best = min(best, mono.right_limit_abs**n)
    return best


# ---------------------------------------------------------------------------
# Operator classes
# ---------------------------------------------------------------------------


class LinOp:
    """Common surface: apply, powers, norms, spectral radius, inverse."""

    norm_tag: str
    kind: str = "abstract"

    # "dense" operators act on DenseVector, "seq" ones on SparseBiSeq.
    vector_kind: str = "abstract"

    def apply(self, v):
        raise NotImplementedError

    def invertible(self) -> bool:
        raise NotImplementedError

    def inverse(self) -> "LinOp":
        raise NotImplementedError

    def operator_norm(self) -> float:
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError

    def apply_power(self, n: int, v):
        """n-fold application; negative n goes through the inverse."""
        if n == 0:
            return v
        if n > 0:
            out = v
            for _ in range(n):
                out = self.apply(out)
            return out
        inv = self.inverse()
        out = v
        for _ in range(-n):
            out = inv.apply(out)
        return out

    def spectral_radius(self, iters: int = 64) -> tuple[float, int]:
        """Spectral radius estimate and the number of power norms consulted.

        Dense operators read the radius off their eigenvalues. Sequence
        operators take the min envelope of ||L^n||^(1/n) over n <= iters,
        stopping early once the envelope stagnates.
        """
        if iters < 1:
            raise ValueError("iters must be >= 1")
        mono = monomial_form(self)
        if mono is None:
            m = self.dense_matrix()
            vals = [abs(lam) for lam, _ in dense_eig(m)]
            return (max(vals), 0)
        best = math.inf
        used = 0
        stagnant = 0
        for n in range(1, iters + 1):
            used = n
            p = monomial_power_sup(mono, n)
            est = p ** (1.0 / n) if p > 0 else 0.0
            if est < best - 1e-12:
                best = min(best, est)
                stagnant = 0
            else:
                best = min(best, est)
                stagnant += 1
                if stagnant >= 8:
                    break
        return (best, used)

    def dense_matrix(self) -> np.ndarray:
        raise KindMismatch(f"{self.kind} operator has no dense matrix")

    def power_norm(self, n: int) -> float:
        """Exact ||L^n|| for n >= 0."""
        if n < 0:
            raise ValueError("power_norm takes n >= 0")
        if n == 0:
            return 1.0
        mono = monomial_form(self)
        if mono is not None:
            return monomial_power_sup(mono, n)
        m = self.dense_matrix()
        p = np.linalg.matrix_power(m, n)
        return mat_norm(p, self.norm_tag)


class DenseOp(LinOp):
    kind = "dense"
    vector_kind = "dense"

    __slots__ = ("matrix", "norm_tag", "_invertible", "_inv_matrix")

    def __init__(self, matrix, norm_tag: str, invertible: Optional[bool] = None):
        self.matrix = as_square_matrix(matrix)
        self.norm_tag = check_norm_tag(norm_tag)
        sv = np.linalg.svd(self.matrix, compute_uv=False)
        detectable = bool(sv[-1] > 1e-13 * max(1.0, float(sv[0])))
        if invertible is None:
            self._invertible = detectable
        elif invertible and not detectable:
            raise NotInvertible(
                "matrix declared invertible but is singular to working precision"
            )
        else:
            self._invertible = bool(invertible)
        self._inv_matrix = None

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def dense_matrix(self) -> np.ndarray:
        return self.matrix

    def apply(self, v):
        if not isinstance(v, DenseVector):
            raise KindMismatch("dense operator expects a dense vector")
        if v.norm_tag != self.norm_tag or v.dim != self.dim:
            raise KindMismatch("vector disagrees with operator in tag or dimension")
        return DenseVector(self.matrix @ v.coords, self.norm_tag)

    def invertible(self) -> bool:
        return self._invertible

    def inverse(self) -> "DenseOp":
        if not self._invertible:
            raise NotInvertible("dense operator is not invertible")
        if self._inv_matrix is None:
            self._inv_matrix = np.linalg.inv(self.matrix)
        return DenseOp(self._inv_matrix, self.norm_tag, invertible=True)

    def operator_norm(self) -> float:
        return mat_norm(self.matrix, self.norm_tag)

    def to_config(self) -> dict:
        return {
            "kind": "dense",
            "matrix": [[scalar_to_json(z) for z in row] for row in self.matrix],
        }


class _SeqOp(LinOp):
    vector_kind = "seq"

    def _check_vec(self, v) -> None:
        if not isinstance(v, SparseBiSeq):
            raise KindMismatch(f"{self.kind} operator expects a bilateral sequence")
        if v.norm_tag != self.norm_tag:
            raise KindMismatch("sequence disagrees with operator in norm tag")

    def operator_norm(self) -> float:
        return monomial_power_sup(monomial_form(self), 1)


class DiagonalOp(_SeqOp):
    kind = "diag"

    __slots__ = ("rule", "norm_tag")

    def __init__(self, rule, norm_tag: str):
        self.rule = rule
        self.norm_tag = check_norm_tag(norm_tag)

    def apply(self, v):
        self._check_vec(v)
        return SparseBiSeq(
            {k: self.rule.value(k) * z for k, z in v.entries.items()}, self.norm_tag
        )

    def invertible(self) -> bool:
        mono = monomial_form(self)
        inf = monomial_power_inf(mono, 1)
        sup = monomial_power_sup(mono, 1)
        return inf > 0.0 and math.isfinite(sup)

    def inverse(self) -> "DiagonalOp":
        if not self.invertible():
            raise NotInvertible("diagonal weights are not boundedly invertible")
        return DiagonalOp(InverseWeights(self.rule), self.norm_tag)

    def to_config(self) -> dict:
        return {"kind": "diag", "rule": self.rule.to_config()}


class ShiftOp(_SeqOp):
    """(L xi)_k = xi_{k + offset}; an isometry for every norm tag."""

    kind = "shift"

    __slots__ = ("offset", "norm_tag")

    def __init__(self, offset: int, norm_tag: str):
        self.offset = int(offset)
        self.norm_tag = check_norm_tag(norm_tag)

    def apply(self, v):
        self._check_vec(v)
        return SparseBiSeq(
            {k - self.offset: z for k, z in v.entries.items()}, self.norm_tag
        )

    def invertible(self) -> bool:
        return True

    def inverse(self) -> "ShiftOp":
        return ShiftOp(-self.offset, self.norm_tag)

    def to_config(self) -> dict:
        return {"kind": "shift", "offset": self.offset}


class BackwardScaledOp(_SeqOp):
    """(L xi)_k = factor * xi_{k+1} on one-sided sequences (indices >= 0).

    The index-0 information is destroyed, so this operator is never
    invertible. It is the standard hypercyclic example when |factor| > 1.
    """

    kind = "backward_scaled"

    __slots__ = ("factor", "norm_tag")

    def __init__(self, factor, norm_tag: str):
        self.factor = check_scalar(factor)
        self.norm_tag = check_norm_tag(norm_tag)

    def apply(self, v):
        self._check_vec(v)
        if v.entries and min(v.entries) < 0:
            raise KindMismatch(
                "one-sided operator applied to a sequence with negative support"
            )
        return SparseBiSeq(
            {k - 1: self.factor * z for k, z in v.entries.items() if k >= 1},
            self.norm_tag,
        )

    def invertible(self) -> bool:
        return False

    def inverse(self) -> LinOp:
        raise NotInvertible("scaled backward shift destroys coordinate 0")

    def to_config(self) -> dict:
        return {"kind": "backward_scaled", "factor": scalar_to_json(self.factor)}


class CompositionOp(LinOp):
    """Ordered composition; factors[0] is applied last."""

    kind = "compose"

    __slots__ = ("factors", "norm_tag")

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise ValueError("composition needs at least one factor")
        tags = {f.norm_tag for f in factors}
        if len(tags) != 1:
            raise KindMismatch("composition factors must share a norm tag")
        kinds = {f.vector_kind for f in factors}
        if len(kinds) != 1:
            raise KindMismatch("composition factors must share a vector kind")
        self.factors = factors
        self.norm_tag = factors[0].norm_tag

    @property
    def vector_kind(self) -> str:  # type: ignore[override]
        return self.factors[0].vector_kind

    def apply(self, v):
        out = v
        for f in reversed(self.factors):
            out = f.apply(out)
        return out

    def invertible(self) -> bool:
        return all(f.invertible() for f in self.factors)

    def inverse(self) -> "CompositionOp":
        if not self.invertible():
            raise NotInvertible("some composition factor is not invertible")
        return CompositionOp(tuple(f.inverse() for f in reversed(self.factors)))

    def dense_matrix(self) -> np.ndarray:
        if self.vector_kind != "dense":
            raise KindMismatch("composition is not dense")
        m = self.factors[0].dense_matrix()
        for f in self.factors[1:]:
            m = m @ f.dense_matrix()
        return m

    def operator_norm(self) -> float:
        mono = monomial_form(self)
        if mono is not None:
            return monomial_power_sup(mono, 1)
        return mat_norm(self.dense_matrix(), self.norm_tag)

    def to_config(self) -> dict:
        return {
            "kind": "compose",
            "factors": [f.to_config() for f in self.factors],
        }


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorReport:
    op_norm: float
    inv_norm: Optional[float]
    spectral_radius_estimate: float
    gelfand_iterations: int


def operator_report(op: LinOp, iters: int = 64) -> OperatorReport:
    """Norm, inverse norm when available, and a spectral radius estimate.

    The radius estimate never exceeds the norm by more than roundoff.
    """
    op_norm = op.operator_norm()
    inv_norm = None
    if op.invertible():
        inv_norm = op.inverse().operator_norm()
    radius, used = op.spectral_radius(iters)
    radius = min(radius, op_norm + 1e-9)
    return OperatorReport(
        op_norm=op_norm,
        inv_norm=inv_norm,
        spectral_radius_estimate=radius,
        gelfand_iterations=used,
    )


# ---------------------------------------------------------------------------
# JSON configuration grammar
# ---------------------------------------------------------------------------


def scalar_to_json(z) -> object:
    z = complex(z)
    if z.imag == 0.0:
        return z.real
    return [z.real, z.imag]


def scalar_from_json(x, path: str) -> complex:
    if isinstance(x, bool):
        raise ConfigInvalid(f"{path}: expected a scalar, got a bool", location=path)
    if isinstance(x, (int, float)):
        return complex(x)
    if (
        isinstance(x, (list, tuple))
        and len(x) == 2
        and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in x)
    ):
        return complex(x[0], x[1])
    raise ConfigInvalid(
        f"{path}: expected a number or [re, im] pair", location=path
    )


def rule_from_config(cfg, path: str):
    if not isinstance(cfg, dict):
        raise ConfigInvalid(f"{path}: rule must be an object", location=path)
    if "named" in cfg:
        if cfg["named"] == "approach_one":
            return ApproachOneWeights()
        raise ConfigInvalid(
            f"{path}.named: unknown rule {cfg['named']!r}", location=path
        )
    if "table" in cfg:
        if "default" not in cfg:
            raise ConfigInvalid(f"{path}: table rule needs a default", location=path)
        tbl = cfg["table"]
        if not isinstance(tbl, dict):
            raise ConfigInvalid(f"{path}.table: must be an object", location=path)
        entries = {}
        for key, val in tbl.items():
            try:
                idx = int(key)
            except (TypeError, ValueError):
                raise ConfigInvalid(
                    f"{path}.table: key {key!r} is not an integer", location=path
                ) from None
            entries[idx] = scalar_from_json(val, f"{path}.table[{key}]")
        return TableWeights.from_mapping(
            entries, scalar_from_json(cfg["default"], f"{path}.default")
        )
    if "neg_and_zero" in cfg and "pos" in cfg:
        return SignWeights(
            neg_and_zero=scalar_from_json(cfg["neg_and_zero"], f"{path}.neg_and_zero"),
            pos=scalar_from_json(cfg["pos"], f"{path}.pos"),
        )
    raise ConfigInvalid(f"{path}: unrecognized weight rule shape", location=path)


def op_from_config(cfg, norm_tag: Optional[str] = None, path: str = "operator") -> LinOp:
    """Build an operator from its JSON form.

    At the top level the config must carry a "norm" tag; nested composition
    factors inherit it.
    """
    if not isinstance(cfg, dict):
        raise ConfigInvalid(f"{path}: operator must be an object", location=path)
    if norm_tag is None:
        tag = cfg.get("norm")
        if tag not in (L1, L2, LINF):
            raise ConfigInvalid(
                f"{path}.norm: expected one of l1, l2, linf", location=f"{path}.norm"
            )
        norm_tag = tag
    kind = cfg.get("kind")
    if kind == "dense":
        rows = cfg.get("matrix")
        if not isinstance(rows, list) or not rows:
            raise ConfigInvalid(
                f"{path}.matrix: expected a nonempty list of rows",
                location=f"{path}.matrix",
            )
        parsed = [
            [scalar_from_json(x, f"{path}.matrix[{i}][{j}]") for j, x in enumerate(row)]
            for i, row in enumerate(rows)
        ]
        try:
            return DenseOp(parsed, norm_tag, invertible=cfg.get("invertible"))
        except ValueError as exc:
            raise ConfigInvalid(f"{path}.matrix: {exc}", location=f"{path}.matrix")
    if kind == "diag":
        return DiagonalOp(rule_from_config(cfg.get("rule"), f"{path}.rule"), norm_tag)
    if kind == "shift":
        off = cfg.get("offset")
        if not isinstance(off, int) or isinstance(off, bool):
            raise ConfigInvalid(
                f"{path}.offset: expected an integer", location=f"{path}.offset"
            )
        return ShiftOp(off, norm_tag)
    if kind == "backward_scaled":
        return BackwardScaledOp(
            scalar_from_json(cfg.get("factor"), f"{path}.factor"), norm_tag
        )
    if kind == "compose":
        factors = cfg.get("factors")
        if not isinstance(factors, list) or not factors:
            raise ConfigInvalid(
                f"{path}.factors: expected a nonempty list",
                location=f"{path}.factors",
            )
        built = [
            op_from_config(f, norm_tag, f"{path}.factors[{i}]")
            for i, f in enumerate(factors)
        ]
        try:
            return CompositionOp(built)
        except KindMismatch as exc:
            raise ConfigInvalid(f"{path}.factors: {exc}", location=f"{path}.factors")
    raise ConfigInvalid(
        f"{path}.kind: unknown operator kind {kind!r}", location=f"{path}.kind"
    )


def op_to_config(op: LinOp) -> dict:
    cfg = op.to_config()
    cfg["norm"] = op.norm_tag
    return cfg
