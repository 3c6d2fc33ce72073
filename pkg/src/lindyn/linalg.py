"""Scalars, vectors, norms, and the shared numerical kernels.

Two vector kinds cover the whole toolkit: dense coordinate vectors for
finite-dimensional work (dimension capped at 32) and finitely supported
bilateral sequences indexed by the integers, stored as exact index to value
maps. Every vector carries a norm tag (l1, l2, linf); arithmetic between
mismatched tags is rejected rather than coerced.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import KindMismatch, NoConvergence, NonContracting

L1 = "l1"
L2 = "l2"
LINF = "linf"
NORM_TAGS = (L1, L2, LINF)

MAX_DENSE_DIM = 32

# Entries below this modulus are dropped during canonicalization. Denormal
# guard only; never used as a modeling tolerance.
SPARSE_DROP = 1e-300


def check_norm_tag(tag: str) -> str:
    if tag not in NORM_TAGS:
        raise ValueError(f"unknown norm tag {tag!r}; expected one of {NORM_TAGS}")
    return tag


def check_scalar(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("scalar must have finite real and imaginary parts")
    return z


class DenseVector:
    """Coordinate vector in dimension 1..32 with an attached norm tag."""

    __slots__ = ("coords", "norm_tag")

    def __init__(self, coords, norm_tag: str):
        arr = np.array(coords, dtype=complex)
        if arr.ndim != 1:
            raise ValueError("coords must be one-dimensional")
        if not 1 <= arr.size <= MAX_DENSE_DIM:
            raise ValueError(f"dimension must be in 1..{MAX_DENSE_DIM}, got {arr.size}")
        if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
            raise ValueError("coordinates must be finite")
        arr.setflags(write=False)
        self.coords = arr
        self.norm_tag = check_norm_tag(norm_tag)

    @property
    def dim(self) -> int:
        return int(self.coords.size)

    def norm(self) -> float:
        return array_norm(self.coords, self.norm_tag)

    def _require_same(self, other: "DenseVector") -> None:
        if not isinstance(other, DenseVector):
            raise KindMismatch("expected a dense vector")
        if other.norm_tag != self.norm_tag or other.dim != self.dim:
            raise KindMismatch("dense vectors disagree in norm tag or dimension")

    def __add__(self, other: "DenseVector") -> "DenseVector":
        self._require_same(other)
        return DenseVector(self.coords + other.coords, self.norm_tag)

    def __sub__(self, other: "DenseVector") -> "DenseVector":
        self._require_same(other)
        return DenseVector(self.coords - other.coords, self.norm_tag)

    def __mul__(self, c) -> "DenseVector":
        return DenseVector(self.coords * check_scalar(c), self.norm_tag)

    __rmul__ = __mul__

    def __neg__(self) -> "DenseVector":
        return DenseVector(-self.coords, self.norm_tag)

    def __repr__(self) -> str:
        return f"DenseVector({self.coords.tolist()!r}, {self.norm_tag!r})"


class SparseBiSeq:
    """Finitely supported sequence over the integers.

    Stored as a dict from index to nonzero complex value, so arithmetic on
    disjoint supports is exact. Canonical form never stores zeros.
    """

    __slots__ = ("entries", "norm_tag")

    def __init__(self, entries: Mapping[int, complex], norm_tag: str):
        clean: dict[int, complex] = {}
        for k, v in entries.items():
            if not isinstance(k, (int, np.integer)):
                raise ValueError(f"index {k!r} is not an integer")
            z = check_scalar(v)
            if abs(z) < SPARSE_DROP:
                continue
            clean[int(k)] = z
        self.entries = clean
        self.norm_tag = check_norm_tag(norm_tag)

    @classmethod
    def zero(cls, norm_tag: str) -> "SparseBiSeq":
        return cls({}, norm_tag)

    @classmethod
    def basis(cls, k: int, norm_tag: str, value: complex = 1.0) -> "SparseBiSeq":
        return cls({k: value}, norm_tag)

    def __getitem__(self, k: int) -> complex:
        return self.entries.get(int(k), 0j)

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.entries))

    def is_zero(self) -> bool:
        return not self.entries

    def norm(self) -> float:
        if not self.entries:
            return 0.0
        vals = np.fromiter((abs(v) for v in self.entries.values()), dtype=float)
        if self.norm_tag == L1:
            return float(vals.sum())
        if self.norm_tag == L2:
            return float(math.sqrt(float((vals * vals).sum())))
        return float(vals.max())

    def _require_same(self, other: "SparseBiSeq") -> None:
        if not isinstance(other, SparseBiSeq):
            raise KindMismatch("expected a bilateral sequence")
        if other.norm_tag != self.norm_tag:
            raise KindMismatch("sequences disagree in norm tag")

    def __add__(self, other: "SparseBiSeq") -> "SparseBiSeq":
        self._require_same(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0j) + v
        return SparseBiSeq(out, self.norm_tag)

    def __sub__(self, other: "SparseBiSeq") -> "SparseBiSeq":
        return self + (-1.0) * other

    def __mul__(self, c) -> "SparseBiSeq":
        z = check_scalar(c)
        if z == 0:
            return SparseBiSeq.zero(self.norm_tag)
        return SparseBiSeq({k: v * z for k, v in self.entries.items()}, self.norm_tag)

    __rmul__ = __mul__

    def __neg__(self) -> "SparseBiSeq":
        return self * (-1.0)

    def restrict(self, keep: Callable[[int], bool]) -> "SparseBiSeq":
        return SparseBiSeq(
            {k: v for k, v in self.entries.items() if keep(k)}, self.norm_tag
        )

    def __repr__(self) -> str:
        items = ", ".join(f"{k}: {v}" for k, v in sorted(self.entries.items()))
        return f"SparseBiSeq({{{items}}}, {self.norm_tag!r})"


Vector = DenseVector | SparseBiSeq


def vec_norm(v: Vector) -> float:
    if not isinstance(v, (DenseVector, SparseBiSeq)):
        raise KindMismatch(f"not a vector: {type(v).__name__}")
    return v.norm()


def array_norm(arr: np.ndarray, tag: str) -> float:
    check_norm_tag(tag)
    if arr.size == 0:
        return 0.0
    mags = np.abs(arr)
    if tag == L1:
        return float(mags.sum())
    if tag == L2:
        return float(np.sqrt((mags * mags).sum()))
    return float(mags.max())


def as_square_matrix(rows) -> np.ndarray:
    m = np.array(rows, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not 1 <= m.shape[0] <= MAX_DENSE_DIM:
        raise ValueError(f"matrix side must be in 1..{MAX_DENSE_DIM}")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError("matrix entries must be finite")
    return m


def mat_norm(m: np.ndarray, tag: str) -> float:
    """Induced operator norm of a (possibly rectangular) matrix."""
    check_norm_tag(tag)
    if m.size == 0:
        return 0.0
    if tag == L1:
        return float(np.abs(m).sum(axis=0).max())
    if tag == LINF:
        return float(np.abs(m).sum(axis=1).max())
    return float(np.linalg.norm(m, 2))


@dataclass(frozen=True)
class FixedPointResult:
    point: object
    iterations: int
    final_step: float


def _default_distance(a, b) -> float:
    if isinstance(a, (DenseVector, SparseBiSeq)):
        return (a - b).norm()
    if isinstance(a, np.ndarray):
        return float(np.max(np.abs(a - b))) if a.size else 0.0
    return abs(complex(a) - complex(b))


def banach_fixed_point(
    map_fn: Callable,
    x0,
    contraction_bound: float,
    tol: float,
    distance: Callable | None = None,
) -> FixedPointResult:
    """Iterate a declared contraction to a point p with d(map(p), p) <= tol.

    The iteration count never exceeds the a priori bound computed from the
    declared contraction factor and the first step length. If any observed
    step ratio exceeds the declared factor by more than 1e-9 the declaration
    was false and the iteration aborts.
    """
    if not 0.0 < contraction_bound < 1.0:
        raise ValueError("contraction_bound must lie in (0, 1)")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    dist = distance if distance is not None else _default_distance

    lam = contraction_bound
    x = x0
    fx = map_fn(x)
    step = dist(fx, x)
    if step <= tol:
        return FixedPointResult(point=x, iterations=0, final_step=step)

    # lam^n * step <= tol * (1 - lam) guarantees the post condition.
    budget = math.ceil(math.log(tol * (1.0 - lam) / step) / math.log(lam)) + 1
    iterations = 0
    while step > tol:
        iterations += 1
        x = fx
        fx = map_fn(x)
        new_step = dist(fx, x)
        if step > 0 and new_step / step > lam + 1e-9:
            raise NonContracting(
                f"observed step ratio {new_step / step:.6g} exceeds declared "
                f"bound {lam:.6g}",
                ratio=new_step / step,
                bound=lam,
            )
        step = new_step
        if iterations > budget:
            raise NonContracting(
                "iteration exceeded the a priori budget for the declared bound",
                ratio=float("nan"),
                bound=lam,
            )
    return FixedPointResult(point=x, iterations=iterations, final_step=step)


EIG_RESIDUAL_REL = 1e-8


def dense_eig(matrix) -> list[tuple[complex, np.ndarray]]:
    """Eigenpairs of a square matrix, deterministically ordered.

    Pairs are sorted by modulus then angle. Eigenvectors are unit l2 with the
    largest-modulus coordinate rotated to the positive real axis, so repeated
    runs give identical output. Residuals are checked against the matrix
    scale; a failure means the backend result cannot be trusted.
    """
    m = as_square_matrix(matrix)
    try:
        vals, vecs = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigen decomposition failed: {exc}") from exc

    scale = max(float(np.linalg.norm(m, 2)), 1e-300)
    pairs: list[tuple[complex, np.ndarray]] = []
    for j in range(m.shape[0]):
        lam = complex(vals[j])
        v = np.array(vecs[:, j], dtype=complex)
        nrm = float(np.linalg.norm(v))
        if nrm == 0.0:
            raise NoConvergence("zero eigenvector returned")
        v = v / nrm
        pivot = int(np.argmax(np.abs(v)))
        phase = v[pivot] / abs(v[pivot])
        v = v / phase
        resid = float(np.linalg.norm(m @ v - lam * v))
        if resid > EIG_RESIDUAL_REL * scale:
            raise NoConvergence(
                f"eigen residual {resid:.3g} exceeds {EIG_RESIDUAL_REL:.0e} * norm",
                residual=resid,
            )
        pairs.append((lam, v))

    def key(p):
        lam = p[0]
        return (abs(lam), cmath.phase(lam), lam.real, lam.imag)

    pairs.sort(key=key)
    return pairs
