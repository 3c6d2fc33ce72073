"""Deterministic sample generators.

All randomness flows through numpy Generators constructed from explicit
seeds, so every diagnostic that consumes samples is reproducible from its
recorded seed.
"""

from __future__ import annotations

import numpy as np

from .linalg import DenseVector, SparseBiSeq, array_norm


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed))


def dense_basis(dim: int, tag: str) -> list[DenseVector]:
    out = []
    for j in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[j] = 1.0
        out.append(DenseVector(e, tag))
    return out


def unit_dense_samples(
    dim: int,
    tag: str,
    count: int,
    rng: np.random.Generator,
    real: bool = False,
) -> list[DenseVector]:
    out: list[DenseVector] = []
    while len(out) < count:
        v = rng.standard_normal(dim)
        if not real:
            v = v + 1j * rng.standard_normal(dim)
        n = array_norm(np.asarray(v, dtype=complex), tag)
        if n < 1e-12:
            continue
        out.append(DenseVector(np.asarray(v, dtype=complex) / n, tag))
    return out


def unit_seq_samples(
    lo: int,
    hi: int,
    tag: str,
    count: int,
    rng: np.random.Generator,
    support: int = 3,
) -> list[SparseBiSeq]:
    """Unit-norm sequences supported on `support` indices inside [lo, hi]."""
    out: list[SparseBiSeq] = []
    width = hi - lo + 1
    k = min(support, width)
    while len(out) < count:
        idx = rng.choice(width, size=k, replace=False) + lo
        vals = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        seq = SparseBiSeq({int(i): complex(z) for i, z in zip(idx, vals)}, tag)
        n = seq.norm()
        if n < 1e-12:
            continue
        out.append(seq * (1.0 / n))
    return out


def random_margin_matrix(
    dim: int,
    rng: np.random.Generator,
    margin: float = 0.05,
    min_modulus: float = 1e-6,
    max_tries: int = 10_000,
) -> np.ndarray:
    """Random real matrix whose eigenvalue moduli sit at least `margin` off
    the unit circle and at least `min_modulus` off zero, by rejection."""
    for _ in range(max_tries):
        m = rng.standard_normal((dim, dim))
        moduli = np.abs(np.linalg.eigvals(m))
        if np.all(np.abs(moduli - 1.0) >= margin) and np.all(moduli >= min_modulus):
            return m
    raise RuntimeError(f"no margin-{margin} matrix found in {max_tries} draws")


def random_spectral_contraction(
    dim: int,
    rng: np.random.Generator,
    max_radius: float = 0.9,
    min_radius: float = 0.2,
) -> np.ndarray:
    """Random real matrix rescaled so its spectral radius lands uniformly in
    [min_radius, max_radius]. The operator norm may still exceed 1."""
    target = rng.uniform(min_radius, max_radius)
    while True:
        m = rng.standard_normal((dim, dim))
        r = float(np.abs(np.linalg.eigvals(m)).max())
        if r > 1e-9:
            return m * (target / r)
