import math

import numpy as np
import pytest

from lindyn import (
    LINF,
    DenseVector,
    WindowedLinf,
    linf_apply,
    linf_injectivity_margin,
    shad_estimate_linf,
    shadowing_robustness_scan,
)
from lindyn.gallery import quarter_rotation, saddle

SADDLE = saddle()
ROTATION = quarter_rotation()

# Extremal saddle window: run y_{n+1} = y_n/2 + 1 from y_{-N} = 1 along the
# stable axis. All outputs are 1 (the last slightly below) while the window
# sup saturates at 2, and no window does better, so the margin is 1/2 --
# exactly the reciprocal of the shadowing constant.
SADDLE_MARGIN = 0.5


def orbit_window(op, seed, N):
    back = [seed]
    inv = op.inverse()
    for _ in range(N):
        back.append(inv.apply(back[-1]))
    fwd = [seed]
    for _ in range(N):
        fwd.append(op.apply(fwd[-1]))
    return list(reversed(back[1:])) + fwd


def test_apply_on_exact_orbit_vanishes():
    N = 6
    w = WindowedLinf(SADDLE, N)
    xs = orbit_window(SADDLE, DenseVector([1.0, 0.5], LINF), N)
    out = linf_apply(w, xs)
    assert len(out) == 2 * N
    assert max(v.norm() for v in out) < 1e-9


def test_apply_counts_interior_defects():
    w = WindowedLinf(SADDLE, 2)
    xs = [DenseVector([0.0, 0.0], LINF)] * 4 + [DenseVector([1.0, 0.0], LINF)]
    out = linf_apply(w, xs)
    assert len(out) == 4
    # only the final step has a defect
    assert out[-1].norm() == 1.0
    assert all(v.norm() == 0.0 for v in out[:-1])


def test_margin_zero_window_is_unconstrained():
    assert linf_injectivity_margin(WindowedLinf(SADDLE, 0)) == math.inf


def test_margin_saddle_hits_reciprocal_shadowing_constant():
    got = linf_injectivity_margin(WindowedLinf(SADDLE, 32))
    assert abs(got - SADDLE_MARGIN) < 1e-9


def test_margin_rotation_decays_like_inverse_window():
    # the triangular eigen taper is extremal for an isometry: margin 1/N
    for N in (8, 16):
        got = linf_injectivity_margin(WindowedLinf(ROTATION, N))
        assert abs(got - 1.0 / N) < 1e-9


def test_margin_is_scale_free():
    w = WindowedLinf(SADDLE, 8)
    m1 = linf_injectivity_margin(w, rng_seed=0)
    m2 = linf_injectivity_margin(w, rng_seed=123)
    assert abs(m1 - m2) < 1e-6


def test_estimate_saddle_matches_lower_bound():
    est = shad_estimate_linf(WindowedLinf(SADDLE, 16), z_samples=16)
    # Shad(diag(1/2,2)) = 2 under the sup norm; the constant-defect sample
    # realizes it and no window distance may exceed the upper bound 3
    assert 1.9 <= est <= 3.0


def test_estimate_rotation_grows_with_window():
    est8 = shad_estimate_linf(WindowedLinf(ROTATION, 8), z_samples=8)
    est16 = shad_estimate_linf(WindowedLinf(ROTATION, 16), z_samples=8)
    # resonant defects force the best orbit to miss by about N
    assert est8 >= 4.0
    assert est16 >= est8 - 1e-9
    assert est16 >= 8.0


def test_estimate_validates_arguments():
    with pytest.raises(ValueError):
        shad_estimate_linf(WindowedLinf(SADDLE, 0))
    with pytest.raises(ValueError):
        shad_estimate_linf(WindowedLinf(SADDLE, 4), z_samples=0)


def test_robustness_scan_small_radii_pass():
    scan = shadowing_robustness_scan(SADDLE, radii=[0.01, 0.05], trials=6)
    assert abs(scan.original_upper - 3.0) < 1e-9
    for radius, passes, trials, worst in scan.rows:
        assert passes == trials
        assert worst <= 2.0 * scan.original_upper


def test_robustness_scan_rejects_negative_radius():
    with pytest.raises(ValueError):
        shadowing_robustness_scan(SADDLE, radii=[-0.1])
