import numpy as np
import pytest

from lindyn import (
    GENERALIZED,
    HYPERBOLIC,
    L1,
    LINF,
    UNDETERMINED,
    CircleEigenvalue,
    CoordinateSplit,
    DenseOp,
    DiagonalOp,
    HypothesisFailed,
    InvalidSplitting,
    KindMismatch,
    ShiftOp,
    SparseBiSeq,
    classify,
    composition_gh_check,
    resolvent_norm_S,
    resolvent_norm_U_inv,
    spectral_split,
)
from lindyn.gallery import (
    diagonal_sup_one,
    quarter_rotation,
    saddle,
    shifted_weighted_contraction,
)
from lindyn.operators import SignWeights
from lindyn.splitting import (
    power_norm_S,
    power_norm_U_inv,
    restricted_radius_S,
    restricted_radius_U_inv,
)

# Upper triangular [[3/2, 1], [0, 1/3]]: stable eigenvector of 1/3 solves
# (7/6) v1 + v2 = 0, i.e. (-6/7, 1); unstable eigenvector of 3/2 is (1, 0).
# Writing x = a (1, 0) + b (-6/7, 1) gives b = x2, so the stable projector is
TRIANGULAR = [[1.5, 1.0], [0.0, 1.0 / 3.0]]
P_S_EXPECTED = np.array([[0.0, -6.0 / 7.0], [0.0, 1.0]])

W, R, COMP, CUT0 = shifted_weighted_contraction()


def test_spectral_split_projector_oracle():
    split = spectral_split(DenseOp(TRIANGULAR, LINF, invertible=True))
    assert np.allclose(split.P_S, P_S_EXPECTED, atol=1e-12)
    assert np.allclose(split.P_U, np.eye(2) - P_S_EXPECTED, atol=1e-12)
    # projector identities
    assert np.allclose(split.P_S @ split.P_S, split.P_S, atol=1e-12)
    assert np.allclose(split.P_S @ split.P_U, np.zeros((2, 2)), atol=1e-12)


def test_spectral_split_commutes_with_operator():
    m = np.array(TRIANGULAR)
    split = spectral_split(DenseOp(TRIANGULAR, LINF, invertible=True))
    # invariance: L P_S = P_S L P_S (S is L-invariant), same for U
    assert np.allclose(m @ split.P_S, split.P_S @ m @ split.P_S, atol=1e-12)
    assert np.allclose(m @ split.P_U, split.P_U @ m @ split.P_U, atol=1e-12)


def test_spectral_split_rejects_circle_spectrum():
    with pytest.raises(CircleEigenvalue):
        spectral_split(quarter_rotation())


def test_restricted_power_norms_exact_on_axes():
    op = saddle()
    split = spectral_split(op)
    for n in (1, 2, 5):
        assert power_norm_S(op, split, n) == 2.0 ** (-n)
        assert power_norm_U_inv(op, split, n) == 2.0 ** (-n)


def test_restricted_power_norms_bound_skew_basis():
    # skew eigenbasis: the routine promises an upper bound within the basis
    # conditioning factor, and the right Gelfand limit
    op = DenseOp(TRIANGULAR, LINF, invertible=True)
    split = spectral_split(op)
    for n in (1, 2, 5):
        exact = 3.0 ** (-n)
        got = power_norm_S(op, split, n)
        assert exact - 1e-12 <= got <= 4.0 * exact
        exact_u = 1.5 ** (-n)
        got_u = power_norm_U_inv(op, split, n)
        assert exact_u - 1e-12 <= got_u <= 4.0 * exact_u
    assert abs(restricted_radius_S(op, split) - 1.0 / 3.0) < 0.05
    assert abs(restricted_radius_U_inv(op, split) - 2.0 / 3.0) < 0.05


def test_restricted_radii_saddle():
    op = saddle()
    split = spectral_split(op)
    assert abs(restricted_radius_S(op, split) - 0.5) < 1e-9
    assert abs(restricted_radius_U_inv(op, split) - 0.5) < 1e-9


def test_resolvent_norms_saddle():
    # both sides restrict (L - I)^-1: 1/|1/2 - 1| = 2 on the stable line,
    # 1/|2 - 1| = 1 on the unstable one
    op = saddle()
    split = spectral_split(op)
    assert abs(resolvent_norm_S(op, split) - 2.0) < 1e-9
    assert abs(resolvent_norm_U_inv(op, split) - 1.0) < 1e-9


def test_classify_saddle_hyperbolic():
    op = saddle()
    rep = classify(op, spectral_split(op))
    assert rep.klass == HYPERBOLIC
    assert rep.witness is None
    assert rep.r_S < 1.0 < 1.0 / rep.r_U_inv
    assert rep.fwd_S_invariant and rep.bwd_U_invariant


def test_classify_weighted_shift_generalized():
    rep = classify(COMP, CUT0)
    assert rep.klass == GENERALIZED
    assert rep.witness is not None
    assert rep.witness.entries == {0: 1.0}
    # support moves down, so the image misses the top of S
    assert not rep.S_in_image


def test_classify_coordinate_hyperbolic_diagonal():
    op = DiagonalOp(SignWeights(neg_and_zero=0.5, pos=2.0), L1)
    rep = classify(op, CoordinateSplit(cutoff=0, norm_tag=L1))
    assert rep.klass == HYPERBOLIC
    assert rep.witness is None
    assert abs(rep.r_S - 0.5) < 1e-12
    assert abs(rep.r_U_inv - 0.5) < 1e-12


def test_classify_sup_one_boundary_is_undetermined():
    op, split = diagonal_sup_one()
    rep = classify(op, split)
    assert rep.klass == UNDETERMINED
    assert abs(rep.r_S - 1.0) < 1e-9


def test_classify_rejects_upward_shift():
    # (L x)_k = x_{k-1} pushes support up and out of S
    with pytest.raises(InvalidSplitting):
        classify(ShiftOp(-1, L1), CoordinateSplit(cutoff=0, norm_tag=L1))


def test_classify_kind_mismatch():
    with pytest.raises(KindMismatch):
        classify(saddle(), CoordinateSplit(cutoff=0, norm_tag=LINF))


def test_composition_certificate_weighted_shift():
    rep = composition_gh_check(W, R, CUT0)
    assert rep.klass == GENERALIZED
    assert rep.witness is not None
    assert rep.witness.entries == {0: 1.0}
    assert abs(rep.r_S - 0.5) < 1e-12
    assert abs(rep.r_U_inv - 0.5) < 1e-12


def test_composition_certificate_names_failed_hypothesis():
    bad_w = DiagonalOp(SignWeights(neg_and_zero=2.0, pos=0.5), L1)
    with pytest.raises(HypothesisFailed) as exc:
        composition_gh_check(bad_w, R, CUT0)
    assert exc.value.data["name"] in ("stable_contraction", "unstable_contraction")

    with pytest.raises(HypothesisFailed) as exc:
        composition_gh_check(W, ShiftOp(-1, L1), CUT0)
    assert exc.value.data["name"] == "R_stable_invariant"


def test_composition_certificate_agrees_with_direct_route():
    cert = composition_gh_check(W, R, CUT0)
    direct = classify(COMP, CUT0)
    assert cert.klass == direct.klass
    diff = cert.witness - direct.witness
    assert diff.norm() < 1e-12
