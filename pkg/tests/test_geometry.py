"""Fubini-Study metric and curvature checks against closed-form geometry."""

import numpy as np
import pytest

from enhq.coherent import AffineFamily, CanonicalFamily, SpinFamily
from enhq.geometry import (
    ChartBoundaryError,
    fiducial_metric_coeffs,
    fs_metric,
    gaussian_curvature,
)
from enhq.hilbert import basis_state, make_fock_space, squeezed_ground_state


class TestCanonicalMetric:
    @pytest.mark.parametrize("hbar", [1.0, 0.25])
    def test_flat_identity(self, hbar):
        fam = CanonicalFamily(N=100, hbar=hbar)
        for p, q in ((0.0, 0.0), (1.0, -1.0), (0.5, 2.0)):
            m = fs_metric(fam, (p, q))
            assert np.max(np.abs(m.as_matrix() - np.eye(2))) < 1e-6

    def test_flat_curvature(self):
        rep = gaussian_curvature(CanonicalFamily(N=100), (0.2, -0.3))
        assert abs(rep.K) < 1e-4

    def test_positive_definite(self):
        m = fs_metric(CanonicalFamily(N=100), (1.0, 1.0))
        assert m.is_positive_definite()


class TestAffineMetric:
    def test_components(self):
        beta = 1.0
        fam = AffineFamily(beta, 1.0)
        for q in (0.5, 1.0, 2.0):
            m = fs_metric(fam, (0.3, q))
            assert abs(m.g_pp - q * q / beta) < 1e-5
            assert abs(m.g_qq - beta / (q * q)) < 1e-5
            assert abs(m.g_pq) < 1e-5

    def test_beta_scaling(self):
        fam = AffineFamily(2.0, 1.0)
        m = fs_metric(fam, (0.0, 1.0))
        assert abs(m.g_pp - 0.5) < 1e-5
        assert abs(m.g_qq - 2.0) < 1e-5

    def test_curvature_matches_metric(self):
        # Brioschi curvature of beta^-1 q^2 dp^2 + beta q^-2 dq^2 is -1/beta
        for beta in (0.5, 1.0, 2.0):
            hbar = 0.25 if beta == 0.5 else 1.0
            rep = gaussian_curvature(AffineFamily(beta, hbar), (0.0, 1.0))
            assert abs(rep.K + 1.0 / beta) < 1e-3 / beta

    def test_curvature_point_independent(self):
        fam = AffineFamily(1.0, 1.0)
        ks = [gaussian_curvature(fam, (0.0, q)).K for q in np.linspace(0.3, 3.0, 6)]
        assert np.ptp(ks) / abs(np.mean(ks)) < 1e-3

    def test_boundary_rejected(self):
        fam = AffineFamily(1.0, 1.0)
        with pytest.raises(ChartBoundaryError):
            fs_metric(fam, (0.0, 1e-4))


class TestSpinMetric:
    @pytest.mark.parametrize("s", [0.5, 1.0, 1.5])
    def test_round_sphere(self, s):
        fam = SpinFamily(s, 1.0)
        theta = np.pi / 3
        m = fs_metric(fam, (theta, 0.8))
        ref = np.diag([s, s * np.sin(theta) ** 2])
        assert np.max(np.abs(m.as_matrix() - ref)) < 1e-6

    @pytest.mark.parametrize("s", [0.5, 1.0, 1.5])
    def test_curvature(self, s):
        rep = gaussian_curvature(SpinFamily(s, 1.0), (np.pi / 2, 0.8))
        assert abs(rep.K - 1.0 / s) < 1e-3

    def test_pq_chart_metric_consistency(self):
        # the (p, q) = (sqrt(sh) cos(theta), sqrt(sh) phi) chart must give
        # an isometric metric: ds^2 there is dp^2/(1-p^2/sh) + (1-p^2/sh) dq^2
        s = 1.0
        fam = SpinFamily(s, 1.0)
        p = 0.3
        m = fs_metric(fam, (p, 0.5), chart="pq")
        w = 1.0 - p * p / s
        assert abs(m.g_pp - 1.0 / w) < 1e-5
        assert abs(m.g_qq - w) < 1e-5
        assert abs(m.g_pq) < 1e-6

    def test_pole_rejected(self):
        fam = SpinFamily(1.0, 1.0)
        with pytest.raises(ChartBoundaryError):
            fs_metric(fam, (1e-4, 0.0))
        with pytest.raises(ChartBoundaryError):
            gaussian_curvature(fam, (0.1, 0.0))


class TestPhaseInvariance:
    def test_synthetic_phase_change(self):
        # multiplying the state map by exp(i alpha(p, q)) must not move the metric
        base = CanonicalFamily(N=100)

        class Rephased:
            hbar = base.hbar

            @staticmethod
            def vec(p, q):
                return np.exp(1j * (0.7 * p * q + 0.3 * p)) * base.state(p, q).coeffs

            @staticmethod
            def inner(x, y):
                return complex(np.vdot(x, y))

        plain = fs_metric(base, (0.4, 0.9)).as_matrix()
        rephased = fs_metric(Rephased(), (0.4, 0.9)).as_matrix()
        assert np.max(np.abs(plain - rephased)) < 1e-8


class TestFiducialCoeffs:
    def test_ground_state(self):
        sp = make_fock_space(100, 1.0)
        a, b, c = fiducial_metric_coeffs(basis_state(sp, 0))
        assert (a, b, c) == pytest.approx((0.5, 0.0, 0.5), abs=1e-10)

    def test_squeezed_state(self):
        lam = 1.4
        sp = make_fock_space(100, 1.0)
        a, b, c = fiducial_metric_coeffs(squeezed_ground_state(sp, lam))
        assert a == pytest.approx(lam**2 / 2, abs=1e-8)
        assert c == pytest.approx(1 / (2 * lam**2), abs=1e-8)
        assert b == pytest.approx(0.0, abs=1e-8)

    def test_first_excited(self):
        sp = make_fock_space(100, 1.0)
        a, b, c = fiducial_metric_coeffs(basis_state(sp, 1))
        assert (a, b, c) == pytest.approx((1.5, 0.0, 1.5), abs=1e-10)

    @pytest.mark.parametrize("which", ["ground", "squeezed", "excited"])
    def test_footnote_formula_matches_fs_metric(self, which):
        sp = make_fock_space(100, 1.0)
        fid = {
            "ground": basis_state(sp, 0),
            "squeezed": squeezed_ground_state(sp, 1.3),
            "excited": basis_state(sp, 1),
        }[which]
        fam = CanonicalFamily(space=sp, fiducial=fid)
        a, b, c = fiducial_metric_coeffs(fid)
        ref = (2.0 / sp.hbar) * np.array([[a, b / 2], [b / 2, c]])
        got = fs_metric(fam, (0.2, -0.4)).as_matrix()
        assert np.max(np.abs(got - ref)) < 1e-6
