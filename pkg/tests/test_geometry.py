import csv
import math

import numpy as np
import pytest

import annulus_weyl as aw
from annulus_weyl import geometry as geo
from annulus_weyl.errors import (DomainError, SingularityError,
                                 UnsupportedConfigurationError)

from conftest import fixture_path


class TestCreate:
    def test_derived_constants(self, geom):
        assert geom.G0 == pytest.approx((2.0 - 1.0) / math.pi, abs=1e-16)
        assert geom.Gr == pytest.approx(2.0 * aw.g(0.5), abs=1e-15)
        assert -0.5 < geom.cusp_slope < 0.0
        assert abs(geom.cusp_slope + 1.0 / 3.0) <= 1e-12

    def test_rejects_bad_radii(self):
        with pytest.raises(DomainError):
            aw.AnnulusGeometry.create(2.0, 1.0)
        with pytest.raises(DomainError):
            aw.AnnulusGeometry.create(0.0, 1.0)

    def test_rejects_bad_slope(self):
        with pytest.raises(DomainError):
            aw.AnnulusGeometry.create(1.0, 2.0, (2, 6))  # not reduced
        with pytest.raises(DomainError):
            aw.AnnulusGeometry.create(1.0, 2.0, (1, 4))  # wrong value


class TestG:
    def test_g_endpoints(self):
        assert aw.g(1.0) == 0.0
        assert aw.g(0.0) == pytest.approx(1.0 / math.pi, abs=1e-16)

    def test_g_half(self):
        want = (math.sqrt(3.0) / 2.0 - math.pi / 6.0) / math.pi
        assert aw.g(0.5) == pytest.approx(want, abs=1e-15)

    def test_g_domain(self):
        with pytest.raises(DomainError):
            aw.g(-0.1)
        with pytest.raises(DomainError):
            aw.g(1.1)

    def test_G_values(self, geom):
        assert aw.G(geom, 2.0) == 0.0
        assert aw.G(geom, 0.0) == pytest.approx(1.0 / math.pi, abs=1e-15)
        assert aw.G(geom, 1.0) == pytest.approx(2.0 * aw.g(0.5), abs=1e-15)

    def test_cusp_slope_continuity(self, geom):
        # both branch formulas evaluated at the cusp itself
        lo = geo._G_inner(geom, geom.r, 1)
        hi = geo._G_outer(geom, geom.r, 1)
        assert abs(lo - hi) <= 1e-10
        assert abs(lo - geom.cusp_slope) <= 1e-15

    def test_derivative_singularities_raise(self, geom):
        for x in (geom.r, geom.R):
            with pytest.raises(SingularityError):
                aw.G(geom, x, 2)
            with pytest.raises(SingularityError):
                aw.G(geom, x, 3)

    def test_second_derivative_blowup_rates(self, geom):
        # G'' ~ (r-x)^{-1/2} below the cusp and (R-x)^{-1/2} below the rim
        for d in (1e-2, 1e-4, 1e-6):
            v = abs(aw.G(geom, geom.r - d, 2)) * math.sqrt(d)
            assert 0.05 < v < 5.0
            w = abs(aw.G(geom, geom.R - d, 2)) * math.sqrt(d)
            assert 0.05 < w < 5.0

    def test_G_vec_matches_scalar(self, geom):
        xs = np.linspace(0.0, 2.0, 37)
        vec = geo.G_vec(geom, xs)
        for x, v in zip(xs, vec):
            assert v == pytest.approx(aw.G(geom, float(x)), abs=1e-15)


class TestH_n:
    def test_linear_for_order_zero(self, geom):
        for x in (0.5, 3.0, 77.0):
            assert aw.h(geom, 0, x) == pytest.approx(x * geom.G0, rel=1e-15)

    def test_vanishes_at_lower_endpoint(self, geom):
        assert aw.h(geom, 12, 6.0) == pytest.approx(0.0, abs=1e-15)

    def test_inverse_roundtrip(self, geom):
        y = aw.h(geom, 30, 40.0)
        assert aw.h_inverse(geom, 30, y) == pytest.approx(40.0, rel=1e-10)

    def test_inverse_vec_matches_scalar(self, geom):
        ys = np.array([0.1, 1.0, 7.5, 33.0])
        got = geo.h_inverse_vec(geom, 17, ys)
        for y, x in zip(ys, got):
            assert x == pytest.approx(aw.h_inverse(geom, 17, float(y)), rel=1e-11)

    def test_monotone(self, geom):
        xs = np.linspace(5.0, 80.0, 200)
        hs = [aw.h(geom, 10, float(x)) for x in xs]
        assert all(a < b for a, b in zip(hs, hs[1:]))


class TestF:
    def test_boundary_values(self, geom):
        assert aw.F(geom, geom.R, 0.0) == pytest.approx(1.0, abs=1e-12)
        assert aw.F(geom, 0.0, geom.G0) == pytest.approx(1.0, abs=1e-12)

    def test_homogeneity_example(self, geom):
        t = geom.r / 2.0
        assert aw.F(geom, 2 * t, 2 * aw.G(geom, t)) == pytest.approx(2.0, abs=1e-10)

    def test_level_set(self, geom):
        for t in np.linspace(0.0, geom.R, 1000):
            y = aw.G(geom, float(t))
            if t == 0.0 and y == 0.0:
                continue
            assert abs(aw.F(geom, float(t), y) - 1.0) <= 1e-10

    def test_homogeneity_random(self, geom):
        rng = np.random.default_rng(7)
        for _ in range(200):
            x = float(rng.uniform(0.01, 5.0))
            y = float(rng.uniform(0.01, 2.0))
            lam = float(rng.uniform(0.1, 50.0))
            f1 = aw.F(geom, lam * x, lam * y)
            f2 = lam * aw.F(geom, x, y)
            assert abs(f1 - f2) <= 1e-9 * lam

    def test_matches_h_inverse(self, geom):
        for n, y in ((0, 2.5), (7, 4.0), (40, 11.0)):
            assert aw.F(geom, float(n), y) == pytest.approx(
                aw.h_inverse(geom, n, y), rel=1e-10)

    def test_partials_scaling(self, geom, consts):
        near = []
        for t in np.linspace(1.9, 1.9999, 50):
            x, y = float(t), aw.G(geom, float(t))
            fx, fy = aw.F_partials(geom, x, y)
            assert fx >= 0.0 and fy > 0.0
            near.append(fy * (y / x) ** (1.0 / 3.0))
        lo, hi = consts["dF_near_axis_range"]
        assert lo <= min(near) and max(near) <= hi
        mid = []
        for t in np.linspace(0.1, 1.8, 50):
            x, y = float(t), aw.G(geom, float(t))
            _, fy = aw.F_partials(geom, x, y)
            mid.append(fy)
        lo, hi = consts["dF_interior_range"]
        assert lo <= min(mid) and max(mid) <= hi

    def test_partials_singular_on_axis(self, geom):
        with pytest.raises(SingularityError):
            aw.F_partials(geom, 1.0, 0.0)

    def test_domain(self, geom):
        with pytest.raises(DomainError):
            aw.F(geom, 0.0, 0.0)
        with pytest.raises(DomainError):
            aw.F(geom, -1.0, 1.0)


class TestH:
    def test_endpoints(self, geom):
        assert aw.H(geom, 0.0) == geom.R
        assert aw.H(geom, geom.Gr) == geom.r

    def test_roundtrip(self, geom):
        for y in np.linspace(1e-4, geom.Gr, 25):
            x = aw.H(geom, float(y))
            assert aw.G(geom, x) == pytest.approx(float(y), abs=1e-10)

    def test_scaled_derivatives(self, geom, consts):
        ys = np.exp(np.linspace(math.log(1e-6), math.log(geom.Gr), 120))
        for j in (1, 2, 3):
            lo, hi = consts["H_scaled_ranges"][str(j)]
            vals = [abs(aw.H(geom, float(y), j)) * float(y) ** (j - 2.0 / 3.0)
                    for y in ys]
            assert lo <= min(vals) and max(vals) <= hi

    def test_derivative_singular_at_zero(self, geom):
        with pytest.raises(SingularityError):
            aw.H(geom, 0.0, 1)

    def test_domain(self, geom):
        with pytest.raises(DomainError):
            aw.H(geom, geom.Gr + 0.1)


class TestT:
    MU, C = 100.0, 0.0

    def test_endpoints(self, geom):
        beta, gamma = aw.beta_gamma(geom, self.C, self.MU)
        assert aw.T(geom, beta, self.C, self.MU) == 0.0
        assert aw.T(geom, gamma, self.C, self.MU) == geom.r

    def test_defining_equation(self, geom):
        beta, gamma = aw.beta_gamma(geom, self.C, self.MU)
        a, q = geom.slope_rational
        for y in np.linspace(beta, gamma, 41):
            x = aw.T(geom, float(y), self.C, self.MU)
            lhs = aw.G(geom, x) + (a / q) * x + self.C / self.MU
            assert abs(lhs - y) <= 1e-10

    def test_strictly_increasing(self, geom):
        beta, gamma = aw.beta_gamma(geom, self.C, self.MU)
        ys = np.linspace(beta, gamma, 101)
        xs = [aw.T(geom, float(y), self.C, self.MU) for y in ys]
        assert all(a < b for a, b in zip(xs, xs[1:]))

    def test_scaled_derivatives(self, geom, consts):
        beta, gamma = aw.beta_gamma(geom, self.C, self.MU)
        ys = gamma - np.exp(np.linspace(math.log(1e-6), math.log(gamma - beta), 120))
        for j in (1, 2, 3):
            lo, hi = consts["T_scaled_ranges"][str(j)]
            vals = [abs(aw.T(geom, float(y), self.C, self.MU, j))
                    * (gamma - float(y)) ** (j - 2.0 / 3.0) for y in ys]
            assert lo <= min(vals) and max(vals) <= hi

    def test_requires_rational_slope(self):
        bare = aw.AnnulusGeometry.create(1.0, 2.0)
        with pytest.raises(UnsupportedConfigurationError):
            aw.T(bare, 0.4, 0.0, 100.0)
        with pytest.raises(UnsupportedConfigurationError):
            aw.beta_gamma(bare, 0.0, 100.0)


class TestAiryZeros:
    def test_first_zero(self):
        t = aw.airy_neg_zeros(8)
        assert abs(t[0] - 2.338107410459767) < 1e-13

    def test_strictly_increasing_and_accurate(self):
        from scipy import special as sp
        t = aw.airy_neg_zeros(200)
        assert np.all(np.diff(t) > 0)
        for m in (0, 31, 63, 64, 120, 199):
            assert abs(sp.airy(-t[m])[0]) < 1e-12

    def test_fixture_file(self):
        with open(fixture_path("airy_zeros.csv")) as fh:
            rows = list(csv.DictReader(fh))
        t = aw.airy_neg_zeros(len(rows))
        for row, val in zip(rows, t):
            assert abs(float(row["t_m"]) - val) < 1e-12


class TestPsi:
    def test_value_at_zero(self):
        assert abs(aw.psi(0.0) - 1.0 / 12.0) <= 1e-12

    def test_limit_towards_minus_infinity(self):
        assert abs(aw.psi(-20.0) - 0.25) <= 1e-3

    def test_strictly_decreasing(self):
        rng = np.random.default_rng(0)
        zs = np.sort(rng.uniform(-50.0, 50.0, 10000))
        gaps = np.array([geo.psi_quarter_gap(float(z)) for z in zs])
        # psi strictly decreasing <=> its gap to 1/4 strictly increasing;
        # the gap form stays resolvable where psi itself rounds to 0.25
        assert np.all(np.diff(gaps) > 0.0)

    def test_range(self):
        rng = np.random.default_rng(1)
        zs = rng.uniform(-50.0, 50.0, 10000)
        gaps = np.array([geo.psi_quarter_gap(float(z)) for z in zs])
        assert np.all(gaps > 0.0) and np.all(gaps < 0.25)

    def test_prime_matches_central_difference(self):
        for z in (-3.0, 0.7, 5.0):
            h = 1e-6
            fd = (aw.psi(z + h) - aw.psi(z - h)) / (2 * h)
            assert aw.psi_prime(z) == pytest.approx(fd, rel=1e-5)

    def test_prime_tail_law(self):
        target = -(5.0 * math.sqrt(2.0) / (64.0 * math.pi)) * 50.0**-2.5
        assert abs(aw.psi_prime(50.0) / target - 1.0) < 0.2

    def test_fixture_samples(self):
        with open(fixture_path("psi_samples.csv")) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 2001
        for row in rows[::97]:
            assert abs(aw.psi(float(row["z"])) - float(row["psi"])) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            aw.psi(2e3)

    def test_shift_table_build(self):
        table = aw.build_shift_table(n_zeros=16, z_lo=-5, z_hi=5, n_samples=11)
        assert len(table.airy_zeros) == 16
        assert np.all(np.diff(table.psi_values) < 0)
