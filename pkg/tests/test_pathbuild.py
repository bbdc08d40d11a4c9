"""Tests for partition choice, path construction and winding certification."""

import numpy as np
import pytest

from blaschkelab.blaschke import ZeroList, eval_boundary, evaluate_grid
from blaschkelab.cauchy import PathMeasure, cauchy_on_circle
from blaschkelab.errors import BranchError, ContourThroughZeroError
from blaschkelab.fixtures import adversarial_pair, random_matched_pair
from blaschkelab.geometry import hyper_distance, rho_from_beta
from blaschkelab.gridfn import BoundaryGridFunction, harmonic_conjugate
from blaschkelab.matching import bottleneck_match
from blaschkelab.pathbuild import (
    build_path,
    certify_path,
    choose_partition,
    homotopy_family_eval,
    hyperbolic_circle_euclid,
    interpolate_points,
    interpolate_zeros,
    neighborhood_contours,
    rouche_zero_count,
)


class TestInterpolation:
    def test_endpoints_exact(self):
        pairs = [(0.1 + 0.2j, -0.3j)]
        assert interpolate_points(pairs, 0.0) == [0.1 + 0.2j]
        assert interpolate_points(pairs, 1.0) == [-0.3j]

    def test_midpoint(self):
        zl = interpolate_zeros([(0.0j, 0.5 + 0j)], 0.5)
        assert zl.zeros == ((0.25 + 0j, 1),)

    def test_interior_preserved(self):
        rng = np.random.default_rng(0)
        za, zb = random_matched_pair(rng, 10, 2.0, 0.95)
        pairs = list(zip(za.expanded_points(), zb.expanded_points()))
        for t in np.linspace(0, 1, 7):
            assert all(abs(p) < 1 for p in interpolate_points(pairs, float(t)))

    def test_range_checked(self):
        with pytest.raises(ValueError):
            interpolate_zeros([(0.1, 0.2)], 1.5)


class TestChoosePartition:
    def test_stationary_pairs_single_interval(self):
        assert choose_partition([(0.3, 0.3)], 0.5) == [0.0, 1.0]

    def test_coarse_alpha_single_interval(self):
        alpha = hyper_distance(0.0, 0.5) + 0.1
        assert choose_partition([(0.0j, 0.5 + 0j)], alpha) == [0.0, 1.0]

    def test_fine_alpha_verified_directly(self):
        alpha = 0.25
        ts = choose_partition([(0.0j, 0.5 + 0j)], alpha)
        assert len(ts) > 2
        # direct verification: dense t-sampling of each subinterval
        for a, b in zip(ts, ts[1:]):
            samples = [0.5 * t for t in np.linspace(a, b, 20)]
            diam = max(
                hyper_distance(p, q) for i, p in enumerate(samples) for q in samples[i + 1 :]
            )
            assert diam < alpha

    def test_uniform_over_pairs(self):
        pairs = [(0.0j, 0.1 + 0j), (0.5, 0.8)]  # second pair moves much farther
        ts = choose_partition(pairs, 0.3)
        for a, b in zip(ts, ts[1:]):
            for z0, z1 in pairs:
                path = [z0 + t * (z1 - z0) for t in np.linspace(a, b, 10)]
                diam = max(
                    hyper_distance(p, q) for i, p in enumerate(path) for q in path[i + 1 :]
                )
                assert diam < 0.3

    def test_alpha_positive_required(self):
        with pytest.raises(ValueError):
            choose_partition([(0.1, 0.2)], 0.0)


class TestRoucheCount:
    def test_double_zero(self):
        contour = 0.5 * np.exp(2j * np.pi * np.arange(64) / 64)
        assert rouche_zero_count(lambda z: z**2, contour) == 2

    def test_zero_free(self):
        contour = 0.3 * np.exp(2j * np.pi * np.arange(64) / 64)
        assert rouche_zero_count(lambda z: z + 2.0, contour) == 0

    def test_degree_five_product_near_circle(self):
        rng = np.random.default_rng(1)
        zl = ZeroList.from_points([0.6 * np.exp(2j * np.pi * k / 5) + 0.05 for k in range(5)])
        contour = 0.99 * np.exp(2j * np.pi * np.arange(256) / 256)
        assert rouche_zero_count(lambda z: evaluate_grid(zl, z), contour) == 5

    def test_through_zero_detected(self):
        contour = 0.5 * np.exp(2j * np.pi * np.arange(32) / 32)
        with pytest.raises(ContourThroughZeroError):
            rouche_zero_count(lambda z: z - 0.5, contour, max_points=2048)


class TestNeighborhoodContours:
    def test_disjoint_centers_two_groups(self):
        groups = neighborhood_contours([-0.6, 0.6], beta_radius=1.0)
        assert len(groups) == 2
        assert all(len(g.loops) == 1 and g.expected_count == 1 for g in groups)

    def test_overlapping_pair_merges(self):
        groups = neighborhood_contours([0.0, 0.1], beta_radius=1.0)
        assert len(groups) == 1
        assert groups[0].expected_count == 2
        # merged boundary is a single outer loop
        assert len(groups[0].loops) == 1

    def test_euclid_circle_formula(self):
        center, radius = hyperbolic_circle_euclid(0.0, 1.0)
        assert center == 0.0
        assert radius == pytest.approx(rho_from_beta(1.0))

    def test_merged_contour_counts_zeros(self):
        centers = [0.0, 0.12 + 0.05j, -0.1 + 0.08j]
        zl = ZeroList.from_points(centers)
        groups = neighborhood_contours(centers, beta_radius=1.0)
        assert len(groups) == 1
        total = 0
        for loop in groups[0].loops:
            total += rouche_zero_count(lambda z: evaluate_grid(zl, z), loop)
        assert total == 3

    def test_ring_with_hole_signed_counting(self):
        # three centers arranged so their unit disks form a ring with a hole:
        # the hole loop must subtract whatever it does not enclose
        r = 0.48
        centers = [r * np.exp(2j * np.pi * k / 3) for k in range(3)]
        groups = neighborhood_contours(centers, beta_radius=1.0)
        assert len(groups) == 1
        loops = groups[0].loops
        zl = ZeroList.from_points(centers)
        total = sum(rouche_zero_count(lambda z: evaluate_grid(zl, z), lp) for lp in loops)
        assert total == 3
        if len(loops) > 1:
            # the hole exists: a function with all zeros in the hole nets zero
            hole_zero = ZeroList(m=1)  # zero at the origin, inside the hole
            net = sum(rouche_zero_count(lambda z: evaluate_grid(hole_zero, z), lp) for lp in loops)
            assert net == 0


class TestBuildPath:
    def test_constant_path(self):
        zl = ZeroList.from_points([0.3, -0.2j])
        path = build_path(zl, zl, n_grid=256)
        assert len(path.vertices) == 1
        np.testing.assert_array_equal(path.vertices[0].outer_log.samples, 0.0)
        report = certify_path(path)
        assert report.ok
        assert all(c.count == c.expected for c in report.checks)

    def test_single_pair_modulus_identity(self):
        za, zb = ZeroList.from_points([0.3]), ZeroList.from_points([0.4])
        path = build_path(za, zb, n_grid=1024)
        assert path.certification is not None and path.certification.ok
        # |b* g| = e^{v_total} on the circle
        v_total = sum(s.correction.v.samples for s in path.steps)
        final = path.vertices[-1].trace()
        np.testing.assert_allclose(np.abs(final), np.exp(v_total), atol=1e-10)

    def test_endpoint_fidelity(self):
        rng = np.random.default_rng(2)
        za, zb = random_matched_pair(rng, 4, 0.4, 0.85)
        pairing = bottleneck_match(za, zb)
        pts = zb.expanded_points()
        zb_ord = ZeroList.from_points([pts[j] for j in pairing.permutation])
        path = build_path(za, zb_ord, n_grid=1024)
        start_err = np.abs(path.vertices[0].trace() - eval_boundary(za, 1024).samples).max()
        end_expected = eval_boundary(zb_ord, 1024).samples * np.exp(path.outer_log_total.samples)
        end_err = np.abs(path.vertices[-1].trace() - end_expected).max()
        assert max(start_err, end_err) < 1e-8

    def test_telescoping_functional(self):
        rng = np.random.default_rng(3)
        za, zb = random_matched_pair(rng, 5, 0.4, 0.85)
        pairs = list(zip(za.expanded_points(), zb.expanded_points()))
        path = build_path(za, zb, alpha=0.2, n_grid=1024)
        # per-step functionals sum to the total functional on the grid
        total_c = cauchy_on_circle(PathMeasure.from_pairs(pairs), 1024).samples
        v_sum = sum(s.correction.v.samples for s in path.steps)
        lhs = 2.0 * total_c.imag - harmonic_conjugate(BoundaryGridFunction(v_sum)).samples
        per_step = np.zeros(1024)
        for s in path.steps:
            c_j = cauchy_on_circle(PathMeasure.from_pairs(list(s.pairs)), 1024).samples
            per_step = per_step + (2.0 * c_j.imag - harmonic_conjugate(s.correction.v).samples)
        np.testing.assert_allclose(lhs, per_step, atol=1e-8)
        assert path.functional_sup < 1e-6

    def test_step_norms_below_half_margin(self):
        rng = np.random.default_rng(4)
        za, zb = random_matched_pair(rng, 6, 0.5, 0.9)
        pairing = bottleneck_match(za, zb)
        pts = zb.expanded_points()
        zb_ord = ZeroList.from_points([pts[j] for j in pairing.permutation])
        path = build_path(za, zb_ord, n_grid=1024)
        eps = path.certification.eps_observed
        assert eps > 0
        assert all(s.step_norm < eps / 2 for s in path.steps)

    def test_adversarial_single_step_fails(self):
        za, zs = adversarial_pair(3.0)
        path = build_path(za, zs, alpha=3.5, n_grid=512)
        assert len(path.steps) == 1
        report = certify_path(path)
        assert not report.ok
        assert any("count" in f or "margin" in f or "modulus" in f for f in report.failures)


class TestHomotopyFamily:
    def _setup(self):
        # target = u0 * exp(A) for an explicit bounded analytic A
        u0 = ZeroList.from_points([0.3, -0.1 + 0.2j])
        n = 512
        nodes = np.exp(2j * np.pi * np.arange(n) / n)
        log_ratio = BoundaryGridFunction(0.3 * nodes - 0.1 * nodes**2)
        target = BoundaryGridFunction(eval_boundary(u0, n).samples * np.exp(log_ratio.samples))
        return u0, log_ratio, target

    def test_t_zero_returns_u0(self):
        u0, log_ratio, target = self._setup()
        out = homotopy_family_eval(u0, log_ratio, 0.0, target)
        np.testing.assert_allclose(out.samples, eval_boundary(u0, 512).samples, atol=1e-12)

    def test_t_one_returns_target(self):
        u0, log_ratio, target = self._setup()
        out = homotopy_family_eval(u0, log_ratio, 1.0, target)
        np.testing.assert_allclose(out.samples, target.samples, atol=1e-12)

    def test_geometric_mean_modulus(self):
        u0, log_ratio, target = self._setup()
        out = homotopy_family_eval(u0, log_ratio, 0.5)
        want = np.abs(eval_boundary(u0, 512).samples) ** 0.5 * np.abs(target.samples) ** 0.5
        np.testing.assert_allclose(np.abs(out.samples), want, atol=1e-10)

    def test_branch_mismatch_detected(self):
        u0, log_ratio, target = self._setup()
        wrong = BoundaryGridFunction(target.samples * np.exp(0.1))
        with pytest.raises(BranchError):
            homotopy_family_eval(u0, log_ratio, 0.5, wrong)
