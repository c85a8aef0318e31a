import itertools
import math

import numpy as np
import pytest

from sgcol import nodes, sparse_grid
from sgcol.multiindex import MultiIndexSet, canonical, smolyak_set
from sgcol.sparse_grid import (best_n_term_curve, build, evaluate,
                               evaluate_batch, quadrature, tensor_points,
                               to_hermite)


def random_monotone_set(rng, n_dims=3, max_level=3, n_seeds=4):
    base = {()}
    for _ in range(n_seeds):
        idx = tuple(rng.integers(0, max_level + 1, size=n_dims))
        for sub in itertools.product(*(range(k + 1) for k in idx)):
            base.add(canonical(sub))
    return MultiIndexSet(base, dimension_bound=n_dims)


class TestTensorPoints:
    def test_root_is_origin(self):
        np.testing.assert_array_equal(tensor_points((), "gaussian-leja", 3),
                                      np.zeros((1, 3)))

    def test_c_order_and_pinning(self):
        pts = tensor_points((1, 0, 1), nodes.GAUSS_HERMITE, 3)
        assert pts.shape == (4, 3)
        assert np.all(pts[:, 1] == 0.0)
        # last dimension varies fastest
        assert pts[0, 2] != pts[1, 2]
        assert pts[0, 0] == pts[1, 0]

    def test_many_inactive_dims(self):
        pts = tensor_points((0,) * 40 + (1,), nodes.GAUSSIAN_LEJA, 41)
        assert pts.shape == (2, 41)
        assert np.all(pts[:, :40] == 0.0)


class TestBuild:
    def test_counts_nested_family_equal(self):
        for fam in (nodes.GAUSSIAN_LEJA, nodes.GENZ_KEISTER):
            g = build(smolyak_set(2, 2), fam)
            assert g.counts["incremental"] == g.counts["combitec"]

    def test_counts_gauss_hermite(self):
        # equality can hold at low levels; first strict gap in 2 dims is w=4,
        # where (1, 1) has coefficient 0 and alone owns the points (+-1, +-1)
        for w, strict in ((2, False), (3, False), (4, True)):
            g = build(smolyak_set(2, w), nodes.GAUSS_HERMITE)
            assert g.counts["incremental"] >= g.counts["combitec"]
            if strict:
                assert g.counts["incremental"] > g.counts["combitec"]

    def test_point_dedup(self):
        # GH levels 0 and 2 share the node 0; union must deduplicate
        g = build(MultiIndexSet([(), (1,), (2,)]), nodes.GAUSS_HERMITE)
        keys = {tuple(np.round(p, 12) + 0.0) for p in g.points}
        assert len(keys) == len(g.points)
        assert g.counts["incremental"] == 1 + 2 + 3 - 1  # node 0 shared


class TestPolynomialReproduction:
    def test_identity_on_polynomial_space(self):
        """U_Lambda reproduces every monomial whose degree profile fits in
        the point-growth envelope of Lambda."""
        rng = np.random.default_rng(77)
        for trial in range(50):
            n_dims = int(rng.integers(1, 5))
            s = random_monotone_set(rng, n_dims=n_dims,
                                    max_level=4 if n_dims < 3 else 2,
                                    n_seeds=3)
            fam = (nodes.GAUSS_HERMITE, nodes.GAUSSIAN_LEJA)[trial % 2]
            g = build(s, fam)
            # any index in Lambda certifies exactness for degrees <= index
            probe = rng.standard_normal((40, n_dims))
            for idx in list(sorted(s, key=lambda i: -sum(i)))[:3]:
                degs = list(idx) + [0] * (n_dims - len(idx))
                vals = np.prod(g.points ** degs, axis=1)
                want = np.prod(probe ** degs, axis=1)
                got = evaluate_batch(g, vals, probe)
                scale = max(1.0, np.max(np.abs(want)))
                assert np.max(np.abs(got - want)) < 1e-9 * scale

    def test_single_point_evaluate_matches_batch(self):
        g = build(smolyak_set(2, 3), nodes.GAUSSIAN_LEJA)
        vals = np.cos(g.points[:, 0]) * g.points[:, 1]
        pt = np.array([0.3, -1.2])
        assert abs(evaluate(g, vals, pt)
                   - evaluate_batch(g, vals, pt[None, :])[0]) < 1e-13


class TestQuadrature:
    def test_sum_of_weights_is_one(self):
        for fam in (nodes.GAUSS_HERMITE, nodes.GAUSSIAN_LEJA):
            g = build(smolyak_set(3, 2), fam)
            assert abs(quadrature(g, np.ones(len(g.points))) - 1.0) < 1e-12

    def test_exact_gaussian_moments(self):
        g = build(smolyak_set(2, 3), nodes.GAUSS_HERMITE)
        # E[x^2 y^2] = 1 for independent standard normals
        vals = g.points[:, 0] ** 2 * g.points[:, 1] ** 2
        assert abs(quadrature(g, vals) - 1.0) < 1e-12


class TestVectorValues:
    def test_vector_valued_interpolation(self):
        g = build(smolyak_set(2, 2), nodes.GAUSSIAN_LEJA)
        vals = np.stack([g.points[:, 0], 2.0 * g.points[:, 1]], axis=1)
        probe = np.array([[0.7, -0.2], [1.1, 0.4]])
        got = evaluate_batch(g, vals, probe)
        np.testing.assert_allclose(got[:, 0], probe[:, 0], atol=1e-12)
        np.testing.assert_allclose(got[:, 1], 2 * probe[:, 1], atol=1e-12)


class TestToHermite:
    def test_round_trip_on_exact_data(self):
        g = build(smolyak_set(2, 3), nodes.GAUSS_HERMITE)
        vals = (g.points[:, 0] ** 2 - 1.0) + 0.5 * g.points[:, 1]
        exp = to_hermite(g, vals)
        probe = np.random.default_rng(3).standard_normal((30, 2))
        want = evaluate_batch(g, vals, probe)
        got = np.array([exp(p) for p in probe])
        np.testing.assert_allclose(got, want, atol=1e-8)

    def test_coefficients_of_known_polynomial(self):
        g = build(smolyak_set(1, 4), nodes.GAUSS_HERMITE)
        x = g.points[:, 0]
        vals = x ** 2  # = sqrt(2) H_2 + H_0
        exp = to_hermite(g, vals)
        assert abs(exp.terms.get((), 0.0) - 1.0) < 1e-10
        assert abs(exp.terms.get((2,), 0.0) - math.sqrt(2)) < 1e-10
        assert abs(exp.terms.get((1,), 0.0)) < 1e-10

    def test_parseval_norm(self):
        g = build(smolyak_set(2, 3), nodes.GAUSS_HERMITE)
        vals = g.points[:, 0] * g.points[:, 1] + 3.0
        exp = to_hermite(g, vals)
        assert abs(exp.norm() - math.sqrt(1 + 9)) < 1e-9


class TestBestNTerm:
    def test_curve_properties(self):
        exp_terms = {(): 3.0, (1,): -2.0, (0, 1): 1.0, (1, 1): 0.5}
        from sgcol.hermite import HermiteExpansion
        curve = best_n_term_curve(HermiteExpansion(terms=exp_terms))
        ns = [n for n, _ in curve]
        tails = [t for _, t in curve]
        assert ns == sorted(ns)
        assert all(a >= b for a, b in zip(tails, tails[1:]))
        assert tails[-1] == 0.0
        # [TRIVIAL] full norm at N=0, magnitudes sorted 3, 2, 1, 0.5
        assert abs(tails[0] - math.sqrt(9 + 4 + 1 + 0.25)) < 1e-14
        assert abs(tails[1] - math.sqrt(4 + 1 + 0.25)) < 1e-14
