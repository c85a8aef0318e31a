import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgcol import hermite, nodes
from sgcol.hermite import (HermiteExpansion, delta_norm, delta_norm_profile,
                           hermite_eval, hermite_eval_all,
                           hermite_tensor_eval)


class TestHermiteEval:
    def test_low_degrees(self):
        x = np.linspace(-3, 3, 13)
        np.testing.assert_allclose(hermite_eval(0, x), np.ones_like(x))
        np.testing.assert_allclose(hermite_eval(1, x), x)
        np.testing.assert_allclose(hermite_eval(2, x),
                                   (x ** 2 - 1) / math.sqrt(2), atol=1e-14)
        np.testing.assert_allclose(hermite_eval(3, x),
                                   (x ** 3 - 3 * x) / math.sqrt(6),
                                   atol=1e-13)

    @pytest.mark.parametrize("k,l", [(0, 0), (1, 1), (3, 3), (2, 5), (7, 7),
                                     (4, 9)])
    def test_orthonormality_under_gauss_quadrature(self, k, l):
        r = nodes.gauss_hermite(max(k, l) + 1)
        got = float(r.weights @ (hermite_eval(k, r.nodes)
                                 * hermite_eval(l, r.nodes)))
        assert abs(got - (1.0 if k == l else 0.0)) < 1e-11

    def test_eval_all_matches_single(self):
        x = np.linspace(-2, 2, 7)
        table = hermite_eval_all(6, x)
        assert table.shape == (7, 7)
        for k in range(7):
            np.testing.assert_allclose(table[k], hermite_eval(k, x),
                                       atol=1e-13)

    def test_tensor_eval(self):
        for pt in ([0.5, -1.0], [1.5, 2.0]):
            got = hermite_tensor_eval((2, 1), np.array(pt))
            want = float(np.atleast_1d(hermite_eval(2, pt[0]))[0]) * \
                float(np.atleast_1d(hermite_eval(1, pt[1]))[0])
            assert abs(got - want) < 1e-13


class TestHermiteExpansion:
    def test_call_and_norm(self):
        exp = HermiteExpansion(terms={(): 2.0, (1,): 3.0})
        assert abs(exp(np.array([0.0])) - 2.0) < 1e-14
        assert abs(exp(np.array([1.0])) - 5.0) < 1e-14
        assert abs(exp.norm() - math.sqrt(13)) < 1e-14

    def test_norm_is_l2_of_coefficients(self):
        exp = HermiteExpansion(terms={(): 1.0, (2,): -2.0, (0, 1): 2.0})
        assert abs(exp.norm() - 3.0) < 1e-14


class TestDeltaNorm:
    def test_vanishes_once_interpolation_is_exact(self):
        # U_i reproduces degree <= i exactly for point-growth families
        for family in (nodes.GAUSS_HERMITE, nodes.GAUSSIAN_LEJA):
            for k in (1, 3, 5):
                assert delta_norm(family, k + 1, k) < 1e-10
                assert delta_norm(family, k + 3, k) < 1e-10

    def test_delta0_on_constant(self):
        assert abs(delta_norm(nodes.GAUSS_HERMITE, 0, 0) - 1.0) < 1e-13

    def test_square_sums_against_direct_norm(self):
        # sum of Delta_i H_k over i telescopes to H_k for large cutoff
        family = nodes.GAUSS_HERMITE
        k = 4
        r = nodes.gauss_hermite(12)
        approx = np.zeros_like(r.nodes)
        for i in range(k + 2):
            xs = nodes.rule(family, i).nodes
            B = nodes._lagrange_basis_at(xs, r.nodes)
            vals = B @ hermite_eval(k, xs)
            if i > 0:
                xs0 = nodes.rule(family, i - 1).nodes
                B0 = nodes._lagrange_basis_at(xs0, r.nodes)
                vals = vals - B0 @ hermite_eval(k, xs0)
            approx += vals
        np.testing.assert_allclose(approx, hermite_eval(k, r.nodes),
                                   atol=1e-9)


class TestDeltaNormProfile:
    def test_shape_and_monotone_k_range(self):
        prof = delta_norm_profile(nodes.GAUSS_HERMITE, k_max=6)
        assert [k for k, _ in prof] == list(range(1, 7))
        assert all(v > 0 for _, v in prof)

    def test_bound_small_range(self):
        for family in (nodes.GAUSS_HERMITE, nodes.GAUSSIAN_LEJA):
            for k, v in delta_norm_profile(family, k_max=10):
                assert v <= 1 + 2 * k + 1e-9

    def test_rejects_genz_keister(self):
        with pytest.raises(ValueError):
            delta_norm_profile(nodes.GENZ_KEISTER, k_max=5)
