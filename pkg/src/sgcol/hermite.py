"""Orthonormal probabilists' Hermite polynomials and detail-operator norms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import nodes as _nodes
from .multiindex import canonical


def hermite_eval(k: int, x):
    """L2_mu-orthonormal probabilists' Hermite polynomial of degree k at x.

    Recurrence: H_{k+1}(x) = (x H_k(x) - sqrt(k) H_{k-1}(x)) / sqrt(k+1).
    """
    if k < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    h_prev = np.zeros_like(x)
    h = np.ones_like(x)
    for j in range(k):
        h, h_prev = (x * h - math.sqrt(j) * h_prev) / math.sqrt(j + 1), h
    return h if h.ndim else float(h)


def hermite_eval_all(k_max: int, x) -> np.ndarray:
    """Values H_0(x)..H_{k_max}(x), stacked along the first axis."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((k_max + 1,) + x.shape)
    out[0] = 1.0
    if k_max >= 1:
        out[1] = x
    for j in range(1, k_max):
        out[j + 1] = (x * out[j] - math.sqrt(j) * out[j - 1]) / math.sqrt(j + 1)
    return out


def hermite_tensor_eval(k, xi) -> float:
    """Product of univariate Hermite values over the active dimensions of k."""
    k = canonical(k)
    xi = np.asarray(xi, dtype=float)
    if xi.ndim != 1 or len(xi) < len(k):
        raise ValueError(
            f"point of length {len(xi)} does not cover {len(k)} active dimensions")
    out = 1.0
    for m, km in enumerate(k):
        if km > 0:
            out *= hermite_eval(km, xi[m])
    return out


@dataclass
class HermiteExpansion:
    """Finite expansion in tensorized orthonormal Hermite polynomials."""

    terms: dict = field(default_factory=dict)  # multi-index tuple -> coefficient

    def __post_init__(self):
        self.terms = {canonical(k): float(v) for k, v in self.terms.items()}

    def norm(self) -> float:
        """L2_mu norm: plain coefficient l2 norm by orthonormality."""
        return math.sqrt(sum(v * v for v in self.terms.values()))

    def __call__(self, xi) -> float:
        return sum(v * hermite_tensor_eval(k, xi) for k, v in self.terms.items())


def _interp_hermite_at(family, level, k, x):
    """(U_level H_k)(x): interpolate H_k at the family's level nodes."""
    r = _nodes.rule(family, level)
    basis = _nodes._lagrange_basis_at(r.nodes, x)
    return basis @ hermite_eval(k, r.nodes)


def delta_norm(family: str, i: int, k: int) -> float:
    """||Delta_i H_k||_{L2_mu}, integrated exactly by Gauss-Hermite quadrature."""
    gh = _nodes.gauss_hermite(max(i, k) + 1)  # integrand degree <= 2 max(i, k)
    vals = _interp_hermite_at(family, i, k, gh.nodes)
    if i > 0:
        vals = vals - _interp_hermite_at(family, i - 1, k, gh.nodes)
    return math.sqrt(max(float(gh.weights @ vals ** 2), 0.0))


def delta_norm_profile(family: str, k_max: int = 39, k_min: int = 1):
    """Table of (k, max_i ||Delta_i H_k||) for k = k_min..k_max.

    Delta_i H_k vanishes for i >= k + 1, so the maximum is taken over
    i in {0, ..., k + 1}.
    """
    if family not in (_nodes.GAUSS_HERMITE, _nodes.GAUSSIAN_LEJA):
        raise ValueError("profile is defined for Gauss-Hermite and Gaussian Leja")
    out = []
    for k in range(k_min, k_max + 1):
        out.append((k, max(delta_norm(family, i, k) for i in range(k + 2))))
    return out
