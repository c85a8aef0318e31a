"""Univariate node families on the real line with standard Gaussian weight.

Three families: Gauss-Hermite (non-nested, level k has k+1 nodes),
Gaussian Leja (nested, k+1 nodes), and Genz-Keister (nested, tabulated
1-3-9-19-35 Kronrod-Patterson-Normal extensions).
"""

from __future__ import annotations

import importlib.resources
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

GAUSS_HERMITE = "gauss-hermite"
GAUSSIAN_LEJA = "gaussian-leja"
GENZ_KEISTER = "genz-keister"
FAMILIES = (GAUSS_HERMITE, GAUSSIAN_LEJA, GENZ_KEISTER)

_GK_CARDINALITIES = (1, 3, 9, 19, 35)

# Leja extremal search, cf. the weighted Leja objective sqrt(rho)*prod|x-x_i|.
# The nodes spread like ~1.85 sqrt(n), so 150 nodes need |x| up to ~23.
_LEJA_INTERVAL = (-30.0, 30.0)
_LEJA_GRID_SIZE = 150_000
_LEJA_TIE_TOL = 1e-12


class RuleExhaustedError(ValueError):
    """Raised when a node family has no rule at the requested level."""


@dataclass(frozen=True)
class UnivariateRule:
    """Nodes and Gaussian quadrature weights of one family at one level."""

    family: str
    level: int
    nodes: np.ndarray      # ascending
    weights: np.ndarray    # sum to 1 (mu is a probability measure)

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def barycentric_weights(self) -> np.ndarray:
        return _barycentric_weights(self.family, self.level)

    def __len__(self):
        return len(self.nodes)


def level_to_knots(family: str, k: int) -> int:
    """Number of nodes of `family` at level k (0-based)."""
    if k < 0:
        raise ValueError("level must be non-negative")
    if family in (GAUSS_HERMITE, GAUSSIAN_LEJA):
        return k + 1
    if family == GENZ_KEISTER:
        if k >= len(_GK_CARDINALITIES):
            raise RuleExhaustedError(
                f"Genz-Keister rule exhausted: no tabulation beyond level "
                f"{len(_GK_CARDINALITIES) - 1} (35 nodes)")
        return _GK_CARDINALITIES[k]
    raise ValueError(f"unknown family {family!r}")


def max_level(family: str) -> int | None:
    """Largest available level, or None if unbounded."""
    return len(_GK_CARDINALITIES) - 1 if family == GENZ_KEISTER else None


@lru_cache(maxsize=None)
def gauss_hermite(n: int) -> UnivariateRule:
    """Gauss rule for N(0,1): zeros of the probabilists' Hermite polynomial.

    Exact for polynomials of degree <= 2n - 1.
    """
    if not 1 <= n <= 200:
        raise ValueError("node count must be in [1, 200]")
    nodes, weights = np.polynomial.hermite_e.hermegauss(n)
    weights = weights / weights.sum()  # normalize to probability measure
    if not np.all(np.isfinite(nodes)):
        raise RuntimeError(f"Hermite eigensolver failed for n={n}")
    return UnivariateRule(GAUSS_HERMITE, n - 1, nodes, weights)


def _leja_objective(x, points):
    # log of sqrt(rho(x)) * prod |x - x_i|, rho = exp(-x^2/2)
    x = np.asarray(x, dtype=float)
    out = -x ** 2 / 4
    with np.errstate(divide="ignore"):
        for xi in points:
            out = out + np.log(np.abs(x - xi))
    return out


def _golden_refine(f, lo, hi, tol=1e-12):
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2


@lru_cache(maxsize=None)
def _leja_sequence(n: int) -> tuple:
    if n == 1:
        return (0.0,)
    prev = _leja_sequence(n - 1)
    points = np.array(prev)
    grid = np.linspace(*_LEJA_INTERVAL, _LEJA_GRID_SIZE)
    vals = _leja_objective(grid, points)
    best = np.max(vals)
    h = grid[1] - grid[0]

    def refine(i):
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, len(grid) - 1)]
        x = _golden_refine(lambda t: _leja_objective(t, points), lo, hi)
        return x, float(_leja_objective(x, points))

    # refine only local maxima of the grid profile near the global maximum;
    # symmetric configurations produce ties across distinct peaks
    interior = np.zeros_like(vals, dtype=bool)
    interior[1:-1] = (vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])
    candidates = [refine(i)
                  for i in np.flatnonzero(interior & (vals >= best - 1.0))]
    top = max(v for _, v in candidates)
    tied = [x for x, v in candidates if v >= top - _LEJA_TIE_TOL]
    new = max(tied)  # tie-break: prefer the positive candidate
    return prev + (new,)


def gaussian_leja(n: int) -> np.ndarray:
    """First n Gaussian Leja nodes in generation order (xi_0 = 0)."""
    if not 1 <= n <= 150:
        raise ValueError("node count must be in [1, 150]")
    return np.array(_leja_sequence(n))


@lru_cache(maxsize=None)
def _gk_table() -> tuple:
    text = importlib.resources.files("sgcol").joinpath("_gk_table.txt").read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    pos = 0
    table = []
    while pos < len(lines):
        n, degree = (int(v) for v in lines[pos].split())
        pairs = [tuple(float(v) for v in lines[pos + 1 + i].split()) for i in range(n)]
        pos += 1 + n
        nodes = np.array([p[0] for p in pairs])
        weights = np.array([p[1] for p in pairs])
        _validate_moments(nodes, weights, degree)
        table.append((nodes, weights, degree))
    assert tuple(len(t[0]) for t in table) == _GK_CARDINALITIES
    return tuple(table)


def _validate_moments(nodes, weights, degree, rtol=1e-12):
    for j in range(degree + 1):
        exact = _gaussian_moment(j)
        got = float(weights @ nodes ** j)
        # scale by the term magnitudes: odd moments vanish by cancellation
        scale = float(np.abs(weights) @ np.abs(nodes) ** j)
        if abs(got - exact) > rtol * max(1.0, abs(exact), scale):
            raise RuntimeError(
                f"quadrature rule fails moment {j}: {got} vs {exact}")


def _gaussian_moment(j: int) -> float:
    return 0.0 if j % 2 else float(math.prod(range(j - 1, 0, -2)) or 1)


def genz_keister(k: int) -> UnivariateRule:
    """Tabulated nested Kronrod-Patterson-Normal rule at level k (0..4)."""
    if k < 0 or k >= len(_GK_CARDINALITIES):
        raise RuleExhaustedError(
            f"Genz-Keister rule exhausted: level {k} not tabulated")
    nodes, weights, _ = _gk_table()[k]
    return UnivariateRule(GENZ_KEISTER, k, nodes, weights)


def genz_keister_exactness(k: int) -> int:
    return _gk_table()[k][2]


def lagrange_quadrature_weights(nodes) -> np.ndarray:
    """w_i = int L_i(x) dmu(x), by a Gauss-Hermite rule of sufficient order."""
    nodes = np.asarray(nodes, dtype=float)
    n = len(nodes)
    gh = gauss_hermite(n)  # exact for degree <= 2n - 1 >= n - 1
    basis = _lagrange_basis_at(nodes, gh.nodes)
    return basis.T @ gh.weights


def _barycentric_weights_of(nodes: np.ndarray) -> np.ndarray:
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    # log-space product to tame over/underflow for large node counts
    logw = -np.sum(np.log(np.abs(diff)), axis=1)
    sign = np.prod(np.sign(diff), axis=1)
    return sign * np.exp(logw - np.max(logw))


@lru_cache(maxsize=None)
def _barycentric_weights(family: str, level: int) -> np.ndarray:
    w = _barycentric_weights_of(rule(family, level).nodes)
    w.setflags(write=False)
    return w


def _lagrange_basis_at(nodes, x):
    """Matrix B[i, j] = L_j(x_i) via the second barycentric form."""
    nodes = np.asarray(nodes, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    bw = _barycentric_weights_of(nodes)
    diff = x[:, None] - nodes[None, :]
    exact = np.abs(diff) < 1e-14
    diff[exact] = 1.0
    terms = bw[None, :] / diff
    basis = terms / terms.sum(axis=1, keepdims=True)
    hit_rows = exact.any(axis=1)
    basis[hit_rows] = exact[hit_rows].astype(float)
    return basis


@lru_cache(maxsize=None)
def rule(family: str, k: int) -> UnivariateRule:
    """Rule of `family` at level k; Leja weights via Lagrange integration."""
    if family == GAUSS_HERMITE:
        return gauss_hermite(k + 1)
    if family == GAUSSIAN_LEJA:
        seq = gaussian_leja(k + 1)
        order = np.argsort(seq)
        weights = lagrange_quadrature_weights(seq)
        return UnivariateRule(GAUSSIAN_LEJA, k, seq[order], weights[order])
    if family == GENZ_KEISTER:
        return genz_keister(k)
    raise ValueError(f"unknown family {family!r}")
