"""1D linear finite elements for -(a u')' = f on (0,1), u(0) = u(1) = 0."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

# 2-point Gauss rule on [0, 1] for per-element coefficient integration
_GAUSS2 = (0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0))


@dataclass
class FemSolution:
    """Piecewise-linear solution on a uniform mesh; boundary values are 0."""

    mesh_n: int
    nodal_values: np.ndarray  # interior nodes only, length mesh_n - 1

    def __post_init__(self):
        self.nodal_values = np.asarray(self.nodal_values, dtype=float)
        if len(self.nodal_values) != self.mesh_n - 1:
            raise ValueError("nodal value count does not match mesh")

    @property
    def h(self) -> float:
        return 1.0 / self.mesh_n

    def full_values(self) -> np.ndarray:
        return np.concatenate(([0.0], self.nodal_values, [0.0]))

    def slopes(self) -> np.ndarray:
        return np.diff(self.full_values()) / self.h

    def h1_seminorm(self) -> float:
        return float(np.sqrt(self.h * np.sum(self.slopes() ** 2)))

    def __call__(self, x):
        grid = np.linspace(0.0, 1.0, self.mesh_n + 1)
        return np.interp(x, grid, self.full_values())


def element_quadrature_points(mesh_n: int) -> np.ndarray:
    """The 2-point Gauss abscissae of every element, flattened in order."""
    h = 1.0 / mesh_n
    lefts = np.arange(mesh_n) * h
    return np.concatenate([lefts + _GAUSS2[0] * h, lefts + _GAUSS2[1] * h]) \
        .reshape(2, mesh_n).T.ravel()


def solve(a, f: float, mesh_n: int) -> FemSolution:
    """Galerkin solution with per-element 2-point Gauss coefficient averages.

    `a` is either a callable on [0,1] or an array of coefficient values at
    `element_quadrature_points(mesh_n)`.
    """
    if mesh_n < 2:
        raise ValueError("need at least 2 elements")
    xq = element_quadrature_points(mesh_n)
    aq = np.asarray(a(xq) if callable(a) else a, dtype=float)
    if aq.shape != xq.shape:
        raise ValueError("coefficient values misaligned with quadrature points")
    bad = np.flatnonzero(~(aq > 0.0))
    if len(bad):
        raise ValueError(
            f"nonpositive diffusion coefficient at x={xq[bad[0]]:.6g}")
    a_elem = 0.5 * (aq[0::2] + aq[1::2])             # element averages
    h = 1.0 / mesh_n
    n = mesh_n - 1
    diag = (a_elem[:-1] + a_elem[1:]) / h
    off = -a_elem[1:-1] / h
    ab = np.zeros((3, n))
    ab[0, 1:] = off
    ab[1] = diag
    ab[2, :-1] = off
    rhs = np.full(n, f * h)
    u = solve_banded((1, 1), ab, rhs)
    res = np.abs(diag * u
                 + np.concatenate(([0.0], off * u[:-1]))
                 + np.concatenate((off * u[1:], [0.0])) - rhs)
    # backward-stable scale: ||A||_inf ||u||_inf + ||b||_inf; a plain
    # ||b|| scale false-alarms when the coefficient spans many decades
    scale = float(np.max(np.abs(diag)) + 2.0 * np.max(np.abs(off), initial=0.0)) \
        * float(np.max(np.abs(u), initial=0.0)) + float(np.max(np.abs(rhs)))
    if np.max(res) > 1e-12 * max(1.0, scale):
        raise RuntimeError("linear solver residual too large")
    return FemSolution(mesh_n, u)


def prolong(u: FemSolution, mesh_n: int) -> FemSolution:
    """Linear interpolation onto another uniform mesh (exact if it refines)."""
    x = np.linspace(0.0, 1.0, mesh_n + 1)[1:-1]
    return FemSolution(mesh_n, u(x))


def h1_distance(u1: FemSolution, u2: FemSolution) -> float:
    """H1_0 seminorm distance; coarser solutions are prolonged first."""
    if u1.mesh_n != u2.mesh_n:
        fine = max(u1.mesh_n, u2.mesh_n)
        u1, u2 = prolong(u1, fine), prolong(u2, fine)
    d = u1.slopes() - u2.slopes()
    return float(np.sqrt(u1.h * np.sum(d ** 2)))
