"""Sparse interpolation and quadrature operators in combination-technique form."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import nodes as _nodes
from .hermite import HermiteExpansion, hermite_eval_all
from .multiindex import (MultiIndexSet, canonical, combination_coefficients,
                         graded_lex_key, is_monotone, padded)

_DEDUP_DECIMALS = 12


def _point_key(coords):
    return tuple(np.round(coords, _DEDUP_DECIMALS) + 0.0)


def tensor_points(index, family: str, n_dims: int | None = None) -> np.ndarray:
    """Cartesian product of the per-level node sets, inactive dims pinned at 0.

    Rows are in C order over the dimensions (last dimension fastest).
    """
    index = canonical(index)
    if n_dims is None:
        n_dims = max(len(index), 1)
    full = padded(index, n_dims)
    active = [m for m, k in enumerate(full) if k > 0]
    if not active:
        return np.zeros((1, n_dims))
    axes = [_nodes.rule(family, full[m]).nodes for m in active]
    grids = np.meshgrid(*axes, indexing="ij")
    out = np.zeros((grids[0].size, n_dims))
    for m, g in zip(active, grids):
        out[:, m] = g.ravel()
    return out


@dataclass
class SparseGrid:
    """Combination-technique sparse grid over a monotone multi-index set."""

    index_set: MultiIndexSet
    family: str
    terms: list                 # (index, nonzero integer coefficient)
    points: np.ndarray          # deduplicated collocation points, (n, n_dims)
    term_points: dict           # index -> point row indices, tensor C order
    counts: dict                # {"incremental": ..., "combitec": ...}

    @property
    def n_dims(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return len(self.points)


def build(index_set: MultiIndexSet, family: str) -> SparseGrid:
    if not is_monotone(index_set):
        raise ValueError("sparse grid requires a monotone multi-index set")
    coeffs = combination_coefficients(index_set)
    n_dims = index_set.dimension_bound
    point_ids: dict = {}
    rows: list = []
    term_points = {}
    for index in index_set:
        pts = tensor_points(index, family, n_dims)
        ids = np.empty(len(pts), dtype=np.intp)
        for j, row in enumerate(pts):
            key = _point_key(row)
            pid = point_ids.get(key)
            if pid is None:
                pid = len(rows)
                point_ids[key] = pid
                rows.append(row)
            ids[j] = pid
        term_points[index] = ids
    combitec_keys = set()
    for index, c in coeffs.items():
        if c != 0:
            combitec_keys.update(map(_point_key,
                                     tensor_points(index, family, n_dims)))
    terms = [(i, c) for i, c in sorted(coeffs.items(), key=lambda t: graded_lex_key(t[0]))
             if c != 0]
    return SparseGrid(
        index_set=index_set,
        family=family,
        terms=terms,
        points=np.array(rows),
        term_points=term_points,
        counts={"incremental": len(rows), "combitec": len(combitec_keys)},
    )


def _basis_matrix(family, level, x):
    """Barycentric Lagrange basis values L_j(x_i) on the rule's nodes."""
    r = _nodes.rule(family, level)
    return _nodes._lagrange_basis_at(r.nodes, x)


def _check_alignment(grid, values):
    values = np.asarray(values, dtype=float)
    if values.shape[0] != len(grid.points):
        raise ValueError(
            f"values of length {values.shape[0]} misaligned with "
            f"{len(grid.points)} collocation points")
    return values


def _term_tensor(grid, values, index):
    """Values on the tensor grid of `index`, shaped over its active dims.

    Returns (tensor, active) where `active` lists the dimensions with
    positive level; inactive axes hold a single level-0 node and are
    dropped from the tensor shape.
    """
    active = [m for m, k in enumerate(index) if k > 0]
    shape = tuple(_nodes.level_to_knots(grid.family, index[m])
                  for m in active) or (1,)
    sub = values[grid.term_points[index]]
    return sub.reshape(shape + values.shape[1:]), active


def evaluate_batch(grid: SparseGrid, values, points) -> np.ndarray:
    """U_Lambda applied to the stored values, evaluated at many points."""
    values = _check_alignment(grid, values)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    active = max((len(i) for i, _ in grid.terms), default=0)
    if points.shape[1] < active:
        raise ValueError(
            f"evaluation points have {points.shape[1]} coordinates but "
            f"{active} dimensions are active in the index set")
    out = np.zeros((len(points),) + values.shape[1:])
    for index, c in grid.terms:
        tensor, active = _term_tensor(grid, values, index)
        res = None
        if not active:
            res = np.broadcast_to(tensor.reshape(values.shape[1:]),
                                  (len(points),) + values.shape[1:])
        else:
            for m in active:
                B = _basis_matrix(grid.family, index[m], points[:, m])
                if res is None:
                    res = np.tensordot(B, tensor, axes=(1, 0))
                else:
                    res = np.einsum("si,si...->s...", B, res)
        out += c * res
    return out


def evaluate(grid: SparseGrid, values, point):
    """U_Lambda at a single point; scalar for scalar-valued data."""
    res = evaluate_batch(grid, values, np.asarray(point, dtype=float)[None, :])[0]
    return float(res) if res.ndim == 0 else res


def quadrature(grid: SparseGrid, values):
    """Integral of U_Lambda against the Gaussian product measure."""
    values = _check_alignment(grid, values)
    total = np.zeros(values.shape[1:])
    for index, c in grid.terms:
        tensor, active = _term_tensor(grid, values, index)
        res = tensor if active else tensor.reshape(values.shape[1:])
        for m in active:
            res = np.tensordot(_nodes.rule(grid.family, index[m]).weights,
                               res, axes=(0, 0))
        total = total + c * res
    return float(total) if total.ndim == 0 else total


def to_hermite(grid: SparseGrid, values, norm=None, degree_guard: int = 2):
    """Convert U_Lambda (values) into the equivalent Hermite expansion.

    Each tensor interpolant is projected per dimension by exact
    Gauss-Hermite quadrature.  For vector-valued data, `norm` maps each
    coefficient vector to a scalar magnitude (stored instead of the field).
    """
    values = _check_alignment(grid, values)
    if values.ndim > 1 and norm is None:
        raise ValueError("vector-valued data requires a coefficient norm")
    acc: dict = {}
    for index, c in grid.terms:
        tensor, active = _term_tensor(grid, values, index)
        res = tensor
        # per-dim polynomial degree of the tensor interpolant
        degs = [_nodes.level_to_knots(grid.family, index[m]) - 1
                for m in active]
        for pos, m in enumerate(active):
            r = _nodes.rule(grid.family, index[m])
            gh = _nodes.gauss_hermite(degs[pos] + 1 + degree_guard)
            V = _nodes._lagrange_basis_at(r.nodes, gh.nodes)   # (q, n_m)
            P = hermite_eval_all(degs[pos], gh.nodes)           # (d_m+1, q)
            A = (P * gh.weights) @ V                            # (d_m+1, n_m)
            res = np.moveaxis(np.tensordot(A, res, axes=(1, pos)), 0, pos)
        for degrees in (itertools.product(*(range(d + 1) for d in degs))
                        if active else [()]):
            full = [0] * len(index)
            for pos, m in enumerate(active):
                full[m] = degrees[pos]
            key = canonical(full)
            coeff = res[degrees] if active else res.reshape(values.shape[1:])
            acc[key] = acc.get(key, 0.0) + c * coeff
    if values.ndim > 1:
        return HermiteExpansion({k: norm(v) for k, v in acc.items()})
    return HermiteExpansion({k: float(v) for k, v in acc.items()})


def best_n_term_curve(expansion: HermiteExpansion):
    """(N, l2 tail after keeping the N largest coefficients) for N = 0..len.

    Ties in magnitude are broken by graded-lex order of the index.
    """
    items = sorted(expansion.terms.items(),
                   key=lambda kv: (-abs(kv[1]), graded_lex_key(kv[0])))
    mags = np.array([abs(v) for _, v in items])
    tails = np.sqrt(np.maximum(np.cumsum((mags ** 2)[::-1])[::-1], 0.0))
    curve = [(n, float(tails[n])) for n in range(len(mags))]
    curve.append((len(mags), 0.0))
    return curve
