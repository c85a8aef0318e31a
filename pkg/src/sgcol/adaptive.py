"""Dimension-adaptive index-set construction with a new-variable buffer,
plus the a-priori construction driven by expansion-coefficient decay."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import nodes as _nodes
from . import sparse_grid as _sg
from .multiindex import (MultiIndexSet, backward_neighbors, canonical,
                         forward_neighbor, graded_lex_key, padded)

_TIE_TOL = 0.0  # indicator ties are broken exactly, by graded-lex order


class CollocationModel:
    """Deterministic evaluator xi -> value with a cache and an eval counter.

    `xi` is a parameter vector over the leading dimensions; coordinates
    beyond its length are zero.  Values are scalars or arrays; `norm` maps
    a value-space element to a scalar.
    """

    def __init__(self, evaluator, n_dims: int, norm=None):
        self.evaluator = evaluator
        self.n_dims = n_dims
        self.norm = norm if norm is not None else abs
        self._cache: dict = {}
        self.evaluations = 0

    @staticmethod
    def _key(point):
        coords = tuple(np.round(np.asarray(point, dtype=float), 12) + 0.0)
        while coords and coords[-1] == 0.0:
            coords = coords[:-1]
        return coords

    def __call__(self, point):
        key = self._key(point)
        if key not in self._cache:
            self._cache[key] = self.evaluator(np.asarray(key, dtype=float))
            self.evaluations += 1
        return self._cache[key]


@dataclass
class IterationRecord:
    iteration: int
    selected_index: tuple
    max_component: int         # 1-based, as reported by the trace CSV
    active_dims: int
    margin_size: int
    work_incremental_iset: int
    work_incremental_gset: int
    work_combitec_iset: int
    work_combitec_gset: int
    error_estimate: float
    model_evaluations: int


@dataclass
class AdaptiveState:
    active_set: MultiIndexSet
    margin_indicators: dict
    buffer_size: int
    work: int
    trace: list = field(default_factory=list)


def _tensor_values(model, index, family):
    """Model values on the tensor grid of `index`, shaped over active dims."""
    active = [m for m, k in enumerate(index) if k > 0]
    shape = tuple(_nodes.level_to_knots(family, index[m]) for m in active) \
        or (1,)
    pts = _sg.tensor_points(index, family, max(len(index), 1))
    vals = [np.asarray(model(p), dtype=float) for p in pts]
    return np.array(vals).reshape(shape + vals[0].shape)


def _tensor_interp(family, index, tensor, points):
    """Evaluate the tensor interpolant of `tensor` data at many points."""
    active = [m for m, k in enumerate(index) if k > 0]
    if not active:
        flat = tensor.reshape(tensor.shape[1:])
        return np.broadcast_to(flat, (len(points),) + flat.shape)
    res = None
    for m in active:
        r = _nodes.rule(family, index[m])
        B = _nodes._lagrange_basis_at(r.nodes, points[:, m])
        if res is None:
            res = np.tensordot(B, tensor, axes=(1, 0))
        else:
            res = np.einsum("si,si...->s...", B, res)
    return res


def _detail_at(model, family, index, probes):
    """Delta_index applied to the model, evaluated at the probe points.

    Expands the tensorized detail operator into at most 2^(active dims)
    full tensor interpolants.
    """
    index = canonical(index)
    active = [m for m, k in enumerate(index) if k > 0]
    total = None
    for drops in itertools.product((0, 1), repeat=len(active)):
        sub = list(index)
        sign = 1
        for m, d in zip(active, drops):
            sub[m] -= d
            sign *= -1 if d else 1
        sub = canonical(sub)
        tensor = _tensor_values(model, sub, family)
        vals = sign * _tensor_interp(family, sub, tensor, probes)
        total = vals if total is None else total + vals
    return total


def error_indicator(model, family, index, probes) -> float:
    """Discrete L2 norm over the probe set of the Delta_index contribution."""
    details = _detail_at(model, family, index, probes)
    norms = np.array([model.norm(d) for d in details])
    return float(np.sqrt(np.mean(norms ** 2)))


def _probe_points(seed: int, size: int, n_dims: int) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal((size, n_dims))


def _grid_counts(indices, family, dim):
    try:
        grid = _sg.build(MultiIndexSet(indices, dimension_bound=dim), family)
    except _nodes.RuleExhaustedError:
        return {"incremental": -1, "combitec": -1}
    return grid.counts


def run_a_posteriori(model, family: str, budget: int, buffer_size: int = 5,
                     probe_size: int = 200, probe_seed: int = 42,
                     profit: str = "error") -> AdaptiveState:
    """Gerstner-Griebel selection from the reduced margin, with a buffer of
    not-yet-activated dimensions whose indicators are tracked.

    One iteration selects the margin index with the largest indicator and
    computes indicators for its admissible forward neighbors.  Stops once
    the number of model evaluations exceeds `budget`.
    """
    if budget < 1 or buffer_size < 1:
        raise ValueError("need budget >= 1 and buffer_size >= 1")
    if profit not in ("error", "error_per_work"):
        raise ValueError("profit must be 'error' or 'error_per_work'")
    probes = _probe_points(probe_seed, probe_size, model.n_dims)
    active: set = {()}
    active_dims: set = set()
    saturated: set = set()
    indicators: dict = {}
    costs: dict = {}
    model(np.zeros(1))  # root evaluation

    def candidate_dims():
        dims = set(active_dims)
        m = 0
        fresh = 0
        while fresh < buffer_size and m < model.n_dims:
            if m not in dims:
                dims.add(m)
                fresh += 1
            m += 1
        return dims

    def try_indicator(idx):
        idx = canonical(idx)
        if idx in active or idx in indicators or idx in saturated:
            return
        if any(nb not in active for nb in backward_neighbors(idx)):
            return
        mx = _nodes.max_level(family)
        if mx is not None and max(idx) > mx:
            saturated.add(idx)
            return
        before = model.evaluations
        indicators[idx] = error_indicator(model, family, idx, probes)
        costs[idx] = max(model.evaluations - before, 1)

    for m in sorted(candidate_dims()):
        try_indicator(forward_neighbor((), m))

    state = AdaptiveState(
        active_set=MultiIndexSet(active, dimension_bound=model.n_dims),
        margin_indicators=dict(indicators), buffer_size=buffer_size,
        work=model.evaluations)
    iteration = 0
    while indicators and model.evaluations <= budget:
        iteration += 1
        if profit == "error":
            ranking = lambda kv: (-kv[1], graded_lex_key(kv[0]))
        else:
            ranking = lambda kv: (-kv[1] / costs[kv[0]], graded_lex_key(kv[0]))
        selected, _ = min(indicators.items(), key=ranking)
        del indicators[selected]
        active.add(selected)
        active_dims.update(m for m, k in enumerate(selected) if k > 0)
        cands = candidate_dims()
        for m in sorted(cands):
            try_indicator(canonical(forward_neighbor(selected, m)))
            # keep the buffer populated as fresh dimensions shift upward
            try_indicator(canonical(forward_neighbor((), m)))
        dim = max((len(i) for i in active), default=1) or 1
        gset = list(active) + list(indicators)
        gdim = max(dim, max((len(i) for i in indicators), default=1))
        ci = _grid_counts(active, family, dim)
        cg = _grid_counts(gset, family, gdim)
        state.trace.append(IterationRecord(
            iteration=iteration,
            selected_index=selected,
            max_component=(max(selected) if selected else 0) + 1,
            active_dims=len(active_dims),
            margin_size=len(indicators),
            work_incremental_iset=ci["incremental"],
            work_incremental_gset=cg["incremental"],
            work_combitec_iset=ci["combitec"],
            work_combitec_gset=cg["combitec"],
            error_estimate=float(sum(indicators.values())),
            model_evaluations=model.evaluations,
        ))
    state.active_set = MultiIndexSet(active, dimension_bound=model.n_dims)
    state.margin_indicators = dict(indicators)
    state.work = model.evaluations
    return state


def a_priori_set(field_expansion, N: int) -> MultiIndexSet:
    """The N largest-profit indices under profit(k) = prod r_m^{k_m},
    r_m = min(1/2, g_m / 2), selected greedily with monotone admissibility.
    """
    if N < 1:
        raise ValueError("need N >= 1")
    n_dims = min(field_expansion.M, N)
    r = np.array([min(0.5, field_expansion.phi_sup_norm(m) / 2.0)
                  for m in range(1, n_dims + 1)])

    def profit(idx):
        return float(np.prod([r[m] ** k for m, k in enumerate(idx)]))

    chosen: set = {()}
    candidates = {canonical(forward_neighbor((), m)): None
                  for m in range(n_dims)}
    for idx in candidates:
        candidates[idx] = profit(idx)
    while len(chosen) < N and candidates:
        best = min(candidates.items(),
                   key=lambda kv: (-kv[1], graded_lex_key(kv[0])))[0]
        del candidates[best]
        chosen.add(best)
        for m in range(n_dims):
            nb = canonical(forward_neighbor(best, m))
            if nb in chosen or nb in candidates:
                continue
            if all(b in chosen for b in backward_neighbors(nb)):
                candidates[nb] = profit(nb)
    return MultiIndexSet(chosen, dimension_bound=max(
        1, max((len(i) for i in chosen), default=1)))
