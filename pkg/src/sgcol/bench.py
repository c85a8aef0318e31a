"""Experiment harness: quadrature/interpolation sweeps over Smolyak sets,
PDE convergence runs with a-priori and adaptive index sets, and best-N-term
analysis.  All outputs are CSV with a comment line echoing the configuration.
"""

from __future__ import annotations

import configparser
import importlib.resources
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import adaptive as _adaptive
from . import field as _field
from . import nodes as _nodes
from . import pde as _pde
from . import sparse_grid as _sg
from .multiindex import MultiIndexSet, smolyak_set

DEFAULT_MESH = 256
DEFAULT_REFERENCE_SAMPLES = 1000
DEFAULT_REFERENCE_TRUNCATION = 1000


# ---------------------------------------------------------------------------
# configuration

@dataclass
class ExperimentConfig:
    kind: str = "quad"              # quad | interp | pde | bnt
    family: str = _nodes.GAUSSIAN_LEJA
    expansion: str = _field.KL
    q: float = 3.0
    sigma: float = 3.0
    truncation: int = DEFAULT_REFERENCE_TRUNCATION
    strategy: str = "a-posteriori"  # smolyak | a-priori | a-posteriori
    w_max: int = 6
    n_vars: int = 2                 # dimension count for quad/interp sweeps
    budget: int = 2000
    buffer_size: int = 5
    mc_batches: int = 50
    mc_samples: int = 500
    seed: int | None = None
    mesh_n: int = DEFAULT_MESH
    n_ref: int = DEFAULT_REFERENCE_SAMPLES
    counting: str = "incremental"   # incremental | combitec
    workers: int = 1
    suite: list = field(default_factory=list)   # (name, callable, exact|None)

    def echo(self) -> str:
        pairs = []
        for key in ("kind", "family", "expansion", "q", "sigma", "truncation",
                    "strategy", "w_max", "n_vars", "budget", "buffer_size",
                    "mc_batches", "mc_samples", "seed", "mesh_n", "n_ref",
                    "counting", "workers"):
            pairs.append(f"{key}={getattr(self, key)}")
        pairs.append("suite=" + ",".join(name for name, _, _ in self.suite))
        return "# " + " ".join(pairs)


class SuiteFunction:
    """One benchmark function over M Gaussian variables."""

    def __init__(self, name, kind, coeffs):
        self.name = name
        self.kind = kind
        self.coeffs = np.asarray(coeffs, dtype=float)

    def __call__(self, points):
        points = np.atleast_2d(points)
        z = points[:, :len(self.coeffs)] @ self.coeffs
        if self.kind == "exp_linear":
            return np.exp(z)
        if self.kind == "cos_linear":
            return np.cos(z)
        if self.kind == "prod_inverse_quadratic":
            scaled = points[:, :len(self.coeffs)] ** 2 * self.coeffs
            return 1.0 / np.prod(1.0 + scaled, axis=1)
        raise ValueError(f"unknown suite function kind {self.kind!r}")

    def exact_integral(self):
        """Closed-form Gaussian integral, or None."""
        s = float(self.coeffs @ self.coeffs)
        if self.kind == "exp_linear":
            return math.exp(s / 2.0)
        if self.kind == "cos_linear":
            return math.exp(-s / 2.0)
        return None


def _coeff_values(expr: str, M: int) -> np.ndarray:
    out = np.empty(M)
    for i in range(M):
        out[i] = float(eval(expr, {"__builtins__": {}},
                            {"m": i + 1, "M": M, "pi": math.pi,
                             "sqrt": math.sqrt}))
    return out


def load_suite(parser: configparser.ConfigParser, M: int):
    suite = []
    names = [n.strip() for n in
             parser.get("suite", "functions", fallback="").split(",") if n.strip()]
    for name in names:
        section = f"function:{name}"
        kind = parser.get(section, "type")
        coeffs = _coeff_values(parser.get(section, "coeff"), M)
        fn = SuiteFunction(name, kind, coeffs)
        suite.append((name, fn, fn.exact_integral()))
    return suite


def load_config(path: str | None, **overrides) -> ExperimentConfig:
    parser = configparser.ConfigParser()
    default = importlib.resources.files("sgcol").joinpath("_default_config.ini")
    parser.read_string(default.read_text())
    if path is not None:
        with open(path) as fh:
            parser.read_file(fh)
    cfg = ExperimentConfig()
    sec = parser["experiment"]
    cfg = replace(
        cfg,
        family=sec.get("family", cfg.family),
        expansion=sec.get("expansion", cfg.expansion),
        q=sec.getfloat("q", cfg.q),
        sigma=sec.getfloat("sigma", cfg.sigma),
        truncation=sec.getint("truncation", cfg.truncation),
        strategy=sec.get("strategy", cfg.strategy),
        w_max=sec.getint("w_max", cfg.w_max),
        n_vars=sec.getint("n_vars", cfg.n_vars),
        budget=sec.getint("budget", cfg.budget),
        buffer_size=sec.getint("buffer_size", cfg.buffer_size),
        mc_batches=sec.getint("mc_batches", cfg.mc_batches),
        mc_samples=sec.getint("mc_samples", cfg.mc_samples),
        mesh_n=sec.getint("mesh_n", cfg.mesh_n),
        n_ref=sec.getint("n_ref", cfg.n_ref),
        counting=sec.get("counting", cfg.counting),
        workers=sec.getint("workers", cfg.workers),
    )
    overrides = {k: v for k, v in overrides.items() if v is not None}
    cfg = replace(cfg, **overrides)
    cfg.suite = load_suite(parser, cfg.n_vars)
    return cfg


def write_csv(path, config_echo: str, header, rows):
    with open(path, "w") as fh:
        fh.write(config_echo + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


# ---------------------------------------------------------------------------
# Monte Carlo interpolation error

def mc_l2_error(interpolant, reference, n_vars, K, P, seed):
    """Per-batch mean-square errors and the sqrt of their median.

    Each batch draws P standard-normal points in n_vars dimensions; the
    reported value is L2-scale (square root applied after the median).
    """
    if K < 1 or P < 1:
        raise ValueError("need K >= 1 and P >= 1")
    rng = np.random.default_rng(seed)
    batch_errors = []
    for _ in range(K):
        pts = rng.standard_normal((P, n_vars))
        diff = np.asarray(reference(pts)) - np.asarray(interpolant(pts))
        batch_errors.append(float(np.mean(diff ** 2)))
    return batch_errors, float(math.sqrt(np.median(batch_errors)))


# ---------------------------------------------------------------------------
# quadrature / interpolation sweeps

def _smolyak_grids(config):
    """Yield (w, grid, exhausted) truncating when a family runs out."""
    for w in range(config.w_max + 1):
        mx = _nodes.max_level(config.family)
        if mx is not None and w > mx:
            yield w, None, True
            return
        yield w, _sg.build(smolyak_set(config.n_vars, w), config.family), False


def _reference_integral(fn, config):
    exact = fn.exact_integral() if isinstance(fn, SuiteFunction) else None
    if exact is not None:
        return exact
    if config.n_vars == 1:
        gh = _nodes.gauss_hermite(200)
        return float(gh.weights @ fn(gh.nodes[:, None]))
    ref = _sg.build(smolyak_set(config.n_vars, config.w_max + 4),
                    _nodes.GAUSS_HERMITE)
    return float(_sg.quadrature(ref, fn(ref.points)))


def run_quadrature_bench(config: ExperimentConfig):
    header = ["function", "w", "count_incremental", "count_combitec",
              "error", "exhausted"]
    rows = []
    for name, fn, _ in config.suite:
        ref = _reference_integral(fn, config)
        for w, grid, exhausted in _smolyak_grids(config):
            if exhausted:
                rows.append([name, w, -1, -1, math.nan, 1])
                break
            value = _sg.quadrature(grid, fn(grid.points))
            rows.append([name, w, grid.counts["incremental"],
                         grid.counts["combitec"], abs(value - ref), 0])
    return header, rows


def run_interpolation_bench(config: ExperimentConfig):
    if config.seed is None:
        raise ValueError("interpolation benchmark requires a seed")
    header = ["function", "w", "count_incremental", "count_combitec",
              "error_l2", "error_msq_median", "exhausted"]
    rows = []
    for f_idx, (name, fn, _) in enumerate(config.suite):
        for w, grid, exhausted in _smolyak_grids(config):
            if exhausted:
                rows.append([name, w, -1, -1, math.nan, math.nan, 1])
                break
            values = fn(grid.points)
            interp = lambda pts: _sg.evaluate_batch(grid, values, pts)
            batch, med = mc_l2_error(interp, fn, config.n_vars,
                                     config.mc_batches, config.mc_samples,
                                     config.seed + 1000 * f_idx)
            rows.append([name, w, grid.counts["incremental"],
                         grid.counts["combitec"], med,
                         float(np.median(batch)), 0])
    return header, rows


# ---------------------------------------------------------------------------
# PDE collocation experiments

def h1_norm(values, mesh_n):
    """H1_0 seminorm of interior nodal values (single vector or batch)."""
    values = np.asarray(values, dtype=float)
    single = values.ndim == 1
    v = np.atleast_2d(values)
    padded = np.concatenate([np.zeros((len(v), 1)), v, np.zeros((len(v), 1))],
                            axis=1)
    slopes = np.diff(padded, axis=1) * mesh_n
    out = np.sqrt(np.sum(slopes ** 2, axis=1) / mesh_n)
    return float(out[0]) if single else out


def make_pde_model(expansion: _field.FieldExpansion, mesh_n: int,
                   rhs: float = 1.0) -> _adaptive.CollocationModel:
    """Collocation model xi -> interior nodal values of the FEM solution."""
    xq = _pde.element_quadrature_points(mesh_n)
    Phi = np.stack([expansion.phi(m, xq) for m in range(1, expansion.M + 1)])

    def evaluator(xi):
        xi = np.asarray(xi, dtype=float)
        log_a = xi @ Phi[:len(xi)] if len(xi) else np.zeros_like(xq)
        return _pde.solve(np.exp(log_a), rhs, mesh_n).nodal_values

    return _adaptive.CollocationModel(
        evaluator, n_dims=expansion.M,
        norm=lambda v: h1_norm(v, mesh_n))


def reference_solutions(expansion, mesh_n, n_ref, seed, workers=1, rhs=1.0):
    """Direct solves at full truncation for n_ref Gaussian samples.

    Resamples (and counts) draws rejected by the positivity guard; the
    rejection rate must stay below 0.1%.
    """
    xq = _pde.element_quadrature_points(mesh_n)
    Phi = np.stack([expansion.phi(m, xq) for m in range(1, expansion.M + 1)])
    rng = np.random.default_rng(seed)
    samples = np.empty((n_ref, expansion.M))
    rejected = 0
    i = 0
    while i < n_ref:
        xi = rng.standard_normal(expansion.M)
        aq = np.exp(xi @ Phi)
        if not np.all(np.isfinite(aq) & (aq > 0.0)):
            rejected += 1
            if rejected > max(1, n_ref // 1000):
                raise RuntimeError("reference sampling rejection rate too high")
            continue
        samples[i] = xi
        i += 1

    def solve_one(i):
        aq = np.exp(samples[i] @ Phi)
        return _pde.solve(aq, rhs, mesh_n).nodal_values

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sols = list(pool.map(solve_one, range(n_ref)))
    else:
        sols = [solve_one(i) for i in range(n_ref)]
    return samples, np.array(sols), rejected


def _interpolation_error(grid, model, samples, reference, mesh_n):
    values = np.array([model(p) for p in grid.points])
    approx = _sg.evaluate_batch(grid, values, samples[:, :grid.n_dims])
    errs = h1_norm(approx - reference, mesh_n)
    return float(np.sqrt(np.mean(errs ** 2)))


def _checkpoints(n_total, n_points=24):
    if n_total <= n_points:
        return list(range(1, n_total + 1))
    marks = np.unique(np.round(np.geomspace(1, n_total, n_points)).astype(int))
    return list(marks)


PDE_HEADER = ["label", "checkpoint", "n_indices",
              "work_incremental_iset", "work_incremental_gset",
              "work_combitec_iset", "work_combitec_gset",
              "work", "error"]


def _work_column(config, inc, ct):
    return inc if config.counting == "incremental" else ct


def run_pde_bench(config: ExperimentConfig):
    """Error-vs-work curves for the configured index-set strategy."""
    if config.seed is None:
        raise ValueError("PDE benchmark requires a seed")
    expansion = _field.FieldExpansion(
        kind=config.expansion, sigma=config.sigma, q=config.q,
        M=config.truncation)
    model = make_pde_model(expansion, config.mesh_n)
    samples, reference, _ = reference_solutions(
        expansion, config.mesh_n, config.n_ref, config.seed + 7,
        workers=config.workers)
    rows = []
    state = None
    if config.strategy in ("a-posteriori", "both"):
        state = _adaptive.run_a_posteriori(
            model, config.family, config.budget, config.buffer_size,
            probe_seed=config.seed)
        selected = [rec.selected_index for rec in state.trace]
        for n in _checkpoints(len(selected)):
            rec = state.trace[n - 1]
            index_set = MultiIndexSet([()] + selected[:n])
            grid = _sg.build(index_set, config.family)
            err = _interpolation_error(grid, model, samples, reference,
                                       config.mesh_n)
            label = f"a-posteriori-{config.family}"
            rows.append([label, n, n + 1,
                         rec.work_incremental_iset, rec.work_incremental_gset,
                         rec.work_combitec_iset, rec.work_combitec_gset,
                         _work_column(config, rec.work_incremental_iset,
                                      rec.work_combitec_iset),
                         err])
    if config.strategy in ("a-priori", "both"):
        n_max = 1
        while True:
            grid = _sg.build(_adaptive.a_priori_set(expansion, n_max),
                             config.family)
            if grid.counts["incremental"] > config.budget or n_max > 4000:
                break
            n_max += max(1, n_max // 4)
        for n in _checkpoints(n_max):
            try:
                grid = _sg.build(_adaptive.a_priori_set(expansion, n),
                                 config.family)
            except _nodes.RuleExhaustedError:
                break
            err = _interpolation_error(grid, model, samples, reference,
                                       config.mesh_n)
            inc = grid.counts["incremental"]
            ct = grid.counts["combitec"]
            rows.append([f"a-priori-{config.family}", n, len(grid.index_set),
                         inc, inc, ct, ct,
                         _work_column(config, inc, ct), err])
    return PDE_HEADER, rows, state, model


def run_bnt(config: ExperimentConfig):
    """Best-N-term curve of the final grid next to its error-vs-N curve."""
    header, rows, state, model = run_pde_bench(config)
    if state is not None:
        final_set = MultiIndexSet(
            [()] + [rec.selected_index for rec in state.trace])
    else:
        final_set = _adaptive.a_priori_set(
            _field.FieldExpansion(kind=config.expansion, sigma=config.sigma,
                                  q=config.q, M=config.truncation),
            max(r[1] for r in rows))
    grid = _sg.build(final_set, config.family)
    values = np.array([model(p) for p in grid.points])
    expansion = _sg.to_hermite(grid, values,
                               norm=lambda v: h1_norm(v, config.mesh_n))
    curve = _sg.best_n_term_curve(expansion)
    bnt_header = ["N", "bnt_tail"]
    bnt_rows = [[n, t] for n, t in curve]
    return (header, rows), (bnt_header, bnt_rows)


def adaptive_trace_rows(state: _adaptive.AdaptiveState):
    header = ["iteration", "selected_index", "max_component", "active_dims",
              "margin_size", "work_incremental_Iset", "work_incremental_Gset",
              "work_combitec_Iset", "work_combitec_Gset", "error_estimate"]
    rows = []
    for rec in state.trace:
        sel = " ".join(str(k + 1) for k in rec.selected_index)
        rows.append([sel, rec.max_component,
                     rec.active_dims, rec.margin_size,
                     rec.work_incremental_iset, rec.work_incremental_gset,
                     rec.work_combitec_iset, rec.work_combitec_gset,
                     rec.error_estimate])
        rows[-1].insert(0, rec.iteration)
    return header, rows
