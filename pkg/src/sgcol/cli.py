"""Command-line entry point."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bench as _bench
from . import field as _field
from . import hermite as _hermite
from . import nodes as _nodes

FAMILIES = (_nodes.GAUSS_HERMITE, _nodes.GAUSSIAN_LEJA, _nodes.GENZ_KEISTER)


def _write(path, echo, header, rows):
    if path is None:
        _bench.write_csv("/dev/stdout", echo, header, rows)
    else:
        _bench.write_csv(path, echo, header, rows)
        print(f"wrote {path}", file=sys.stderr)


def cmd_nodes_dump(args):
    r = _nodes.rule(args.family, args.level)
    rows = [[i, x, w] for i, (x, w) in enumerate(zip(r.nodes, r.weights))]
    _write(args.out, f"# family={args.family} level={args.level}",
           ["index", "node", "weight"], rows)


def cmd_profile_delta_norms(args):
    rows = [[k, v] for k, v in
            _hermite.delta_norm_profile(args.family, k_max=args.k_max)]
    _write(args.out, f"# family={args.family} k_max={args.k_max}",
           ["k", "max_detail_norm"], rows)


def cmd_field_paths(args):
    exp = _field.FieldExpansion(kind=args.kind, sigma=args.sigma, q=args.q,
                                M=args.M)
    x = np.linspace(0.0, 1.0, args.grid_n + 1)
    paths = _field.sample_paths(exp, x, args.samples, args.seed)
    header = ["x"] + [f"path_{s}" for s in range(args.samples)]
    rows = [[x[i]] + list(paths[:, i]) for i in range(len(x))]
    _write(args.out, f"# kind={args.kind} q={args.q} sigma={args.sigma}"
           f" M={args.M} samples={args.samples} seed={args.seed}",
           header, rows)


def cmd_field_kappa(args):
    x = np.arange(1, args.grid_n) / args.grid_n
    kappa = _field.kappa_tau(args.p, args.M, x)
    rows = [[xi, ki] for xi, ki in zip(x, kappa)]
    _write(args.out, f"# M={args.M} p={args.p}", ["x", "kappa"], rows)


def cmd_bench(args):
    cfg = _bench.load_config(args.config, kind=args.kind, seed=args.seed,
                             family=args.family, counting=args.count)
    if cfg.kind == "quad":
        header, rows = _bench.run_quadrature_bench(cfg)
    elif cfg.kind == "interp":
        header, rows = _bench.run_interpolation_bench(cfg)
    elif cfg.kind == "pde":
        header, rows, state, _ = _bench.run_pde_bench(cfg)
        if args.dump_set is not None and state is not None:
            with open(args.dump_set, "w") as fh:
                fh.write(state.active_set.serialize())
        if args.trace is not None and state is not None:
            theader, trows = _bench.adaptive_trace_rows(state)
            _bench.write_csv(args.trace, cfg.echo(), theader, trows)
    elif cfg.kind == "bnt":
        (header, rows), (bheader, brows) = _bench.run_bnt(cfg)
        out = args.out or "bnt.csv"
        _bench.write_csv(out if args.out else "/dev/stdout",
                         cfg.echo(), bheader, brows)
        if args.out:
            print(f"wrote {out}", file=sys.stderr)
            _bench.write_csv(out + ".pde.csv", cfg.echo(), header, rows)
        return
    else:
        raise SystemExit(f"unknown benchmark kind {cfg.kind!r}")
    _write(args.out, cfg.echo(), header, rows)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sgcol",
        description="Sparse grid collocation experiments for lognormal "
                    "diffusion problems")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nodes", help="univariate rule inspection")
    nsub = p.add_subparsers(dest="subcommand", required=True)
    pd = nsub.add_parser("dump", help="print nodes and weights of one rule")
    pd.add_argument("--family", choices=FAMILIES, required=True)
    pd.add_argument("--level", type=int, required=True)
    pd.add_argument("--out")
    pd.set_defaults(func=cmd_nodes_dump)

    p = sub.add_parser("profile", help="operator norm profiles")
    psub = p.add_subparsers(dest="subcommand", required=True)
    pn = psub.add_parser("delta-norms",
                         help="max detail-operator norm on Hermite inputs")
    pn.add_argument("--family", choices=FAMILIES, required=True)
    pn.add_argument("--k-max", type=int, default=39)
    pn.add_argument("--out")
    pn.set_defaults(func=cmd_profile_delta_norms)

    p = sub.add_parser("field", help="random field utilities")
    fsub = p.add_subparsers(dest="subcommand", required=True)
    fp = fsub.add_parser("paths", help="sample log-field realizations")
    fp.add_argument("--kind", choices=(_field.KL, _field.LC,
                                       _field.HAAR_CHALF), required=True)
    fp.add_argument("--q", type=float, default=1.0)
    fp.add_argument("--sigma", type=float, default=1.0)
    fp.add_argument("--M", type=int, default=1000)
    fp.add_argument("--samples", type=int, default=30)
    fp.add_argument("--seed", type=int, required=True)
    fp.add_argument("--grid-n", type=int, default=512)
    fp.add_argument("--out")
    fp.set_defaults(func=cmd_field_paths)
    fk = fsub.add_parser("kappa", help="weighted partial sums of the q=1 "
                                       "sine system")
    fk.add_argument("--M", type=int, default=10_000_000)
    fk.add_argument("--p", type=float, required=True)
    fk.add_argument("--grid-n", type=int, default=512)
    fk.add_argument("--out")
    fk.set_defaults(func=cmd_field_kappa)

    p = sub.add_parser("bench", help="experiment runs")
    p.add_argument("kind", choices=("quad", "interp", "pde", "bnt"))
    p.add_argument("--config", help="configuration file (key = value sections)")
    p.add_argument("--seed", type=int,
                   help="required for any run that draws random samples")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--count", choices=("incremental", "combitec"),
                   help="which point-count metric fills the work column")
    p.add_argument("--out")
    p.add_argument("--dump-set", help="write the final index set to this file")
    p.add_argument("--trace", help="write the adaptive iteration trace CSV")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()
