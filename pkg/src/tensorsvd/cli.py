"""Command-line entry points.

`tsvd` exposes the estimator (`tsvd hooi`) and the planted-clique tools
(`tsvd clique sample|detect|reduce`); `tsvd-exp` runs the Monte Carlo
experiment grids and writes the results CSV.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import clique as pc
from .experiments import (
    DEFAULT_SEED,
    SimConfig,
    parse_grid_file,
    run_experiment,
    write_dat,
)
from .hooi import hooi, warm_start
from .io import read_t3, write_mat, write_t3
from .streams import RngStream
from .subspaces import svd_leading
from .tensor import matricize
from .validation import ContractViolationError

__all__ = ["main", "main_exp"]


def _parse_ranks(text: str):
    try:
        parts = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"ranks must be r1,r2,r3, got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"ranks must have three entries, got {text!r}")
    return parts


def _build_tsvd_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsvd", description="Low-rank tensor SVD tools"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ph = sub.add_parser("hooi", help="fit a rank-(r1,r2,r3) approximation")
    ph.add_argument("--input", required=True, help="input tensor (.t3)")
    ph.add_argument("--ranks", required=True, type=_parse_ranks)
    ph.add_argument("--eps", type=float, default=None,
                    help="stopping tolerance (default 1e-6*||Y||_F)")
    ph.add_argument("--max-iter", type=int, default=50)
    ph.add_argument("--init", choices=("spectral", "warm"), default="spectral")
    ph.add_argument("--truth", default=None,
                    help="noiseless tensor (.t3) whose bases seed the warm start")
    ph.add_argument("--seed", type=int, default=0, help="warm-start seed")
    ph.add_argument("--out", required=True, help="output directory")

    pcq = sub.add_parser("clique", help="hypergraph planted-clique tools")
    csub = pcq.add_subparsers(dest="clique_command", required=True)

    ps = csub.add_parser("sample", help="sample an instance")
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--kappa", type=int, required=True)
    ps.add_argument("--half", type=int, choices=(1, 2), default=1)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", required=True, help="adjacency output (.t3)")

    pd = csub.add_parser("detect", help="guess which half hosts the clique")
    pd.add_argument("--in", dest="input", required=True, help="adjacency (.t3)")
    pd.add_argument("--n", type=int, default=None)
    pd.add_argument("--kappa", type=int, default=None)

    pr = csub.add_parser("reduce", help="gaussianize an instance")
    pr.add_argument("--in", dest="input", required=True, help="adjacency (.t3)")
    pr.add_argument("--out", required=True, help="reduced tensor output (.t3)")
    pr.add_argument("--trunc-m", type=float, default=None,
                    help="truncation level (default sqrt(8 log N))")
    pr.add_argument("--mu", type=float, default=None,
                    help="shift (default 1/(2M))")
    pr.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_hooi(args) -> int:
    Y = read_t3(args.input)
    if args.init == "warm":
        if args.truth is None:
            raise ContractViolationError("--init warm requires --truth")
        X = read_t3(args.truth)
        if X.shape != Y.shape:
            raise ContractViolationError(
                f"truth shape {X.shape} does not match input {Y.shape}"
            )
        gen = RngStream(args.seed).generator()
        init = tuple(
            warm_start(svd_leading(matricize(X, k), args.ranks[k]), gen)
            for k in range(3)
        )
    else:
        init = "spectral"
    result = hooi(Y, args.ranks, eps=args.eps, max_iter=args.max_iter, init=init)

    os.makedirs(args.out, exist_ok=True)
    for k, U in enumerate(result.bases, start=1):
        write_mat(os.path.join(args.out, f"U{k}.mat"), U)
    write_t3(os.path.join(args.out, "core.t3"), result.core)
    write_t3(os.path.join(args.out, "xhat.t3"), result.reconstruction)
    with open(os.path.join(args.out, "trace.csv"), "w") as fh:
        fh.write("iter,objective\n")
        for i, value in enumerate(result.objective_trace):
            fh.write(f"{i},{'%.17g' % value}\n")
    print(f"wrote U1.mat U2.mat U3.mat core.t3 xhat.t3 trace.csv to {args.out} "
          f"({result.iters_run} sweeps, {result.stop_reason})")
    return 0


def _cmd_clique(args) -> int:
    if args.clique_command == "sample":
        inst = pc.sample_hypergraph(args.n, args.kappa, args.half,
                                    RngStream(args.seed))
        write_t3(args.out, inst.adjacency_dense().astype(np.float64))
        print(f"wrote {args.out} (N={args.n}, kappa={args.kappa}, "
              f"half={args.half})")
        return 0
    if args.clique_command == "detect":
        A = read_t3(args.input)
        half = pc.detect_half(A, N=args.n, kappa=args.kappa)
        print(half)
        return 0
    if args.clique_command == "reduce":
        A = read_t3(args.input)
        N = A.shape[0]
        if A.shape != (N, N, N):
            raise ContractViolationError(f"adjacency must be cubic, got {A.shape}")
        defaults = pc.default_reduction_params(N)
        params = pc.ReductionParams(
            M=defaults.M if args.trunc_m is None else args.trunc_m,
            mu=defaults.mu if args.mu is None else args.mu,
        )
        packed = np.packbits(A.astype(np.uint8), axis=2)
        inst = pc.CliqueInstance(N=N, kappa=1, half=pc.FIRST,
                                 clique=np.empty(0, dtype=np.intp), packed=packed)
        Y = pc.gaussianize(inst, params, RngStream(args.seed))
        write_t3(args.out, Y)
        print(f"wrote {args.out} (p={Y.shape[0]}, M={params.M:.6g}, "
              f"mu={params.mu:.6g})")
        return 0
    raise ContractViolationError(f"unknown clique command {args.clique_command!r}")


def main(argv=None) -> int:
    args = _build_tsvd_parser().parse_args(argv)
    try:
        if args.command == "hooi":
            return _cmd_hooi(args)
        return _cmd_clique(args)
    except ContractViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_exp(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tsvd-exp", description="Monte Carlo experiment harness"
    )
    parser.add_argument("experiment",
                        choices=("table1", "table2", "phase", "clique"))
    parser.add_argument("--reps", type=int, default=100)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", required=True, help="results CSV path")
    parser.add_argument("--grid", default=None,
                        help="grid file (key=value pairs, one cell per line)")
    parser.add_argument("--dat", action="store_true",
                        help="also write a gnuplot-friendly <out>.dat aggregate")
    args = parser.parse_args(argv)

    from .experiments import TABLE1_GRID, TABLE2_GRID, clique_grid, phase_grid

    try:
        if args.grid is not None:
            grid = parse_grid_file(args.grid, args.experiment)
        else:
            grid = {
                "table1": TABLE1_GRID,
                "table2": TABLE2_GRID,
                "phase": phase_grid(),
                "clique": clique_grid(),
            }[args.experiment]
        config = SimConfig(experiment=args.experiment, grid=grid, reps=args.reps,
                           base_seed=args.seed, workers=args.workers)
        rows = run_experiment(config, out=args.out)
        if args.dat:
            write_dat(f"{args.out}.dat", rows)
            print(f"wrote {args.out}, {args.out}.meta, {args.out}.dat "
                  f"({len(rows)} rows)")
        else:
            print(f"wrote {args.out}, {args.out}.meta ({len(rows)} rows)")
        return 0
    except ContractViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
