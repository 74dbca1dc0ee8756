"""Monte Carlo experiment harness with deterministic parallel replication.

Four experiments are provided, each over a grid of cells:

  table1  cells (p, r, lam): cubic tensors, rescaled Gaussian cores, Gaussian
          noise; per-rep Schatten-q sin-theta losses (q in {1, 2, 5, inf},
          averaged over the three modes) for the HOOI estimate and for its
          spectral initialization.
  table2  cells (p1, p2, p3, lam): rank-(5,5,5) rescaled Gaussian cores,
          Gaussian noise; per-mode spectral/Frobenius sin-theta losses plus
          absolute and relative reconstruction error.
  phase   cells (p, r, alpha, noise, start): superdiagonal core of strength
          p^alpha, Gaussian or uniform noise, spectral or oracle warm start;
          per-rep spectral sin-theta loss averaged over modes.
  clique  cells (N, kappa): planted-clique instances in the first half;
          detection correctness, recovery overlap, and estimator sin-theta
          against the clique indicator.

Replication `rep` of cell index `c` always draws from the stream family
(base_seed, cell=c, rep=rep), so results are byte-identical for any worker
count. Rows are emitted as CSV `experiment,cell,rep,seed,metric,value` with
values printed via %.17g, sorted by (cell, rep, metric order).
"""

from __future__ import annotations

import multiprocessing
import sys
from dataclasses import dataclass, field

import numpy as np

from . import clique as pc
from .ensembles import make_instance
from .hooi import hooi, hosvd_init, warm_start
from .streams import ROLE_GRAPH, ROLE_WARMSTART, derive_stream
from .subspaces import sin_theta_norm
from .validation import ContractViolationError, check_positive_int

__all__ = [
    "SimConfig",
    "TABLE1_GRID",
    "TABLE2_GRID",
    "PHASE_ALPHAS",
    "CLIQUE_KAPPAS",
    "phase_grid",
    "clique_grid",
    "run_table1",
    "run_table2",
    "run_phase",
    "run_clique_curve",
    "run_experiment",
    "aggregate",
    "write_csv",
    "write_dat",
    "parse_grid_file",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 20250825

TABLE1_GRID = [
    (50, 5, 20), (50, 5, 50), (50, 10, 20), (50, 10, 50),
    (100, 5, 40), (100, 5, 60), (100, 10, 40), (100, 10, 60),
]

TABLE2_GRID = [
    (20, 30, 50, 20), (20, 30, 50, 100),
    (30, 50, 100, 20), (30, 50, 100, 100),
    (100, 200, 300, 50), (100, 200, 300, 100),
    (200, 300, 400, 50), (200, 300, 400, 150),
]

PHASE_ALPHAS = [round(0.40 + 0.05 * i, 2) for i in range(11)]
PHASE_NOISES = ("gauss", "unif")
PHASE_STARTS = ("spectral", "warm")

CLIQUE_KAPPAS = (4, 40, 80, 120, 300)

_METRICS = {
    "table1": ["l1_hooi", "l1_init", "l2_hooi", "l2_init",
               "l5_hooi", "l5_init", "linf_hooi", "linf_init"],
    "table2": ["linf_U1", "l2_U1", "linf_U2", "l2_U2",
               "linf_U3", "l2_U3", "frob_err", "rel_err"],
    "phase": ["linf"],
    "clique": ["detect_correct", "overlap", "sintheta"],
}

CSV_HEADER = "experiment,cell,rep,seed,metric,value"


def phase_grid(ps=(50, 100), r=5, alphas=None, noises=PHASE_NOISES,
               starts=PHASE_STARTS):
    alphas = PHASE_ALPHAS if alphas is None else list(alphas)
    return [
        (p, r, a, noise, start)
        for p in ps for a in alphas for noise in noises for start in starts
    ]


def clique_grid(N=600, kappas=CLIQUE_KAPPAS):
    return [(N, k) for k in kappas]


@dataclass
class SimConfig:
    experiment: str
    grid: list = field(default_factory=list)
    reps: int = 100
    base_seed: int = DEFAULT_SEED
    workers: int = 1

    def __post_init__(self):
        if self.experiment not in _METRICS:
            raise ContractViolationError(
                f"unknown experiment {self.experiment!r}; "
                f"expected one of {sorted(_METRICS)}"
            )
        if not self.grid:
            raise ContractViolationError("grid must be nonempty")
        check_positive_int(self.reps, "reps")
        check_positive_int(self.workers, "workers")


def _num(x) -> str:
    f = float(x)
    return str(int(f)) if f == int(f) else repr(f)


def cell_label(experiment: str, cell) -> str:
    if experiment == "table1":
        p, r, lam = cell
        return f"{p}x{p}x{p}_{r}x{r}x{r}_lam{_num(lam)}"
    if experiment == "table2":
        p1, p2, p3, lam = cell
        return f"{p1}x{p2}x{p3}_5x5x5_lam{_num(lam)}"
    if experiment == "phase":
        p, r, alpha, noise, start = cell
        return f"p{p}_a{alpha:.2f}_{noise}_{start}"
    if experiment == "clique":
        N, kappa = cell
        return f"N{N}_k{kappa}"
    raise ContractViolationError(f"unknown experiment {experiment!r}")


def _mode_loss(bases_hat, bases_true, q) -> float:
    return float(np.mean([
        sin_theta_norm(bh, bt, q) for bh, bt in zip(bases_hat, bases_true)
    ]))


def _table1_rep(cell, stream):
    p, r, lam = cell
    inst = make_instance((p, p, p), (r, r, r), lam, "gaussian", "gauss", stream)
    init = hosvd_init(inst.Y, (r, r, r))
    res = hooi(inst.Y, (r, r, r), init=init)
    out = []
    for q in (1.0, 2.0, 5.0, np.inf):
        out.append(_mode_loss(res.bases, inst.factors, q))
        out.append(_mode_loss(init, inst.factors, q))
    return out


def _table2_rep(cell, stream):
    p1, p2, p3, lam = cell
    ranks = (5, 5, 5)
    inst = make_instance((p1, p2, p3), ranks, lam, "gaussian", "gauss", stream)
    res = hooi(inst.Y, ranks)
    out = []
    for bh, bt in zip(res.bases, inst.factors):
        out.append(sin_theta_norm(bh, bt, np.inf))
        out.append(sin_theta_norm(bh, bt, 2.0))
    frob = float(np.linalg.norm(res.reconstruction - inst.X))
    out.append(frob)
    out.append(frob / float(np.linalg.norm(inst.X)))
    return out


def _phase_rep(cell, stream):
    p, r, alpha, noise, start = cell
    lam = float(p) ** float(alpha)
    inst = make_instance((p, p, p), (r, r, r), lam, "diagonal", noise, stream)
    if start == "spectral":
        init = "spectral"
    elif start == "warm":
        gen = stream.with_role(ROLE_WARMSTART).generator()
        init = tuple(warm_start(U, gen) for U in inst.factors)
    else:
        raise ContractViolationError(f"unknown start kind {start!r}")
    res = hooi(inst.Y, (r, r, r), init=init)
    return [_mode_loss(res.bases, inst.factors, np.inf)]


def _clique_rep(cell, stream):
    N, kappa = cell
    inst = pc.sample_hypergraph(N, kappa, pc.FIRST, stream.with_role(ROLE_GRAPH))
    est = pc.spectral_clique_estimate(inst)
    correct = 1.0 if pc.detect_half(inst) == inst.half else 0.0
    recovered = pc.recover_clique(est, kappa)
    overlap = float(len(np.intersect1d(recovered, inst.clique))) / kappa
    sines = []
    for u, support in zip(est.vectors, est.supports):
        mask = np.isin(support, inst.clique)
        if not mask.any():
            sines.append(1.0)  # no clique mass in this block: maximal angle
            continue
        indicator = mask.astype(np.float64)
        indicator /= np.linalg.norm(indicator)
        cos = min(1.0, abs(float(u @ indicator)))
        sines.append(float(np.sqrt(1.0 - cos**2)))
    return [correct, overlap, float(np.mean(sines))]


_REP_FUNCS = {
    "table1": _table1_rep,
    "table2": _table2_rep,
    "phase": _phase_rep,
    "clique": _clique_rep,
}


def _run_task(args):
    experiment, cell_index, cell, rep, base_seed = args
    stream = derive_stream(base_seed, cell_index, rep)
    try:
        values = _REP_FUNCS[experiment](cell, stream)
        metrics = list(zip(_METRICS[experiment], values))
    except ContractViolationError as exc:
        print(f"cell {cell} rep {rep}: {exc}", file=sys.stderr)
        metrics = [("error", 1.0)]
    return cell_index, rep, stream.stream_id, metrics


def run_experiment(config: SimConfig, out=None) -> list[tuple]:
    """Run every (cell, rep) task and return sorted CSV row tuples.

    Returns rows (experiment, cell_label, rep, seed, metric, value); also
    writes them as CSV to `out` (plus a `<out>.meta` sidecar) when given.
    """
    tasks = [
        (config.experiment, ci, cell, rep, config.base_seed)
        for ci, cell in enumerate(config.grid)
        for rep in range(config.reps)
    ]
    if config.workers == 1:
        results = [_run_task(t) for t in tasks]
    else:
        with multiprocessing.Pool(config.workers) as pool:
            results = list(pool.imap_unordered(_run_task, tasks, chunksize=1))
    results.sort(key=lambda r: (r[0], r[1]))

    rows = []
    for cell_index, rep, seed, metrics in results:
        label = cell_label(config.experiment, config.grid[cell_index])
        for metric, value in metrics:
            rows.append((config.experiment, label, rep, seed, metric, float(value)))
    if out is not None:
        write_csv(out, rows)
        _write_meta(out, config)
    return rows


def _wrap(experiment):
    def runner(grid=None, *, reps=100, base_seed=DEFAULT_SEED, workers=1,
               out=None):
        if grid is None:
            grid = {
                "table1": TABLE1_GRID,
                "table2": TABLE2_GRID,
                "phase": phase_grid(),
                "clique": clique_grid(),
            }[experiment]
        config = SimConfig(experiment=experiment, grid=list(grid), reps=reps,
                           base_seed=base_seed, workers=workers)
        return run_experiment(config, out=out)
    runner.__name__ = f"run_{experiment}"
    return runner


run_table1 = _wrap("table1")
run_table2 = _wrap("table2")
run_phase = _wrap("phase")
run_clique_curve = _wrap("clique")


def write_csv(path, rows) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for experiment, cell, rep, seed, metric, value in rows:
            fh.write(f"{experiment},{cell},{rep},{seed},{metric},{'%.17g' % value}\n")


def _write_meta(out, config: SimConfig) -> None:
    from . import __version__

    with open(f"{out}.meta", "w") as fh:
        fh.write(f"experiment={config.experiment}\n")
        fh.write(f"cells={len(config.grid)}\n")
        fh.write(f"reps={config.reps}\n")
        fh.write(f"base_seed={config.base_seed}\n")
        fh.write(f"workers={config.workers}\n")
        fh.write("core_policy=redrawn-per-replication\n")
        fh.write(f"version={__version__}\n")


def aggregate(rows):
    """Per (cell, metric) mean, standard error, and count.

    Rows may be the tuples produced by run_experiment. Single-observation
    groups report SE = 0. Output preserves first-appearance order.
    """
    groups: dict[tuple, list] = {}
    order = []
    for row in rows:
        _, cell, _, _, metric, value = row
        key = (cell, metric)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(float(value))
    out = []
    for cell, metric in order:
        vals = np.asarray(groups[(cell, metric)])
        n = len(vals)
        se = float(vals.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        out.append((cell, metric, float(vals.mean()), se, n))
    return out


def write_dat(path, rows) -> None:
    """gnuplot-friendly aggregate dump: `cell metric mean se n` per line."""
    with open(path, "w") as fh:
        fh.write("# cell metric mean se n\n")
        for cell, metric, mean, se, n in aggregate(rows):
            fh.write(f"{cell} {metric} {'%.17g' % mean} {'%.17g' % se} {n}\n")


def _coerce(value: str):
    try:
        return int(value)
    except ValueError:
        try:
            return float(value)
        except ValueError:
            return value


def parse_grid_file(path, experiment: str) -> list[tuple]:
    """Parse a grid file: one cell per line of space-separated key=value pairs.

    Keys per experiment: table1 p,r,lam; table2 p1,p2,p3,lam;
    phase p,alpha,noise,start (optional r, default 5); clique n,kappa.
    Blank lines and lines starting with # are skipped.
    """
    wanted = {
        "table1": ("p", "r", "lam"),
        "table2": ("p1", "p2", "p3", "lam"),
        "phase": ("p", "alpha", "noise", "start"),
        "clique": ("n", "kappa"),
    }
    if experiment not in wanted:
        raise ContractViolationError(f"unknown experiment {experiment!r}")
    grid = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            kv = {}
            for token in line.split():
                if "=" not in token:
                    raise ContractViolationError(
                        f"{path}:{lineno}: expected key=value, got {token!r}"
                    )
                key, value = token.split("=", 1)
                kv[key] = _coerce(value)
            missing = [k for k in wanted[experiment] if k not in kv]
            if missing:
                raise ContractViolationError(
                    f"{path}:{lineno}: missing keys {missing} for {experiment}"
                )
            if experiment == "table1":
                grid.append((kv["p"], kv["r"], kv["lam"]))
            elif experiment == "table2":
                grid.append((kv["p1"], kv["p2"], kv["p3"], kv["lam"]))
            elif experiment == "phase":
                grid.append((kv["p"], kv.get("r", 5), float(kv["alpha"]),
                             kv["noise"], kv["start"]))
            else:
                grid.append((kv["n"], kv["kappa"]))
    if not grid:
        raise ContractViolationError(f"{path}: no cells found")
    return grid
