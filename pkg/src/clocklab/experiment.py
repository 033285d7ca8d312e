"""Reproducible experiment grids: plan files, result CSVs, replay.

Plan files are INI-style (bracket section headers, one key per line); the
results file is an append-only long-format CSV with a schema-version first
line, fully regenerable from the plan and the seeds.
"""

import configparser
import csv
import io
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lattice import LatticeSpec
from .sampler import ChainParams, run_chain

SCHEMA_LINE = "# clocklab-results v1"
RESULT_FIELDS = ("n", "l", "q", "beta", "seed", "sweep", "observable", "value")


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentPlan:
    ns: tuple
    ls: tuple
    qs: tuple
    betas: tuple
    chains: int
    sweeps: int
    burn_in: int
    thinning: int
    seed_base: int
    boundary_spin: int = 0

    def __post_init__(self):
        if not (self.ns and self.ls and self.qs and self.betas):
            raise PlanError("all grid axes must be non-empty")
        if self.chains < 1:
            raise PlanError("need at least one chain per grid point")

    def points(self):
        idx = 0
        for n in self.ns:
            for l in self.ls:
                for q in self.qs:
                    for beta in self.betas:
                        for c in range(self.chains):
                            yield (n, l, q, beta, self.seed_base + idx)
                            idx += 1


def load_plan(path) -> ExperimentPlan:
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise PlanError(f"cannot read plan file {path}")
    try:
        grid = cp["grid"]
        chains = cp["chains"]
    except KeyError as exc:
        raise PlanError(f"plan file missing section {exc}") from exc
    ints = lambda key: tuple(int(v) for v in grid[key].split())
    return ExperimentPlan(
        ns=ints("n"), ls=ints("l"), qs=ints("q"),
        betas=tuple(float(v) for v in grid["beta"].split()),
        chains=chains.getint("count", 1),
        sweeps=chains.getint("sweeps"),
        burn_in=chains.getint("burn_in", 0),
        thinning=chains.getint("thinning", 1),
        seed_base=chains.getint("seed_base", 1),
        boundary_spin=chains.getint("boundary_spin", 0),
    )


def save_plan(plan: ExperimentPlan, path) -> None:
    cp = configparser.ConfigParser()
    cp["grid"] = {"n": " ".join(map(str, plan.ns)), "l": " ".join(map(str, plan.ls)),
                  "q": " ".join(map(str, plan.qs)),
                  "beta": " ".join(f"{b:g}" for b in plan.betas)}
    cp["chains"] = {"count": plan.chains, "sweeps": plan.sweeps,
                    "burn_in": plan.burn_in, "thinning": plan.thinning,
                    "seed_base": plan.seed_base, "boundary_spin": plan.boundary_spin}
    with open(path, "w") as fh:
        cp.write(fh)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _run_point(args):
    """One chain of one grid point; returns its result rows."""
    n, l, q, beta, seed, sweeps, burn_in, thinning, s = args
    spec = LatticeSpec(n, l, q)
    params = ChainParams(beta=beta, sweeps=sweeps, burn_in=burn_in,
                         seed=seed, thinning=thinning)
    rep = run_chain(spec, params, observables=("energy", "ordered_fraction", "interface"), s=s)
    rows = []
    series = (("energy", rep.energy), ("ordered_fraction", rep.ordered_fraction),
              ("rigidity_fraction", rep.rigidity_fraction),
              ("n_interface_components", rep.n_interface_components),
              ("height_mode", rep.height_mode), ("w_b", rep.w_b),
              ("n_winding", rep.n_winding))
    for name, values in series:
        for sweep, value in zip(rep.sweeps, values):
            rows.append((n, l, q, _fmt(beta), seed, sweep, name, _fmt(value)))
    last = rep.sweeps[-1] if rep.sweeps else 0
    rows.append((n, l, q, _fmt(beta), seed, last, "acceptance_rate", _fmt(rep.acceptance_rate)))
    for name in ("height_eq_adjacent", "height_eq_antipodal"):
        value = getattr(rep, name)
        if value is not None:
            rows.append((n, l, q, _fmt(beta), seed, last, name, _fmt(value)))
    return rows


def run_experiment(plan: ExperimentPlan, out_dir, threads: int = 1,
                   figures: bool = True) -> Path:
    """Execute the grid; deterministic merge sorted by grid key."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(n, l, q, beta, seed, plan.sweeps, plan.burn_in, plan.thinning,
             plan.boundary_spin) for (n, l, q, beta, seed) in plan.points()]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_point, jobs))
    else:
        results = [_run_point(j) for j in jobs]
    rows = [row for chunk in results for row in chunk]
    rows.sort(key=lambda r: (r[0], r[1], r[2], float(r[3]), r[4], r[5], r[6]))
    out_path = out_dir / "results.csv"
    with open(out_path, "w", newline="") as fh:
        fh.write(SCHEMA_LINE + "\n")
        writer = csv.writer(fh)
        writer.writerow(RESULT_FIELDS)
        writer.writerows(rows)
    save_plan(plan, out_dir / "plan.ini")
    if figures:
        from . import figures as figs

        figs.rigidity_curves(read_results(out_path), out_dir / "rigidity_vs_beta.png")
    return out_path


def read_results(path) -> list[dict]:
    rows = []
    with open(path) as fh:
        first = fh.readline().rstrip("\n")
        if first != SCHEMA_LINE:
            raise PlanError(f"unknown results schema: {first!r}")
        for rec in csv.DictReader(fh):
            rec["n"], rec["l"], rec["q"] = int(rec["n"]), int(rec["l"]), int(rec["q"])
            rec["beta"] = float(rec["beta"])
            rec["seed"], rec["sweep"] = int(rec["seed"]), int(rec["sweep"])
            rec["value"] = float(rec["value"])
            rows.append(rec)
    return rows


def peierls_scan(rows, w_max: int | None = None, log_a: float | None = None) -> dict:
    """Empirical exceedance of the interface weight w(B).

    Returns the table P(w(B) >= w) for w = 0..w_max, the slope of the log
    frequency over the observed support, and an informational comparison
    against log a(q) (the Peierls bound is one-sided, not an equality).
    """
    ws = [int(r["value"]) for r in rows if r["observable"] == "w_b"]
    if not ws:
        raise PlanError("no w_b observations in the result set")
    ws = np.asarray(ws)
    top = int(ws.max()) if w_max is None else w_max
    table = []
    for w in range(top + 1):
        count = int((ws >= w).sum())
        table.append({"w": w, "count": count, "frequency": count / len(ws)})
    pos = [(t["w"], t["frequency"]) for t in table if t["count"] > 0]
    slope = None
    if len(pos) >= 2:
        xs, fs = zip(*pos)
        slope = float(np.polyfit(xs, np.log(fs), 1)[0])
    out = {"n_samples": len(ws), "table": table, "log_slope": slope}
    if log_a is not None:
        out["log_a"] = log_a
        out["slope_below_log_a"] = None if slope is None else slope <= log_a
    if len(ws) < 100:
        out["warning"] = f"only {len(ws)} samples; exceedance estimates are coarse"
    return out


def replay(plan_path, ref_dir, threads: int = 1) -> dict:
    """Re-run a plan and byte-compare the delimited outputs."""
    plan = load_plan(plan_path)
    ref_dir = Path(ref_dir)
    with tempfile.TemporaryDirectory() as tmp:
        run_experiment(plan, tmp, threads=threads, figures=False)
        diffs = []
        for ref_file in sorted(ref_dir.glob("*.csv")):
            new_file = Path(tmp) / ref_file.name
            if not new_file.exists():
                diffs.append(f"{ref_file.name}: missing from replay")
            elif new_file.read_bytes() != ref_file.read_bytes():
                diffs.append(f"{ref_file.name}: differs")
    return {"identical": not diffs, "diffs": diffs}
