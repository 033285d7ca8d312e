"""clocklab command line: sampling, interface analysis, lemma verification.

Report-producing subcommands write a matplotlib figure next to their CSV
unless --no-figures is given; CLOCKLAB_OUTDIR sets the default output
directory for the experiment commands.
"""

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds as bnd
from . import defects as dfc
from . import experiment as xp
from . import interface as ifc
from . import reflect as rfl
from .lattice import LatticeSpec, load_snapshot, save_snapshot
from .sampler import ChainParams, run_chain


def _out_path(value, default_name):
    if value:
        return Path(value)
    base = Path(os.environ.get("CLOCKLAB_OUTDIR", "."))
    base.mkdir(parents=True, exist_ok=True)
    return base / default_name


def cmd_simulate(args):
    spec = LatticeSpec(args.n, args.l, args.q)
    params = ChainParams(beta=args.beta, sweeps=args.sweeps, burn_in=args.burn_in,
                         seed=args.seed, thinning=args.thin)
    report = run_chain(spec, params, observables=("energy", "ordered_fraction", "interface"),
                       s=args.s, snapshot_every=args.snapshot_every,
                       snapshot_dir=args.snapshot_dir)
    out = _out_path(args.out, "chain.csv")
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sweep", "energy", "ordered_fraction", "rigidity_fraction",
                         "n_interface_components", "height_mode"])
        for i, sweep in enumerate(report.sweeps):
            writer.writerow([sweep, report.energy[i], f"{report.ordered_fraction[i]:.12g}",
                             f"{report.rigidity_fraction[i]:.12g}",
                             report.n_interface_components[i], report.height_mode[i]])
    print(f"wrote {out} ({len(report.sweeps)} samples, "
          f"acceptance {report.acceptance_rate:.3f})")
    if not args.no_figures:
        from . import figures as figs

        figs.chain_trace(report, out.with_suffix(".png"))
        print(f"wrote {out.with_suffix('.png')}")
    return 0


def cmd_analyze(args):
    config = load_snapshot(args.infile)
    spec = config.spec
    data = ifc.extract_interface(config)
    ceilings, walls, hf = ifc.ceilings_walls_heights(data.interface, spec)
    heights = hf.heights
    hist = {int(h): int(c) for h, c in zip(*np.unique(heights, return_counts=True))}
    winding = [ifc.is_winding(w, spec) for w in walls]
    out = _out_path(args.out, "analysis.csv")
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["b_size", "w_b", "n_ceilings", "n_walls", "rigidity_fraction",
                         "height_histogram", "winding_flags"])
        writer.writerow([len(data.interface), ifc.weight(data.interface), len(ceilings),
                         len(walls), f"{len(hf.rigidity) / spec.n ** 2:.12g}",
                         json.dumps(hist), json.dumps(winding)])
    print(f"wrote {out}")
    if args.heightmap:
        with open(args.heightmap, "w") as fh:
            for x in range(spec.n):
                fh.write(" ".join(str(int(v)) for v in heights[x]) + "\n")
        print(f"wrote {args.heightmap}")
    if not args.no_figures:
        from . import figures as figs

        figs.heightmap(heights, out.with_suffix(".png"))
        print(f"wrote {out.with_suffix('.png')}")
    return 0


def cmd_defects(args):
    config = load_snapshot(args.infile)
    records, flagged = dfc.all_column_defects(config)
    out = _out_path(args.out, "defects.csv")
    n_problem_pairs = 0
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "n_blobs", "blob_types", "n_defects",
                         "classifications", "signs", "pairing", "problematic_pairs"])
        for (x, y), recs in records.items():
            blobs = [b for r in recs for b in r.blobs]
            signed = [r for r in recs if r.sign != 0]
            neutral = [r for r in recs if r.sign == 0]
            pairing = dfc.pair_defects(signed, neutral)
            problem = sum(1 for _, _, p in pairing.pairs if p)
            n_problem_pairs += problem
            summary = ";".join(f"[{a.z_lo},{a.z_hi}]x[{b.z_lo},{b.z_hi}]"
                               for a, b, _ in pairing.pairs)
            writer.writerow([x, y, len(blobs), ",".join(b.kind for b in blobs),
                             len(recs), ",".join(r.classification for r in recs),
                             ",".join(str(r.sign) for r in recs), summary, problem])
    print(f"wrote {out} ({len(records)} columns, {n_problem_pairs} problematic pairs, "
          f"{len(flagged)} flagged vertical plaquettes)")
    return 0


def cmd_verify_lemmas(args):
    shard = None
    if args.shard:
        i, k = (int(v) for v in args.shard.split("/"))
        shard = (i, k)
    out = _out_path(args.out, "lemmas.csv")
    n_patterns = 0
    n_bad = 0
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pattern", "ends", "m", "L", "D", "K", "Q", "Db",
                         "classification", "identity_residual", "checks", "all_ok"])
        for p in rfl.enumerate_patterns(args.lmax, shard=shard):
            n_patterns += 1
            cls = rfl.classify_pattern(p)
            st = rfl.defect_stats(rfl.reflect_pattern(p, args.n))
            residual = rfl.check_identity(st)
            checks = rfl.check_inequalities(st, cls)
            ok = residual == 0 and all(c["ok"] for c in checks)
            n_bad += not ok
            writer.writerow([p.key(), f"{p.bottom_end}/{p.top_end}", st.m, st.l,
                             st.D, st.K, st.Q, st.Db, cls, residual,
                             ";".join(f"{c['name']}={c['margin']}" for c in checks),
                             int(ok)])
    print(f"wrote {out} ({n_patterns} patterns, {n_bad} violations)")
    return 1 if n_bad else 0


def cmd_bounds(args):
    params = bnd.BoundParams(args.q, args.beta, args.alpha_prime)
    out = bnd.evaluate_bounds(params, args.case, args.n, args.l, m=args.m,
                              D=args.D, K=args.K, Q=args.Q)
    for key, value in out.items():
        print(f"{key:>24}: {value}")
    if args.threshold:
        q0 = bnd.glued_threshold_q()
        print(f"{'glued a(q)<1 from q':>24}: {q0}")
    return 0


def cmd_toy_check(args):
    rng = np.random.default_rng(args.seed)
    failures = 0
    periodic_done = 0
    for trial in range(args.trials):
        make_periodic = periodic_done < args.periodic and args.r % 2 == 0
        subsets = []
        for _ in range(rng.integers(1, 4)):
            if make_periodic:
                half = {(int(x), int(y)) for x in range(0, args.r, 2)
                        for y in range(args.r) if rng.random() < 0.7}
                subset = half | {((x + 2) % args.r, y) for x, y in half}
                periodic_done += 1
                make_periodic = False
            else:
                size = int(rng.integers(1, args.r * args.r + 1))
                flat = rng.choice(args.r * args.r, size=size, replace=False)
                subset = {(int(v) // args.r, int(v) % args.r) for v in flat}
            if subset:
                subsets.append(subset)
        if not subsets:
            continue
        result = bnd.toy_identity_check(args.r, subsets)
        failures += not result["exact"]
    print(f"toy identity: {args.trials} trials on T_{args.r}, "
          f"{periodic_done} periodic, {failures} failures")
    return 1 if failures else 0


def cmd_experiment(args):
    plan = xp.load_plan(args.plan)
    out_dir = _out_path(args.out, "experiment")
    path = xp.run_experiment(plan, out_dir, threads=args.threads,
                             figures=not args.no_figures)
    print(f"wrote {path}")
    return 0


def cmd_peierls_scan(args):
    rows = xp.read_results(args.infile)
    log_a = None
    if args.q:
        log_a = math.log(bnd.a_of_q(args.q, args.alpha_prime))
    scan = xp.peierls_scan(rows, log_a=log_a)
    out = _out_path(args.out, "peierls.csv")
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["w", "count", "frequency"])
        for t in scan["table"]:
            writer.writerow([t["w"], t["count"], f"{t['frequency']:.12g}"])
    print(f"wrote {out} (n={scan['n_samples']}, log slope {scan['log_slope']})")
    if "warning" in scan:
        print("warning:", scan["warning"])
    if not args.no_figures:
        from . import figures as figs

        figs.exceedance(scan, out.with_suffix(".png"))
        print(f"wrote {out.with_suffix('.png')}")
    return 0


def cmd_replay(args):
    result = xp.replay(args.plan, args.ref, threads=args.threads)
    if result["identical"]:
        print("replay reproduced all delimited outputs byte-identically")
        return 0
    for d in result["diffs"]:
        print("mismatch:", d)
    return 1


def build_parser():
    parser = argparse.ArgumentParser(prog="clocklab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one Metropolis chain")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--sweeps", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--s", type=int, default=0, help="ordered boundary spin")
    p.add_argument("--out")
    p.add_argument("--snapshot-every", type=int, default=None)
    p.add_argument("--snapshot-dir", default=None)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="interface statistics of a snapshot")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.add_argument("--heightmap")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("defects", help="per-column blob/defect report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_defects)

    p = sub.add_parser("verify-lemmas", help="exhaustive identity and inequality suite")
    p.add_argument("--lmax", type=int, default=2)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--shard", help="i/k")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_lemmas)

    p = sub.add_parser("bounds", help="closed-form partition function bounds")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--case", choices=bnd.CASES, default="od")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--l", type=int, default=2)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--D", type=int, default=0)
    p.add_argument("--K", type=int, default=0)
    p.add_argument("--Q", type=int, default=0)
    p.add_argument("--alpha-prime", type=float, default=0.05)
    p.add_argument("--threshold", action="store_true",
                   help="also print the smallest q with glued a(q) < 1")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("toy-check", help="exact toy torus identity on random orbit mixtures")
    p.add_argument("--r", type=int, default=4)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--periodic", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_toy_check)

    p = sub.add_parser("experiment", help="run a plan-file grid of chains")
    p.add_argument("--plan", required=True)
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("peierls-scan", help="interface weight exceedance table")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.add_argument("--q", type=int)
    p.add_argument("--alpha-prime", type=float, default=0.05)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_peierls_scan)

    p = sub.add_parser("replay", help="re-run a plan and byte-compare the outputs")
    p.add_argument("--plan", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
