"""Metropolis sampler for the slab Gibbs measure, plus a tiny-system oracle.

Sweeps run in checkerboard order (even then odd (x+y+z) parity) so sites
within a parity class never share a bond; only layers 1..L are updated.
Randomness is counter-based (splitmix64 of (seed, sweep, site)), so a chain
is bit-reproducible from its seed regardless of threading.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numba import njit

from .lattice import LatticeSpec, SpinConfig, classify_bonds, make_config, total_energy


class ParamError(ValueError):
    pass


class EnumerationError(ValueError):
    pass


@dataclass(frozen=True)
class ChainParams:
    beta: float
    sweeps: int
    burn_in: int = 0
    seed: int = 1
    thinning: int = 1

    def __post_init__(self):
        if self.beta < 0:
            raise ParamError(f"beta must be >= 0, got {self.beta}")
        if not (self.sweeps > self.burn_in >= 0):
            raise ParamError("need sweeps > burn_in >= 0")
        if self.thinning < 1:
            raise ParamError("thinning must be >= 1")


@dataclass
class ChainReport:
    """Observable series from one seeded chain (all series equal length)."""

    seed: int
    sweeps: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    ordered_fraction: list = field(default_factory=list)
    rigidity_fraction: list = field(default_factory=list)
    n_interface_components: list = field(default_factory=list)
    height_mode: list = field(default_factory=list)
    w_b: list = field(default_factory=list)
    n_winding: list = field(default_factory=list)
    height_histogram: dict = field(default_factory=dict)
    height_eq_adjacent: float | None = None
    height_eq_antipodal: float | None = None
    acceptance_rate: float = 0.0
    final: SpinConfig | None = None


MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True, inline="always")
def _mix64(x):
    x = (x + np.uint64(0x9E3779B97F4A7C15)) & MASK64
    z = x
    z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & MASK64
    z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & MASK64
    return (z ^ (z >> np.uint64(31))) & MASK64


@njit(cache=True, inline="always")
def _cdist(a, b, q):
    d = (a - b) % q
    if d < 0:
        d += q
    return d if d <= q - d else q - d


@njit(cache=True)
def _sweep_kernel(spins, q, beta, seed, sweep_idx):
    """One full sweep; returns (accepted, delta_H). Mutates spins in place."""
    nl, n, _ = spins.shape
    l = nl - 2
    accepted = 0
    dh_total = 0
    base = _mix64(np.uint64(seed) ^ (np.uint64(sweep_idx) * np.uint64(0x9E3779B97F4A7C15)))
    for parity in range(2):
        for z in range(1, l + 1):
            for x in range(n):
                for y in range(n):
                    if (x + y + z) & 1 != parity:
                        continue
                    ctr = np.uint64(((z * n + x) * n + y) * 2 + parity)
                    h1 = _mix64(base ^ ctr)
                    h2 = _mix64(h1 ^ np.uint64(0xD1B54A32D192ED03))
                    old = spins[z, x, y]
                    new = np.int64(h1 % np.uint64(q))
                    if new == old:
                        accepted += 1
                        continue
                    d_old = 0
                    d_new = 0
                    for k in range(6):
                        if k == 0:
                            v = spins[z, (x + 1) % n, y]
                        elif k == 1:
                            v = spins[z, (x - 1) % n, y]
                        elif k == 2:
                            v = spins[z, x, (y + 1) % n]
                        elif k == 3:
                            v = spins[z, x, (y - 1) % n]
                        elif k == 4:
                            v = spins[z - 1, x, y]
                        else:
                            v = spins[z + 1, x, y]
                        if _cdist(np.int64(old), np.int64(v), q) <= 1:
                            d_old += 1
                        if _cdist(np.int64(new), np.int64(v), q) <= 1:
                            d_new += 1
                    dh = -(d_new - d_old)
                    if dh <= 0:
                        accept = True
                    else:
                        u = np.float64(h2) / 18446744073709551616.0
                        accept = u < np.exp(-beta * dh)
                    if accept:
                        spins[z, x, y] = new
                        accepted += 1
                        dh_total += dh
    return accepted, dh_total


def metropolis_sweep(config: SpinConfig, beta: float, seed: int, sweep_idx: int = 0):
    """Apply one checkerboard Metropolis sweep; returns (config, accepted)."""
    if beta < 0:
        raise ParamError(f"beta must be >= 0, got {beta}")
    out = config.copy()
    spins = out.spins.astype(np.int64)
    accepted, _ = _sweep_kernel(spins, np.int64(config.spec.q), float(beta),
                                np.uint64(seed), np.uint64(sweep_idx))
    out.spins = spins.astype(np.int32)
    return out, int(accepted)


def ordered_fraction(config: SpinConfig) -> Fraction:
    """Fraction of ordered bonds, exact."""
    return Fraction(classify_bonds(config).n_ordered, config.spec.n_bonds)


def run_chain(spec: LatticeSpec, params: ChainParams, observables=("energy", "ordered_fraction"),
              s: int = 0, start: SpinConfig | None = None,
              snapshot_every: int | None = None, snapshot_dir=None) -> ChainReport:
    """Run one chain; deterministic given the seed.

    observables: subset of {"energy", "ordered_fraction", "interface"};
    "interface" adds rigidity fraction, interface component count and the
    height histogram/mode (computed on thinned samples only).
    """
    from . import interface as iface

    config = start.copy() if start is not None else make_config(spec, s=s)
    bottom = config.spins[0].copy()
    top = config.spins[-1].copy()
    spins = config.spins.astype(np.int64)
    q = np.int64(spec.q)
    report = ChainReport(seed=params.seed)
    energy = total_energy(config)
    accepted = 0
    proposals = params.sweeps * spec.n * spec.n * spec.l
    for sweep in range(1, params.sweeps + 1):
        acc, dh = _sweep_kernel(spins, q, float(params.beta), np.uint64(params.seed), np.uint64(sweep))
        accepted += acc
        energy += dh
        if sweep <= params.burn_in or (sweep - params.burn_in) % params.thinning:
            continue
        cur = SpinConfig(spec, spins.astype(np.int32))
        if not (np.array_equal(cur.spins[0], bottom) and np.array_equal(cur.spins[-1], top)):
            raise RuntimeError("frozen boundary layers changed during the chain")
        report.sweeps.append(sweep)
        report.energy.append(energy)
        report.ordered_fraction.append(float(ordered_fraction(cur)))
        if "interface" in observables:
            data = iface.extract_interface(cur)
            _, walls, hf = iface.ceilings_walls_heights(data.interface, spec)
            report.rigidity_fraction.append(len(hf.rigidity) / (spec.n * spec.n))
            report.n_interface_components.append(len(data.components))
            report.w_b.append(iface.weight(data.interface))
            report.n_winding.append(sum(1 for w in walls if iface.is_winding(w, spec)))
            heights = hf.heights[hf.heights >= 0]
            mode = int(np.bincount(heights).argmax()) if heights.size else -1
            report.height_mode.append(mode)
            for h, c in zip(*np.unique(hf.heights, return_counts=True)):
                report.height_histogram[int(h)] = report.height_histogram.get(int(h), 0) + int(c)
            for name, other in (("adjacent", (1, 0)), ("antipodal", (spec.n // 2, spec.n // 2))):
                h0, h1 = hf.heights[0, 0], hf.heights[other]
                eq = bool(h0 >= 0 and h0 == h1)
                key = "height_eq_" + name
                prev = getattr(report, key) or 0.0
                k = len(report.sweeps)
                setattr(report, key, (prev * (k - 1) + eq) / k)
        if snapshot_every and ((sweep - params.burn_in) // params.thinning) % snapshot_every == 0:
            from pathlib import Path

            path = Path(snapshot_dir or ".") / f"snap_seed{params.seed}_sweep{sweep}.txt"
            from .lattice import save_snapshot

            save_snapshot(cur, path)
    report.acceptance_rate = accepted / proposals if proposals else 0.0
    report.final = SpinConfig(spec, spins.astype(np.int32))
    assert total_energy(report.final) == energy, "incremental energy bookkeeping drifted"
    return report


def state_histogram(spec: LatticeSpec, params: ChainParams, s: int = 0) -> np.ndarray:
    """Visit counts over the q^(N^2 L) free states of a tiny system.

    States are indexed like exact_distribution enumerates them: the
    flattened free layer is a base-q number, first site most significant.
    """
    n_free = spec.n * spec.n * spec.l
    n_states = spec.q ** n_free
    if n_states > 10 ** 7:
        raise EnumerationError(f"state space {n_states} too large for a histogram")
    config = make_config(spec, s=s)
    spins = config.spins.astype(np.int64)
    weights = (spec.q ** np.arange(n_free - 1, -1, -1)).astype(np.int64)
    counts = np.zeros(n_states, dtype=np.int64)
    q = np.int64(spec.q)
    for sweep in range(1, params.sweeps + 1):
        _sweep_kernel(spins, q, float(params.beta), np.uint64(params.seed), np.uint64(sweep))
        if sweep <= params.burn_in or (sweep - params.burn_in) % params.thinning:
            continue
        counts[int(spins[1:-1].ravel() @ weights)] += 1
    return counts


def exact_distribution(spec: LatticeSpec, beta: float, s: int = 0, guard: int = 10 ** 7):
    """Exact Gibbs table for tiny systems, by full enumeration.

    Returns (states, probs): states is a list of flattened free-layer spin
    tuples (z-major), probs the matching probabilities (sum 1 within 1e-12).
    """
    n_free = spec.n * spec.n * spec.l
    n_states = spec.q ** n_free
    if n_states > guard:
        raise EnumerationError(
            f"state space q^(N^2 L) = {n_states} exceeds the enumeration guard {guard}")
    config = make_config(spec, s=s)
    states = []
    log_w = np.empty(n_states, dtype=np.float64)
    for i, assign in enumerate(itertools.product(range(spec.q), repeat=n_free)):
        config.spins[1:-1] = np.asarray(assign, dtype=np.int32).reshape(spec.l, spec.n, spec.n)
        log_w[i] = -beta * total_energy(config)
        states.append(assign)
    log_w -= log_w.max()
    probs = np.exp(log_w)
    probs /= probs.sum()
    return states, probs
