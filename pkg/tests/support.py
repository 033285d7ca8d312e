"""Shared construction helpers for the test suite."""

import numpy as np

from clocklab.lattice import LatticeSpec, SpinConfig, boundary_values


def scrambled_plane(spec, z, rng=None):
    """A strongly disordered plane: the boundary tiling plus small offsets.

    Alternating per-plane offsets keep vertically stacked scrambled planes
    disordered; per-site jitter (if rng is given) randomizes without ever
    creating an ordered bond for q >= 32.
    """
    s00, s01, s10, s11 = boundary_values(spec.q)
    tile = np.array([[s00, s01], [s10, s11]], dtype=np.int32)
    xs = np.arange(spec.n) % 2
    plane = tile[np.ix_(xs, xs)] + (4 if z % 2 else 0)
    if rng is not None:
        plane = plane + rng.integers(0, 2, size=plane.shape)
    return plane % spec.q


def flat_interface_config(spec, z0=2, rng=None, level=10):
    """Disordered scrambled planes below z0, a constant ordered block above."""
    spins = np.empty((spec.l + 2, spec.n, spec.n), dtype=np.int32)
    for z in range(spec.l + 2):
        if z == 0:
            spins[z] = scrambled_plane(spec, 0)
        elif z < z0:
            spins[z] = scrambled_plane(spec, z, rng)
        else:
            spins[z] = level
            if rng is not None and z <= spec.l:
                spins[z] = (spins[z] + rng.integers(0, 2, size=(spec.n, spec.n))) % spec.q
    return SpinConfig(spec, spins)


def bump_config(spec, z0=2, cell=(1, 1), rng=None, level=10):
    """Flat interface with one cube pushed up at the given base cell."""
    config = flat_interface_config(spec, z0, rng, level)
    x0, y0 = cell
    patch = scrambled_plane(spec, z0, rng)
    for x in (x0, x0 + 1):
        for y in (y0, y0 + 1):
            config.spins[z0, x % spec.n, y % spec.n] = patch[x % spec.n, y % spec.n]
    return config


def planted_pair_config(spec, a1, b, a3, rng, c_low=10, c_high=26):
    """Three problematic defect sheets in every column: signs -, +, -.

    Ascending: disordered zone, [d f o] sheet at cubes a1..a1+2, ordered
    zone at c_low, [o f d] sheet at b..b+2, disordered zone, [d f o] sheet
    at a3..a3+2, ordered zone at c_high up to the top boundary.  Requires
    b >= a1 + 3, a3 >= b + 3, a3 + 2 <= l, and q = 64-ish values so all
    scrambled-vs-constant bonds stay disordered.
    """
    assert a1 >= 1 and b >= a1 + 3 and a3 >= b + 3 and a3 + 2 <= spec.l
    spins = np.empty((spec.l + 2, spec.n, spec.n), dtype=np.int32)
    jitter = lambda: rng.integers(0, 2, size=(spec.n, spec.n))
    for z in range(spec.l + 2):
        if z == 0:
            spins[z] = scrambled_plane(spec, 0)
        elif z <= a1 + 1:
            spins[z] = scrambled_plane(spec, z, rng)
        elif z <= b + 1:
            spins[z] = (c_low + jitter()) % spec.q
        elif z <= a3 + 1:
            spins[z] = scrambled_plane(spec, z, rng)
        elif z <= spec.l:
            spins[z] = (c_high + jitter()) % spec.q
        else:
            spins[z] = c_high
    return SpinConfig(spec, spins)
