import numpy as np
import pytest

import clocklab as cl
from support import bump_config, flat_interface_config, scrambled_plane


@pytest.fixture(scope="module")
def spec():
    return cl.LatticeSpec(4, 4, 64)


def test_constant_config_has_no_frustration(spec):
    config = cl.SpinConfig(spec, np.full((6, 4, 4), 9, np.int32))
    assert not cl.frustrated_cubes(config).any()


def test_flipped_spin_frustrates_eight_cubes():
    spec = cl.LatticeSpec(4, 3, 64)
    config = cl.SpinConfig(spec, np.full((5, 4, 4), 0, np.int32))
    config.spins[2, 1, 1] = 32
    mask = cl.frustrated_cubes(config)
    assert int(mask.sum()) == 8
    cubes = cl.cube_set(mask)
    assert cubes == {(x, y, z) for x in (0, 1) for y in (0, 1) for z in (1, 2)}


def test_bottom_layer_frustration_oracle():
    # scrambled bottom under a constant interior: compare against a per-cube recount
    spec = cl.LatticeSpec(4, 2, 64)
    config = cl.make_config(spec, s=0, interior=0)
    mask = cl.frustrated_cubes(config)
    counts = cl.cube_order_counts(config)
    for z in range(3):
        for x in range(4):
            for y in range(4):
                assert mask[z, x, y] == (0 < counts[z, x, y] < 12)
    assert mask[0].all()        # every bottom cube has one ordered vertical (s_00 = s)


def test_decompose_slab_is_interface():
    spec = cl.LatticeSpec(4, 4, 64)
    cubes = {(x, y, 2) for x in range(4) for y in range(4)}
    comps = cl.decompose_components(cubes, spec)
    assert len(comps) == 1 and comps[0].kind == "interface3d"


def test_decompose_block_is_contour():
    spec = cl.LatticeSpec(6, 6, 64)
    cubes = {(x, y, z) for x in (2, 3) for y in (2, 3) for z in (2, 3)}
    comps = cl.decompose_components(cubes, spec)
    assert len(comps) == 1 and comps[0].kind == "contour"


def test_decompose_edge_adjacency_is_one_component():
    # cubes sharing only an edge are bond-connected
    spec = cl.LatticeSpec(6, 6, 64)
    comps = cl.decompose_components({(2, 2, 2), (3, 3, 2)}, spec)
    assert len(comps) == 1
    comps = cl.decompose_components({(2, 2, 2), (3, 3, 3)}, spec)  # corner contact only
    assert len(comps) == 2


def test_flat_interface(spec):
    config = flat_interface_config(spec, z0=2)
    data = cl.extract_interface(config)
    assert len(data.interface) == 16
    assert cl.weight(data.interface) == 0
    assert len(data.components) == 1
    ceilings, walls, hf = cl.ceilings_walls_heights(data.interface, spec)
    assert len(ceilings) == 1 and not walls
    assert (hf.heights == 1).all()
    assert len(hf.rigidity) == 16


def test_unit_bump_fixture(spec):
    config = bump_config(spec, z0=2, cell=(1, 1))
    data = cl.extract_interface(config)
    assert len(data.interface) == 16 + 4
    assert cl.weight(data.interface) == 4
    ceilings, walls, hf = cl.ceilings_walls_heights(data.interface, spec)
    assert len(ceilings) == 2
    assert sorted(len(c) for c in ceilings) == [1, 15]
    assert len(walls) == 1 and len(walls[0]) == 4
    assert len(hf.rigidity) == 15
    assert hf.heights[1, 1] == 2
    assert not cl.is_winding(walls[0], spec)


def test_weight_projection_collision():
    # two stacked horizontal plaquettes in one column weigh 2 - 1
    assert cl.weight({("h", 0, 0, 1), ("h", 0, 0, 3)}) == 1
    assert cl.weight(set()) == 0


def test_winding_stripe(spec):
    config = flat_interface_config(spec, z0=2)
    patch = scrambled_plane(spec, 0)
    for x in range(4):
        for y in (1, 2):
            config.spins[2, x, y] = (patch[x, y] + 16) % 64
    data = cl.extract_interface(config)
    _, walls, _ = cl.ceilings_walls_heights(data.interface, spec)
    assert len(walls) == 2
    for wall in walls:
        assert cl.is_winding(wall, spec)
        assert len(wall) >= spec.n


def _sampled_configs(n_configs, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n_configs):
        q = int(rng.choice([16, 64]))
        spec = cl.LatticeSpec(4, 4, q)
        beta = float(rng.uniform(0.3, 1.2 * np.log(q) / 3))
        rep = cl.run_chain(spec, cl.ChainParams(beta=beta, sweeps=60, seed=1000 + i,
                                                thinning=60))
        out.append(rep.final)
    return out


def test_sampled_invariants():
    # existence of a separating interface, pure-disordered side of every
    # plaquette, nonnegative weight, pipeline determinism
    for config in _sampled_configs(60):
        spec = config.spec
        data = cl.extract_interface(config)
        assert any(c.kind == "interface3d" for c in data.cube_components)
        assert len(data.components) >= 1
        assert cl.weight(data.interface) >= 0
        counts = cl.cube_order_counts(config)
        n, l = spec.n, spec.l
        for kind, x, y, z in data.interface:
            if kind == "h":
                lo = counts[z - 1, x, y] if z >= 1 else 0
                hi = counts[z, x, y] if z <= l else 12
                assert lo == 0 or hi == 0
            elif kind == "yz":
                assert counts[z, (x - 1) % n, y] == 0 or counts[z, x, y] == 0
            else:
                assert counts[z, x, (y - 1) % n] == 0 or counts[z, x, y] == 0
        again = cl.extract_interface(config)
        assert again.interface == data.interface


def test_w_zero_iff_single_flat_ceiling():
    for config in _sampled_configs(25, seed=3):
        data = cl.extract_interface(config)
        ceilings, walls, _ = cl.ceilings_walls_heights(data.interface, config.spec)
        flat = len(ceilings) == 1 and not walls and len(data.components) == 1
        assert (cl.weight(data.interface) == 0) == flat


def test_height_consistency():
    for config in _sampled_configs(20, seed=7):
        data = cl.extract_interface(config)
        _, _, hf = cl.ceilings_walls_heights(data.interface, config.spec)
        for x in range(config.spec.n):
            for y in range(config.spec.n):
                h = int(hf.heights[x, y])
                if h >= 0:
                    over = [p for p in data.interface if p[0] == "h"
                            and p[1] == x and p[2] == y]
                    assert over == [("h", x, y, h)]
        assert all(len(c) <= len(hf.rigidity) for c in hf.components)
