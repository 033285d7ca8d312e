import numpy as np
import pytest

import clocklab as cl
from clocklab.sampler import _sweep_kernel, state_histogram


def test_params_validation():
    with pytest.raises(cl.ParamError):
        cl.ChainParams(beta=-1.0, sweeps=10)
    with pytest.raises(cl.ParamError):
        cl.ChainParams(beta=1.0, sweeps=5, burn_in=5)
    with pytest.raises(cl.ParamError):
        cl.ChainParams(beta=1.0, sweeps=5, thinning=0)


def test_beta_zero_accepts_everything():
    spec = cl.LatticeSpec(4, 2, 8)
    rep = cl.run_chain(spec, cl.ChainParams(beta=0.0, sweeps=200, seed=1, thinning=200))
    assert rep.acceptance_rate == 1.0


def test_sweep_touches_only_free_layers():
    spec = cl.LatticeSpec(4, 3, 16)
    config = cl.make_config(spec, s=2, interior=2)
    out, accepted = cl.metropolis_sweep(config, beta=0.0, seed=9)
    assert np.array_equal(out.spins[0], config.spins[0])
    assert np.array_equal(out.spins[-1], config.spins[-1])
    assert not np.array_equal(out.spins[1:-1], config.spins[1:-1])
    assert accepted == spec.n * spec.n * spec.l


def test_deterministic_given_seed():
    spec = cl.LatticeSpec(4, 2, 16)
    params = cl.ChainParams(beta=0.8, sweeps=500, burn_in=100, seed=77, thinning=25)
    r1 = cl.run_chain(spec, params)
    r2 = cl.run_chain(spec, params)
    assert r1.energy == r2.energy
    assert r1.ordered_fraction == r2.ordered_fraction
    assert np.array_equal(r1.final.spins, r2.final.spins)


def test_cold_start_stays_at_minimum():
    spec = cl.LatticeSpec(4, 2, 8)
    start = cl.SpinConfig(spec, np.full((4, 4, 4), 3, dtype=np.int32))
    e0 = cl.total_energy(start)
    rep = cl.run_chain(spec, cl.ChainParams(beta=20.0, sweeps=100, seed=5, thinning=10),
                       start=start)
    assert all(e == e0 for e in rep.energy)


def test_incremental_energy_bookkeeping():
    # accumulated per-sweep deltas equal a full recount every 1000 sweeps
    spec = cl.LatticeSpec(4, 2, 16)
    config = cl.make_config(spec, s=0)
    spins = config.spins.astype(np.int64)
    energy = cl.total_energy(config)
    for sweep in range(1, 5001):
        _, dh = _sweep_kernel(spins, np.int64(16), 0.9, np.uint64(123), np.uint64(sweep))
        energy += dh
        if sweep % 1000 == 0:
            assert energy == cl.total_energy(cl.SpinConfig(spec, spins.astype(np.int32)))


def test_ordered_fraction_fixture():
    # scrambled bottom under a constant interior: 8 horizontal + 3 vertical
    # disordered bonds out of 32 when the constant matches s_00 = 0
    spec = cl.LatticeSpec(2, 1, 64)
    config = cl.make_config(spec, s=0, interior=0)
    assert cl.ordered_fraction(config) == cl.ordered_fraction(config)
    from fractions import Fraction

    assert cl.ordered_fraction(config) == Fraction(21, 32)
    assert cl.ordered_fraction(cl.SpinConfig(spec, np.full((3, 2, 2), 9, np.int32))) == 1


def test_single_bond_flip_changes_fraction_by_one_unit():
    from fractions import Fraction

    spec = cl.LatticeSpec(4, 2, 64)
    interior = np.zeros((2, 4, 4), dtype=np.int32)
    interior[1, 1, 1] = 3          # z=2 site at distance 2 from its z=3 neighbor... build below
    config = cl.make_config(spec, s=0, interior=0)
    config.spins[2, 1, 1] = 2      # 5 incident bonds disordered, vertical up included
    f0 = cl.ordered_fraction(config)
    config.spins[2, 1, 1] = 1      # all 6 incident bonds ordered again
    f1 = cl.ordered_fraction(config)
    assert f1 - f0 == Fraction(6, spec.n_bonds)


def test_exact_distribution_uniform_at_beta_zero():
    spec = cl.LatticeSpec(2, 1, 4)
    states, probs = cl.exact_distribution(spec, beta=0.0)
    assert len(states) == 256
    assert np.allclose(probs, 1 / 256)
    assert abs(probs.sum() - 1.0) < 1e-12


def test_exact_distribution_argmax_is_max_ordered():
    spec = cl.LatticeSpec(2, 1, 4)
    states, probs = cl.exact_distribution(spec, beta=3.0)
    assert abs(probs.sum() - 1.0) < 1e-12
    best = states[int(np.argmax(probs))]
    config = cl.make_config(spec, s=0)
    energies = []
    for assign in states:
        config.spins[1:-1] = np.asarray(assign, dtype=np.int32).reshape(1, 2, 2)
        energies.append(cl.total_energy(config))
    config.spins[1:-1] = np.asarray(best, dtype=np.int32).reshape(1, 2, 2)
    assert cl.total_energy(config) == min(energies)


def test_exact_distribution_guard():
    with pytest.raises(cl.EnumerationError):
        cl.exact_distribution(cl.LatticeSpec(4, 4, 16), beta=1.0)


def test_global_rotation_changes_probability():
    # rotating only the free layer changes the weight because the frozen
    # boundary does not rotate along
    spec = cl.LatticeSpec(2, 1, 4)
    config = cl.make_config(spec, s=0, interior=0)
    e0 = cl.total_energy(config)
    config.spins[1:-1] = (config.spins[1:-1] + 2) % 4
    assert cl.total_energy(config) != e0


def test_sampler_matches_oracle_per_state():
    # |empirical - exact| <= 3 sqrt(exact / n) for every state, seeded run
    spec = cl.LatticeSpec(2, 1, 4)
    beta = 0.7
    _, probs = cl.exact_distribution(spec, beta=beta)
    n_samples = 150_000
    counts = state_histogram(spec, cl.ChainParams(beta=beta, sweeps=n_samples, seed=2024))
    emp = counts / counts.sum()
    tol = 3 * np.sqrt(probs / n_samples)
    assert (np.abs(emp - probs) <= tol).all()


def test_frozen_boundary_never_changes():
    spec = cl.LatticeSpec(4, 2, 32)
    config = cl.make_config(spec, s=4)
    rep = cl.run_chain(spec, cl.ChainParams(beta=0.5, sweeps=300, seed=8, thinning=30),
                       start=config)
    assert np.array_equal(rep.final.spins[0], config.spins[0])
    assert np.array_equal(rep.final.spins[-1], config.spins[-1])
