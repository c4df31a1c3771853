import numpy as np
import pytest
import scipy.sparse as sp

from edspin.fock import SubspaceKind, enumerate_sector
from edspin.hamiltonians import ModelSpec, build, coupling_matrix
from edspin.lattice import grid_graph, path_graph, star_graph
from edspin.operators import heisenberg_bond, ladder_ops, total_spin_squared
from edspin.spectra import (MixedMultipletError, SolverError, dense_eigensolve,
                            ground_space, lanczos_ground, total_spin_of)


def test_dense_examples():
    vals, _ = dense_eigensolve(np.eye(3))
    assert np.allclose(vals, [1, 1, 1])
    vals, _ = dense_eigensolve(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    assert np.allclose(vals, [-1.0, 1.0])
    basis = enumerate_sector(path_graph(2), SubspaceKind.single_occupancy())
    vals, _ = dense_eigensolve(heisenberg_bond(basis, 0, 1))
    assert np.allclose(vals, [-0.75, 0.25, 0.25, 0.25])
    with pytest.raises(SolverError):
        dense_eigensolve(np.eye(10), threshold=5)


def test_lanczos_examples():
    d = sp.diags(np.arange(12.0))
    vals, vecs = lanczos_ground(d, k=1, seed=1)
    assert abs(vals[0]) < 1e-10
    h = build(ModelSpec("mlm", star_graph(3)), 0)
    dense_vals, _ = dense_eigensolve(h)
    lan_vals, lan_vecs = lanczos_ground(h, k=2, seed=5)
    assert abs(lan_vals[0] - dense_vals[0]) < 1e-8
    # residual bound honored
    r = np.linalg.norm(h.matrix @ lan_vecs[:, 0] - lan_vals[0] * lan_vecs[:, 0])
    assert r < 1e-7


def test_lanczos_seed_invariance():
    h = build(ModelSpec("mlm", star_graph(3)), 0)
    v1, _ = lanczos_ground(h, k=1, seed=11)
    v2, _ = lanczos_ground(h, k=1, seed=99)
    assert abs(v1[0] - v2[0]) < 1e-9


def test_lanczos_deflation_finds_multiplicity():
    d = sp.diags(np.array([0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0]))
    vals, vecs = lanczos_ground(d, k=4, seed=2)
    assert np.allclose(vals[:3], 0.0, atol=1e-9)
    assert vals[3] > 0.5
    gram = vecs.T @ vecs
    assert np.abs(gram - np.eye(4)).max() < 1e-8


def test_lanczos_agrees_with_dense_on_random_matrices():
    rng = np.random.default_rng(7)
    for n in (30, 100, 300):
        a = rng.standard_normal((n, n))
        h = sp.csr_matrix((a + a.T) / 2)
        dvals = np.linalg.eigvalsh(h.toarray())
        lvals, _ = lanczos_ground(h, k=1, seed=3)
        assert abs(lvals[0] - dvals[0]) < 1e-8


def test_lanczos_nonconvergence_reports_residual():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((200, 200))
    h = sp.csr_matrix((a + a.T) / 2)
    with pytest.raises(SolverError) as err:
        lanczos_ground(h, k=1, seed=1, max_iter=3, max_restarts=1)
    assert err.value.residual is not None and err.value.residual > 0


def test_ground_space_examples():
    basis = enumerate_sector(path_graph(2), SubspaceKind.single_occupancy())
    gs = ground_space(heisenberg_bond(basis, 0, 1))
    assert gs.multiplicity == 1 and abs(gs.energy + 0.75) < 1e-12
    assert gs.gap > 0.9
    # whole-space runs count the full multiplet
    spec = ModelSpec("mlm", star_graph(3))
    gs = ground_space(build(spec, None))
    assert gs.multiplicity == 3 and abs(gs.energy + 1.25) < 1e-10
    gsq = grid_graph(2, 2)
    nt = ModelSpec("hubbard_nt", gsq, t=coupling_matrix(gsq, 1.0, "nn"))
    gs = ground_space(build(nt, None))
    assert gs.multiplicity == 4
    assert all(r < 1e-8 for r in gs.residuals)
    q = gs.vectors
    assert np.abs(q.T @ q - np.eye(4)).max() < 1e-10


def test_total_spin_of():
    basis = enumerate_sector(path_graph(2), SubspaceKind.single_occupancy())
    s2 = total_spin_squared(basis)
    vals, vecs = dense_eigensolve(heisenberg_bond(basis, 0, 1))
    twice_s, res = total_spin_of(vecs[:, 0], s2)
    assert twice_s == 0 and res < 1e-10
    twice_s, _ = total_spin_of(vecs[:, -1], s2)
    assert twice_s == 2
    mixed = (vecs[:, 0] + vecs[:, -1]) / np.sqrt(2)
    with pytest.raises(MixedMultipletError):
        total_spin_of(mixed, s2)


def test_cross_sector_energy_equality_and_ladder_closure():
    spec = ModelSpec("mlm", star_graph(3))
    solved = {}
    for tm in spec.sector_values():
        h = build(spec, tm / 2)
        gs = ground_space(h)
        solved[tm] = (spec.basis(tm / 2), h, gs)
    e0 = min(v[2].energy for v in solved.values())
    ground_tms = [tm for tm, v in solved.items()
                  if abs(v[2].energy - e0) < 1e-8 * max(1, abs(e0))]
    assert ground_tms == [-2, 0, 2]
    spread = max(solved[tm][2].energy for tm in ground_tms) - e0
    assert spread <= 1e-8 * max(1.0, abs(e0))
    for tm in ground_tms:
        if tm + 2 not in ground_tms:
            continue
        basis, h, gs = solved[tm]
        basis_up, h_up, _ = solved[tm + 2]
        splus = ladder_ops(basis, basis_up).matrix
        image = splus @ gs.vectors[:, 0]
        resid = np.linalg.norm(h_up.matrix @ image - e0 * image)
        assert resid <= 1e-7 * np.linalg.norm(image)
