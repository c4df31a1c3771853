import json

import numpy as np
import pytest

from edspin.hamiltonians import ModelSpec, coupling_matrix
from edspin.lattice import LatticeFamily, grid_graph, path_graph, star_graph
from edspin.verify import (ValidationFailure, constancy_check,
                           cutoff_convergence, isomorphism_invariance,
                           magnetic_order_scan, predicted_twice_spin,
                           verify_kondo, verify_mlm_class, verify_nesting_pair,
                           verify_nt_class, verify_stability_pair)


def nn(g):
    return coupling_matrix(g, 1.0, "nn")


def test_verify_mlm_star():
    report = verify_mlm_class(ModelSpec("mlm", star_graph(3)))
    assert report.verdict == "pass"
    assert abs(report.e0 + 1.25) < 1e-9
    assert report.degeneracy == 3
    assert report.twice_s_computed == 2 and report.twice_s_predicted == 2
    for sector in report.sectors:
        assert sector.ergodicity.verdict == "ergodic"
        if abs(sector.e0 - report.e0) < 1e-8:
            assert sector.strict_margin > 0
            assert sector.multiplicity == 1


def test_verify_heisenberg_chain():
    g = path_graph(4)
    report = verify_mlm_class(ModelSpec("heisenberg", g, j=nn(g)))
    assert report.verdict == "pass"
    assert report.twice_s_computed == 0 and report.degeneracy == 1


def test_verify_hubbard_star():
    g = star_graph(3)
    report = verify_mlm_class(ModelSpec("hubbard", g, t=nn(g), u=4.0 * np.eye(4)))
    assert report.verdict == "consequence-verified-pass"
    assert report.twice_s_computed == 2 and report.degeneracy == 3
    for sector in report.sectors:
        assert sector.ergodicity.verdict == "consequence-verified"


def test_verify_holstein_hubbard_notes_skipped_cone():
    g = path_graph(2)
    spec = ModelSpec("holstein_hubbard", g, t=nn(g), u=4.0 * np.eye(2),
                     g_ep=0.5 * np.eye(2), omega=1.0, n_max=4)
    report = verify_mlm_class(spec)
    assert report.ok
    assert report.twice_s_computed == 0
    assert all(s.note == "cone-not-defined-under-truncation" for s in report.sectors)
    assert all(s.ergodicity is None for s in report.sectors)


def test_verify_nt_square_and_path_counterexample():
    gsq = grid_graph(2, 2)
    report = verify_nt_class(ModelSpec("hubbard_nt", gsq, t=nn(gsq)))
    assert report.verdict == "pass"
    assert report.twice_s_computed == 3 and report.degeneracy == 4
    g4 = path_graph(4)
    with pytest.raises(ValidationFailure) as err:
        verify_nt_class(ModelSpec("hubbard_nt", g4, t=nn(g4)))
    assert "configuration-graph-connected" in str(err.value)


def test_verify_kondo_signs():
    g2 = path_graph(2)
    report = verify_kondo(ModelSpec("kondo", g2, t=nn(g2), j_kondo=1.0))
    assert report.ok and report.twice_s_computed == 0 and report.degeneracy == 1
    star = star_graph(3)
    report = verify_kondo(ModelSpec("kondo", star, t=nn(star), j_kondo=-1.0))
    assert report.ok and report.twice_s_computed == 4 and report.degeneracy == 5
    report = verify_kondo(ModelSpec("kondo", g2, t=nn(g2), j_kondo=-1.0))
    assert report.ok and report.twice_s_computed == 0


def test_report_serialization_round_trip():
    report = verify_mlm_class(ModelSpec("mlm", path_graph(2)))
    blob = json.dumps(report.to_dict())
    parsed = json.loads(blob)
    assert parsed["verdict"] == "pass"
    assert parsed["global"]["S_computed"] == parsed["global"]["S_predicted"]
    assert len(parsed["sectors"]) == 3


def test_stability_pairs():
    star = star_graph(3)
    pa = ModelSpec("hubbard", star, t=nn(star), u=4.0 * np.eye(4))
    r = verify_stability_pair(pa, ModelSpec("mlm", star))
    assert r.ok and r.twice_s_a == r.twice_s_b == 2 and r.overlap > 0
    g2 = path_graph(2)
    ph = ModelSpec("holstein_hubbard", g2, t=nn(g2), u=4.0 * np.eye(2),
                   g_ep=0.5 * np.eye(2), omega=1.0, n_max=6)
    bare = ModelSpec("hubbard", g2, t=nn(g2), u=4.0 * np.eye(2))
    r = verify_stability_pair(ph, bare)
    assert r.ok and r.overlap > 0
    with pytest.raises(ValueError, match="unsupported"):
        verify_stability_pair(ModelSpec("mlm", star), ModelSpec("mlm", star))


def test_nesting_pairs():
    small, big = path_graph(2), path_graph(4)
    for model in ("mlm", "hubbard", "hubbard_nt"):
        assert verify_nesting_pair(model, small, big).ok


def test_constancy_across_couplings():
    g = path_graph(4)
    j_nn = nn(g)
    j_next = nn(g)
    j_next[0, 3] = j_next[3, 0] = 0.5     # extra opposite-sublattice link
    j_mlm = coupling_matrix(g, 1.0, "complete_bipartite")
    specs = [ModelSpec("heisenberg", g, j=j) for j in (j_nn, j_next, j_mlm)]
    assert constancy_check(specs)


def test_magnetic_order_scan_star():
    fam = LatticeFamily("star")
    report = magnetic_order_scan(
        fam, lambda g: ModelSpec("heisenberg", g, j=nn(g)), range(2, 5))
    assert report.ok
    assert [r.twice_s_computed for r in report.rows] == [2, 4, 6]
    assert all(not r.counting_only for r in report.rows)


def test_magnetic_order_scan_flags_large_members():
    fam = LatticeFamily("star")
    report = magnetic_order_scan(
        fam, lambda g: ModelSpec("heisenberg", g, j=nn(g)), range(2, 5),
        dim_limit=10)
    assert any(r.counting_only for r in report.rows)
    assert all(r.twice_s_computed is None for r in report.rows if r.counting_only)


def test_isomorphism_invariance():
    star = star_graph(3)
    r = isomorphism_invariance(ModelSpec("mlm", star), (0, 2, 1, 3))
    assert r.ok and r.e0_delta < 1e-9
    g4 = path_graph(4)
    r = isomorphism_invariance(
        ModelSpec("hubbard", g4, t=nn(g4), u=4.0 * np.eye(4)), (1, 2, 3, 0))
    assert r.ok
    gsq = grid_graph(2, 2)
    rng = np.random.default_rng(4)
    perm = tuple(int(x) for x in rng.permutation(4))
    r = isomorphism_invariance(ModelSpec("hubbard_nt", gsq, t=nn(gsq)), perm)
    assert r.ok


def test_cutoff_convergence():
    g = path_graph(2)
    spec = ModelSpec("holstein_hubbard", g, t=nn(g), u=4.0 * np.eye(2),
                     g_ep=0.5 * np.eye(2), omega=1.0)
    sweep = cutoff_convergence(spec, [2, 4, 6])
    spins = {ts for _, _, ts in sweep}
    assert spins == {0}
    e0s = [e for _, e, _ in sweep]
    assert abs(e0s[1] - e0s[2]) < 1e-6


def test_predicted_spins():
    assert predicted_twice_spin(ModelSpec("mlm", star_graph(3))) == 2
    gsq = grid_graph(2, 2)
    assert predicted_twice_spin(ModelSpec("hubbard_nt", gsq, t=nn(gsq))) == 3
    g2 = path_graph(2)
    assert predicted_twice_spin(ModelSpec("kondo", g2, t=nn(g2), j_kondo=1.0)) == 0
    star = star_graph(3)
    assert predicted_twice_spin(ModelSpec("kondo", star, t=nn(star), j_kondo=-1.0)) == 4
