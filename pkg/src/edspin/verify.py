"""Theorem-level harness: build, validate, diagonalize, cone checks, report.

Each verify entry point asserts the exact finite-volume statement for its
model class: predicted ground-state total spin, multiplet degeneracy,
per-sector uniqueness and strict cone positivity, and per-sector semigroup
ergodicity.  Everything is checked at finite volume with pinned tolerances;
nothing is fitted or extrapolated.
"""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import cones as cn
from . import operators as ops
from .fock import SectorBasis, SubspaceKind, enumerate_sector
from .hamiltonians import (ModelSpec, ValidationReport, build, kondo_graphs,
                           validate)
from .lattice import Graph, LatticeFamily, relabel, sublattice_imbalance
from .spectra import GroundSpace, ground_space, total_spin_of

ENERGY_EQUALITY_RTOL = 1e-8
LADDER_CLOSURE_RTOL = 1e-7
LADDER_DIM_LIMIT = 200_000
SCAN_DIM_LIMIT = 100_000


class ValidationFailure(RuntimeError):
    """A structural condition failed; carries the validation report."""

    def __init__(self, report: ValidationReport):
        witness = "; ".join(f"{c.name}: {c.witness or 'failed'}" for c in report.failed())
        super().__init__(f"validation failed ({witness})")
        self.report = report


@dataclass(frozen=True)
class SectorReport:
    twice_m: int
    dim: int
    e0: float
    multiplicity: int
    gap: float
    ergodicity: cn.ErgodicityVerdict | None
    strict_margin: float | None
    twice_s: int | None
    note: str | None = None

    def to_dict(self) -> dict:
        d = {"M": self.twice_m / 2, "dim": self.dim, "E0": self.e0,
             "multiplicity": self.multiplicity, "gap": self.gap}
        if self.ergodicity is not None:
            d["ergodicity"] = self.ergodicity.to_dict()
        if self.strict_margin is not None:
            d["strict_positivity_margin"] = self.strict_margin
        if self.twice_s is not None:
            d["S"] = self.twice_s / 2
        if self.note:
            d["note"] = self.note
        return d


@dataclass(frozen=True)
class GroundStateReport:
    model: dict
    sectors: tuple[SectorReport, ...]
    e0: float
    degeneracy: int
    twice_s_computed: int | None
    twice_s_predicted: int | None
    verdict: str                      # pass | consequence-verified-pass | fail
    failures: tuple[str, ...]
    tolerances: dict
    validation: ValidationReport
    wall_time: float
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.verdict in ("pass", "consequence-verified-pass")

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "sectors": [s.to_dict() for s in self.sectors],
            "global": {
                "E0": self.e0,
                "degeneracy": self.degeneracy,
                "S_computed": None if self.twice_s_computed is None else self.twice_s_computed / 2,
                "S_predicted": None if self.twice_s_predicted is None else self.twice_s_predicted / 2,
            },
            "verdict": self.verdict,
            "failures": list(self.failures),
            "tolerances": self.tolerances,
            "validation": self.validation.to_dict(),
            "timings": {"wall_time_s": self.wall_time},
            "warnings": list(self.warnings),
        }


def _model_echo(spec: ModelSpec) -> dict:
    def enc(m):
        return None if m is None else np.asarray(m).tolist()
    return {"model": spec.model,
            "vertices": spec.graph.vertex_count,
            "edges": [list(e) for e in spec.graph.edges],
            "t": enc(spec.t), "U": enc(spec.u), "J": enc(spec.j),
            "J_kondo": spec.j_kondo, "g": enc(spec.g_ep),
            "omega": spec.omega, "n_max": spec.n_max}


def _sector_cone(spec: ModelSpec, basis: SectorBasis):
    """The cone attached to a sector, or (None, note) when truncation forbids one."""
    if spec.has_phonons:
        return None, "cone-not-defined-under-truncation"
    if spec.model in ("mlm", "heisenberg"):
        return cn.mlm_cone(basis), None
    if spec.model == "hubbard":
        return cn.hubbard_cone(basis), None
    if spec.model == "hubbard_nt":
        return cn.nt_cone(basis), None
    if spec.model == "kondo":
        sign = "af" if (spec.j_kondo or 0) > 0 else "f"
        return cn.kondo_cone(basis, sign), None
    return None, "cone-not-defined-under-truncation"


def predicted_twice_spin(spec: ModelSpec) -> int:
    g = spec.graph
    if spec.model in ("mlm", "heisenberg", "hubbard", "holstein_hubbard"):
        return sublattice_imbalance(g)
    if spec.model in ("hubbard_nt", "holstein_nt"):
        return g.vertex_count - 1
    # kondo classes: doubled-graph imbalance halved
    g_af, g_f = kondo_graphs(g)
    if (spec.j_kondo or 0) > 0:
        return sublattice_imbalance(g_af)
    return sublattice_imbalance(g_f)


def _solve_all_sectors(spec: ModelSpec, seed: int):
    out = []
    for tm in spec.sector_values():
        basis = spec.basis(tm / 2)
        h = build(spec, tm / 2)
        gs = ground_space(h.matrix, seed=seed)
        out.append((tm, basis, h, gs))
    return out


def _ladder_closure(spec: ModelSpec, solved, e0: float, failures: list[str]) -> None:
    by_tm = {tm: (basis, h, gs) for tm, basis, h, gs in solved}
    for tm, (basis, h, gs) in sorted(by_tm.items()):
        if abs(gs.energy - e0) > ENERGY_EQUALITY_RTOL * max(1.0, abs(e0)):
            continue
        if tm + 2 not in by_tm:
            continue
        basis_up, h_up, gs_up = by_tm[tm + 2]
        if abs(gs_up.energy - e0) > ENERGY_EQUALITY_RTOL * max(1.0, abs(e0)):
            continue
        if basis.dim + basis_up.dim > LADDER_DIM_LIMIT:
            continue
        splus = ops.ladder_ops(basis, basis_up)
        psi = gs.vectors[:, 0]
        image = splus.matrix @ psi
        nrm = np.linalg.norm(image)
        if nrm < 1e-12:
            continue
        resid = np.linalg.norm(h_up.matrix @ image - e0 * image)
        if resid > LADDER_CLOSURE_RTOL * nrm:
            failures.append(
                f"ladder closure violated from sector M={tm}/2 (residual {resid:.3e})")


def _report(spec: ModelSpec, solved, validation: ValidationReport,
            expected_twice_s: int, start: float, seed: int) -> GroundStateReport:
    failures: list[str] = []
    e0 = min(gs.energy for _, _, _, gs in solved)
    degeneracy = 0
    twice_s_seen: set[int] = set()
    sector_reports = []
    consequence_mode = False
    for tm, basis, h, gs in solved:
        ground_here = abs(gs.energy - e0) <= ENERGY_EQUALITY_RTOL * max(1.0, abs(e0))
        cone, note = _sector_cone(spec, basis)
        erg = None
        strict_margin = None
        twice_s = None
        if ground_here:
            degeneracy += gs.multiplicity
            s2 = ops.total_spin_squared(basis)
            try:
                twice_s, _ = total_spin_of(gs.vectors[:, 0], s2.matrix)
                twice_s_seen.add(twice_s)
            except ValueError as exc:
                failures.append(f"sector M={tm}/2: {exc}")
            if gs.multiplicity != 1:
                failures.append(f"sector M={tm}/2: ground state degenerate "
                                f"within the sector (multiplicity {gs.multiplicity})")
        if cone is not None:
            erg = cn.ergodicity(h.matrix, cone)
            if isinstance(cone, cn.PSDMatrixCone):
                consequence_mode = True
            if not erg.ok:
                failures.append(f"sector M={tm}/2: ergodicity verdict {erg.verdict}"
                                f" ({erg.witness})")
            if ground_here:
                psi = cn.gauge_fix(gs.vectors[:, 0], cone)
                strict, strict_margin = cn.strict_positivity(psi, cone)
                if not strict:
                    failures.append(f"sector M={tm}/2: ground vector not strictly "
                                    f"positive (margin {strict_margin:.3e})")
        sector_reports.append(SectorReport(tm, basis.dim, gs.energy, gs.multiplicity,
                                           gs.gap, erg, strict_margin, twice_s, note))
    if len(twice_s_seen) > 1:
        failures.append(f"ground sectors disagree on total spin: {sorted(twice_s_seen)}")
    twice_s = twice_s_seen.pop() if len(twice_s_seen) == 1 else None
    if twice_s is not None and twice_s != expected_twice_s:
        failures.append(f"total spin {twice_s / 2} differs from the predicted "
                        f"{expected_twice_s / 2}")
    if twice_s is not None and degeneracy != twice_s + 1:
        failures.append(f"degeneracy {degeneracy} is not 2S+1 = {twice_s + 1}")
    if degeneracy != expected_twice_s + 1:
        failures.append(f"degeneracy {degeneracy} differs from the predicted "
                        f"{expected_twice_s + 1}")
    _ladder_closure(spec, solved, e0, failures)
    if failures:
        verdict = "fail"
    else:
        verdict = "consequence-verified-pass" if consequence_mode else "pass"
    tolerances = {"energy_equality_rtol": ENERGY_EQUALITY_RTOL,
                  "strictness_tol": cn.STRICT_TOL,
                  "ladder_closure_rtol": LADDER_CLOSURE_RTOL,
                  "degeneracy_tol": solved[0][3].tolerance}
    return GroundStateReport(_model_echo(spec), tuple(sector_reports), e0, degeneracy,
                             twice_s, expected_twice_s, verdict, tuple(failures),
                             tolerances, validation, time.perf_counter() - start,
                             tuple(validation.warnings))


def _verify(spec: ModelSpec, seed: int) -> GroundStateReport:
    start = time.perf_counter()
    report = validate(spec)
    if not report.ok:
        raise ValidationFailure(report)
    solved = _solve_all_sectors(spec, seed)
    return _report(spec, solved, report, predicted_twice_spin(spec), start, seed)


def verify_mlm_class(spec: ModelSpec, seed: int = 0) -> GroundStateReport:
    """Half-filled exchange/itinerant class: S = sublattice imbalance / 2."""
    if spec.model not in ("mlm", "heisenberg", "hubbard", "holstein_hubbard"):
        raise ValueError(f"{spec.model!r} is not in the half-filled class")
    return _verify(spec, seed)


def verify_nt_class(spec: ModelSpec, seed: int = 0) -> GroundStateReport:
    """One-hole strong-coupling class: S = (|lattice| - 1) / 2."""
    if spec.model not in ("hubbard_nt", "holstein_nt"):
        raise ValueError(f"{spec.model!r} is not in the one-hole class")
    return _verify(spec, seed)


def verify_kondo(spec: ModelSpec, seed: int = 0) -> GroundStateReport:
    """Localized-spin class: S = 0 for J > 0, doubled imbalance for J < 0.

    Besides the sector cone checks, the conduction-singly-occupied restriction
    of each ground vector is checked strictly positive in the doubled-site
    diagonal cone.
    """
    if spec.model not in ("kondo", "kondo_holstein"):
        raise ValueError(f"{spec.model!r} is not a localized-spin model")
    report = _verify(spec, seed)
    if spec.model != "kondo":
        return report
    sign = "af" if (spec.j_kondo or 0) > 0 else "f"
    failures = list(report.failures)
    for sector in report.sectors:
        if abs(sector.e0 - report.e0) > ENERGY_EQUALITY_RTOL * max(1.0, abs(report.e0)):
            continue
        basis = spec.basis(sector.twice_m / 2)
        h = build(spec, sector.twice_m / 2)
        gs = ground_space(h.matrix, seed=seed)
        idx, cone = cn.kondo_diagonal_restriction(basis, sign)
        projected = gs.vectors[:, 0][idx]
        projected = cn.gauge_fix(projected, cone)
        strict, margin = cn.strict_positivity(projected, cone)
        if not strict:
            failures.append(f"sector M={sector.twice_m}/2: projected vector not "
                            f"strictly positive in the doubled-site cone "
                            f"(margin {margin:.3e})")
    if failures and report.verdict != "fail":
        return GroundStateReport(report.model, report.sectors, report.e0,
                                 report.degeneracy, report.twice_s_computed,
                                 report.twice_s_predicted, "fail", tuple(failures),
                                 report.tolerances, report.validation,
                                 report.wall_time, report.warnings)
    return report


# ---------------------------------------------------------------------------
# stability pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairReport:
    kind: str
    twice_s_a: int
    twice_s_b: int
    overlap: float | None
    nesting: cn.NestingVerdict | None
    verdict: str

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "S_a": self.twice_s_a / 2, "S_b": self.twice_s_b / 2,
             "verdict": self.verdict}
        if self.overlap is not None:
            d["overlap"] = self.overlap
        if self.nesting is not None:
            d["nesting"] = self.nesting.to_dict()
        return d


def _ground_vector(spec: ModelSpec, m, seed: int = 0):
    basis = spec.basis(m)
    h = build(spec, m)
    gs = ground_space(h.matrix, seed=seed)
    s2 = ops.total_spin_squared(basis)
    twice_s, _ = total_spin_of(gs.vectors[:, 0], s2.matrix)
    return basis, gs.vectors[:, 0], twice_s


def _restrict_single_occupancy(basis_full: SectorBasis, basis_single: SectorBasis,
                               psi: np.ndarray) -> np.ndarray:
    out = np.zeros(basis_single.dim, dtype=psi.dtype)
    for j, s in enumerate(basis_single.states):
        i = basis_full.index_of(s)
        if i is not None:
            out[j] = psi[i]
    return out


def _restrict_phonon_vacuum(basis_ph: SectorBasis, psi: np.ndarray) -> np.ndarray:
    step = basis_ph.phonon_dim
    return psi[0::step] if step > 1 else psi


def verify_stability_pair(spec_a: ModelSpec, spec_b: ModelSpec,
                          seed: int = 0) -> PairReport:
    """Equal ground-state total spin plus positive projected overlap for the
    supported projection pairs (itinerant -> exchange, phonon -> bare)."""
    ga, gb = spec_a.graph, spec_b.graph
    if (ga.vertex_count, ga.edges) != (gb.vertex_count, gb.edges):
        raise ValueError("stability pairs must share the lattice")
    pair = (spec_a.model, spec_b.model)
    m0 = 0.0 if spec_a.graph.vertex_count % 2 == 0 else 0.5
    if pair == ("hubbard", "mlm") or pair == ("hubbard", "heisenberg"):
        basis_a, psi_a, sa = _ground_vector(spec_a, m0, seed)
        basis_b, psi_b, sb = _ground_vector(spec_b, m0, seed)
        proj = _restrict_single_occupancy(basis_a, basis_b, psi_a)
        psi_a_fixed = cn.gauge_fix(proj, cn.mlm_cone(basis_b))
        psi_b_fixed = cn.gauge_fix(psi_b, cn.mlm_cone(basis_b))
        overlap = float(np.real(np.vdot(psi_a_fixed, psi_b_fixed)))
    elif pair == ("holstein_hubbard", "hubbard"):
        basis_a, psi_a, sa = _ground_vector(spec_a, m0, seed)
        basis_b, psi_b, sb = _ground_vector(spec_b, m0, seed)
        proj = _restrict_phonon_vacuum(basis_a, psi_a)
        cone = cn.hubbard_cone(basis_b)
        psi_a_fixed = cn.gauge_fix(proj, cone)
        psi_b_fixed = cn.gauge_fix(psi_b, cone)
        overlap = float(np.real(np.vdot(psi_a_fixed, psi_b_fixed)))
    elif pair == ("holstein_nt", "hubbard_nt"):
        basis_a, psi_a, sa = _ground_vector(spec_a, m0 + 0.5, seed)
        basis_b, psi_b, sb = _ground_vector(spec_b, m0 + 0.5, seed)
        proj = _restrict_phonon_vacuum(basis_a, psi_a)
        cone = cn.nt_cone(basis_b)
        psi_a_fixed = cn.gauge_fix(proj, cone)
        psi_b_fixed = cn.gauge_fix(psi_b, cone)
        overlap = float(np.real(np.vdot(psi_a_fixed, psi_b_fixed)))
    else:
        raise ValueError(f"unsupported stability pair {pair}")
    ok = (sa == sb) and overlap > 0
    return PairReport("->".join(pair), sa, sb, overlap, None,
                      "pass" if ok else "fail")


def verify_nesting_pair(model: str, g_small: Graph, g_big: Graph,
                        tol: float = cn.STRICT_TOL) -> PairReport:
    """Cone consistency of the whole-space cones of a nested lattice pair."""
    if model in ("mlm", "heisenberg"):
        kind = SubspaceKind.single_occupancy()
        mk = cn.mlm_cone
    elif model == "hubbard":
        kind = None
        mk = cn.hubbard_cone
    elif model == "hubbard_nt":
        kind = SubspaceKind.one_hole()
        mk = cn.nt_cone
    else:
        raise ValueError(f"no nesting cones for model {model!r}")
    if model == "hubbard":
        basis_small = enumerate_sector(g_small, SubspaceKind.full(g_small.vertex_count))
        basis_big = enumerate_sector(g_big, SubspaceKind.full(g_big.vertex_count))
    else:
        basis_small = enumerate_sector(g_small, kind)
        basis_big = enumerate_sector(g_big, kind)
    verdict = cn.nesting_consistency(mk(basis_small), mk(basis_big), tol)
    return PairReport(f"nesting-{model}", -1, -1, None, verdict,
                      "pass" if verdict.ok else "fail")


# ---------------------------------------------------------------------------
# scans and invariance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    n: int
    size: int
    imbalance: int
    twice_s_predicted: int
    twice_s_computed: int | None
    counting_only: bool

    def to_dict(self) -> dict:
        return {"n": self.n, "size": self.size, "imbalance": self.imbalance,
                "S_predicted": self.twice_s_predicted / 2,
                "S_computed": None if self.twice_s_computed is None
                else self.twice_s_computed / 2,
                "counting_only": self.counting_only}


@dataclass(frozen=True)
class ScanReport:
    family: str
    model: str
    rows: tuple[ScanRow, ...]
    verdict: str

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {"family": self.family, "model": self.model,
                "rows": [r.to_dict() for r in self.rows], "verdict": self.verdict}


def magnetic_order_scan(family: LatticeFamily, make_spec, n_range,
                        dim_limit: int = SCAN_DIM_LIMIT, seed: int = 0) -> ScanReport:
    """Table of exact finite-volume total spins along a lattice family.

    ``make_spec(graph) -> ModelSpec``; members whose largest sector exceeds
    ``dim_limit`` are counted but not diagonalized (flagged).
    """
    rows = []
    ok = True
    model = None
    for n in n_range:
        g = family.member(n)
        spec = make_spec(g)
        model = spec.model
        report = validate(spec)
        if not report.ok:
            raise ValidationFailure(report)
        predicted = predicted_twice_spin(spec)
        largest = max(spec.basis(tm / 2).dim for tm in spec.sector_values())
        if largest > dim_limit:
            rows.append(ScanRow(n, g.vertex_count, sublattice_imbalance(g),
                                predicted, None, True))
            continue
        solved = _solve_all_sectors(spec, seed)
        e0 = min(gs.energy for _, _, _, gs in solved)
        twice_s = None
        for tm, basis, h, gs in solved:
            if abs(gs.energy - e0) <= ENERGY_EQUALITY_RTOL * max(1.0, abs(e0)):
                s2 = ops.total_spin_squared(basis)
                twice_s, _ = total_spin_of(gs.vectors[:, 0], s2.matrix)
                break
        rows.append(ScanRow(n, g.vertex_count, sublattice_imbalance(g),
                            predicted, twice_s, False))
        if twice_s != predicted:
            ok = False
    return ScanReport(family.generator, model or "?", tuple(rows),
                      "pass" if ok else "fail")


@dataclass(frozen=True)
class InvarianceReport:
    e0_delta: float
    degeneracy_match: bool
    spin_match: bool
    verdict: str

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {"E0_delta": self.e0_delta, "degeneracy_match": self.degeneracy_match,
                "spin_match": self.spin_match, "verdict": self.verdict}


def permuted_spec(spec: ModelSpec, perm) -> ModelSpec:
    """The same model on the relabeled graph, couplings transported along."""
    perm = tuple(perm)
    g2 = relabel(spec.graph, perm)
    p = np.zeros((len(perm), len(perm)))
    for old, new in enumerate(perm):
        p[new, old] = 1.0

    def move(m):
        return None if m is None else p @ m @ p.T

    return ModelSpec(spec.model, g2, move(spec.t), move(spec.u), move(spec.j),
                     spec.j_kondo, move(spec.g_ep), spec.omega, spec.n_max)


def isomorphism_invariance(spec: ModelSpec, perm, seed: int = 0,
                           tol: float = 1e-9) -> InvarianceReport:
    """Ground energy, degeneracy and total spin agree under relabeling."""
    spec2 = permuted_spec(spec, perm)
    out = []
    for sp_ in (spec, spec2):
        solved = _solve_all_sectors(sp_, seed)
        e0 = min(gs.energy for _, _, _, gs in solved)
        deg = sum(gs.multiplicity for _, _, _, gs in solved
                  if abs(gs.energy - e0) <= ENERGY_EQUALITY_RTOL * max(1.0, abs(e0)))
        twice_s = None
        for tm, basis, h, gs in solved:
            if abs(gs.energy - e0) <= ENERGY_EQUALITY_RTOL * max(1.0, abs(e0)):
                s2 = ops.total_spin_squared(basis)
                twice_s, _ = total_spin_of(gs.vectors[:, 0], s2.matrix)
                break
        out.append((e0, deg, twice_s))
    (e0a, dega, sa), (e0b, degb, sb) = out
    delta = abs(e0a - e0b)
    verdict = "pass" if (delta <= tol and dega == degb and sa == sb) else "fail"
    return InvarianceReport(delta, dega == degb, sa == sb, verdict)


def constancy_check(specs: list[ModelSpec], seed: int = 0) -> bool:
    """All specs (same lattice, same condition set) share the ground-state spin."""
    spins = set()
    for spec in specs:
        solved = _solve_all_sectors(spec, seed)
        e0 = min(gs.energy for _, _, _, gs in solved)
        for tm, basis, h, gs in solved:
            if abs(gs.energy - e0) <= ENERGY_EQUALITY_RTOL * max(1.0, abs(e0)):
                s2 = ops.total_spin_squared(basis)
                twice_s, _ = total_spin_of(gs.vectors[:, 0], s2.matrix)
                spins.add(twice_s)
                break
    return len(spins) == 1


def cutoff_convergence(spec: ModelSpec, n_maxes, seed: int = 0):
    """Ground energy and total spin at a sweep of phonon cutoffs."""
    if not spec.has_phonons:
        raise ValueError("cutoff sweep applies to phonon models only")
    out = []
    for n_max in n_maxes:
        sp_ = ModelSpec(spec.model, spec.graph, spec.t, spec.u, spec.j,
                        spec.j_kondo, spec.g_ep, spec.omega, n_max)
        solved = _solve_all_sectors(sp_, seed)
        e0 = min(gs.energy for _, _, _, gs in solved)
        twice_s = None
        for tm, basis, h, gs in solved:
            if abs(gs.energy - e0) <= ENERGY_EQUALITY_RTOL * max(1.0, abs(e0)):
                s2 = ops.total_spin_squared(basis)
                twice_s, _ = total_spin_of(gs.vectors[:, 0], s2.matrix)
                break
        out.append((n_max, e0, twice_s))
    return out


def u_limit_comparison(g: Graph, t: np.ndarray, u_value: float) -> float:
    """Largest eigenvalue gap between the finite-U model at one hole and the
    compressed infinite-U model, after removing the constant interaction
    offset carried by the hole."""
    n = g.vertex_count
    u = u_value * np.eye(n)
    worst = 0.0
    spec_nt = ModelSpec("hubbard_nt", g, t=t)
    for tm in spec_nt.sector_values():
        basis_nt = spec_nt.basis(tm / 2)
        h_nt = build(spec_nt, tm / 2)
        kind = SubspaceKind.full(n - 1)
        basis_u = enumerate_sector(g, kind, m=tm / 2)
        h_u = ops.hopping(basis_u, t).matrix + ops.coulomb(basis_u, u).matrix
        vals_u = np.linalg.eigvalsh(h_u.toarray())
        vals_nt = np.linalg.eigvalsh(h_nt.matrix.toarray())
        # interaction value on the no-double-occupancy states: constant u/2 per hole
        shift = 0.5 * u_value
        low = np.sort(vals_u)[: len(vals_nt)] - shift
        worst = max(worst, float(np.abs(low - np.sort(vals_nt)).max()))
    return worst
