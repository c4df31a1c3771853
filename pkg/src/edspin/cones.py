"""Finite-dimensional self-dual cones and the order-preservation checks.

Two kinds of cone occur.  A *diagonal* cone is the nonnegative orthant in a
distinguished signed basis (the |X, Xbar>-type vectors at half filling on the
exchange-coupled models, the one-hole |sigma> vectors, and the doubled-site
analogue for the two-species model).  A *PSD-matrix* cone collects vectors
whose coefficient array over (row set, column set) labels is a positive
semi-definite matrix; it is the half-filled itinerant-model cone.

Both are self-dual.  For diagonal cones positivity preservation of a matrix
is equivalent to entrywise nonnegativity and can be tested exactly; the
semigroup e^{-tH} preserves the cone for every t iff H has nonpositive
off-diagonal entries in the distinguished basis (Metzler form), and is
ergodic iff additionally the off-diagonal support graph is irreducible.  For
PSD-matrix cones map positivity is only sampled; the load-bearing claims
(uniqueness and strict positivity of sector ground vectors) are checked
exactly and reported as consequence-verified.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .fock import (SectorBasis, hubbard_labels, hubbard_sign_table,
                   kondo_doubled_sets, kondo_sign_table, mlm_sign_table,
                   nt_sign_table)
from .operators import SparseOperator, embed_isometry, nesting_projection
from .spectra import ground_space, total_spin_of

STRICT_TOL = 1e-10
SAMPLE_COUNT = 200
SAMPLE_SEED = 7


@dataclass(frozen=True)
class DiagonalCone:
    """Nonnegative-coefficient cone in a distinguished signed basis."""

    signs: np.ndarray
    basis: SectorBasis | None = None
    name: str = "diagonal"

    @property
    def dim(self) -> int:
        return len(self.signs)

    def to_distinguished(self, psi: np.ndarray) -> np.ndarray:
        return self.signs * psi

    def order_unit(self) -> np.ndarray:
        """The uniform vector: every distinguished coefficient equal to one."""
        return self.signs.astype(float).copy()

    def conjugate_matrix(self, a) -> np.ndarray:
        """Matrix of ``a`` in the distinguished basis (diagonal sign flip)."""
        mat = a.matrix if isinstance(a, SparseOperator) else a
        dense = mat.toarray() if hasattr(mat, "toarray") else np.asarray(mat)
        return self.signs[:, None] * dense * self.signs[None, :]


@dataclass(frozen=True)
class PSDMatrixCone:
    """Cone of vectors whose zero-padded coefficient array is PSD."""

    signs: np.ndarray
    row_labels: tuple[int, ...]
    col_labels: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]       # per basis index: (row, col) positions
    basis: SectorBasis | None = None
    name: str = "psd-matrix"
    _diag: tuple[int, ...] = field(default=(), repr=False)

    @property
    def dim(self) -> int:
        return len(self.signs)

    def coefficient_matrix(self, psi: np.ndarray) -> np.ndarray:
        a = np.zeros((len(self.row_labels), len(self.col_labels)), dtype=psi.dtype)
        dist = self.signs * psi
        for i, (r, c) in enumerate(self.pairs):
            a[r, c] = dist[i]
        return a

    def vector_of_matrix(self, a: np.ndarray) -> np.ndarray:
        psi = np.empty(self.dim, dtype=a.dtype)
        for i, (r, c) in enumerate(self.pairs):
            psi[i] = a[r, c]
        return self.signs * psi

    def order_unit(self) -> np.ndarray:
        """Coefficient array equal to the identity on the diagonal labels."""
        a = np.zeros((len(self.row_labels), len(self.col_labels)))
        for r, lbl in enumerate(self.row_labels):
            c = self.col_labels.index(lbl) if lbl in self.col_labels else None
            if c is not None:
                a[r, c] = 1.0
        return self.vector_of_matrix(a)


Cone = DiagonalCone | PSDMatrixCone


def trivial_diagonal_cone(dim: int) -> DiagonalCone:
    return DiagonalCone(np.ones(dim), None, "orthant")


# cone constructors ----------------------------------------------------------

def mlm_cone(basis: SectorBasis, part_b_mask: int | None = None) -> DiagonalCone:
    return DiagonalCone(np.array(mlm_sign_table(basis, part_b_mask), dtype=float),
                        basis, "half-filled-diagonal")


def nt_cone(basis: SectorBasis) -> DiagonalCone:
    return DiagonalCone(np.array(nt_sign_table(basis), dtype=float),
                        basis, "one-hole-diagonal")


def hubbard_cone(basis: SectorBasis) -> PSDMatrixCone:
    labels = hubbard_labels(basis)
    rows = tuple(sorted({x for x, _ in labels}))
    cols = tuple(sorted({y for _, y in labels}))
    ridx = {x: i for i, x in enumerate(rows)}
    cidx = {y: i for i, y in enumerate(cols)}
    pairs = tuple((ridx[x], cidx[y]) for x, y in labels)
    return PSDMatrixCone(np.array(hubbard_sign_table(basis), dtype=float),
                         rows, cols, pairs, basis, "half-filled-psd")


def kondo_cone(basis: SectorBasis, coupling_sign: str) -> PSDMatrixCone:
    n = basis.n_sites
    labels = [kondo_doubled_sets(s, n) for s in basis.states]
    rows = tuple(sorted({u for u, _ in labels}))
    cols = tuple(sorted({v for _, v in labels}))
    ridx = {u: i for i, u in enumerate(rows)}
    cidx = {v: i for i, v in enumerate(cols)}
    pairs = tuple((ridx[u], cidx[v]) for u, v in labels)
    return PSDMatrixCone(np.array(kondo_sign_table(basis, coupling_sign), dtype=float),
                         rows, cols, pairs, basis, f"kondo-psd-{coupling_sign}")


def kondo_diagonal_restriction(basis: SectorBasis, coupling_sign: str
                               ) -> tuple[np.ndarray, DiagonalCone]:
    """Indices of the singly-occupied-conduction states and the diagonal cone
    they span (the doubled-site half-filled cone)."""
    full = (1 << basis.n_sites) - 1
    idx = np.array([i for i, s in enumerate(basis.states)
                    if (s.up | s.dn) == full and not (s.up & s.dn)], dtype=int)
    signs = np.array(kondo_sign_table(basis, coupling_sign), dtype=float)[idx]
    return idx, DiagonalCone(signs, None, f"kondo-diagonal-{coupling_sign}")


# membership and gauges ------------------------------------------------------

def _imag_excess(psi: np.ndarray) -> float:
    return float(np.abs(psi.imag).max()) if np.iscomplexobj(psi) else 0.0


def membership(psi: np.ndarray, cone: Cone, tol: float = STRICT_TOL
               ) -> tuple[bool, float]:
    """(is member, margin); margin is the minimal coefficient or eigenvalue."""
    if psi.shape[0] != cone.dim:
        raise ValueError("dimension mismatch")
    if isinstance(cone, DiagonalCone):
        dist = cone.to_distinguished(psi)
        margin = float(dist.real.min())
        ok = margin >= -tol and _imag_excess(dist) <= tol
        return ok, margin
    a = cone.coefficient_matrix(psi)
    herm_dev = float(np.abs(a - a.conj().T).max())
    margin = float(np.linalg.eigvalsh(0.5 * (a + a.conj().T)).min())
    return (herm_dev <= max(tol, 1e-8) and margin >= -tol), margin


def strict_positivity(psi: np.ndarray, cone: Cone, tol: float = STRICT_TOL
                      ) -> tuple[bool, float]:
    ok, margin = membership(psi, cone, tol)
    return (ok and margin > tol), margin


def gauge_fix(psi: np.ndarray, cone: Cone) -> np.ndarray:
    """Multiply by the unit phase making the order-unit overlap real positive."""
    xi = cone.order_unit()
    overlap = np.vdot(xi, psi)
    if abs(overlap) < 1e-12 * max(1.0, float(np.linalg.norm(psi))):
        raise ValueError("gauge undefined: zero overlap with the order unit")
    return psi * (overlap.conjugate() / abs(overlap))


def modular_conjugation(psi: np.ndarray, cone: Cone) -> np.ndarray:
    """Componentwise conjugation in the distinguished basis (antilinear involution)."""
    if isinstance(cone, DiagonalCone):
        return cone.signs * np.conj(cone.signs * psi)
    return cone.signs * np.conj(cone.signs * psi)


# positivity preservation ----------------------------------------------------

@dataclass(frozen=True)
class PreservationVerdict:
    preserving: bool
    mode: str                      # "exact" or "sampled"
    margin: float
    witness: str | None = None

    def to_dict(self) -> dict:
        d = {"preserving": self.preserving, "mode": self.mode, "margin": self.margin}
        if self.witness:
            d["witness"] = self.witness
        return d


def _sample_psd_members(cone: PSDMatrixCone, count: int, seed: int) -> list[np.ndarray]:
    """Rank-one label outer products plus random mixed-rank PSD arrays."""
    rng = np.random.default_rng(seed)
    nr = len(cone.row_labels)
    out = []
    shared = [lbl for lbl in cone.row_labels if lbl in cone.col_labels]
    cidx = {lbl: i for i, lbl in enumerate(cone.col_labels)}
    for lbl in shared:
        a = np.zeros((nr, len(cone.col_labels)))
        a[cone.row_labels.index(lbl), cidx[lbl]] = 1.0
        out.append(cone.vector_of_matrix(a))
    for _ in range(count):
        rank = int(rng.integers(1, nr + 1))
        gmat = rng.standard_normal((nr, rank))
        out.append(cone.vector_of_matrix(gmat @ gmat.T))
    return out


def positivity_preserving(a, cone: Cone, tol: float = STRICT_TOL,
                          samples: int = SAMPLE_COUNT, seed: int = SAMPLE_SEED
                          ) -> PreservationVerdict:
    """Does ``a`` map the cone into itself?  Exact for diagonal cones, sampled
    (hence non-exhaustive) for PSD-matrix cones."""
    mat = a.matrix if isinstance(a, SparseOperator) else a
    if isinstance(cone, DiagonalCone):
        b = cone.conjugate_matrix(mat)
        margin = float(b.real.min())
        if margin >= -tol and _imag_excess(b) <= tol:
            return PreservationVerdict(True, "exact", margin)
        i, j = np.unravel_index(int(b.real.argmin()), b.shape)
        return PreservationVerdict(False, "exact", margin,
                                   f"negative entry at ({i}, {j})")
    dense = mat.toarray() if hasattr(mat, "toarray") else np.asarray(mat)
    members = _sample_psd_members(cone, samples, seed)
    worst = np.inf
    witness = None
    for k, rho in enumerate(members):
        image = dense @ rho
        for k2, sigma in enumerate(members):
            val = float(np.real(np.vdot(sigma, image)))
            if val < worst:
                worst = val
                if val < -tol:
                    witness = f"sampled pair ({k}, {k2}) gives overlap {val:.3e}"
    return PreservationVerdict(worst >= -tol, "sampled", worst, witness)


# ergodicity -----------------------------------------------------------------

@dataclass(frozen=True)
class ErgodicityVerdict:
    verdict: str                   # ergodic | not-ergodic | consequence-verified | consequence-failed
    metzler_margin: float | None = None
    connected: bool | None = None
    strict_margin: float | None = None
    multiplicity: int | None = None
    semigroup_margin: float | None = None
    witness: str | None = None

    @property
    def ok(self) -> bool:
        return self.verdict in ("ergodic", "consequence-verified")

    def to_dict(self) -> dict:
        d = {"verdict": self.verdict}
        for k in ("metzler_margin", "connected", "strict_margin", "multiplicity",
                  "semigroup_margin", "witness"):
            v = getattr(self, k)
            if v is not None:
                d[k] = v
        return d


def _offdiag_components(b: np.ndarray, edge_tol: float = 1e-12) -> int:
    n = b.shape[0]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if abs(b[i, j]) > edge_tol or abs(b[j, i]) > edge_tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    return len({find(i) for i in range(n)})


def ergodicity(h, cone: Cone, tol: float = STRICT_TOL,
               betas: tuple[float, ...] = (0.1, 1.0),
               samples: int = 40, seed: int = SAMPLE_SEED) -> ErgodicityVerdict:
    """Semigroup ergodicity of e^{-t h} with respect to the cone.

    Diagonal cones admit an exact structural test (Metzler off-diagonals plus
    irreducibility); PSD-matrix cones get the consequence test: unique sector
    ground state, strictly positive after gauge fixing, plus sampled
    positivity of the semigroup at a few times.
    """
    mat = h.matrix if isinstance(h, SparseOperator) else h
    if isinstance(cone, DiagonalCone):
        b = cone.conjugate_matrix(mat)
        off = b - np.diag(np.diag(b))
        metzler_margin = float(-off.real.max()) if off.size else 0.0
        metzler = off.size == 0 or (off.real.max() <= tol and _imag_excess(off) <= tol)
        ncomp = _offdiag_components(b)
        connected = ncomp <= 1
        if metzler and connected:
            return ErgodicityVerdict("ergodic", metzler_margin, True)
        reasons = []
        if not metzler:
            i, j = np.unravel_index(int(off.real.argmax()), off.shape)
            reasons.append(f"positive off-diagonal at ({i}, {j})")
        if not connected:
            reasons.append(f"off-diagonal support splits into {ncomp} components")
        return ErgodicityVerdict("not-ergodic", metzler_margin, connected,
                                 witness="; ".join(reasons))
    # consequence route
    gs = ground_space(mat)
    if gs.multiplicity != 1:
        return ErgodicityVerdict("consequence-failed", multiplicity=gs.multiplicity,
                                 witness="sector ground state is degenerate")
    psi = gauge_fix(gs.vectors[:, 0], cone)
    ok, margin = strict_positivity(psi, cone, tol)
    dense = mat.toarray() if hasattr(mat, "toarray") else np.asarray(mat)
    semi_margin = np.inf
    for beta in betas:
        expm = scipy.linalg.expm(-beta * dense)
        verdict = positivity_preserving(expm, cone, tol=max(tol, 1e-8),
                                        samples=samples, seed=seed)
        semi_margin = min(semi_margin, verdict.margin)
        if not verdict.preserving:
            return ErgodicityVerdict("consequence-failed", strict_margin=margin,
                                     multiplicity=1, semigroup_margin=verdict.margin,
                                     witness=f"semigroup at beta={beta}: {verdict.witness}")
    if not ok:
        return ErgodicityVerdict("consequence-failed", strict_margin=margin,
                                 multiplicity=1, semigroup_margin=float(semi_margin),
                                 witness="ground vector not strictly positive")
    return ErgodicityVerdict("consequence-verified", strict_margin=margin,
                             multiplicity=1, semigroup_margin=float(semi_margin))


# monotonicity ---------------------------------------------------------------

def monotonicity_check(a, c, cone: DiagonalCone, betas=(0.5, 1.0),
                       tol: float = 1e-10) -> tuple[bool, float]:
    """Entrywise e^{-beta (a - c)} >= e^{-beta a} given a Metzler and c >= 0.

    Raises if the preconditions fail; returns (holds, worst margin).
    """
    if not isinstance(cone, DiagonalCone):
        raise ValueError("monotonicity check needs a diagonal cone")
    amat = cone.conjugate_matrix(a)
    cmat = cone.conjugate_matrix(c)
    off = amat - np.diag(np.diag(amat))
    if off.size and off.real.max() > tol:
        raise ValueError("precondition failed: semigroup of A does not preserve the cone")
    if cmat.size and cmat.real.min() < -tol:
        raise ValueError("precondition failed: C does not preserve the cone")
    worst = np.inf
    for beta in betas:
        diff = scipy.linalg.expm(-beta * (amat - cmat)) - scipy.linalg.expm(-beta * amat)
        worst = min(worst, float(diff.real.min()))
    return worst >= -tol, worst


# nesting consistency --------------------------------------------------------

@dataclass(frozen=True)
class NestingVerdict:
    rays_embed: bool
    rays_project: bool
    order_unit_strict: bool
    margin: float

    @property
    def ok(self) -> bool:
        return self.rays_embed and self.rays_project and self.order_unit_strict

    def to_dict(self) -> dict:
        return {"rays_embed": self.rays_embed, "rays_project": self.rays_project,
                "order_unit_strict": self.order_unit_strict, "margin": self.margin,
                "ok": self.ok}


def _extreme_rays(cone: Cone, samples: int, seed: int) -> list[np.ndarray]:
    if isinstance(cone, DiagonalCone):
        rays = []
        for i in range(cone.dim):
            v = np.zeros(cone.dim)
            v[i] = cone.signs[i]
            rays.append(v)
        return rays
    rng = np.random.default_rng(seed)
    nr = len(cone.row_labels)
    rays = []
    for r in range(nr):
        a = np.zeros((nr, len(cone.col_labels)))
        lbl = cone.row_labels[r]
        if lbl in cone.col_labels:
            a[r, cone.col_labels.index(lbl)] = 1.0
            rays.append(cone.vector_of_matrix(a))
    for _ in range(samples):
        v = rng.standard_normal(nr)
        rays.append(cone.vector_of_matrix(np.outer(v, v)))
    return rays


def nesting_consistency(cone_small: Cone, cone_big: Cone,
                        tol: float = STRICT_TOL, samples: int = 24,
                        seed: int = SAMPLE_SEED) -> NestingVerdict:
    """Extreme rays embed forward, project backward, and the projected order
    unit is strictly positive: the executable face of cone consistency."""
    if cone_small.basis is None or cone_big.basis is None:
        raise ValueError("nesting checks need basis-attached cones")
    iso = embed_isometry(cone_small.basis, cone_big.basis)
    proj = nesting_projection(iso)
    ok_fwd = True
    worst = np.inf
    for ray in _extreme_rays(cone_small, samples, seed):
        member, margin = membership(iso.matrix @ ray, cone_big, tol)
        worst = min(worst, margin)
        ok_fwd = ok_fwd and member
    ok_bwd = True
    for ray in _extreme_rays(cone_big, samples, seed + 1):
        member, margin = membership(proj @ ray, cone_small, tol)
        worst = min(worst, margin)
        ok_bwd = ok_bwd and member
    projected_unit = proj @ cone_big.order_unit()
    strict, margin = strict_positivity(projected_unit, cone_small, tol)
    return NestingVerdict(ok_fwd, ok_bwd, strict, float(min(worst, margin)))


# spin helper ----------------------------------------------------------------

def ground_total_spin(h, s2_op, cone: Cone | None = None):
    """(twice_S, ground space) of a sector Hamiltonian, via its ground vector."""
    gs = ground_space(h.matrix if isinstance(h, SparseOperator) else h)
    psi = gs.vectors[:, 0]
    if cone is not None:
        psi = gauge_fix(psi, cone)
    twice_s, _ = total_spin_of(psi, s2_op)
    return twice_s, gs
