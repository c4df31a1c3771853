"""Sparse-matrix assembly of one- and two-body operators.

Operators are assembled directly per sector basis; applying an operator
string to a basis state and dropping targets that fall outside the basis is
exactly the compression P A P onto the subspace, which is what the
constrained kinds (single occupancy, one hole, localized-spin) require.

Everything is real except the second spin component, which is kept as an
explicitly complex matrix and only ever enters through compositions that are
real again.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fock import (BasisState, SectorBasis, SubspaceKind, cons_vector,
                   enumerate_sector, mlm_sign_table, occ_annihilate,
                   occ_create, orbital_index)
from .lattice import Graph, bipartition

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class SparseOperator:
    """Immutable sparse matrix tied to its domain/codomain sector bases."""

    matrix: sp.csr_matrix
    domain: SectorBasis
    codomain: SectorBasis
    hermitian: bool = False

    def __post_init__(self) -> None:
        if self.matrix.shape != (self.codomain.dim, self.domain.dim):
            raise ValueError("matrix shape does not match the bases")
        if self.hermitian:
            dev = (self.matrix - self.matrix.conj().T)
            if dev.nnz and abs(dev).max() > HERMITICITY_TOL:
                raise ValueError("operator claimed hermitian is not")

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def to_coo_text(self) -> str:
        """Coordinate text export: one "row col value" line per entry."""
        coo = self.matrix.tocoo()
        lines = [f"shape {coo.shape[0]} {coo.shape[1]}"]
        order = np.lexsort((coo.col, coo.row))
        for k in order:
            lines.append(f"{coo.row[k]} {coo.col[k]} {coo.data[k]!r}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# generic operator-string assembly
# ---------------------------------------------------------------------------

def _apply_string(occ: int, ops: tuple[tuple[bool, int], ...]) -> tuple[int, int] | None:
    """Apply (create?, orbital) factors right-to-left; None if annihilated."""
    sign = 1
    for create, orb in reversed(ops):
        res = occ_create(occ, orb) if create else occ_annihilate(occ, orb)
        if res is None:
            return None
        occ, s = res
        sign *= s
    return occ, sign


def assemble(codomain: SectorBasis, domain: SectorBasis,
             terms: list[tuple[complex, tuple[tuple[bool, int], ...]]],
             hermitian: bool = False, dtype=float) -> SparseOperator:
    """Sum of coefficient * operator-string terms as a sparse matrix.

    Target states outside ``codomain`` are dropped (subspace compression).
    Phonon occupancies are untouched by fermionic strings.
    """
    # electron-major layout: resolve fermionic strings on the electron factor
    if domain.subspace.n_max is not None:
        elec_dom = electron_basis(domain)
        elec_cod = electron_basis(codomain)
        inner = assemble(elec_cod, elec_dom, terms, hermitian=False, dtype=dtype)
        mat = sp.kron(inner.matrix, sp.identity(domain.phonon_dim, format="csr"),
                      format="csr")
        return SparseOperator(mat, domain, codomain, hermitian)
    n = domain.n_sites
    spc = domain.species_count
    rows, cols, vals = [], [], []
    occ_cache = [s.orbital_occ(n, spc) for s in domain.states]
    index = codomain._index
    for j, occ in enumerate(occ_cache):
        ph = domain.states[j].ph
        for coeff, ops in terms:
            res = _apply_string(occ, ops)
            if res is None:
                continue
            target, sign = res
            i = index.get(_state_key(target, n, spc, ph))
            if i is None:
                continue
            rows.append(i)
            cols.append(j)
            vals.append(coeff * sign)
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(codomain.dim, domain.dim), dtype=dtype)
    mat.sum_duplicates()
    return SparseOperator(mat, domain, codomain, hermitian)


def _state_key(occ: int, n_sites: int, species_count: int, ph: tuple) -> tuple:
    up = dn = fup = fdn = 0
    if species_count == 1:
        for x in range(n_sites):
            up |= ((occ >> (2 * x)) & 1) << x
            dn |= ((occ >> (2 * x + 1)) & 1) << x
    else:
        for x in range(n_sites):
            up |= ((occ >> (4 * x)) & 1) << x
            dn |= ((occ >> (4 * x + 1)) & 1) << x
            fup |= ((occ >> (4 * x + 2)) & 1) << x
            fdn |= ((occ >> (4 * x + 3)) & 1) << x
    return (up, dn, fup, fdn, ph)


def electron_basis(basis: SectorBasis) -> SectorBasis:
    """The electron factor of a phonon-product basis (identity if no phonons)."""
    if basis.subspace.n_max is None:
        return basis
    kind = SubspaceKind(basis.subspace.kind, basis.subspace.n_electrons, None)
    return SectorBasis(basis.graph, kind, basis.n_electrons, basis.twice_m,
                       basis.electron_states())


def diagonal_operator(basis: SectorBasis, values: np.ndarray,
                      hermitian: bool = True) -> SparseOperator:
    mat = sp.diags(values, format="csr")
    return SparseOperator(mat, basis, basis, hermitian)


# ---------------------------------------------------------------------------
# elementary fermion operators between sectors
# ---------------------------------------------------------------------------

def annihilation_matrix(codomain: SectorBasis, domain: SectorBasis, x: int,
                        spin: int, species: int = 0) -> SparseOperator:
    orb = orbital_index(x, spin, species, domain.species_count)
    return assemble(codomain, domain, [(1.0, ((False, orb),))])


def creation_matrix(codomain: SectorBasis, domain: SectorBasis, x: int,
                    spin: int, species: int = 0) -> SparseOperator:
    orb = orbital_index(x, spin, species, domain.species_count)
    return assemble(codomain, domain, [(1.0, ((True, orb),))])


def number_values(basis: SectorBasis, species: int = 0) -> np.ndarray:
    """Per-state site occupation table n[state, site] for one species."""
    n = basis.n_sites
    out = np.zeros((basis.dim, n))
    for i, s in enumerate(basis.states):
        up, dn = (s.up, s.dn) if species == 0 else (s.fup, s.fdn)
        for x in range(n):
            out[i, x] = ((up >> x) & 1) + ((dn >> x) & 1)
    return out


# ---------------------------------------------------------------------------
# spin algebra
# ---------------------------------------------------------------------------

def _site_spins(basis: SectorBasis) -> list[tuple[int, int]]:
    """All (site, species) pairs carrying spin in this basis."""
    pairs = [(x, 0) for x in range(basis.n_sites)]
    if basis.species_count == 2:
        pairs += [(x, 1) for x in range(basis.n_sites)]
    return pairs


def _raise_string(x: int, species: int, spc: int) -> tuple[tuple[bool, int], ...]:
    return ((True, orbital_index(x, 0, species, spc)),
            (False, orbital_index(x, 1, species, spc)))


def _lower_string(x: int, species: int, spc: int) -> tuple[tuple[bool, int], ...]:
    return ((True, orbital_index(x, 1, species, spc)),
            (False, orbital_index(x, 0, species, spc)))


def spin_op(basis: SectorBasis, x: int, i: int, species: int = 0) -> SparseOperator:
    """Single-site spin component; i=2 is complex, the others real."""
    spc = basis.species_count
    if i == 3:
        vals = np.zeros(basis.dim)
        for k, s in enumerate(basis.states):
            up, dn = (s.up, s.dn) if species == 0 else (s.fup, s.fdn)
            vals[k] = 0.5 * (((up >> x) & 1) - ((dn >> x) & 1))
        return diagonal_operator(basis, vals)
    if i == 1:
        terms = [(0.5, _raise_string(x, species, spc)),
                 (0.5, _lower_string(x, species, spc))]
        return assemble(basis, basis, terms, hermitian=True)
    if i == 2:
        terms = [(-0.5j, _raise_string(x, species, spc)),
                 (0.5j, _lower_string(x, species, spc))]
        return assemble(basis, basis, terms, hermitian=True, dtype=complex)
    raise ValueError("spin component must be 1, 2 or 3")


def spin_dot(basis: SectorBasis, a: tuple[int, int], b: tuple[int, int]) -> SparseOperator:
    """S_a . S_b for (site, species) pairs, assembled from real strings."""
    terms = _spin_dot_terms(basis, a, b)
    return assemble(basis, basis, terms, hermitian=True)


def _spin_dot_terms(basis: SectorBasis, a: tuple[int, int], b: tuple[int, int]):
    spc = basis.species_count
    xa, sa = a
    xb, sb = b
    out = [(0.5, _raise_string(xa, sa, spc) + _lower_string(xb, sb, spc)),
           (0.5, _lower_string(xa, sa, spc) + _raise_string(xb, sb, spc))]
    # S3 S3 via quadratic strings: S3 = (n_up - n_dn)/2
    for su, csa in ((0, 0.25), (1, -0.25)):
        for sv, csb in ((0, 1.0), (1, -1.0)):
            out.append((csa * csb,
                        ((True, orbital_index(xa, su, sa, spc)),
                         (False, orbital_index(xa, su, sa, spc)),
                         (True, orbital_index(xb, sv, sb, spc)),
                         (False, orbital_index(xb, sv, sb, spc)))))
    return out


def total_spin_squared(basis: SectorBasis) -> SparseOperator:
    """Casimir S^2 summed over all spin carriers, as one real sparse matrix."""
    elec = electron_basis(basis)
    pairs = _site_spins(elec)
    terms = []
    for a in pairs:
        for b in pairs:
            terms += _spin_dot_terms(elec, a, b)
    op = assemble(elec, elec, terms, hermitian=True)
    if basis.subspace.n_max is None:
        return op
    mat = sp.kron(op.matrix, sp.identity(basis.phonon_dim, format="csr"), format="csr")
    return SparseOperator(mat, basis, basis, hermitian=True)


def ladder_ops(basis_m: SectorBasis, basis_target: SectorBasis) -> SparseOperator:
    """S+ (or S-) mapping ``basis_m`` into ``basis_target``.

    Raising if the target sector sits one unit above, lowering if one below.
    """
    if basis_m.subspace != basis_target.subspace or basis_m.n_electrons != basis_target.n_electrons:
        raise ValueError("sector mismatch: different subspace kinds")
    if basis_m.twice_m is None or basis_target.twice_m is None:
        raise ValueError("ladder operators need definite M sectors")
    delta = basis_target.twice_m - basis_m.twice_m
    if delta not in (2, -2):
        raise ValueError("target sector must differ by one unit of M")
    spc = basis_m.species_count
    terms = []
    for (x, species) in _site_spins(basis_m):
        s = _raise_string(x, species, spc) if delta == 2 else _lower_string(x, species, spc)
        terms.append((1.0, s))
    return assemble(basis_target, basis_m, terms)


def magnetization_values(basis: SectorBasis) -> np.ndarray:
    out = np.zeros(basis.dim)
    for i, s in enumerate(basis.states):
        out[i] = 0.5 * (s.up.bit_count() - s.dn.bit_count()
                        + s.fup.bit_count() - s.fdn.bit_count())
    return out


# ---------------------------------------------------------------------------
# model building blocks
# ---------------------------------------------------------------------------

def hopping(basis: SectorBasis, t: np.ndarray) -> SparseOperator:
    """sum t_xy c*_{x sigma} c_{y sigma}; acts on the conduction species."""
    t = np.asarray(t, dtype=float)
    n = basis.n_sites
    if t.shape != (n, n):
        raise ValueError("hopping matrix has wrong shape")
    if not np.allclose(t, t.T, atol=1e-14):
        raise ValueError("hopping matrix must be symmetric")
    spc = basis.species_count
    terms = []
    for x in range(n):
        for y in range(n):
            if t[x, y] != 0.0:
                for s in (0, 1):
                    terms.append((t[x, y],
                                  ((True, orbital_index(x, s, 0, spc)),
                                   (False, orbital_index(y, s, 0, spc)))))
    return assemble(basis, basis, terms, hermitian=True)


def coulomb(basis: SectorBasis, u: np.ndarray) -> SparseOperator:
    """sum (U_xy / 2)(n_x - 1)(n_y - 1); diagonal in the occupation basis."""
    u = np.asarray(u, dtype=float)
    n = basis.n_sites
    if u.shape != (n, n):
        raise ValueError("interaction matrix has wrong shape")
    if not np.allclose(u, u.T, atol=1e-14):
        raise ValueError("interaction matrix must be symmetric")
    occ = number_values(basis, species=0) - 1.0
    vals = 0.5 * np.einsum("ix,xy,iy->i", occ, u, occ)
    return diagonal_operator(basis, vals)


def heisenberg_bond(basis: SectorBasis, x: int, y: int) -> SparseOperator:
    return spin_dot(basis, (x, 0), (y, 0))


def gutzwiller(basis: SectorBasis) -> SparseOperator:
    """Projection onto configurations without doubly occupied conduction sites."""
    vals = np.array([0.0 if (s.up & s.dn) else 1.0 for s in basis.states])
    return diagonal_operator(basis, vals)


# ---------------------------------------------------------------------------
# whole Fock space and the hole-particle transformation
# ---------------------------------------------------------------------------

def full_fock_basis(g: Graph) -> SectorBasis:
    """Every occupation state of the one-species Fock space over ``g``."""
    n = g.vertex_count
    states = [BasisState(up, dn) for up in range(1 << n) for dn in range(1 << n)]
    states.sort(key=BasisState.sort_key)
    kind = SubspaceKind.full(-1)
    return SectorBasis(g, kind, -1, None, tuple(states))


def hole_particle(basis: SectorBasis) -> SparseOperator:
    """Unitary signed permutation W mapping down-spin particles to holes.

    Built as the ordered product of single-mode particle-hole unitaries
    (c_dn + c*_dn) over all sites, preceded by parity corrections
    (1 - 2 n_dn) on one sublattice; this is the unique structure (up to a
    global phase) conjugating c_up to itself and c_dn to gamma c*_dn with
    gamma = +1 on part A and -1 on part B.
    """
    g = basis.graph
    bp = bipartition(g)
    if bp is None:
        raise ValueError("graph is not bipartite")
    n = g.vertex_count
    corrected = bp.part_a if n % 2 == 0 else bp.part_b
    w = sp.identity(basis.dim, format="csr")
    for x in range(n):
        orb = orbital_index(x, 1)
        u_x = assemble(basis, basis, [(1.0, ((False, orb),)), (1.0, ((True, orb),))])
        w = w @ u_x.matrix
    for z in corrected:
        vals = np.array([1.0 - 2.0 * ((s.dn >> z) & 1) for s in basis.states])
        w = sp.diags(vals, format="csr") @ w
    if n % 2:
        # odd site count: the mode product flips c_up; undo with the up parity
        vals = np.array([1.0 - 2.0 * (s.up.bit_count() & 1) for s in basis.states])
        w = sp.diags(vals, format="csr") @ w
    return SparseOperator(w.tocsr(), basis, basis)


def _bits(mask: int) -> list[int]:
    out = []
    x = 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return out


# ---------------------------------------------------------------------------
# phonons
# ---------------------------------------------------------------------------

def phonon_ops(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated single-mode ladder matrices (b, b dagger); b†|n_max> = 0."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    b = np.zeros((n_max + 1, n_max + 1))
    for k in range(1, n_max + 1):
        b[k - 1, k] = np.sqrt(k)
    return b, b.T.copy()


def phonon_site_matrix(n_sites: int, n_max: int, site: int, single: np.ndarray) -> sp.csr_matrix:
    """Single-mode matrix acting on one site of the phonon product space."""
    dim = n_max + 1
    out = sp.identity(1, format="csr")
    for x in range(n_sites):
        factor = sp.csr_matrix(single) if x == site else sp.identity(dim, format="csr")
        out = sp.kron(out, factor, format="csr")
    return out


def phonon_number_total(n_sites: int, n_max: int) -> sp.csr_matrix:
    b, bdag = phonon_ops(n_max)
    nmat = bdag @ b
    dim = (n_max + 1) ** n_sites
    out = sp.csr_matrix((dim, dim))
    for x in range(n_sites):
        out = out + phonon_site_matrix(n_sites, n_max, x, nmat)
    return out.tocsr()


# ---------------------------------------------------------------------------
# nesting: embeddings and projections between lattices
# ---------------------------------------------------------------------------

def _rest_graph(g_small: Graph, g_big: Graph) -> tuple[Graph, int]:
    """Complement part of a nested pair, relabeled to 0..k-1, plus its B mask."""
    m = g_small.vertex_count
    if g_big.vertex_count <= m:
        raise ValueError("second graph must strictly contain the first")
    for (u, v) in g_small.edges:
        if not g_big.has_edge(u, v):
            raise ValueError("vertex sets are not nested with consistent labels")
    for (u, v) in g_big.edges:
        if u < m and v < m and not g_small.has_edge(u, v):
            raise ValueError("small graph is not the induced subgraph of the big one")
    k = g_big.vertex_count - m
    rest_edges = tuple((u - m, v - m) for u, v in g_big.edges if u >= m and v >= m)
    bp = bipartition(g_big)
    if bp is None:
        raise ValueError("graph is not bipartite")
    bmask = 0
    for v in bp.part_b:
        if v >= m:
            bmask |= 1 << (v - m)
    return Graph(k, rest_edges), bmask


def uniform_rest_vector(g_small: Graph, g_big: Graph,
                        signed: bool = True) -> list[tuple[BasisState, float]]:
    """The normalized uniform single-occupancy vector on big minus small, in
    canonical coordinates.

    ``signed`` uses the inherited sublattice signs (the half-filled-class
    convention); the one-hole class carries no sublattice structure and uses
    the plain uniform vector.
    """
    rest, bmask = _rest_graph(g_small, g_big)
    if not signed:
        bmask = 0
    k = rest.vertex_count
    out = []
    w = 2.0 ** (-k / 2.0)
    full = (1 << k) - 1
    for x_set in range(1 << k):
        occ, sign = cons_vector(k, bmask, x_set, x_set)
        up = 0
        for x in range(k):
            if (occ >> (2 * x)) & 1:
                up |= 1 << x
        out.append((BasisState(up, full & ~up), sign * w))
    return out


def embed_isometry(basis_small: SectorBasis, basis_big: SectorBasis) -> SparseOperator:
    """Isometry eta -> eta tensor (uniform rest vector), in canonical coordinates.

    Requires the small vertex set to be an initial segment of the big one;
    then, under the site-interleaved construction of the distinguished basis
    vectors, tensor concatenation is free of permutation signs.
    """
    if basis_small.subspace.kind != basis_big.subspace.kind:
        raise ValueError("incompatible subspace kinds")
    if basis_small.subspace.n_max is not None:
        raise ValueError("phonon-product bases are not supported here")
    g_small, g_big = basis_small.graph, basis_big.graph
    m = g_small.vertex_count
    rest_vec = uniform_rest_vector(g_small, g_big,
                                   signed=basis_small.subspace.kind != "one_hole")
    rows, cols, vals = [], [], []
    for j, s in enumerate(basis_small.states):
        for r, w in rest_vec:
            big = BasisState(s.up | (r.up << m), s.dn | (r.dn << m))
            i = basis_big.index_of(big)
            if i is None:
                raise ValueError("embedded state missing from the big basis")
            rows.append(i)
            cols.append(j)
            vals.append(w)
    mat = sp.csr_matrix((vals, (rows, cols)),
                        shape=(basis_big.dim, basis_small.dim))
    return SparseOperator(mat, basis_small, basis_big)


def embed_state(psi: np.ndarray, iso: SparseOperator) -> np.ndarray:
    return iso.matrix @ psi


def nesting_projection(iso: SparseOperator) -> sp.csr_matrix:
    """Adjoint map from the big space onto small-space coordinates."""
    return iso.matrix.conj().T.tocsr()
