"""Eigensolvers and spin-resolved ground-space extraction.

Dense diagonalization handles anything up to a configurable threshold; above
it, a Lanczos iteration with full reorthogonalization and repeated deflation
extracts the lowest eigenpairs.  Both routes are deterministic: the Lanczos
start vectors come from a seeded generator.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

DENSE_THRESHOLD = 4096
LANCZOS_TOL = 1e-8
DEGENERACY_TOL = 1e-7
DEFAULT_SEED = 20240901


class SolverError(RuntimeError):
    """Raised when an eigensolver fails to converge; carries the residual."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


def _as_matrix(h):
    return h.matrix if hasattr(h, "matrix") else h


def dense_eigensolve(h, threshold: int = DENSE_THRESHOLD):
    """Full ascending spectrum and eigenvectors of a hermitian operator."""
    mat = _as_matrix(h)
    n = mat.shape[0]
    if n > threshold:
        raise SolverError(f"dimension {n} exceeds the dense threshold {threshold}")
    dense = mat.toarray() if sp.issparse(mat) else np.asarray(mat)
    vals, vecs = np.linalg.eigh(dense)
    recon = np.abs(dense @ vecs - vecs * vals).max() if n else 0.0
    if recon > 1e-9 * max(1.0, np.abs(vals).max() if n else 1.0):
        raise SolverError("dense eigensolver reconstruction error too large", recon)
    return vals, vecs


def lanczos_ground(h, k: int = 1, seed: int = DEFAULT_SEED, tol: float = LANCZOS_TOL,
                   max_iter: int = 400, max_restarts: int = 60):
    """Lowest ``k`` eigenpairs by Lanczos with full reorthogonalization.

    Multiplicities are resolved by deflation: each converged vector is
    projected out of all later Krylov spaces.  Deterministic for a fixed seed.
    """
    mat = _as_matrix(h)
    n = mat.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    k = min(k, n)
    rng = np.random.default_rng(seed)
    found_vals: list[float] = []
    found: np.ndarray | None = None
    for _ in range(k):
        v0 = rng.standard_normal(n)
        if found is not None:
            v0 -= found @ (found.T @ v0)
        nrm = np.linalg.norm(v0)
        if nrm < 1e-12:
            raise SolverError("deflated start vector vanished")
        theta, vec, res = _lanczos_one(mat, v0 / nrm, found, tol, max_iter,
                                       max_restarts, rng)
        found_vals.append(theta)
        found = vec[:, None] if found is None else np.column_stack([found, vec])
    order = np.argsort(found_vals)
    return np.array(found_vals)[order], found[:, order]


def _lanczos_one(mat, v0, deflate, tol, max_iter, max_restarts, rng):
    """One deflated Lanczos sweep with restarts; returns (theta, vector, residual)."""
    n = mat.shape[0]
    n_defl = 0 if deflate is None else deflate.shape[1]
    limit = max(1, min(max_iter, n - n_defl))
    check_every = 10
    v = v0
    theta, res = np.inf, np.inf
    for _ in range(max_restarts):
        q = np.empty((n, limit))
        alphas = np.empty(limit)
        betas = np.empty(limit)
        w = v.copy()
        j = 0
        while j < limit:
            if deflate is not None:
                w -= deflate @ (deflate.T @ w)
            if j:
                qj = q[:, :j]
                w -= qj @ (qj.T @ w)   # full reorthogonalization, twice
                w -= qj @ (qj.T @ w)
            nrm = np.linalg.norm(w)
            if nrm < 1e-12:
                # invariant subspace: inject a deterministic fresh direction
                w = rng.standard_normal(n)
                if deflate is not None:
                    w -= deflate @ (deflate.T @ w)
                if j:
                    w -= q[:, :j] @ (q[:, :j].T @ w)
                nrm = np.linalg.norm(w)
                if nrm < 1e-12:
                    break
            w /= nrm
            q[:, j] = w
            hw = mat @ w
            alphas[j] = w @ hw
            w = hw - alphas[j] * w
            if j:
                w -= betas[j - 1] * q[:, j - 1]
            betas[j] = np.linalg.norm(w)
            j += 1
            if j % check_every == 0 or j == limit or betas[j - 1] < 1e-12:
                tvals, tvecs = _tridiag_eigh(alphas[:j], betas[:j - 1])
                # cheap Ritz residual bound: |beta_j * (last component)|
                if betas[j - 1] * abs(tvecs[-1, 0]) <= 0.1 * tol * max(1.0, abs(tvals[0])):
                    break
                if betas[j - 1] < 1e-12:
                    break
        if j == 0:
            raise SolverError("Lanczos basis collapsed")
        tvals, tvecs = _tridiag_eigh(alphas[:j], betas[:j - 1])
        theta = float(tvals[0])
        ritz = q[:, :j] @ tvecs[:, 0]
        ritz /= np.linalg.norm(ritz)
        res = float(np.linalg.norm(mat @ ritz - theta * ritz))
        if res <= tol * max(1.0, abs(theta)):
            return theta, ritz, res
        v = ritz
    raise SolverError(
        f"Lanczos failed to converge after {max_restarts} restarts", res)


def _tridiag_eigh(alphas: np.ndarray, betas: np.ndarray):
    tri = np.diag(alphas)
    for i in range(len(betas)):
        tri[i, i + 1] = tri[i + 1, i] = betas[i]
    return np.linalg.eigh(tri)


@dataclass(frozen=True)
class GroundSpace:
    """Orthonormal span of the eigenvalue cluster at the bottom of the spectrum."""

    energy: float
    multiplicity: int
    vectors: np.ndarray            # shape (dim, multiplicity)
    residuals: tuple[float, ...]
    gap: float                     # distance to the first excluded level
    tolerance: float


def ground_space(h, degeneracy_tol: float = DEGENERACY_TOL,
                 dense_threshold: int = DENSE_THRESHOLD,
                 dense_preference: int = 1200,
                 seed: int = DEFAULT_SEED, max_multiplicity: int = 16) -> GroundSpace:
    """Ground energy, degeneracy and spanning vectors of a hermitian operator."""
    mat = _as_matrix(h)
    n = mat.shape[0]
    if n <= min(dense_preference, dense_threshold):
        vals, vecs = dense_eigensolve(mat, threshold=dense_threshold)
    else:
        k = min(n, 2)
        while True:
            vals, vecs = lanczos_ground(mat, k=k, seed=seed)
            cut = vals[0] + degeneracy_tol * max(1.0, abs(vals[0]))
            if vals[-1] > cut or k >= min(n, max_multiplicity):
                break
            k = min(n, max_multiplicity, 2 * k)
    e0 = float(vals[0])
    cut = e0 + degeneracy_tol * max(1.0, abs(e0))
    mult = int(np.sum(vals <= cut))
    vecs = vecs[:, :mult]
    # orthonormalize the cluster (dense route already is; cheap anyway)
    q, _ = np.linalg.qr(vecs)
    residuals = tuple(float(np.linalg.norm(mat @ q[:, i] - e0 * q[:, i]))
                      for i in range(mult))
    gap = float(vals[mult] - e0) if mult < len(vals) else np.inf
    return GroundSpace(e0, mult, q, residuals, gap, degeneracy_tol)


class MixedMultipletError(ValueError):
    """The supplied vector is not an eigenvector of the Casimir operator."""


def total_spin_of(psi: np.ndarray, s2_operator, residual_tol: float = 1e-6):
    """Total spin S with S(S+1) = <psi|S^2 psi>, rejected unless an eigenvector.

    Returns (twice_s, residual); ``twice_s`` is the exact twice-value integer.
    """
    mat = _as_matrix(s2_operator)
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > 1e-8:
        psi = psi / nrm
    s2psi = mat @ psi
    value = float(np.real(np.vdot(psi, s2psi)))
    s = 0.5 * (-1.0 + np.sqrt(max(0.0, 1.0 + 4.0 * value)))
    twice_s = int(round(2 * s))
    expected = 0.25 * twice_s * (twice_s + 2)
    residual = float(np.linalg.norm(s2psi - expected * psi))
    if residual > residual_tol:
        raise MixedMultipletError(
            f"not a total-spin eigenvector (residual {residual:.3e})")
    return twice_s, residual
