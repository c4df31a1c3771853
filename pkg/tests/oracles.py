"""Independent reference implementations used as test oracles.

Everything here is deliberately written against different machinery than the
package: states are dictionaries keyed by sorted orbital tuples, spin chains
are built from Pauli kron products, and combinatorial counts come straight
from binomials.
"""

import numpy as np

# symbolic second quantization ------------------------------------------------

def sym_create(state: dict, orb: int) -> dict:
    out = {}
    for occ, c in state.items():
        if orb in occ:
            continue
        pos = sum(1 for o in occ if o < orb)
        new = tuple(sorted(occ + (orb,)))
        out[new] = out.get(new, 0) + c * (-1) ** pos
    return out


def sym_annihilate(state: dict, orb: int) -> dict:
    out = {}
    for occ, c in state.items():
        if orb not in occ:
            continue
        pos = sum(1 for o in occ if o < orb)
        new = tuple(o for o in occ if o != orb)
        out[new] = out.get(new, 0) + c * (-1) ** pos
    return out


def sym_apply(state: dict, ops) -> dict:
    """Apply a list of ("c"/"C", orbital) factors right-to-left."""
    for kind, orb in reversed(ops):
        state = sym_create(state, orb) if kind == "C" else sym_annihilate(state, orb)
        if not state:
            return {}
    return state


def orb(x: int, spin: int) -> int:
    return 2 * x + spin


def interleaved_cons(n: int, b_set: set, x_set: set, d_set: set) -> dict:
    """Site-interleaved construction of the signed half-filling vectors."""
    state = {(): 1}
    for x in reversed(range(n)):
        state = sym_create(state, orb(x, 1))
        if x in d_set:
            state = sym_annihilate(state, orb(x, 1))
        if x in x_set:
            state = sym_create(state, orb(x, 0))
    pref = (-1) ** (len(b_set) + len(d_set & b_set))
    return {k: pref * v for k, v in state.items()}


def one_hole_vector(n: int, sigma: tuple) -> dict:
    """c_(hole, aux) prod' c*_(x, sigma_x) |empty> with the aux spin cancelling."""
    hole = sigma.index(0)
    state = {(): 1}
    for x in reversed(range(n)):
        s = sigma[x] if x != hole else 1
        state = sym_create(state, orb(x, 0 if s == 1 else 1))
    return sym_annihilate(state, orb(hole, 0))


# spin-chain oracle -----------------------------------------------------------

_SX = np.array([[0, 1], [1, 0]]) * 0.5
_SY = np.array([[0, -1j], [1j, 0]]) * 0.5
_SZ = np.array([[1, 0], [0, -1]]) * 0.5


def spin_site_op(n: int, x: int, comp: np.ndarray) -> np.ndarray:
    out = np.eye(1)
    for k in range(n):
        out = np.kron(out, comp if k == x else np.eye(2))
    return out


def heisenberg_kron(n: int, j: np.ndarray) -> np.ndarray:
    """sum J_xy S_x.S_y on the 2^n spin space (no fermions involved)."""
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for x in range(n):
        for y in range(x + 1, n):
            if j[x, y] != 0:
                for comp in (_SX, _SY, _SZ):
                    h += j[x, y] * spin_site_op(n, x, comp) @ spin_site_op(n, y, comp)
    return h


def coupled_spins_ground(s_a: float, s_b: float) -> float:
    """Ground energy of S_A . S_B = (S(S+1) - S_A(S_A+1) - S_B(S_B+1)) / 2."""
    s_min = abs(s_a - s_b)
    return 0.5 * (s_min * (s_min + 1) - s_a * (s_a + 1) - s_b * (s_b + 1))
