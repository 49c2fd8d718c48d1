"""Independent reference computations used to check the closed forms.

Nothing here calls into the library's spectral code.
"""

import numpy as np

SIGMA = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=float)
FLIP_PA = np.diag([1.0, -1.0, 1.0, 1.0])


def dense_symplectic_moduli(V):
    """Moduli of the eigenvalues of sigma^-1 V, largest first (each appears twice)."""
    ev = np.linalg.eigvals(np.linalg.solve(SIGMA, np.asarray(V, dtype=float)))
    mods = np.sort(np.abs(ev))[::-1]
    return mods[0], mods[2]


def dense_pt_moduli(V):
    return dense_symplectic_moduli(FLIP_PA @ np.asarray(V, dtype=float) @ FLIP_PA)


def hermitian_physical(V, tol=1e-9):
    """V > 0 and V + (i/2) sigma >= -tol."""
    V = np.asarray(V, dtype=float)
    if np.min(np.linalg.eigvalsh(V)) <= 0:
        return False
    return np.min(np.linalg.eigvalsh(V + 0.5j * SIGMA)) >= -tol


def dense_log_negativity(V):
    _, nu = dense_pt_moduli(V)
    return max(0.0, -np.log2(2 * nu))


def std_matrix(a, b, cp, cm):
    return np.array([[a, 0, cp, 0], [0, a, 0, cm], [cp, 0, b, 0], [0, cm, 0, b]], dtype=float)


def rot(t):
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


def random_symplectic(rng, max_squeeze=1.0):
    """O1 . diag squeeze . O2 with O1, O2 built from 2x2 unitaries by hand."""

    def passive():
        # random U(2) via QR of a complex Gaussian matrix
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q, r = np.linalg.qr(z)
        U = q * (np.diag(r) / np.abs(np.diag(r)))
        X, Y = U.real, U.imag
        S = np.zeros((4, 4))
        # interleaved: q_i' = sum X_ij q_j - Y_ij p_j, p_i' = sum Y_ij q_j + X_ij p_j
        for i in range(2):
            for j in range(2):
                S[2 * i, 2 * j] = X[i, j]
                S[2 * i, 2 * j + 1] = -Y[i, j]
                S[2 * i + 1, 2 * j] = Y[i, j]
                S[2 * i + 1, 2 * j + 1] = X[i, j]
        return S

    r = rng.uniform(-max_squeeze, max_squeeze, 2)
    Z = np.diag([np.exp(r[0]), np.exp(-r[0]), np.exp(r[1]), np.exp(-r[1])])
    return passive() @ Z @ passive()


def random_physical(rng, max_squeeze=1.0, max_nu=2.0):
    """S diag(nu1, nu1, nu2, nu2) S^T with nu >= 1/2: covers every physical state."""
    nu = rng.uniform(0.5, max_nu, 2)
    S = random_symplectic(rng, max_squeeze)
    V = S @ np.diag([nu[0], nu[0], nu[1], nu[1]]) @ S.T
    return (V + V.T) / 2


def random_pure(rng, max_squeeze=1.0):
    S = random_symplectic(rng, max_squeeze)
    V = S @ S.T / 2
    return (V + V.T) / 2


def wigner_integral(V, half_width=6.0, n=25):
    """Midpoint rule for the Wigner density integral on a 4-D box scaled to V."""
    V = np.asarray(V, dtype=float)
    sd = np.sqrt(np.diag(V))
    axes = [np.linspace(-half_width * s, half_width * s, n) for s in sd]
    h = np.prod([ax[1] - ax[0] for ax in axes])
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 4)
    Vinv = np.linalg.inv(V)
    quad = np.einsum("ni,ij,nj->n", grid, Vinv, grid)
    dens = np.exp(-0.5 * quad) / (4 * np.pi**2 * np.sqrt(np.linalg.det(V)))
    return dens.sum() * h


def sphere_extrema(V, n=400):
    """Brute-force min/max of E_N over a dense (theta, relative phase) grid.

    Phases applied after the mixer are local, so E_N depends only on theta
    and phi - phi1; this grid covers that sphere directly using the dense
    eigensolver.
    """
    from itertools import product

    thetas = np.linspace(0, np.pi / 2, n)
    rels = np.linspace(0, 2 * np.pi, n, endpoint=False)
    best_lo, best_hi = np.inf, -np.inf
    for t, d in product(thetas, rels[:: max(1, n // 100)]):
        U = np.array([[np.sin(t) * np.exp(1j * d), np.cos(t)], [np.cos(t), -np.sin(t) * np.exp(-1j * d)]])
        X, Y = U.real, U.imag
        S = np.zeros((4, 4))
        for i in range(2):
            for j in range(2):
                S[2 * i, 2 * j] = X[i, j]
                S[2 * i, 2 * j + 1] = -Y[i, j]
                S[2 * i + 1, 2 * j] = Y[i, j]
                S[2 * i + 1, 2 * j + 1] = X[i, j]
        e = dense_log_negativity(S @ V @ S.T)
        best_lo, best_hi = min(best_lo, e), max(best_hi, e)
    return best_lo, best_hi
