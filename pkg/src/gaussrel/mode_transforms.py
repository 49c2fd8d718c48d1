"""Passive (number-conserving) mode mixers, local symplectic maps and standard form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NonPositiveSqueeze, NotPhysical
from .symplectic_core import SIGMA, StandardFormParams, _freeze, is_physical

TWO_PI = 2 * np.pi

# grouped (qA, qB, pA, pB) -> interleaved (qA, pA, qB, pB)
_GROUPED_TO_CANONICAL = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)


class U2Chart(NamedTuple):
    """Angles of a 2x2 unitary; ``phi1`` and ``phi2`` are the primed phases."""

    theta: float
    phi: float = 0.0
    phi1: float = 0.0
    phi2: float = 0.0


IDENTITY_CHART = U2Chart(np.pi / 2, 0.0, np.pi, 0.0)
SWAP_CHART = U2Chart(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    entries: np.ndarray
    kind: str = "general"

    def __post_init__(self):
        if self.kind not in ("passive", "local", "general"):
            raise ValueError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "entries", _freeze(self.entries))

    def __matmul__(self, other):
        if isinstance(other, SymplecticMatrix):
            kind = self.kind if self.kind == other.kind else "general"
            return SymplecticMatrix(self.entries @ other.entries, kind)
        return self.entries @ other

    def is_symplectic(self, tol: float = 1e-10) -> bool:
        S = self.entries
        return bool(np.max(np.abs(S @ SIGMA @ S.T - SIGMA)) <= tol)


def canonical_chart(chart) -> U2Chart:
    """Fold arbitrary angles into theta in [0, pi/2], phases in [0, 2pi).

    The unitary built from the returned chart equals the one built from the
    input.
    """
    theta, phi, phi1, phi2 = (float(v) for v in chart)
    s, c = np.sin(theta), np.cos(theta)
    if s < 0:
        phi += np.pi
    if c < 0:
        phi1 += np.pi
        phi2 += np.pi
    theta = float(np.arctan2(abs(s), abs(c)))
    return U2Chart(theta, *(_wrap(p) for p in (phi, phi1, phi2)))


def _wrap(angle: float) -> float:
    out = float(np.mod(angle, TWO_PI))
    # tiny negative inputs round up to exactly 2pi
    return 0.0 if out >= TWO_PI else out


def u2_matrix(chart) -> np.ndarray:
    theta, phi, phi1, phi2 = chart
    s, c = np.sin(theta), np.cos(theta)
    return np.array(
        [
            [s * np.exp(1j * phi), c * np.exp(1j * phi1)],
            [c * np.exp(1j * phi2), s * np.exp(1j * (-phi + phi1 + phi2 - np.pi))],
        ]
    )


def u2_matrices(charts) -> np.ndarray:
    """Vectorized :func:`u2_matrix` over an (n, 4) array of charts."""
    charts = np.asarray(charts, dtype=float)
    theta, phi, phi1, phi2 = charts.T
    s, c = np.sin(theta), np.cos(theta)
    out = np.empty((len(charts), 2, 2), dtype=complex)
    out[:, 0, 0] = s * np.exp(1j * phi)
    out[:, 0, 1] = c * np.exp(1j * phi1)
    out[:, 1, 0] = c * np.exp(1j * phi2)
    out[:, 1, 1] = s * np.exp(1j * (-phi + phi1 + phi2 - np.pi))
    return out


def symplectic_from_unitary(U) -> np.ndarray:
    """Real 4x4 image of one (2, 2) or many (n, 2, 2) unitaries, canonical ordering."""
    U = np.asarray(U)
    X, Y = U.real, U.imag
    grouped = np.block([[X, -Y], [Y, X]])
    P = _GROUPED_TO_CANONICAL
    return P @ grouped @ P.T


def passive_symplectic(chart) -> SymplecticMatrix:
    return SymplecticMatrix(symplectic_from_unitary(u2_matrix(chart)), "passive")


def unitary_from_symplectic(S) -> np.ndarray:
    """Inverse of :func:`symplectic_from_unitary` for passive S."""
    S = getattr(S, "entries", S)
    P = _GROUPED_TO_CANONICAL
    grouped = P.T @ np.asarray(S) @ P
    return grouped[:2, :2] + 1j * grouped[2:, :2]


def chart_from_unitary(U) -> U2Chart:
    """A chart reproducing U, which must lie in the image of the parametrization.

    Every U(2) element with ``det U = -exp(i(phi1 + phi2))`` consistent with
    its entries is covered; in practice this is all of U(2).
    """
    U = np.asarray(U, dtype=complex)
    theta = float(np.arctan2(abs(U[0, 0]), abs(U[0, 1])))
    phi = float(np.angle(U[0, 0])) if abs(U[0, 0]) > 1e-12 else 0.0
    if abs(U[0, 1]) > 1e-12:
        phi1 = float(np.angle(U[0, 1]))
        phi2 = float(np.angle(U[1, 0]))
    else:
        # cos(theta) = 0: only phi1 + phi2 is fixed, by the (1, 1) entry
        phi1 = float(np.angle(U[1, 1])) + phi + np.pi
        phi2 = 0.0
    return canonical_chart((theta, phi, phi1, phi2))


def apply(S, V) -> np.ndarray:
    """Transform a covariance matrix: ``S V S^T``, re-symmetrized."""
    S = getattr(S, "entries", S)
    out = S @ np.asarray(V, dtype=float) @ S.T
    return _freeze((out + out.T) / 2)


def _check_squeeze(*etas):
    for eta in etas:
        if not eta > 0:
            raise NonPositiveSqueeze(f"squeeze factor must be positive, got {eta}")


def local_squeeze(eta_a: float, eta_b: float | None = None) -> SymplecticMatrix:
    """diag(sqrt(eta_a), 1/sqrt(eta_a), sqrt(eta_b), 1/sqrt(eta_b))."""
    eta_b = eta_a if eta_b is None else eta_b
    _check_squeeze(eta_a, eta_b)
    ra, rb = np.sqrt(eta_a), np.sqrt(eta_b)
    return SymplecticMatrix(np.diag([ra, 1 / ra, rb, 1 / rb]), "local")


def rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def _euler_block(alpha, eta, beta):
    r = np.sqrt(eta)
    return rotation(alpha) @ np.diag([r, 1 / r]) @ rotation(beta)


def _block_diag(a, b) -> np.ndarray:
    out = np.zeros((4, 4))
    out[:2, :2] = a
    out[2:, 2:] = b
    return out


def local_symplectic(alpha_a, sq_a, beta_a, alpha_b, sq_b, beta_b) -> SymplecticMatrix:
    """Per-mode Euler form R(alpha) diag(sqrt(eta), 1/sqrt(eta)) R(beta)."""
    _check_squeeze(sq_a, sq_b)
    return SymplecticMatrix(
        _block_diag(_euler_block(alpha_a, sq_a, beta_a), _euler_block(alpha_b, sq_b, beta_b)),
        "local",
    )


def _inv_sqrt_2x2(M) -> np.ndarray:
    # sqrt(M) = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)) for symmetric PD M
    s = np.sqrt(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    t = np.sqrt(M[0, 0] + M[1, 1] + 2 * s)
    root = (M + s * np.eye(2)) / t
    # det(sqrt M) = sqrt(det M) = s
    return np.array([[root[1, 1], -root[0, 1]], [-root[1, 0], root[0, 0]]]) / s


def _signed_svd(C):
    """C = R1 diag(s1, s2) R2^T with R1, R2 rotations and s1 >= |s2|, s1 >= 0."""
    U, s, Vt = np.linalg.svd(C)
    s = s.copy()
    if np.linalg.det(U) < 0:
        U[:, 1] *= -1
        s[1] *= -1
    if np.linalg.det(Vt) < 0:
        Vt[1, :] *= -1
        s[1] *= -1
    return U, s, Vt.T


def standard_form(V, tol: float = 1e-9) -> tuple[StandardFormParams, SymplecticMatrix]:
    """Local symplectic reduction to ``A = aI, B = bI, C = diag(c+, c-)``.

    Returns the parameters and the local map L with ``apply(L, V)`` in
    standard form. Convention: ``c+ >= |c-| >= 0`` in magnitude order with
    ``c+ >= 0``, and ``sign(c+ c-) = sign(det C)``.
    """
    V = np.asarray(V, dtype=float)
    if not is_physical(V, tol):
        raise NotPhysical("standard form requires a physical covariance matrix")
    A, B, C = V[:2, :2], V[2:, 2:], V[:2, 2:]
    a = np.sqrt(np.linalg.det(A))
    b = np.sqrt(np.linalg.det(B))
    # det(sqrt(a) A^{-1/2}) = a / sqrt(det A) = 1, so these are symplectic
    SA = np.sqrt(a) * _inv_sqrt_2x2(A)
    SB = np.sqrt(b) * _inv_sqrt_2x2(B)
    R1, s, R2 = _signed_svd(SA @ C @ SB.T)
    L = SymplecticMatrix(_block_diag(R1.T @ SA, R2.T @ SB), "local")
    params = StandardFormParams(float(a), float(b), float(s[0]), float(s[1]))
    return params, L
