"""Two-mode covariance matrices, the symplectic form and symplectic spectra.

Conventions: hbar = 1, quadratures ordered (q_A, p_A, q_B, p_B), vacuum is
I/2 and every physical symplectic eigenvalue is >= 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AsymmetricInput, ComplexSpectrum, NonFiniteEntry, SingularCovariance

PHYSICAL_TOL = 1e-9
PURITY_TOL = 1e-8
SPECTRUM_TOL = 1e-9

SIGMA = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)
SIGMA.setflags(write=False)


class SymplecticSpectrum(NamedTuple):
    nu_plus: float
    nu_minus: float


@dataclass(frozen=True)
class StandardFormParams:
    """Parameters of ``[[a I, diag(c+, c-)], [diag(c+, c-), b I]]``."""

    a: float
    b: float
    c_plus: float
    c_minus: float

    def matrix(self) -> np.ndarray:
        a, b, cp, cm = self.a, self.b, self.c_plus, self.c_minus
        return _freeze(
            np.array(
                [
                    [a, 0.0, cp, 0.0],
                    [0.0, a, 0.0, cm],
                    [cp, 0.0, b, 0.0],
                    [0.0, cm, 0.0, b],
                ]
            )
        )


def _freeze(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=float)
    m.setflags(write=False)
    return m


def make_covariance(raw, tol: float = 1e-12) -> np.ndarray:
    """Validate a 4x4 matrix and return its read-only symmetrized copy.

    Raises
    ------
    NonFiniteEntry
        if any entry is NaN or infinite.
    AsymmetricInput
        if ``max |raw - raw.T| > tol``.
    """
    m = np.asarray(raw, dtype=float)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteEntry("covariance matrix has non-finite entries")
    asym = float(np.max(np.abs(m - m.T)))
    if asym > tol:
        raise AsymmetricInput(f"matrix asymmetry {asym:.3g} exceeds tolerance {tol:.3g}")
    return _freeze((m + m.T) / 2)


def vacuum() -> np.ndarray:
    return _freeze(np.eye(4) / 2)


def thermal(a: float, b: float | None = None) -> np.ndarray:
    b = a if b is None else b
    return _freeze(np.diag([a, a, b, b]))


def block_decompose(V) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split V into the local blocks A, B and the correlation block C."""
    V = np.asarray(V)
    return V[:2, :2].copy(), V[2:, 2:].copy(), V[:2, 2:].copy()


def _det2(m) -> np.ndarray:
    # works on (..., 2, 2) stacks
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def block_invariants(V) -> tuple:
    """Return (det A, det B, det C, det V); broadcasts over leading axes."""
    V = np.asarray(V, dtype=float)
    return (
        _det2(V[..., :2, :2]),
        _det2(V[..., 2:, 2:]),
        _det2(V[..., :2, 2:]),
        np.linalg.det(V),
    )


def spectrum_from_invariants(delta, det_v, tol: float = SPECTRUM_TOL):
    """Roots of ``x**2 - delta*x + det_v`` mapped to symplectic eigenvalues.

    Returns ``(nu_plus, nu_minus)`` as arrays (or floats for scalar input).
    Small negative discriminants (above ``-tol`` relative to ``delta**2``)
    are treated as a double root.
    """
    delta = np.asarray(delta, dtype=float)
    det_v = np.asarray(det_v, dtype=float)
    disc = delta * delta - 4.0 * det_v
    floor = -tol * np.maximum(1.0, delta * delta)
    if np.any(disc < floor):
        worst = float(np.min(disc))
        raise ComplexSpectrum(f"discriminant {worst:.3g} is negative; matrix is far from physical")
    root = np.sqrt(np.maximum(disc, 0.0))
    big = (delta + root) / 2
    # D / big avoids cancellation when the roots are far apart
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(big != 0.0, det_v / np.where(big != 0.0, big, 1.0), (delta - root) / 2)
    nu_plus = np.sqrt(np.abs(big))
    nu_minus = np.sqrt(np.abs(small))
    hi = np.maximum(nu_plus, nu_minus)
    lo = np.minimum(nu_plus, nu_minus)
    if hi.ndim == 0:
        return float(hi), float(lo)
    return hi, lo


def williamson_spectrum(V) -> SymplecticSpectrum:
    """Symplectic eigenvalues from the Hermitian matrix i sqrt(V) sigma sqrt(V).

    Well conditioned at degenerate spectra, unlike the biquadratic roots;
    requires V positive definite.
    """
    w, Q = np.linalg.eigh(np.asarray(V, dtype=float))
    root = (Q * np.sqrt(w)) @ Q.T
    ev = np.linalg.eigvalsh(1j * root @ SIGMA @ root)
    return SymplecticSpectrum(float(ev[3]), float(ev[2]))


# below this relative discriminant the closed form loses half its digits
_NEAR_DEGENERATE = 1e-6


def spectrum_with_polish(V, delta: float, det_v: float, tol: float = SPECTRUM_TOL) -> SymplecticSpectrum:
    """Closed-form spectrum, recomputed via :func:`williamson_spectrum` near a double root."""
    nu_plus, nu_minus = spectrum_from_invariants(delta, det_v, tol)
    if delta * delta - 4 * det_v < _NEAR_DEGENERATE * max(delta * delta, 1e-300):
        if np.min(np.linalg.eigvalsh(V)) > 0:
            return williamson_spectrum(V)
    return SymplecticSpectrum(nu_plus, nu_minus)


def symplectic_spectrum(V, tol: float = SPECTRUM_TOL) -> SymplecticSpectrum:
    det_a, det_b, det_c, det_v = block_invariants(V)
    return spectrum_with_polish(V, float(det_a + det_b + 2 * det_c), float(det_v), tol)


def is_physical(V, tol: float = PHYSICAL_TOL) -> bool:
    """True iff V is positive definite and its smaller symplectic eigenvalue is >= 1/2 - tol."""
    V = np.asarray(V, dtype=float)
    try:
        np.linalg.cholesky(V)
    except np.linalg.LinAlgError:
        return False
    try:
        spec = symplectic_spectrum(V)
    except ComplexSpectrum:
        return False
    return spec.nu_minus >= 0.5 - tol


def is_pure(V, tol: float = PURITY_TOL) -> bool:
    # for physical V both eigenvalues are 1/2 exactly when det V = 1/16
    return abs(float(np.linalg.det(np.asarray(V, dtype=float))) - 1.0 / 16.0) <= tol


def wigner_density(V, x) -> float:
    """Zero-mean Gaussian Wigner function of V at phase-space point x."""
    V = np.asarray(V, dtype=float)
    x = np.asarray(x, dtype=float)
    det_v = float(np.linalg.det(V))
    if det_v <= 0:
        raise SingularCovariance(f"det V = {det_v:.3g} is not positive")
    quad = float(x @ np.linalg.solve(V, x))
    return float(np.exp(-0.5 * quad) / (4 * np.pi**2 * np.sqrt(det_v)))
