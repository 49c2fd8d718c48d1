"""Partial-transpose spectrum, logarithmic negativity and the PPT verdict."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .symplectic_core import (
    SPECTRUM_TOL,
    SymplecticSpectrum,
    block_invariants,
    spectrum_with_polish,
)

SEPARABILITY_TOL = 1e-9

# time reversal of mode A: p_A -> -p_A
PT_FLIP = np.diag([1.0, -1.0, 1.0, 1.0])


class NegativityResult(NamedTuple):
    log_negativity: float
    pt_spectrum: SymplecticSpectrum


def partial_transpose(V) -> np.ndarray:
    return PT_FLIP @ np.asarray(V, dtype=float) @ PT_FLIP


def pt_delta(V):
    """det A + det B - 2 det C; broadcasts over stacks of matrices."""
    det_a, det_b, det_c, _ = block_invariants(V)
    return det_a + det_b - 2 * det_c


def pt_symplectic_spectrum(V, tol: float = SPECTRUM_TOL) -> SymplecticSpectrum:
    det_a, det_b, det_c, det_v = block_invariants(V)
    return spectrum_with_polish(partial_transpose(V), float(det_a + det_b - 2 * det_c), float(det_v), tol)


# orthogonal maps of a thermal state land up to ~20 ulps below 1/2
_ROUNDING_FLOOR = 0.5 * (1 - 64 * np.finfo(float).eps)


def negativity_from_nu(nu_minus):
    """max(0, -log2(2 nu)); the larger PT eigenvalue never contributes for physical V.

    Eigenvalues within 64 ulps of 1/2 count as 1/2, so E_N below ~2e-14
    bits is reported as exactly 0.
    """
    nu_minus = np.asarray(nu_minus, dtype=float)
    nu_minus = np.where(nu_minus >= _ROUNDING_FLOOR, np.maximum(nu_minus, 0.5), nu_minus)
    with np.errstate(divide="ignore"):
        out = np.maximum(0.0, -np.log2(2.0 * nu_minus))
    return float(out) if out.ndim == 0 else out


def log_negativity(V, tol: float = SPECTRUM_TOL) -> NegativityResult:
    """Logarithmic negativity in bits.

    The four eigenvalues of the partially transposed sigma^{-1} V come in
    pairs +-i nu, so half the sum over all four equals the sum over the two
    moduli.
    """
    spec = pt_symplectic_spectrum(V, tol)
    total = sum(negativity_from_nu(nu) for nu in spec)
    return NegativityResult(float(total), spec)


def is_separable(V, tol: float = SEPARABILITY_TOL) -> bool:
    return pt_symplectic_spectrum(V).nu_minus >= 0.5 - tol
