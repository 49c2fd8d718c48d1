"""Random physical covariance matrices, pure states and separability censuses."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .mode_transforms import apply, local_symplectic
from .symplectic_core import StandardFormParams, is_physical, make_covariance
from .tps_search import ABS_SEPARABLE_TOL, DEFAULT_BUDGET, DEFAULT_GRID, classify


@dataclass(frozen=True)
class SampleRanges:
    diag_lo: float = 0.5
    diag_hi: float = 1.5
    offdiag_lo: float = -1.0
    offdiag_hi: float = 1.0

    def __post_init__(self):
        if not self.diag_lo > 0:
            raise ValueError("diag_lo must be positive")
        if self.diag_lo > self.diag_hi or self.offdiag_lo > self.offdiag_hi:
            raise ValueError("range bounds are reversed")


DEFAULT_RANGES = SampleRanges()


@dataclass(frozen=True)
class CensusReport:
    generated: int
    physical: int
    abs_separable: int
    fraction: float
    seed: int
    mode: str

    def to_dict(self) -> dict:
        return asdict(self)


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for draw ``index`` under master ``seed``."""
    return np.random.default_rng([seed, index])


def standard_from_draw(a, b, c_plus, c_minus):
    """Standard-form matrix, or None when it violates the uncertainty principle."""
    V = StandardFormParams(a, b, c_plus, c_minus).matrix()
    return V if is_physical(V) else None


def generic_from_draw(diag, upper):
    """Symmetric matrix from 4 diagonal and 6 upper-triangle entries (row-major)."""
    m = np.diag(np.asarray(diag, dtype=float))
    m[np.triu_indices(4, 1)] = upper
    V = make_covariance(m + np.triu(m, 1).T)
    return V if is_physical(V) else None


def sample_standard(rng, ranges: SampleRanges = DEFAULT_RANGES):
    rng = np.random.default_rng(rng)
    a, b = rng.uniform(ranges.diag_lo, ranges.diag_hi, 2)
    cp, cm = rng.uniform(ranges.offdiag_lo, ranges.offdiag_hi, 2)
    return standard_from_draw(a, b, cp, cm)


def sample_generic(rng, ranges: SampleRanges = DEFAULT_RANGES):
    rng = np.random.default_rng(rng)
    diag = rng.uniform(ranges.diag_lo, ranges.diag_hi, 4)
    upper = rng.uniform(ranges.offdiag_lo, ranges.offdiag_hi, 6)
    return generic_from_draw(diag, upper)


def sample_generic_via_local(rng, ranges: SampleRanges = DEFAULT_RANGES, max_squeeze: float = 2.0):
    """Standard-form draw dressed by a random local symplectic map."""
    rng = np.random.default_rng(rng)
    V = sample_standard(rng, ranges)
    if V is None:
        return None
    angles = rng.uniform(0, 2 * np.pi, 4)
    etas = np.exp(rng.uniform(-np.log(max_squeeze), np.log(max_squeeze), 2))
    T = local_symplectic(angles[0], etas[0], angles[1], angles[2], etas[1], angles[3])
    return apply(T, V)


SAMPLERS = {
    "standard": sample_standard,
    "generic": sample_generic,
    "generic-via-T": sample_generic_via_local,
}


def pure_tms(r: float) -> np.ndarray:
    """Two-mode squeezed vacuum: a = b = cosh(2r)/2, c+ = -c- = sinh(2r)/2."""
    if not (np.isfinite(r) and r >= 0):
        raise ValueError(f"squeeze parameter must be finite and >= 0, got {r}")
    a, c = np.cosh(2 * r) / 2, np.sinh(2 * r) / 2
    return StandardFormParams(a, a, c, -c).matrix()


def draw_physical(mode: str, n_physical: int, ranges: SampleRanges = DEFAULT_RANGES, seed: int = 0):
    """Draw until ``n_physical`` states pass; returns (states, number of raw draws)."""
    sampler = SAMPLERS[mode]
    states = []
    index = 0
    while len(states) < n_physical:
        V = sampler(sample_rng(seed, index), ranges)
        index += 1
        if V is not None:
            states.append(V)
    return states, index


def census(
    mode: str = "standard",
    n_physical: int = 7746,
    ranges: SampleRanges = DEFAULT_RANGES,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    tol: float = ABS_SEPARABLE_TOL,
    grid=DEFAULT_GRID,
    progress=None,
) -> CensusReport:
    """Fraction of random physical states that are absolutely separable."""
    if n_physical < 1:
        raise ValueError("n_physical must be >= 1")
    if mode not in SAMPLERS:
        raise ValueError(f"unknown mode {mode!r}")
    states, generated = draw_physical(mode, n_physical, ranges, seed)
    count = 0
    for k, V in enumerate(states):
        verdict = classify(V, tol=tol, budget=budget, seed=seed, grid=grid).verdict
        count += verdict == "absolutely_separable"
        if progress is not None:
            progress(k + 1, n_physical)
    return CensusReport(generated, n_physical, count, count / n_physical, seed, mode)
