"""Entropy function, spectral inequalities and ideal-gas truncation tails.

Two exact statements about pairs of density matrices are implof this module:
the eigenvalue-difference inequality

    sum_i |lambda_i(G1) - lambda_i(G2)|  <=  ||G1 - G2||_1

for descending-sorted spectra, and the Fannes-type bound

    |sum_{i in I} (h(lambda_i(G1)) - h(lambda_i(G2)))|
        <=  log|I| * ||G1 - G2||_1 + h(||G1 - G2||_1)

valid whenever the trace distance stays below 1/e, with h(x) = -x log x.
Sorting matters: pairing unsorted spectra breaks the first inequality, see
the projector example in the tests.  The truncation tails quantify how much
of a quadratic Gibbs state lives outside the index set with fewer than M
quanta per mode and no quanta above momentum sqrt(K).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CutoffTooSmall, DimensionMismatch, DomainError
from .bogolattice import BogoliubovField, MomentumLattice


def entropy_h(x):
    """h(x) = -x log x on [0, 1], continuously extended by h(0) = 0."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -1e-12) or np.any(arr > 1.0 + 1e-12):
        raise DomainError("entropy_h domain is [0, 1]")
    clipped = np.clip(arr, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(clipped > 0.0, -clipped * np.log(np.where(clipped > 0, clipped, 1.0)), 0.0)
    return out if arr.ndim else float(out)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace dense matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix must be Hermitian to 1e-12")
        if abs(np.trace(m).real - 1.0) > 1e-12:
            raise ValueError("density matrix trace must be 1 to 1e-12")
        eigs = np.linalg.eigvalsh(m)
        if eigs.min() < -1e-12:
            raise ValueError("density matrix must be PSD to 1e-12")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def spectrum_descending(self) -> np.ndarray:
        return np.sort(np.linalg.eigvalsh(self.matrix))[::-1]


def vn_entropy(gamma: DensityMatrix) -> float:
    """Von Neumann entropy, sum of h over the spectrum."""
    return float(np.sum(entropy_h(np.clip(gamma.spectrum_descending(), 0.0, 1.0))))


def trace_distance(g1: DensityMatrix, g2: DensityMatrix) -> float:
    """Trace norm of the difference, the sum of |eigenvalues|."""
    if g1.dim != g2.dim:
        raise DimensionMismatch(f"dims {g1.dim} and {g2.dim} differ")
    return float(np.sum(np.abs(np.linalg.eigvalsh(g1.matrix - g2.matrix))))


class EvDifferenceResult(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def eigenvalue_difference_check(g1: DensityMatrix, g2: DensityMatrix) -> EvDifferenceResult:
    """sum_i |lambda_i down(G1) - lambda_i down(G2)| against ||G1 - G2||_1."""
    lam1 = g1.spectrum_descending()
    lam2 = g2.spectrum_descending()
    lhs = float(np.sum(np.abs(lam1 - lam2)))
    rhs = trace_distance(g1, g2)
    return EvDifferenceResult(lhs=lhs, rhs=rhs, holds=lhs <= rhs + 1e-10)


class FannesResult(NamedTuple):
    lhs: float
    rhs: float
    holds: bool
    applicable: bool
    distance: float


def fannes_check(g1: DensityMatrix, g2: DensityMatrix, I_size: int) -> FannesResult:
    """Entropy-difference bound over the I_size largest eigenvalues of each.

    Mirrors the lemma hypothesis: pairs with trace distance above 1/e are
    reported as not applicable rather than failed.
    """
    if g1.dim != g2.dim:
        raise DimensionMismatch(f"dims {g1.dim} and {g2.dim} differ")
    if not 1 <= I_size <= g1.dim:
        raise ValueError("I_size must lie in [1, dim]")
    dist = trace_distance(g1, g2)
    if dist > 1.0 / math.e:
        return FannesResult(lhs=math.nan, rhs=math.nan, holds=True,
                            applicable=False, distance=dist)
    lam1 = np.clip(g1.spectrum_descending()[:I_size], 0.0, 1.0)
    lam2 = np.clip(g2.spectrum_descending()[:I_size], 0.0, 1.0)
    lhs = abs(float(np.sum(entropy_h(lam1) - entropy_h(lam2))))
    rhs = math.log(I_size) * dist + float(entropy_h(dist))
    return FannesResult(lhs=lhs, rhs=rhs, holds=lhs <= rhs + 1e-10,
                        applicable=True, distance=dist)


def random_density_matrix(rng: np.random.Generator, dim: int) -> DensityMatrix:
    """Normalized A A-dagger with standard complex Gaussian A (full rank)."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = a @ a.conj().T
    m /= np.trace(m).real
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m)


def near_pair(rng: np.random.Generator, dim: int,
              target_distance: float) -> tuple[DensityMatrix, DensityMatrix]:
    """A pair at an exact trace distance, by linear mixing with a perturber."""
    g1 = random_density_matrix(rng, dim)
    perturber = random_density_matrix(rng, dim)
    full = trace_distance(g1, perturber)
    eps = min(1.0, target_distance / full) if full > 0 else 0.0
    m2 = (1.0 - eps) * g1.matrix + eps * perturber.matrix
    return g1, DensityMatrix(0.5 * (m2 + m2.conj().T))


def randomized_suite(seed: int, cases: int = 200, max_dim: int = 64) -> list[dict]:
    """Seeded eigenvalue-difference and Fannes cases as JSON-ready records."""
    root = np.random.default_rng(seed)
    case_seeds = root.integers(0, 2**63 - 1, size=2 * cases)
    records = []
    for idx in range(cases):
        case_seed = int(case_seeds[idx])
        rng = np.random.default_rng(case_seed)
        dim = int(rng.integers(2, max_dim + 1))
        res = eigenvalue_difference_check(random_density_matrix(rng, dim),
                                          random_density_matrix(rng, dim))
        records.append({"case_id": f"ev_difference_{idx:03d}", "seed": case_seed,
                        "lhs": res.lhs, "rhs": res.rhs, "holds": res.holds})
    for idx in range(cases):
        case_seed = int(case_seeds[cases + idx])
        rng = np.random.default_rng(case_seed)
        dim = int(rng.integers(2, max_dim + 1))
        target = float(rng.uniform(0.0, 0.95 / math.e))
        g1, g2 = near_pair(rng, dim, target)
        res = fannes_check(g1, g2, I_size=dim)
        records.append({"case_id": f"fannes_{idx:03d}", "seed": case_seed,
                        "lhs": res.lhs, "rhs": res.rhs, "holds": res.holds})
    return records


def suite_results_json(seed: int, cases: int = 200, max_dim: int = 64) -> str:
    return json.dumps(randomized_suite(seed, cases=cases, max_dim=max_dim), indent=1)


@dataclass(frozen=True)
class TruncationParams:
    """Occupation cutoff M per mode, momentum cutoff sqrt(K), and beta."""

    K: float
    M: int
    beta: float

    def __post_init__(self):
        if self.K < 0:
            raise ValueError("K must be nonnegative")
        if not (isinstance(self.M, (int, np.integer)) and self.M >= 1):
            raise ValueError("M must be an integer >= 1")
        if self.beta <= 0:
            raise ValueError("beta must be positive")


def geometric_tail(beta_d: float, M: int) -> float:
    """sum_{n >= M} exp(-beta_d * n) = exp(-beta_d*M)/(1 - exp(-beta_d))."""
    x = math.exp(-beta_d)
    return x ** M / (1.0 - x)


def geometric_tail_weighted(beta_d: float, M: int) -> float:
    """sum_{n >= M} n exp(-beta_d n) = x^M (M + x/(1-x)) / (1-x)."""
    x = math.exp(-beta_d)
    return x ** M * (M + x / (1.0 - x)) / (1.0 - x)


class TruncationTails(NamedTuple):
    tail_M: float          # sum_{|q| <= sqrt(K)} exp(-beta D0_q M)
    tail_K: float          # sum_{|q| > sqrt(K)} exp(-beta D0_q)
    log_partition: float   # -sum_p log(1 - exp(-beta D0_p))
    weighted_tail: float   # energy-weighted mass outside the index set


def truncation_tails(lattice: MomentumLattice, field: BogoliubovField,
                     tp: TruncationParams) -> TruncationTails:
    """Ideal-gas tail sums of the quadratic Gibbs state outside the index set.

    The weighted tail is the beta-weighted energy expectation restricted to
    configurations excluded by the (M, K) truncation, assembled from the
    per-mode geometric identities; the per-mode pieces are exact, only the
    lattice is truncated, which is why the cutoff must clear sqrt(K) with a
    thermal margin.
    """
    if field.lattice is not lattice:
        raise ValueError("field was built on a different lattice")
    if field.T <= 0:
        raise ValueError("truncation tails require T > 0")
    beta, M, K = tp.beta, tp.M, tp.K
    if not math.isclose(beta, field.beta, rel_tol=1e-12):
        raise ValueError("tp.beta disagrees with the field temperature")
    cutoff2 = lattice.cutoff ** 2
    if cutoff2 < K:
        raise CutoffTooSmall("lattice cutoff below sqrt(K)")
    if beta * cutoff2 < 30.0:
        raise CutoffTooSmall("thermal margin beta*cutoff^2 < 30 beyond sqrt(K)")

    w = field.weights
    bd = beta * field.D0
    x = np.exp(-bd)
    inside = field.p2 <= K

    tail_M = float(np.sum(w[inside] * np.exp(-bd[inside] * M)))
    tail_K = float(np.sum(w[~inside] * x[~inside]))
    log_partition = -float(np.sum(w * np.log(-np.expm1(-bd))))

    # total beta-weighted occupation energy sum_p beta D0_p n_p over all modes
    energy_total = float(np.sum(w * bd * field.n_occ))
    # per-mode excluded pieces: the rest of the gas at the mode's own weight
    # plus the mode's truncated geometric series
    own_in = bd[inside] * (x[inside] ** M) * (M + x[inside] / (1.0 - x[inside]))
    rest_in = (energy_total - bd[inside] * field.n_occ[inside]) * np.exp(-bd[inside] * M)
    own_out = bd[~inside] * x[~inside] * (1.0 + x[~inside] / (1.0 - x[~inside]))
    rest_out = (energy_total - bd[~inside] * field.n_occ[~inside]) * x[~inside]
    weighted = float(np.sum(w[inside] * (rest_in + own_in))
                     + np.sum(w[~inside] * (rest_out + own_out)))
    return TruncationTails(tail_M=tail_M, tail_K=tail_K,
                           log_partition=log_partition, weighted_tail=weighted)
