"""Dense linear-algebra oracle on truncated multi-mode bosonic Fock spaces.

Everything here is exact matrix arithmetic at small occupation cutoffs:
displacement (Weyl) and two-mode squeeze (Bogoliubov) conjugations built by
matrix exponentials, quadratic Gibbs states, and Wick's theorem.  Truncation
breaks the canonical commutation relations only on the top occupation layer,
so every residual is measured on a low-occupation column subspace, where it
decays rapidly as the cutoff grows.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import expm

from .errors import CutoffTooSmall, WordTooLong


@dataclass(frozen=True)
class FockSpace:
    """modes <= 3 bosonic modes, each truncated at occupation n_max."""

    modes: int
    n_max: int

    def __post_init__(self):
        if not 1 <= self.modes <= 3:
            raise ValueError("1 to 3 modes supported")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")

    @property
    def dim(self) -> int:
        return (self.n_max + 1) ** self.modes

    def occupations(self) -> np.ndarray:
        """Per-basis-state occupation of each mode, shape (dim, modes)."""
        levels = self.n_max + 1
        idx = np.arange(self.dim)
        occ = np.empty((self.dim, self.modes), dtype=np.int64)
        for j in range(self.modes):
            # kron ordering: mode 0 is the most significant digit
            occ[:, j] = (idx // levels ** (self.modes - 1 - j)) % levels
        return occ

    def annihilator(self, mode: int) -> np.ndarray:
        single = np.diag(np.sqrt(np.arange(1, self.n_max + 1)), k=1).astype(complex)
        eye = np.eye(self.n_max + 1, dtype=complex)
        op = np.array([[1.0 + 0j]])
        for j in range(self.modes):
            op = np.kron(op, single if j == mode else eye)
        return op

    def creator(self, mode: int) -> np.ndarray:
        return self.annihilator(mode).conj().T

    def number_operator(self, mode: int | None = None) -> np.ndarray:
        occ = self.occupations()
        diag = occ.sum(axis=1) if mode is None else occ[:, mode]
        return np.diag(diag.astype(complex))

    def vacuum(self) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        vec[0] = 1.0
        return vec

    def top_layer_projector(self, mode: int) -> np.ndarray:
        mask = self.occupations()[:, mode] == self.n_max
        return np.diag(mask.astype(complex))

    def low_occupation_columns(self, support: int) -> np.ndarray:
        """Indices of basis states with total occupation <= support."""
        return np.nonzero(self.occupations().sum(axis=1) <= support)[0]

    def ccr_defect(self, mode: int) -> float:
        """Max deviation of [a, a*] from I - (n_max+1) P_top on the mode."""
        a = self.annihilator(mode)
        comm = a @ a.conj().T - a.conj().T @ a
        exact = np.eye(self.dim) - (self.n_max + 1) * self.top_layer_projector(mode)
        return float(np.max(np.abs(comm - exact)))


def _restricted_norm(matrix: np.ndarray, columns: np.ndarray) -> float:
    return float(np.linalg.norm(matrix[:, columns], 2))


class WeylCheck(NamedTuple):
    residual: float
    coherent_occupation: float
    displaced_tail: float


def weyl_conjugation_check(fs: FockSpace, epsilon: float,
                           state_support: int) -> WeylCheck:
    """Residual of W* a W = sqrt(epsilon) + a on low-occupation columns.

    W = exp(sqrt(epsilon) (a* - a)) displaces the first mode; the displaced
    vacuum is coherent with mean occupation epsilon.  Raises CutoffTooSmall
    when the displaced vacuum retains more than 1e-10 weight on the top
    occupation layer.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if not 0 <= state_support <= fs.n_max:
        raise ValueError("state_support must lie in [0, n_max]")
    a = fs.annihilator(0)
    gen = math.sqrt(epsilon) * (a.conj().T - a)
    W = expm(gen)
    displaced = W @ fs.vacuum()
    occ0 = fs.occupations()[:, 0]
    tail = float(np.sum(np.abs(displaced[occ0 == fs.n_max]) ** 2))
    if tail > 1e-10:
        raise CutoffTooSmall(f"displaced vacuum tail {tail:g} > 1e-10 at n_max")
    target = math.sqrt(epsilon) * np.eye(fs.dim) + a
    residual_op = W.conj().T @ a @ W - target
    cols = fs.low_occupation_columns(state_support)
    number = fs.number_operator()
    occupation = float(np.real(displaced.conj() @ number @ displaced))
    return WeylCheck(residual=_restricted_norm(residual_op, cols),
                     coherent_occupation=occupation, displaced_tail=tail)


def weyl_group_law_residual(fs: FockSpace, eps1: float, eps2: float) -> float:
    """|| W(e1) W(e2) - W((sqrt(e1)+sqrt(e2))^2) ||, exact for parallel generators."""
    a = fs.annihilator(0)
    direction = a.conj().T - a
    w1 = expm(math.sqrt(eps1) * direction)
    w2 = expm(math.sqrt(eps2) * direction)
    combined = expm((math.sqrt(eps1) + math.sqrt(eps2)) * direction)
    return float(np.linalg.norm(w1 @ w2 - combined, 2))


class BogoliubovCheck(NamedTuple):
    residual: float
    c: float
    s: float
    squeezed_occupation: float


def bogoliubov_conjugation_check(fs: FockSpace, phi: float) -> BogoliubovCheck:
    """Residual of exp(-B) a+ exp(B) = cosh(phi) a+ - sinh(phi) a-*.

    B = phi (a- a+ - a+* a-*), the two-mode squeeze whose conjugation
    coefficients are (c, s) = (cosh phi, -sinh phi); the squeezed vacuum
    carries sinh(phi)^2 quanta in each mode.  |phi| <= 1/2 keeps the
    squeezed state far from the occupation cutoff.
    """
    if fs.modes != 2:
        raise ValueError("Bogoliubov conjugation needs exactly two modes")
    if abs(phi) > 0.5:
        raise ValueError("|phi| must not exceed 1/2")
    ap, am = fs.annihilator(0), fs.annihilator(1)
    gen = phi * (am @ ap - ap.conj().T @ am.conj().T)
    U = expm(gen)
    U_inv = expm(-gen)
    c, s = math.cosh(phi), -math.sinh(phi)
    target = c * ap + s * am.conj().T
    residual_op = U_inv @ ap @ U - target
    cols = fs.low_occupation_columns(fs.n_max // 2)
    squeezed = U @ fs.vacuum()
    occ = float(np.real(squeezed.conj() @ fs.number_operator(0) @ squeezed))
    return BogoliubovCheck(residual=_restricted_norm(residual_op, cols),
                           c=c, s=s, squeezed_occupation=occ)


def unitarity_defect(fs: FockSpace, U: np.ndarray) -> float:
    """|| P (U*U - I) P || off the top two occupation layers of every mode."""
    occ = fs.occupations()
    mask = np.all(occ <= fs.n_max - 2, axis=1)
    cols = np.nonzero(mask)[0]
    defect = U.conj().T @ U - np.eye(fs.dim)
    return float(np.linalg.norm(defect[np.ix_(cols, cols)], 2))


def _gibbs_weights(fs: FockSpace, beta_d: Sequence[float]) -> np.ndarray:
    if len(beta_d) != fs.modes:
        raise ValueError("need one beta*D per mode")
    beta_d = np.asarray(beta_d, dtype=float)
    if np.any(beta_d <= 0):
        raise ValueError("beta*D must be positive")
    if np.min(beta_d) * fs.n_max < 25.0:
        raise CutoffTooSmall("beta*D*n_max < 25; Gibbs truncation not negligible")
    energy = fs.occupations() @ beta_d
    w = np.exp(-energy)
    return w / w.sum()


class GibbsCheck(NamedTuple):
    occupations: tuple
    expected: tuple
    deviations: tuple
    entropy_matrix: float
    entropy_formula: float


def gibbs_occupation_check(fs: FockSpace, beta_d: Sequence[float]) -> GibbsCheck:
    """Per-mode <a*a> of the truncated Gibbs state against 1/(e^(beta D)-1).

    Also compares the (diagonal) matrix entropy with the per-mode ideal
    formula sum_j [beta D_j n_j - log(1 - e^(-beta D_j))].
    """
    w = _gibbs_weights(fs, beta_d)
    occ = fs.occupations()
    measured = tuple(float(np.sum(w * occ[:, j])) for j in range(fs.modes))
    expected = tuple(1.0 / math.expm1(bd) for bd in beta_d)
    deviations = tuple(abs(m - e) for m, e in zip(measured, expected))
    entropy_matrix = float(np.sum(np.where(w > 0, -w * np.log(np.where(w > 0, w, 1.0)), 0.0)))
    entropy_formula = float(sum(bd * n - math.log(-math.expm1(-bd))
                                for bd, n in zip(beta_d, expected)))
    return GibbsCheck(occupations=measured, expected=expected, deviations=deviations,
                      entropy_matrix=entropy_matrix, entropy_formula=entropy_formula)


class WickCheck(NamedTuple):
    trace_value: complex
    wick_value: complex
    deviation: float


def _pairings(indices):
    if not indices:
        yield []
        return
    first, rest = indices[0], indices[1:]
    for k, second in enumerate(rest):
        for sub in _pairings(rest[:k] + rest[k + 1:]):
            yield [(first, second)] + sub


def wick_check(fs: FockSpace, beta_d: Sequence[float], word) -> WickCheck:
    """Tr(word * Gibbs) against the Wick pairing value, words up to length 4.

    ``word`` is a sequence of ("a" | "adag", mode) letters, leftmost letter
    applied last (operator order).  Pair expectations in the untruncated
    state: <a* a> = n, <a a*> = 1 + n per mode, all anomalous pairs vanish.
    """
    word = list(word)
    if len(word) > 4:
        raise WordTooLong(f"word of length {len(word)} exceeds 4")
    for kind, mode in word:
        if kind not in ("a", "adag"):
            raise ValueError("letters must be 'a' or 'adag'")
        if not 0 <= mode < fs.modes:
            raise ValueError("letter mode out of range")

    w = _gibbs_weights(fs, beta_d)
    op = np.eye(fs.dim, dtype=complex)
    for kind, mode in word:
        op = op @ (fs.annihilator(mode) if kind == "a" else fs.creator(mode))
    trace_value = complex(np.sum(np.diag(op) * w))

    n_mode = [1.0 / math.expm1(bd) for bd in np.asarray(beta_d, dtype=float)]

    def pair_value(i, j):
        (k1, m1), (k2, m2) = word[i], word[j]
        if m1 != m2:
            return 0.0
        if k1 == "adag" and k2 == "a":
            return n_mode[m1]
        if k1 == "a" and k2 == "adag":
            return 1.0 + n_mode[m1]
        return 0.0

    if len(word) % 2 == 1:
        wick_value = 0.0 + 0.0j
    else:
        total = 0.0
        for pairing in _pairings(list(range(len(word)))):
            term = 1.0
            for i, j in pairing:
                term *= pair_value(i, j)
            total += term
        wick_value = complex(total)
    return WickCheck(trace_value=trace_value, wick_value=wick_value,
                     deviation=abs(trace_value - wick_value))


def residual_staircase(n_max_values: Sequence[int], epsilon: float = 1.0,
                       phi: float = 0.3, support: int = 6) -> dict:
    """Weyl and Bogoliubov residuals across occupation cutoffs."""
    weyl = []
    bogo = []
    for n_max in n_max_values:
        weyl.append(weyl_conjugation_check(FockSpace(1, n_max), epsilon,
                                           min(support, n_max // 2)).residual)
        bogo.append(bogoliubov_conjugation_check(FockSpace(2, n_max), phi).residual)
    return {"n_max": list(n_max_values), "weyl": weyl, "bogoliubov": bogo}
