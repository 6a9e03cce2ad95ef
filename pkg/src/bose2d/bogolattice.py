"""Momentum-lattice Bogoliubov fields, lemma sums and the condensate fixed point.

Momenta live on (2*pi/L) Z^2 minus the origin, truncated at a radial cutoff.
All radial summands here depend on |p| only, so shells are grouped by the
integer n = i^2 + j^2 with its lattice multiplicity; sums run over shells in
ascending n, which reproduces the radially sorted per-point order (terms
within a shell are identical) and keeps physical-scale lattices with tens of
millions of points affordable.

Per point, with x = p^2 + rho0*g_hat(p) and D = sqrt(p^4 + 2 p^2 rho0 g_hat):

    c = sqrt((x + D)/(2D)),   s = -rho0*g_hat(p)/sqrt(2D(x + D)),

the stable forms of the Bogoliubov coefficients.  They satisfy c^2 - s^2 = 1
and c*s = -rho0*g_hat/(2D) identically (s carries the sign of -g_hat, which
matters where J0 oscillates below zero).  Occupations use the fixed
dispersion D0 = sqrt(p^4 + 8*pi*rho*delta*p^2) of the quadratic model, which
depends on the full density rho, not on the condensate density rho0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import j0 as bessel_j0

from .errors import (
    CutoffTooSmall,
    NegativeInput,
    NoCondensateSolution,
    NonPositiveDispersion,
)
from .freeenergy import thermal_integral
from .params import GasParameters
from .softpot import SoftPotential

_MULT_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}
_POINTS_LIMIT = 500_000

#: Header of the diagnostics CSV rows.
DIAG_HEADER = "L,S2,SC,Q2,N0,residual"


def _radial_multiplicities(n_max: int):
    """Distinct n = i^2 + j^2 <= n_max over Z^2 minus the origin, with counts."""
    if n_max < 1:
        raise CutoffTooSmall("momentum cutoff excludes every lattice point")
    cached = _MULT_CACHE.get(n_max)
    if cached is not None:
        return cached
    # reuse a larger cached reduction by trimming
    for key in sorted(_MULT_CACHE):
        if key >= n_max:
            nsq, mult = _MULT_CACHE[key]
            stop = int(np.searchsorted(nsq, n_max, side="right"))
            out = (nsq[:stop].copy(), mult[:stop].copy())
            _MULT_CACHE[n_max] = out
            return out
    m = math.isqrt(n_max)
    counts = np.zeros(n_max + 1, dtype=np.int64)
    axis = np.arange(1, m + 1, dtype=np.int64)
    counts[axis * axis] += 1
    j = np.arange(1, m + 1, dtype=np.int64)
    j2 = j * j
    chunk = max(1, 4_000_000 // max(len(j), 1))
    for start in range(1, m + 1, chunk):
        i = np.arange(start, min(start + chunk, m + 1), dtype=np.int64)
        vals = (i * i)[:, None] + j2[None, :]
        flat = vals.ravel()
        flat = flat[flat <= n_max]
        if flat.size:
            counts += np.bincount(flat, minlength=n_max + 1)
    counts *= 4  # each quadrant/axis representative stands for 4 points
    nsq = np.nonzero(counts)[0]
    out = (nsq, counts[nsq])
    _MULT_CACHE[n_max] = out
    return out


@dataclass(frozen=True)
class MomentumLattice:
    """Truncated momentum lattice of box side L, grouped into radial shells."""

    L: float
    cutoff: float
    nsq: np.ndarray   # ascending distinct i^2 + j^2
    mult: np.ndarray  # points per shell

    @classmethod
    def build(cls, L: float, cutoff: float) -> "MomentumLattice":
        if L <= 0 or cutoff <= 0:
            raise NegativeInput("L and cutoff must be positive")
        n_max = int(math.floor((cutoff * L / (2.0 * math.pi)) ** 2 * (1 + 4e-16)))
        nsq, mult = _radial_multiplicities(n_max)
        return cls(L=float(L), cutoff=float(cutoff), nsq=nsq, mult=mult)

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / self.L

    @property
    def n_points(self) -> int:
        return int(self.mult.sum())

    @property
    def n_max(self) -> int:
        return int(self.nsq[-1]) if len(self.nsq) else 0

    def radii(self) -> np.ndarray:
        return self.spacing * np.sqrt(self.nsq.astype(np.float64))

    def p_squared(self) -> np.ndarray:
        return self.spacing ** 2 * self.nsq.astype(np.float64)

    def points_int(self) -> np.ndarray:
        """Explicit integer points, radially sorted with lexicographic ties."""
        if self.n_points > _POINTS_LIMIT:
            raise ValueError("explicit points are for desk-scale lattices only")
        m = math.isqrt(self.n_max)
        rng = np.arange(-m, m + 1, dtype=np.int64)
        ii, jj = np.meshgrid(rng, rng, indexing="ij")
        nn = ii * ii + jj * jj
        keep = (nn > 0) & (nn <= self.n_max)
        i, jv, nv = ii[keep], jj[keep], nn[keep]
        order = np.lexsort((jv, i, nv))
        return np.stack((i[order], jv[order]), axis=1)

    def points(self) -> np.ndarray:
        return self.spacing * self.points_int().astype(np.float64)

    def disk_count_check(self) -> tuple[int, float, float]:
        """(count, disk-area estimate, boundary-layer allowance)."""
        t = (self.cutoff * self.L / (2.0 * math.pi)) ** 2
        return self.n_points, math.pi * t, 10.0 * (math.sqrt(t) + 1.0)


@dataclass(frozen=True)
class BogoliubovField:
    """Per-shell Bogoliubov data on a lattice at (rho0, rho, T)."""

    lattice: MomentumLattice
    rho0: float
    rho: float
    T: float
    gmass: float
    b: float
    p2: np.ndarray
    ghat: np.ndarray
    c: np.ndarray
    s: np.ndarray
    D: np.ndarray
    D0: np.ndarray
    n_occ: np.ndarray
    weights: np.ndarray

    @property
    def beta(self) -> float:
        return math.inf if self.T == 0 else 1.0 / self.T


def bogoliubov_coefficients(p2, rho0_ghat):
    """(c, s, D) from p^2 and rho0*g_hat(p), in cancellation-free form."""
    p2 = np.asarray(p2, dtype=float)
    rg = np.asarray(rho0_ghat, dtype=float)
    disc = p2 * (p2 + 2.0 * rg)
    if np.any(disc <= 0.0):
        raise NonPositiveDispersion(
            "p^4 + 2 p^2 rho0 g_hat(p) <= 0 at some lattice point")
    D = np.sqrt(disc)
    x = p2 + rg
    c = np.sqrt((x + D) / (2.0 * D))
    s = -rg / np.sqrt(2.0 * D * (x + D))
    return c, s, D


def build_field(lattice: MomentumLattice, sp: SoftPotential | None, rho0: float,
                T: float, rho: float | None = None) -> BogoliubovField:
    """Populate every per-shell quantity; sp=None means g identically zero.

    ``rho`` enters only the occupation dispersion D0 and defaults to
    ``rho0``; the condensate solver passes the full density explicitly.
    """
    if rho0 < 0 or T < 0:
        raise NegativeInput("rho0 and T must be nonnegative")
    rho = rho0 if rho is None else float(rho)
    p2 = lattice.p_squared()
    if sp is None:
        gmass, b = 0.0, 0.0
        ghat = np.zeros_like(p2)
    else:
        gmass, b = sp.gmass, sp.b
        ghat = gmass * bessel_j0(b * lattice.radii())
    c, s, D = bogoliubov_coefficients(p2, rho0 * ghat)
    D0 = np.sqrt(p2 * (p2 + 2.0 * rho * gmass))
    if T == 0:
        n_occ = np.zeros_like(p2)
    else:
        with np.errstate(over="ignore"):  # 1/inf = 0 is the wanted tail value
            n_occ = 1.0 / np.expm1(D0 / T)
    return BogoliubovField(lattice=lattice, rho0=float(rho0), rho=rho, T=float(T),
                           gmass=gmass, b=b, p2=p2, ghat=ghat, c=c, s=s, D=D,
                           D0=D0, n_occ=n_occ,
                           weights=lattice.mult.astype(np.float64))


class LemmaSums(NamedTuple):
    S2: float   # sum of s_p^2
    SC: float   # sum of |s_p c_p|
    Q2: float   # sum of (s_p^2 + c_p^2) n_p


def _envelope_gmax(gmass: float, b: float, cutoff: float) -> float:
    """Upper bound on |g_hat(p)| for p beyond the cutoff (J0 envelope)."""
    if gmass == 0.0:
        return 0.0
    bx = b * cutoff
    if bx < 1.0:
        return gmass
    return gmass * min(1.0, 1.1 * math.sqrt(2.0 / (math.pi * bx)))


def lemma_sums(field: BogoliubovField, tail_rtol: float = 1e-8,
               enforce_tail: bool = True) -> LemmaSums:
    """The three lemma sums over the truncated lattice, shells ascending.

    With ``enforce_tail`` the estimated per-point contribution just beyond
    the cutoff must stay below ``tail_rtol`` of each running total, else
    ``CutoffTooSmall``; disable it for deliberately tiny test lattices.
    """
    w = field.weights
    s2 = field.s * field.s
    S2 = float(np.sum(w * s2))
    SC = float(np.sum(w * np.abs(field.s * field.c)))
    if field.T == 0:
        Q2 = 0.0
    else:
        Q2 = float(np.sum(w * (s2 + field.c * field.c) * field.n_occ))
    if enforce_tail:
        cutoff = field.lattice.cutoff
        g_env = _envelope_gmax(field.gmass, field.b, cutoff)
        rho0 = field.rho0
        failures = []
        if S2 > 0.0 and (rho0 * g_env) ** 2 / (4.0 * cutoff ** 4) > tail_rtol * S2:
            failures.append("S2")
        if SC > 0.0 and rho0 * g_env / (2.0 * cutoff ** 2) > tail_rtol * SC:
            failures.append("SC")
        if field.T > 0 and Q2 > 0.0:
            arg = cutoff ** 2 / field.T
            q2_term = 2.0 * math.exp(-arg) if arg > 50.0 else 2.0 / math.expm1(arg)
            if q2_term > tail_rtol * Q2:
                failures.append("Q2")
        if failures:
            raise CutoffTooSmall(
                f"lemma_sums: cutoff {cutoff:g} leaves a tail above "
                f"{tail_rtol:g} of {', '.join(failures)}")
    return LemmaSums(S2=S2, SC=SC, Q2=Q2)


def default_cutoff(params: GasParameters, sp: SoftPotential | None,
                   rho0: float | None = None) -> float:
    """Starting momentum cutoff: interaction scale, thermal scale, IR floor."""
    rho0 = params.rho if rho0 is None else rho0
    gmass = 0.0 if sp is None else sp.gmass
    candidates = [12.0 * 2.0 * math.pi / params.L]
    if rho0 * gmass > 0:
        candidates.append(8.0 * math.sqrt(rho0 * gmass))
    if params.T > 0:
        candidates.append(math.sqrt(40.0 * params.T))
    return max(candidates)


def solve_condensate(params: GasParameters, sp: SoftPotential | None,
                     tol: float = 1e-11, cutoff: float | None = None,
                     threshold: float = 0.75, strict_half: bool = False,
                     tail_rtol: float = 1e-8, max_extend: int = 8):
    """Bisection for N0 with N0 + sum s^2 + sum (s^2+c^2) n = N = rho*L^2.

    The bracket starts at [N/2, N]; when the root lies below N/2 (strong
    thermal depletion near the critical temperature) the lower edge is
    extended geometrically unless ``strict_half`` demands the proposition
    regime rho0 >= rho/2, in which case ``NoCondensateSolution`` is raised.
    A guarded fixed-point polish follows the bisection, which lands exactly
    on N - sum n_p whenever g vanishes.  Returns (N0, rho0, diagnostics).
    """
    T, L, N = params.T, params.L, params.N
    if T > threshold * params.Tc:
        raise NoCondensateSolution(
            f"solve_condensate: T = {T:g} exceeds {threshold:g}*Tc = "
            f"{threshold * params.Tc:g}")
    gmass = 0.0 if sp is None else sp.gmass
    cut = cutoff if cutoff is not None else default_cutoff(params, sp)

    for attempt in range(max_extend + 1):
        lattice = MomentumLattice.build(L, cut)
        p2 = lattice.p_squared()
        w = lattice.mult.astype(np.float64)
        ghat = (gmass * bessel_j0(sp.b * lattice.radii())) if gmass else np.zeros_like(p2)
        if T > 0:
            D0 = np.sqrt(p2 * (p2 + 2.0 * params.rho * gmass))
            n_occ = 1.0 / np.expm1(D0 / T)
        else:
            n_occ = np.zeros_like(p2)

        def sums(N0: float) -> tuple[float, float]:
            rg = (N0 / (L * L)) * ghat
            disc = p2 * (p2 + 2.0 * rg)
            if np.any(disc <= 0.0):
                raise NonPositiveDispersion(
                    "solve_condensate: dispersion closed at a lattice point")
            D = np.sqrt(disc)
            x = p2 + rg
            S2 = float(np.sum(w * (rg * rg) / (2.0 * D * (x + D))))
            Q2 = float(np.sum(w * (x / D) * n_occ)) if T > 0 else 0.0
            return S2, Q2

        def residual(N0: float) -> float:
            S2, Q2 = sums(N0)
            return N0 + S2 + Q2 - N

        iterations = 0
        hi = N
        r_hi = residual(hi)
        if r_hi == 0.0:
            N0 = hi
        else:
            lo = 0.5 * N
            r_lo = residual(lo)
            iterations = 2
            while r_lo > 0.0:
                if strict_half:
                    raise NoCondensateSolution(
                        "solve_condensate: no root with rho0 >= rho/2 "
                        "(thermal depletion too strong)")
                lo *= 0.5
                if lo < 1e-6 * N:
                    raise NoCondensateSolution(
                        "solve_condensate: occupation sums exceed N for every "
                        "condensate fraction")
                r_lo = residual(lo)
                iterations += 1
            while hi - lo > 0.25 * tol * N and iterations < 300:
                mid = 0.5 * (lo + hi)
                r_mid = residual(mid)
                iterations += 1
                if r_mid > 0.0:
                    hi, r_hi = mid, r_mid
                else:
                    lo, r_lo = mid, r_mid
            N0 = lo if abs(r_lo) <= abs(r_hi) else hi
            best = abs(residual(N0))
            for _ in range(4):  # guarded fixed-point polish
                S2, Q2 = sums(N0)
                candidate = N - S2 - Q2
                if not 0.0 < candidate <= N:
                    break
                r_cand = abs(residual(candidate))
                iterations += 1
                if r_cand < best:
                    N0, best = candidate, r_cand
                else:
                    break

        rho0 = N0 / (L * L)
        field = build_field(lattice, sp, rho0, T, rho=params.rho)
        try:
            final = lemma_sums(field, tail_rtol=tail_rtol, enforce_tail=True)
        except CutoffTooSmall:
            if attempt == max_extend:
                raise
            cut *= 1.5
            continue
        final_residual = N0 + final.S2 + final.Q2 - N
        diagnostics = {
            "residual": final_residual,
            "S2": final.S2,
            "SC": final.SC,
            "Q2": final.Q2,
            "N0": N0,
            "rho0": rho0,
            "N": N,
            "iterations": iterations,
            "cutoff": cut,
            "n_shells": len(lattice.nsq),
            "n_points": lattice.n_points,
            "rho0_at_least_half": bool(N0 >= 0.5 * N * (1.0 - 1e-12)),
            "satisfies_T_le_rho": bool(T <= params.rho),
        }
        return N0, rho0, diagnostics
    raise CutoffTooSmall("solve_condensate: cutoff extension exhausted")


def format_diagnostics_row(params: GasParameters, diagnostics: dict) -> str:
    """One CSV row matching DIAG_HEADER, full round-trip precision."""
    fields = (params.L, diagnostics["S2"], diagnostics["SC"], diagnostics["Q2"],
              diagnostics["N0"], diagnostics["residual"])
    return ",".join(repr(float(x)) for x in fields)


def interaction_convolution(field: BogoliubovField, sp: SoftPotential | None) -> float:
    """(1/2L^2) * sum_{p,k} g_hat(k) c_p s_p c_{p+k} s_{p+k} on the lattice.

    Terms whose translate p + k leaves the truncated lattice (including the
    origin) contribute zero.  The p -> -p symmetry of c*s halves the k loop.
    Desk-scale lattices only; the double sum is quadratic in the point count.
    """
    lattice = field.lattice
    if sp is None or sp.gmass == 0.0:
        return 0.0
    pts = lattice.points_int()
    npts = len(pts)
    h = lattice.spacing
    p2 = h * h * (pts[:, 0].astype(float) ** 2 + pts[:, 1].astype(float) ** 2)
    radii = np.sqrt(p2)
    ghat = sp.gmass * bessel_j0(sp.b * radii)
    rg = field.rho0 * ghat
    c, s, _ = bogoliubov_coefficients(p2, rg)
    cs = c * s

    m = math.isqrt(lattice.n_max)
    grid = -np.ones((2 * m + 1, 2 * m + 1), dtype=np.int64)
    grid[pts[:, 0] + m, pts[:, 1] + m] = np.arange(npts)

    lex_positive = (pts[:, 0] > 0) | ((pts[:, 0] == 0) & (pts[:, 1] > 0))
    total = 0.0
    for k_idx in np.nonzero(lex_positive)[0]:
        tgt = pts + pts[k_idx]
        inside = (np.abs(tgt[:, 0]) <= m) & (np.abs(tgt[:, 1]) <= m)
        rows = grid[tgt[inside, 0] + m, tgt[inside, 1] + m]
        hit = rows >= 0
        partial = float(np.sum(cs[inside][hit] * cs[rows[hit]]))
        total += 2.0 * ghat[k_idx] * partial  # k and -k contribute equally
    return total / (2.0 * lattice.L ** 2)


class SumVsIntegralResult(NamedTuple):
    rows: list            # (L, lattice_value, integral_value, abs_error)
    slope: float


def sum_vs_integral(rho: float, delta: float, T: float, L_values,
                    tol: float = 1e-9, cutoff_factor: float = 45.0) -> SumVsIntegralResult:
    """Thermal lattice sum against its infinite-volume integral, per box side.

    Compares L^-2 sum_p log(1 - exp(-D0(p)/T)) with
    (2*pi)^-2 int log(1 - exp(-D0(p)/T)) dp and fits the log-log decay slope
    of the absolute error over the (geometric) L sweep.
    """
    L_values = [float(L) for L in L_values]
    if len(L_values) < 2:
        raise ValueError("need at least two box sides for a slope")
    if T < 0:
        raise NegativeInput("T must be nonnegative")
    if T == 0.0:
        rows = [(L, 0.0, 0.0, 0.0) for L in L_values]
        return SumVsIntegralResult(rows=rows, slope=math.nan)
    integral = thermal_integral(rho, delta, T, tol=tol) / T
    a2 = 8.0 * math.pi * rho * delta
    rows = []
    for L in L_values:
        lattice = MomentumLattice.build(L, math.sqrt(cutoff_factor * T))
        p2 = lattice.p_squared()
        D0 = np.sqrt(p2 * (p2 + a2))
        w = lattice.mult.astype(np.float64)
        lattice_value = float(np.sum(w * np.log(-np.expm1(-D0 / T)))) / (L * L)
        rows.append((L, lattice_value, integral, abs(lattice_value - integral)))
    logs = np.log([r[3] for r in rows])
    slope = float(np.polyfit(np.log(L_values), logs, 1)[0])
    return SumVsIntegralResult(rows=rows, slope=slope)
