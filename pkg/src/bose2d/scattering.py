"""2D s-wave scattering length of positive radial compactly supported potentials.

The scattering length a(v) is defined through the minimizer of

    2*pi / log(R/a) = inf { int_{B(0,R)} |grad phi|^2 + v |phi|^2 / 2,
                            phi = 1 on the boundary },

whose radial Euler-Lagrange equation is phi'' + phi'/r = (v/2) phi.  Outside
the support the minimizer is log(r/a)/log(R/a), so a is read off from the
logarithmic derivative at the support radius and does not depend on R.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson, solve_ivp

from .errors import (
    MeshMismatch,
    NegativeInput,
    NonPositiveLogArgument,
    SolverDivergence,
)

_SERIES_START = 1e-6  # ODE start radius in units of the support radius


@dataclass(frozen=True)
class RadialPotential:
    """Nonnegative radial potential, either a closed-form soft disk or a table.

    Soft disks carry ``v0`` (height) and vanish beyond ``support_radius``;
    tabulated potentials interpolate linearly between strictly increasing
    radii and vanish beyond the last tabulated one.
    """

    support_radius: float
    v0: float | None = None
    r_table: np.ndarray | None = None
    v_table: np.ndarray | None = None

    def __post_init__(self):
        if self.support_radius < 0:
            raise NegativeInput("support radius must be nonnegative")
        if (self.v0 is None) == (self.r_table is None):
            raise ValueError("specify exactly one of v0 or a table")
        if self.v0 is not None and self.v0 < 0:
            raise NegativeInput("soft disk height must be nonnegative")
        if self.r_table is not None:
            r = np.asarray(self.r_table, dtype=float)
            v = np.asarray(self.v_table, dtype=float)
            if r.ndim != 1 or r.shape != v.shape or len(r) < 2:
                raise ValueError("table must be two equal 1d columns")
            if np.any(np.diff(r) <= 0):
                raise ValueError("table radii must be strictly increasing")
            if np.any(v < 0):
                raise NegativeInput("potential values must be nonnegative")
            object.__setattr__(self, "r_table", r)
            object.__setattr__(self, "v_table", v)

    @classmethod
    def soft_disk(cls, v0: float, R0: float) -> "RadialPotential":
        return cls(support_radius=float(R0), v0=float(v0))

    @classmethod
    def from_table(cls, r, v) -> "RadialPotential":
        r = np.asarray(r, dtype=float)
        return cls(support_radius=float(r[-1]), r_table=r,
                   v_table=np.asarray(v, dtype=float))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.v0 is not None:
            out = np.where(r <= self.support_radius, self.v0, 0.0)
        else:
            out = np.interp(r, self.r_table, self.v_table, left=self.v_table[0], right=0.0)
            out = np.where(r > self.r_table[-1], 0.0, out)
        return out if out.ndim else float(out)

    @property
    def is_zero(self) -> bool:
        if self.v0 is not None:
            return self.v0 == 0.0
        return bool(np.all(self.v_table == 0.0))


def load_potential_table(path_or_text) -> RadialPotential:
    """Two-column decimal text (r, v(r)); one optional header line."""
    if hasattr(path_or_text, "read"):
        text = path_or_text.read()
    else:
        with open(path_or_text, "r", encoding="utf-8") as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    first = lines[0].split()
    skip = 0
    try:
        [float(tok) for tok in first[:2]]
    except ValueError:
        skip = 1
    data = np.loadtxt(io.StringIO("\n".join(lines)), skiprows=skip)
    if data.ndim == 1:
        data = data.reshape(1, -1)
    return RadialPotential.from_table(data[:, 0], data[:, 1])


@dataclass(frozen=True)
class ScatteringSolution:
    """Radial minimizer on [0, R], normalized to phi(R) = 1."""

    grid: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    scattering_length: float
    functional_value: float
    R: float
    support_radius: float


def _extract_scattering_length(phi_R0, dphi_R0, R0, R):
    """Match the interior solution to B*log(r/a) at the support radius."""
    if dphi_R0 <= 0:
        raise SolverDivergence("interior solution has nonpositive slope at R0")
    log_R0_over_a = phi_R0 / (R0 * dphi_R0)
    a = R0 * math.exp(-log_R0_over_a)
    if a >= R:
        raise NonPositiveLogArgument(
            f"solve_scattering: extracted a = {a:g} >= R = {R:g}; increase R")
    return a


def solve_scattering(v: RadialPotential, R: float, tol: float = 1e-10,
                     n_interior: int = 2000, n_exterior: int = 2000) -> ScatteringSolution:
    """Integrate the radial scattering equation and extract a(v).

    The ODE runs outward from a series start phi = 1 + v(0) r^2 / 8 near the
    coordinate singularity; the scattering length comes from matching the
    logarithmic derivative at the support radius, so it is independent of R
    by construction.  ``tol`` is a relative tolerance in (0, 1e-3].
    """
    R0 = v.support_radius
    if R <= R0:
        raise ValueError(f"matching radius R = {R:g} must exceed the support {R0:g}")
    if not 0 < tol <= 1e-3:
        raise ValueError("tol must lie in (0, 1e-3]")

    if v.is_zero:
        grid = np.linspace(0.0, R, n_exterior + 1)
        ones = np.ones_like(grid)
        return ScatteringSolution(grid=grid, phi=ones, dphi=np.zeros_like(grid),
                                  scattering_length=0.0, functional_value=0.0,
                                  R=R, support_radius=R0)

    r_start = _SERIES_START * R0
    v_origin = float(v(0.0))
    y_start = np.array([1.0 + v_origin * r_start ** 2 / 8.0,
                        v_origin * r_start / 4.0])

    def rhs(r, y):
        return (y[1], 0.5 * float(v(r)) * y[0] - y[1] / r)

    rtol = max(1e-13, min(1e-10, tol * 1e-3))
    sol = solve_ivp(rhs, (r_start, R0), y_start, method="DOP853",
                    rtol=rtol, atol=0.0, dense_output=True)
    if not sol.success:
        raise SolverDivergence(f"solve_scattering: {sol.message}")
    phi_R0, dphi_R0 = sol.y[:, -1]
    a = _extract_scattering_length(phi_R0, dphi_R0, R0, R)

    log_R_over_a = math.log(R / a)
    # rescale the interior leg so the exterior log profile hits 1 at R
    scale = math.log(R0 / a) / (log_R_over_a * phi_R0)

    r_in = np.linspace(r_start, R0, n_interior)
    y_in = sol.sol(r_in)
    r_in = np.concatenate(([0.0], r_in))
    phi_in = np.concatenate(([scale], y_in[0] * scale))
    dphi_in = np.concatenate(([0.0], y_in[1] * scale))

    r_out = np.geomspace(R0, R, n_exterior + 1)
    r_out[0], r_out[-1] = R0, R
    phi_out = np.log(r_out / a) / log_R_over_a
    dphi_out = 1.0 / (r_out * log_R_over_a)

    grid = np.concatenate((r_in, r_out[1:]))
    phi = np.concatenate((phi_in, phi_out[1:]))
    dphi = np.concatenate((dphi_in, dphi_out[1:]))
    functional = variational_value(v, grid, phi, R=R, dphi=dphi)
    return ScatteringSolution(grid=grid, phi=phi, dphi=dphi,
                              scattering_length=a, functional_value=functional,
                              R=R, support_radius=R0)


def variational_value(v: RadialPotential, r, phi, R=None, dphi=None) -> float:
    """2*pi * int (phi'^2 + v phi^2 / 2) r dr over the sampled mesh.

    The composite Simpson rule is applied separately on the two sides of the
    support radius when the mesh contains it, so the kink of a discontinuous
    potential does not degrade the order.  ``dphi`` defaults to a second-order
    finite difference of the samples.
    """
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if r.ndim != 1 or r.shape != phi.shape or len(r) < 3:
        raise MeshMismatch("phi must be sampled on a 1d mesh of length >= 3")
    if np.any(np.diff(r) <= 0):
        raise MeshMismatch("mesh radii must be strictly increasing")
    if R is None:
        R = r[-1]
    if abs(r[-1] - R) > 1e-12 * max(R, 1.0):
        raise MeshMismatch(f"mesh ends at {r[-1]:g}, expected R = {R:g}")
    if not v.is_zero and r[-1] < v.support_radius * (1 - 1e-12):
        raise MeshMismatch("mesh does not cover the potential support")
    if dphi is None:
        dphi = np.gradient(phi, r)
    else:
        dphi = np.asarray(dphi, dtype=float)

    integrand = (dphi ** 2 + 0.5 * v(r) * phi ** 2) * r
    split = None
    if r[0] < v.support_radius < r[-1]:
        hits = np.nonzero(np.isclose(r, v.support_radius, rtol=1e-12, atol=0.0))[0]
        if hits.size:
            split = int(hits[0])
    if split is None or split in (0, len(r) - 1):
        return 2.0 * math.pi * float(simpson(integrand, x=r))
    left = simpson(integrand[: split + 1], x=r[: split + 1])
    # the exterior piece sees the one-sided limit of v at the shared point,
    # not the jump value, or the kink contaminates the quadrature
    v_right = v(np.nextafter(r[split:], np.inf))
    integrand_right = (dphi[split:] ** 2 + 0.5 * v_right * phi[split:] ** 2) * r[split:]
    right = simpson(integrand_right, x=r[split:])
    return 2.0 * math.pi * float(left + right)


def r_independence_report(v: RadialPotential, R_list, tol: float = 1e-10) -> float:
    """Max relative spread of a(v) across matching radii."""
    values = [solve_scattering(v, R, tol=tol).scattering_length for R in R_list]
    lo, hi = min(values), max(values)
    if values[0] == 0.0:
        return 0.0
    return (hi - lo) / values[0]
