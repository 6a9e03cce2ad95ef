"""Softened surface potential, its Fourier identities and the pair profile.

Conjugating the Hamiltonian with a Jastrow product of truncated scattering
profiles replaces the bare potential by a uniform measure on the circle of
radius ``b`` with total mass ``4*pi/log(b/a)``.  Its Fourier transform is
proportional to the Bessel function J0, which makes every identity in this
module a statement about J0:

* ``vtilde_hat(p) = (4*pi/log(b/a)) * J0(b p)``
* ``g_hat(p) = 4*pi*delta * J0(b p)``  (g carries the extra weight
  ``phi(b) = delta*log(b/a)`` of the scattering profile on the circle)
* ``g_omega_hat(0)``, the overlap of g with ``omega = 1 - phi``, equals the
  singular radial integral of ``(g_hat^2 - g_hat(0)^2 * 1_{p <= k_c})/(2p^2)``
  with infrared cutoff ``k_c = 2 exp(-gamma - 1/delta)/a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import j0 as bessel_j0
from scipy.special import jn_zeros

from .errors import MissingScatteringSolution, QuadratureNonconvergence
from .params import EULER_GAMMA, GasParameters
from .scattering import ScatteringSolution


@dataclass(frozen=True)
class SoftPotential:
    """Surface potential at radius b derived from scattering length a.

    ``delta = 0`` is allowed and makes g vanish identically (free field);
    otherwise ``phi(b) = delta*log(b/a)`` must lie in (0, 1), which is the
    statement that b stays below the healing radius.
    """

    a: float
    b: float
    delta: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= self.a:
            raise ValueError("need 0 < a < b")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if self.delta > 0 and not self.phib < 1.0:
            raise ValueError(
                f"phi(b) = delta*log(b/a) = {self.phib:g} >= 1; b beyond Rtilde")

    @classmethod
    def from_parameters(cls, params: GasParameters) -> "SoftPotential":
        return cls(a=params.a, b=params.b, delta=params.delta)

    @property
    def log_b_over_a(self) -> float:
        return math.log(self.b / self.a)

    @property
    def mass(self) -> float:
        """Total mass of the surface potential, vtilde_hat(0)."""
        return 4.0 * math.pi / self.log_b_over_a

    @property
    def gmass(self) -> float:
        """g_hat(0) = 4*pi*delta."""
        return 4.0 * math.pi * self.delta

    @property
    def phib(self) -> float:
        """Value of the scattering profile on the circle, delta*log(b/a)."""
        return self.delta * self.log_b_over_a

    @property
    def cutoff_wavenumber_log(self) -> float:
        """log k_c with k_c = 2 exp(-gamma - 1/delta)/a, evaluated in log space."""
        if self.delta <= 0:
            raise ValueError("k_c requires delta > 0")
        return math.log(2.0) - EULER_GAMMA - 1.0 / self.delta - math.log(self.a)


def vtilde_hat(sp: SoftPotential, p):
    """Fourier transform of the surface potential at wavenumber p >= 0."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("wavenumbers must be nonnegative")
    out = sp.mass * bessel_j0(sp.b * p)
    return out if out.ndim else float(out)


def g_hat(sp: SoftPotential, p):
    """Fourier transform of g at wavenumber p >= 0; g_hat(0) = 4*pi*delta."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("wavenumbers must be nonnegative")
    out = sp.gmass * bessel_j0(sp.b * p)
    return out if out.ndim else float(out)


def _j0sq_tail(x: float) -> float:
    # int_x^inf J0(t)^2/t dt for x a zero of J0, from the Hankel expansion
    return 1.0 / (math.pi * x) - 1.0 / (8.0 * math.pi * x * x) \
        - 1.0 / (2.0 * math.pi * x ** 3)


def g_omega_zero_quadrature(sp: SoftPotential, params: GasParameters | None = None,
                            tol: float = 1e-7, intervals: int = 96) -> float:
    """Radial quadrature of the singular integral defining g_omega_hat(0).

    After scaling x = b*p the integral reduces to

        4*pi*delta^2 * [ int_0^x1 (J0^2 - 1)/x dx + log(x1/(k_c b))
                         + int_x1^inf J0^2/x dx ]

    with x1 the first J0 zero.  The infrared logarithm is evaluated in log
    space, so the (often denormal) cutoff k_c never underflows; the
    oscillatory tail is summed over J0-zero-delimited intervals and finished
    with the Hankel-expansion tail, whose error at the last zero is certified
    against ``tol``.
    """
    if sp.delta <= 0:
        raise ValueError("g_omega_hat(0) requires delta > 0")
    if params is not None:
        if not (math.isclose(params.delta, sp.delta, rel_tol=1e-12)
                and math.isclose(params.a, sp.a, rel_tol=1e-12)):
            raise ValueError("params disagree with the soft potential")
    if intervals < 8:
        raise ValueError("need at least 8 oscillation intervals")

    zeros = jn_zeros(0, intervals)
    x1 = zeros[0]

    def inner(x):
        if x == 0.0:
            return 0.0
        j = bessel_j0(x)
        return (j * j - 1.0) / x

    val_in, err_in = quad(inner, 0.0, x1, limit=200)

    # log(x1 / (k_c b)) assembled from logs; k_c b can underflow as a float
    log_kc_b = sp.cutoff_wavenumber_log + math.log(sp.b)
    log_term = math.log(x1) - log_kc_b

    val_osc = 0.0
    err_osc = 0.0
    for lo, hi in zip(zeros[:-1], zeros[1:]):
        v, e = quad(lambda x: bessel_j0(x) ** 2 / x, lo, hi, limit=60)
        val_osc += v
        err_osc += e
    x_last = zeros[-1]
    tail = _j0sq_tail(x_last)
    tail_uncertainty = 1.0 / x_last ** 4 + 2.0 / (math.pi * x_last ** 3)

    total = val_in + log_term + val_osc + tail
    budget = err_in + err_osc + tail_uncertainty
    if budget > tol * max(abs(total), 1.0):
        raise QuadratureNonconvergence(
            f"g_omega_zero_quadrature: error budget {budget:g} exceeds tol")
    return 4.0 * math.pi * sp.delta ** 2 * total


def g_omega_zero_oracle(sp: SoftPotential) -> float:
    """Real-space value omega(b) * (mass of g) = 4*pi*delta*(1 - delta*log(b/a))."""
    return sp.gmass * (1.0 - sp.phib)


def jastrow_profile(sp: SoftPotential, r, solution: ScatteringSolution | None = None):
    """Truncated pair profile f: the scattering profile below b, 1 beyond.

    Between the potential support and b the profile is the explicit
    ``log(r/a)/log(b/a)``; inside the support it is the solver profile
    rescaled so that f(b) = 1.  Without a solution the log form is used down
    to r = a, below which the interior shape is unknowable and
    ``MissingScatteringSolution`` is raised.
    """
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r_arr < 0):
        raise ValueError("radii must be nonnegative")
    out = np.ones_like(r_arr)
    below = r_arr < sp.b
    if solution is None:
        if np.any(r_arr[below] < sp.a):
            raise MissingScatteringSolution(
                "jastrow_profile: interior profile below r = a requires a "
                "scattering solution")
        out[below] = np.log(r_arr[below] / sp.a) / sp.log_b_over_a
    else:
        if not math.isclose(solution.scattering_length, sp.a, rel_tol=1e-6):
            raise ValueError("solution scattering length disagrees with sp.a")
        R0 = solution.support_radius
        log_region = below & (r_arr >= R0)
        out[log_region] = np.log(r_arr[log_region] / sp.a) / sp.log_b_over_a
        interior = below & (r_arr < R0)
        if np.any(interior):
            # solver profile is normalized at its own R; rescale to f(b) = 1
            scale = math.log(solution.R / sp.a) / sp.log_b_over_a
            out[interior] = np.interp(r_arr[interior], solution.grid,
                                      solution.phi) * scale
    return out if np.ndim(r) else float(out[0])
