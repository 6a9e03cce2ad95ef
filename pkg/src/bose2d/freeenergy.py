"""Assembly of the free-energy upper bound and its special-function pieces.

The bound per unit area at density rho and temperature T is

    f_upper = 2*pi*rho^2*delta*(1 + (gamma + 1/4 + log(pi)/2)*delta)
              + T/(2*pi)^2 * int log(1 - exp(-sqrt(p^4 + 8*pi*rho*delta*p^2)/T)) dp
              + C * rho^2*delta*(delta*|log delta| + T/Tc)^2

with an explicit configuration constant C (the error amplitude is never
silently folded into the total).  The thermal integral, the dilogarithm that
majorizes it, and the closed-form constant integral from the Bogoliubov
diagonalization each come with an independent quadrature route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from scipy.integrate import quad

from .errors import (
    CutoffTooLarge,
    DomainError,
    NegativeInput,
    QuadratureNonconvergence,
)
from .frozen import REMARK3_SLACK_C
from .params import EULER_GAMMA, GasParameters

#: gamma + 1/4 + log(pi)/2, the coefficient of the second-order ground term.
GROUND_COEF = EULER_GAMMA + 0.25 + 0.5 * math.log(math.pi)

PI2_OVER_6 = math.pi ** 2 / 6.0


@dataclass(frozen=True)
class BoundBreakdown:
    """The three contributions and their sum; gamma kept for reports."""

    ground_term: float
    thermal_term: float
    error_term: float
    f_upper: float
    ground_term_y: float
    gamma_const: float = EULER_GAMMA


def dilog(z: float) -> float:
    """Li2(z) on [0, 1] to 1e-14, by series plus the reflection identity."""
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"dilog defined on [0, 1], got {z!r}")
    if z == 0.0:
        return 0.0
    if z == 1.0:
        return PI2_OVER_6
    if z > 0.5:
        return PI2_OVER_6 - math.log(z) * math.log1p(-z) - dilog(1.0 - z)
    total = 0.0
    term = z
    k = 1
    while True:
        total += term / (k * k)
        k += 1
        term *= z
        if term / (k * k) < 1e-18:
            return total


def thermal_integral(rho: float, delta: float, T: float, tol: float = 1e-9) -> float:
    """T/(2*pi)^2 * int_{R^2} log(1 - exp(-sqrt(p^4 + 8*pi*rho*delta*p^2)/T)) dp.

    The substitution u = dispersion/T flattens the integrable log singularity
    at the origin:

        value = T^3/(2*pi) * int_0^inf u*log(1 - e^-u)/sqrt(a^2 + 4 u^2 T^2) du

    with a = 8*pi*rho*delta.  Always <= 0; T = 0 returns 0 by convention.
    """
    if T < 0:
        raise NegativeInput("T must be nonnegative")
    if rho < 0 or delta < 0:
        raise NegativeInput("rho and delta must be nonnegative")
    if T == 0.0:
        return 0.0
    a = 8.0 * math.pi * rho * delta

    def integrand(u):
        if u == 0.0:
            return 0.0
        return u * math.log(-math.expm1(-u)) / math.sqrt(a * a + 4.0 * u * u * T * T)

    u_max = 60.0
    points = []
    if a > 0:
        points.append(min(a * math.sqrt(2.0) / T, u_max * 0.5))  # u at p^2 = a
    thermal_u = math.sqrt(max(1.0 + a / T, 0.0))                 # u at p^2 = T
    points.append(min(thermal_u, u_max * 0.5))
    points = sorted({pt for pt in points if 0 < pt < u_max})
    value, err = quad(integrand, 0.0, u_max, points=points or None, limit=400,
                      epsabs=0.0, epsrel=max(1e-13, 0.01 * tol))
    # |log(1 - e^-u)| ~ e^-u beyond u_max
    tail = math.exp(-u_max) * (u_max + 1.0) / math.sqrt(a * a + 4 * u_max ** 2 * T * T)
    result = T ** 3 / (2.0 * math.pi) * value
    budget = T ** 3 / (2.0 * math.pi) * (err + tail)
    if budget > tol * max(abs(result), 1e-300):
        raise QuadratureNonconvergence(
            f"thermal_integral: error budget {budget:g} above tol")
    return result


class ExplicitIntegral(NamedTuple):
    quadrature: float
    closed_form: float


def explicit_constant_integral(A: float, k_c: float, tol: float = 1e-6) -> ExplicitIntegral:
    """Constant term of the diagonalization, quadrature next to closed form.

    Quadrature of (1/2) int (sqrt(p^4 + 2Ap^2) - p^2 - A
    + A^2/(2p^2) * 1_{|p| > k_c}) dp/(2*pi)^2 in the radial variable u = p^2,
    against the antiderivative-based closed form

        (A^2 / 16 pi) * (1/2 - log 2 + log A - 2 log k_c),

    valid for k_c << sqrt(A); the two agree to O(k_c/sqrt(A)).
    """
    if A <= 0 or k_c <= 0:
        raise NegativeInput("A and k_c must be positive")
    if k_c * k_c > A / 100.0:
        raise CutoffTooLarge(f"k_c^2 = {k_c * k_c:g} > A/100 = {A / 100:g}")

    k2 = k_c * k_c

    def core(u):
        return math.sqrt(u * (u + 2.0 * A)) - u - A

    inner, err_in = quad(core, 0.0, k2, limit=200,
                         epsabs=0.0, epsrel=max(1e-13, 0.01 * tol))
    outer, err_out = quad(lambda u: core(u) + A * A / (2.0 * u), k2, math.inf,
                          points=None, limit=400,
                          epsabs=0.0, epsrel=max(1e-13, 0.01 * tol))
    quadrature = (inner + outer) / (8.0 * math.pi)
    closed = A * A / (16.0 * math.pi) * (0.5 - math.log(2.0) + math.log(A)
                                         - 2.0 * math.log(k_c))
    if (err_in + err_out) / (8.0 * math.pi) > tol * max(abs(quadrature), 1e-300):
        raise QuadratureNonconvergence("explicit_constant_integral: quad error above tol")
    return ExplicitIntegral(quadrature=quadrature, closed_form=closed)


def condensate_constant_closed_form(rho0: float, delta: float, rho: float,
                                    Y: float) -> float:
    """The same closed form written through the gas parameters.

    With A = 4*pi*rho0*delta and k_c = 2*exp(-gamma)*sqrt(rho*Y) the generic
    expression collapses, by log algebra alone, to

        (A^2 / 16 pi) * (2*gamma + 1/2 + log pi + log(rho0*delta/(2*rho*Y))).
    """
    A = 4.0 * math.pi * rho0 * delta
    return A * A / (16.0 * math.pi) * (
        2.0 * EULER_GAMMA + 0.5 + math.log(math.pi)
        + math.log(rho0 * delta / (2.0 * rho * Y)))


def assemble_bound(params: GasParameters, error_C: float = 1.0,
                   tol: float = 1e-9) -> BoundBreakdown:
    """Evaluate the three terms of the bound at the given parameters.

    The Y-form of the ground term, 4*pi*rho^2*Y*(1 - Y|log Y|
    + (2*gamma + 1/2 + log pi)*Y), is carried along as a cross-check; the two
    forms agree to O(rho^2 Y^3 log^2 Y).
    """
    rho, delta, T, Y = params.rho, params.delta, params.T, params.Y
    ground = 2.0 * math.pi * rho ** 2 * delta * (1.0 + delta * GROUND_COEF)
    thermal = thermal_integral(rho, delta, T, tol=tol)
    error = error_C * rho ** 2 * delta * (
        delta * abs(math.log(delta)) + T / params.Tc) ** 2
    ground_y = 4.0 * math.pi * rho ** 2 * Y * (
        1.0 - Y * abs(math.log(Y))
        + (2.0 * EULER_GAMMA + 0.5 + math.log(math.pi)) * Y)
    return BoundBreakdown(ground_term=ground, thermal_term=thermal,
                          error_term=error, f_upper=ground + thermal + error,
                          ground_term_y=ground_y)


class Remark3Chain(NamedTuple):
    lhs: float
    majorant: float
    expanded: float
    holds: bool


def remark3_chain(rho: float, delta: float, T: float,
                  slack_C: float = REMARK3_SLACK_C, tol: float = 1e-9) -> Remark3Chain:
    """Three rungs of the thermal-term inequality chain, with the check bit.

    lhs is the thermal integral, the majorant is the quadratic-dispersion
    bound -(T^2/4*pi)*Li2(exp(-4*pi*rho*delta/T)), and the expanded form is
    -pi*T^2/24 + 4*pi*rho^2*delta*T/Tc + slack_C*rho^2*delta^2 with the slack
    constant frozen from a sweep.  Requires 0 < T < Tc.
    """
    if rho <= 0 or delta <= 0:
        raise NegativeInput("rho and delta must be positive")
    Tc = 4.0 * math.pi * rho / abs(math.log(delta))
    if not 0.0 < T < Tc:
        raise DomainError(f"remark3_chain requires 0 < T < Tc = {Tc:g}")
    lhs = thermal_integral(rho, delta, T, tol=tol)
    x = 4.0 * math.pi * rho * delta / T
    z = math.exp(-x) if x < 745.0 else 0.0
    majorant = -(T * T / (4.0 * math.pi)) * dilog(z)
    expanded = (-math.pi * T * T / 24.0
                + 4.0 * math.pi * rho ** 2 * delta * T / Tc
                + slack_C * rho ** 2 * delta ** 2)
    scale = max(abs(lhs), abs(majorant), abs(expanded), 1e-300)
    holds = (lhs <= majorant + 1e-12 * scale) and (majorant <= expanded + 1e-12 * scale)
    return Remark3Chain(lhs=lhs, majorant=majorant, expanded=expanded, holds=holds)
