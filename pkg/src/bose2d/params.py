"""Scalar parameter algebra of the dilute 2D Bose gas.

Every other module consumes a validated :class:`GasParameters`.  Units fix
hbar^2/2m = 1 and k_B = 1, so lengths are the only dimension: densities are
length^-2 and energies (including the temperature) are length^-2 as well.

Derived scales, for density ``rho``, scattering length ``a`` and gas
parameter ``x = rho*a^2 < 1/e``:

* ``Y = 1/|log x|`` and ``delta = 2/(|log x| + log|log x|)``, the two
  logarithmic diluteness parameters, with ``delta <= 2Y``;
* ``Tc = 4*pi*rho/|log delta|``, the Berezinskii-Kosterlitz-Thouless
  temperature scale;
* ``L = rho^(-1/2) Y^(-alpha)``, the side of the periodic box (default
  ``alpha = 5/2``);
* ``Rtilde = a/sqrt(x*Y)``, the healing-type radius with
  ``log(Rtilde/a) = 1/delta`` exactly;
* ``b``, the pair-correlation truncation radius, constrained to the window
  ``a < b < rho^(-1/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DegenerateGas, NegativeInput

#: Euler-Mascheroni constant.
EULER_GAMMA = 0.5772156649015329

#: Default box exponent in L = rho^(-1/2) Y^(-alpha).
DEFAULT_ALPHA = 2.5

#: Default exponent in the asymptotic choice b = rho^(-1/2) Y^(b_exponent).
DEFAULT_B_EXPONENT = 5.5

#: Serialization keys of the flat key-value config record.
RECORD_KEYS = ("rho", "a", "T", "alpha", "b")


@dataclass(frozen=True)
class GasParameters:
    """Validated parameter set; construct via :func:`derive_parameters`."""

    rho: float
    a: float
    T: float
    alpha: float
    b: float
    eta: float
    Y: float
    delta: float
    Tc: float
    L: float
    Rtilde: float

    def __post_init__(self):
        if self.rho <= 0 or self.a <= 0:
            raise NegativeInput("rho and a must be positive")
        if self.T < 0:
            raise NegativeInput("T must be nonnegative")
        if not -0.5 <= self.eta <= 0.5:
            raise ValueError("eta must lie in [-1/2, 1/2]")
        if not self.a < self.b < self.rho ** -0.5:
            raise ValueError(
                f"b = {self.b:g} outside the validity window "
                f"({self.a:g}, {self.rho ** -0.5:g})"
            )

    @property
    def rho_a2(self) -> float:
        return self.rho * self.a * self.a

    @property
    def N(self) -> float:
        """Mean particle number rho * L^2 of the periodic box."""
        return self.rho * self.L * self.L

    @property
    def beta(self) -> float:
        return math.inf if self.T == 0 else 1.0 / self.T

    def with_temperature(self, T: float) -> "GasParameters":
        """Same gas at a different temperature (all lengths unchanged)."""
        if T < 0:
            raise NegativeInput("T must be nonnegative")
        return replace(self, T=float(T))


def derive_parameters(rho, a, T=0.0, alpha=DEFAULT_ALPHA, b=None,
                      b_exponent=None, eta=0.0) -> GasParameters:
    """Populate every derived scale from (rho, a, T).

    ``b`` defaults to ``rho^(-1/2) Y^(b_exponent)`` (exponent 11/2) whenever
    that value lands inside the validity window ``(a, rho^(-1/2))``; for
    moderately dilute gases the asymptotic formula falls below ``a``, in
    which case the log-midpoint ``sqrt(a * rho^(-1/2))`` is used instead.

    Raises ``NegativeInput`` for nonpositive rho or a (or negative T) and
    ``DegenerateGas`` when ``rho*a^2 >= 1/e``, where ``log|log| > 0`` fails.
    """
    rho = float(rho)
    a = float(a)
    if rho <= 0 or a <= 0:
        raise NegativeInput("rho and a must be positive")
    if T < 0:
        raise NegativeInput("T must be nonnegative")
    x = rho * a * a
    if x >= math.exp(-1.0):
        raise DegenerateGas(f"rho*a^2 = {x:g} >= 1/e")
    log_x = abs(math.log(x))
    Y = 1.0 / log_x
    delta = 2.0 / (log_x + math.log(log_x))
    Tc = 4.0 * math.pi * rho / abs(math.log(delta))
    L = rho ** -0.5 * Y ** -alpha
    Rtilde = a / math.sqrt(x * Y)
    mean_spacing = rho ** -0.5
    if b is None:
        exponent = DEFAULT_B_EXPONENT if b_exponent is None else float(b_exponent)
        b = mean_spacing * Y ** exponent
        if not a < b < mean_spacing:
            # asymptotic choice leaves the window at desk-scale diluteness
            b = math.sqrt(a * mean_spacing)
    return GasParameters(rho=rho, a=a, T=float(T), alpha=float(alpha),
                         b=float(b), eta=float(eta), Y=Y, delta=delta,
                         Tc=Tc, L=L, Rtilde=Rtilde)


def bec_length_check(params: GasParameters) -> bool:
    """Whether an ideal gas condenses in a box of side L: rho >= T log(T L^2).

    T = 0 returns True by convention (the right-hand side has no limit but
    condensation is total).
    """
    if params.T == 0:
        return True
    return params.rho >= params.T * math.log(params.T * params.L ** 2)


def params_to_record(params: GasParameters) -> dict:
    """Flat key-value record with decimal floating point values."""
    return {key: repr(getattr(params, key)) for key in RECORD_KEYS}


def params_from_record(record: dict) -> GasParameters:
    """Inverse of :func:`params_to_record`; missing keys take defaults."""
    def get(key, default=None):
        value = record.get(key, default)
        if value is None:
            raise KeyError(f"config record missing required key '{key}'")
        return float(value)

    return derive_parameters(
        rho=get("rho"),
        a=get("a"),
        T=get("T", 0.0),
        alpha=get("alpha", DEFAULT_ALPHA),
        b=float(record["b"]) if "b" in record else None,
    )
