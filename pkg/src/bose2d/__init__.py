"""Free-energy upper bound of the dilute 2D Bose gas, with its verification suite."""

from .params import (
    EULER_GAMMA,
    GasParameters,
    bec_length_check,
    derive_parameters,
    params_from_record,
    params_to_record,
)
from .scattering import (
    RadialPotential,
    ScatteringSolution,
    load_potential_table,
    r_independence_report,
    solve_scattering,
    variational_value,
)
from .softpot import (
    SoftPotential,
    g_hat,
    g_omega_zero_oracle,
    g_omega_zero_quadrature,
    jastrow_profile,
    vtilde_hat,
)
from .bogolattice import (
    BogoliubovField,
    MomentumLattice,
    bogoliubov_coefficients,
    build_field,
    interaction_convolution,
    lemma_sums,
    solve_condensate,
    sum_vs_integral,
)
from .freeenergy import (
    BoundBreakdown,
    assemble_bound,
    dilog,
    explicit_constant_integral,
    remark3_chain,
    thermal_integral,
)
from .entropy import (
    DensityMatrix,
    TruncationParams,
    eigenvalue_difference_check,
    entropy_h,
    fannes_check,
    trace_distance,
    truncation_tails,
    vn_entropy,
)
from .fockoracle import (
    FockSpace,
    bogoliubov_conjugation_check,
    gibbs_occupation_check,
    weyl_conjugation_check,
    wick_check,
)
from . import errors

__version__ = "0.1.0"
