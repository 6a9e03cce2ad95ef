"""Regression constants measured once on the default sweeps and frozen.

Each value was produced by the corresponding brute-force sweep (see the
verification suite) and widened by a safety margin; the test suite asserts
the sweeps stay inside these bands.  Placeholder values here are replaced by
the measured ones; do not tune them to make a failing check pass.
"""

# Ratio bands for the lemma sums over the default (rho_a2, T/Tc) sweep grid.
S2_OVER_NY_MAX = 1.0
SC_OVER_N_MAX = 4.0
Q2_OVER_N_TREL_MAX = 4.0

# Slack constant of the expanded rung in the thermal-term inequality chain.
REMARK3_SLACK_C = 4.0

# beta * log_partition / L^2 band while L doubles at fixed (rho, delta, T).
LOG_PARTITION_BAND = (0.1, 1.0)

# Default sum-versus-integral sweep and the admissible fitted slope window.
SUM_VS_INTEGRAL_SWEEP = {
    "rho": 1.0,
    "delta": 0.09374727787959146,   # delta at rho_a2 = 1e-8
    "T": 1.0,
    "L_values": (24.0, 48.0, 96.0, 192.0),
}
SLOPE_RANGE = (-1.6, -0.9)
