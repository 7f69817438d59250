"""Frozen reference values computed with tests/oracles.py.

Every number below was produced by the brute-force oracle path (dense-grid
integrals, scipy brentq, literal value iteration) run offline; the functions
that generated them are noted next to each value.  They are pinned here so
the suite does not re-run the slow oracles on every test.
"""

STD_NORMAL_Q90 = 1.2815515655446004  # published value; quantile_bisect agrees

# example model A: mu_q=0, var_q=1, var_s=2, C=1, V=30, k=0.1
V30_SBAR_FULL = 2.2197124240426858   # clearing_sbar(.., cutoff=-inf); equals
                                      # sqrt(3) * STD_NORMAL_Q90 by the
                                      # normal convolution identity
V30_Q0 = -0.43961851040292377        # benchmark_root

# example model B: mu_q=0, var_q=2, var_s=5, C=1, V=50, delta=0.97, k=0.1
V50_Q0 = -1.2478297822406363         # benchmark_root
V50_Q1 = -0.27162262779117796        # exclusion_root(t=1)
V50_ALPHA1 = 0.697900981652049       # (1+k) / (2 - F(Q1))
V50_SBAR_EQ = 2.585149957526284      # clearing_sbar at the exclusion profile
V50_QBAR = 2.1908675497784103        # brentq crossing of the winner densities
V50_SC_INF_ROOT = -0.33447623210275906   # signal-ban +inf root, brentq
EXCLUSION_V400_ROOT = -0.40208949668329086  # exclusion_root at V=400

# example model C: mu_q=0, var_q=1, var_s=1, C=1, V=20, delta=0.85, k=0.1
V20_BAN_ROOTS = {
    1: 0.2777606435776544,            # exclusion_root(t=1)
    5: 0.42284152186004215,           # exclusion_root(t=5)
    50: -0.173281835791431,           # exclusion_root(t=50)
    200: -1.058060667322301,
    500: -1.6989898597126152,
    1000: -2.1463673503865897,
}

# two types: N(0.5, 2) and N(0, 2), equal shares, example-model-B scalars;
# two_type_oracle converged to the same point from starts (1, 0) and (-1, 1)
TWO_TYPE_QH = 0.1298330292940798
TWO_TYPE_QL = -0.1617347239157369
TWO_TYPE_AH = 0.34758590078261287
TWO_TYPE_AL = 0.35116585167573977

# small prize (V=1.5, example-model-B otherwise): the +inf signal-ban cutoff
# falls below the free-entry cutoff, the benchmark-dominates case
SMALL_V_DOMINATED = 1.5
