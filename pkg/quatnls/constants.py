"""
quatnls/constants.py

Central repository for numerical thresholds shared across the apps.

Rules for what belongs here:
  - Pure Python only: no Django imports, no numpy. The numerical apps import
    this module without a configured settings object.
  - Referenced by more than one module, or genuinely tunable per run.

What intentionally stays elsewhere:
  - CSV column order: batch/services.py (single consumer).
  - Config JSON keys: batch/services.py (single consumer).
  - Env-var overrides: quatnls/settings.py (only the batch app reads them).
"""

# ── Σ-structure ────────────────────────────────────────────────────────────────

# Default tolerance for ‖B* − σ₂Bσ₂‖ on every 2×2 block.
SIGMA_TOL = 1e-9

# A first-column block is a usable Schur pivot when its norm exceeds this
# fraction of the largest entry of the whole matrix.
PIVOT_RTOL = 1e-12

# Determinants within this fraction of the Hadamard bound are reported as 0.
DET_CLAMP_RTOL = 1e-8

# ── Dense linear algebra ───────────────────────────────────────────────────────

# LU pivots below this fraction of the largest pivot mean "singular".
SINGULAR_PIVOT_RTOL = 1e-13

# min |λᵢ + λⱼ| over the spectrum, relative to ‖A‖, below which the
# Sylvester operator X ↦ AX + XA is treated as singular.
SPECTRUM_CONFLICT_RTOL = 1e-12

# Relative residual accepted for AP + PA = M.
SYLVESTER_RESIDUAL_RTOL = 1e-10

# Minimum distance between an argument of k(λ) and the cut [−μ, μ].
BRANCH_CUT_EPS = 1e-8

# Eigenvector condition number above which f(iA) switches to contour quadrature.
EIGVEC_COND_LIMIT = 1e6

# Trapezoid nodes per circle in the contour representation of f(iA).
CONTOUR_NODES = 256

# Eigenvalues of iA closer than this (relative to the spectral scale) share a circle.
CLUSTER_RTOL = 1e-3

# ‖HA − AH‖ ≤ COMMUTATOR_RTOL · ‖H‖‖A‖.
COMMUTATOR_RTOL = 1e-8

# ── Triplets ───────────────────────────────────────────────────────────────────

# Numerical rank: singular values above RANK_RTOL · σ_max count.
RANK_RTOL = 1e-8

# Relative tolerance on | |q_l| − μ | in the admissibility test.
ADMISSIBILITY_TOL = 1e-8

# ── Solitons ───────────────────────────────────────────────────────────────────

# (x, t) is singular when |det(E + P_r)| < SINGULAR_DET_RTOL · Π_j (σ_j(E) + σ_j(P_r)).
SINGULAR_DET_RTOL = 1e-8

# Default grid size for singular-locus scans.
SCAN_SAMPLES = 2001

# ── Scattering verification ────────────────────────────────────────────────────

# Half-width of the truncation box, in units of 1 / min Re eig A.
TRUNCATION_SPAN = 20.0

# ‖Q‖ at both ends of a sampled potential must fall below this.
TRUNCATION_TOL = 1e-10

# Starting grid of the sampled potential used for Jost solutions. The grid is
# doubled until A_l at the watched λ moves by at most JOST_REFINE_TOL, up to
# JOST_GRID_MAX points.
JOST_GRID_POINTS = 4001
JOST_GRID_MAX = 64001
JOST_REFINE_TOL = 1e-7

JOST_RTOL = 1e-10
JOST_ATOL = 1e-12

# Volterra-recovered vs closed-form transmission data.
ROUND_TRIP_TOL = 1e-6
ROUND_TRIP_SAMPLES = 10

# Marchenko z-integral: span (units of 1 / min Re eig A) and Simpson intervals.
MARCHENKO_SPAN = 12.0
MARCHENKO_NODES = 64

CLOSED_FORM_SYMMETRY_TOL = 1e-9
VOLTERRA_SYMMETRY_TOL = 1e-6

# Imaginary-axis approach λ = iε used for Δ = lim 2iλA_l(λ).
DELTA_EPSILONS = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7)
DELTA_ZERO_TOL = 1e-5

# Finite-difference residual checks: absolute floor and accepted h → h/2 ratio.
NLS_ABS_TOL = 1e-6
ORDER2_RATIO_RANGE = (3.5, 4.5)

# |det A_l(λ)| below this fraction of ‖A_l(λ)‖² marks a spectral singularity.
SPECTRAL_SINGULARITY_RTOL = 1e-8

# Largest phase advance 2|λ|h per step of the scattering-coefficient quadrature.
QUAD_PHASE_STEP = 0.1

# Real λ samples stay this relative distance away from ±μ.
LAMBDA_MU_GUARD = 0.05

# Second time slice of the time-invariance check.
ROUND_TRIP_TIME = 0.5

MARCHENKO_TOL = 1e-4
# Below this the Simpson refinement ratio is roundoff-dominated and not tested.
MARCHENKO_FLOOR = 1e-9
MARCHENKO_MIN_RATIO = 8.0

TRACE_FORMULA_TOL = 1e-8

# Base step for the NLS stencil, in units of 1 / max(ρ(A), μ) (x) and its square (t).
NLS_STEP = 2e-2
NLS_GRID_FAST = (50, 10)
NLS_GRID_FULL = (200, 50)

# Central-difference step and tolerance for Q = 𝒬² + 𝒬_x + μ²I.
POTENTIAL_RELATION_STEP = 1e-4
POTENTIAL_RELATION_TOL = 1e-6

# Step for the finite-difference Ω evolution residual.
KERNEL_PDE_STEP = 1e-2
