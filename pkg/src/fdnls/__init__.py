"""Long-range lattice Schrodinger toolkit.

Operators with algebraically decaying coupling, conservative time
evolution, modulational-instability analysis, asymptotic stationary modes,
Peierls-Nabarro barriers, and flow-comparison probes, with a CLI harness
(`fdnls`) on top.
"""

__version__ = "1.0.0"

from .kernels import (
    Kernel,
    hurwitz_zeta,
    nearest_neighbor_kernel,
    power_law_kernel,
    riemann_zeta,
    table_kernel,
    tail_bound,
)
from .lattice import (
    BoundaryCondition,
    DiscreteOperator,
    LatticeState,
    apply_operator,
    build_dirichlet,
    build_periodic,
    dispersion_series,
    symbol_fractional,
    symbol_nn,
    symbol_sup_gap,
)
from .dynamics import (
    DiagnosticsSeries,
    NumericalAbort,
    SimConfig,
    energy,
    integrate,
    mass,
    peak_trace,
    step_rk4,
)
from .mi import (
    MiQuery,
    amplitude_A0,
    is_unstable,
    k_max,
    omega_squared,
    phi,
    threshold_amplitude,
    w_tilde,
)
from .modes import (
    ModeSequence,
    boost,
    dnls_offsite,
    dnls_onsite,
    fdnls_offsite,
    fdnls_onsite,
    reflect,
    residual_sup,
    rho_star,
    tail_diagnostics,
)
from .energetics import (
    PnbReport,
    dnls_energies,
    dnls_pnb,
    fdnls_energies,
    fdnls_pnb,
    gamma_of_k,
    pnb_quadratic_coefficient,
    sequence_mass,
    small_alpha_mass,
)
from .flows import (
    FlowComparison,
    GapProbe,
    QuadratureError,
    dispersive_kernel,
    evolve_pair,
    unitary_gap,
)
