"""Numerical toolkit for binary quantum hypothesis testing: exact error
trade-offs for tensor-power states, classical mappings, converse bounds and
finite-blocklength expansions. All logarithmic quantities are base 2."""

from .asymptotics import (
    ExpansionReport,
    ModerateValue,
    expansion_sweep,
    expansion_sweep_multi,
    inv_norm_cdf,
    moderate_rhs,
    norm_cdf,
    second_order_rhs,
)
from .bounds import (
    BOUND_NAMES,
    BoundPoint,
    fidelity_bound,
    hoeffding_rhs,
    info_spectrum_bound,
    ns_symmetric_bound,
    product_atoms,
    pure_state_curve,
    theorem1_beta_bound,
    theorem1_envelope,
)
from .errors import (
    ConfigError,
    DegenerateVarianceError,
    DimensionOverflowError,
    EigenConvergenceError,
    NumericDomainError,
    QHTError,
    SingularSupportError,
    StateFileError,
)
from .hermitian import (
    DensityOperator,
    SpectralDecomposition,
    as_hermitian,
    density,
    eigh,
    fidelity,
    matrix_function,
    positive_part_trace,
    tensor_power,
)
from .nsmap import (
    LLRAtom,
    MomentTriple,
    NSPair,
    atoms_product,
    beta_alpha_classical,
    beta_alpha_classical_variational,
    dh_classical,
    moments,
    ns_map,
    renyi_overlap,
)
from .states import load_state, mixed_pair, preset_pair, save_state
from .tradeoff import (
    InfoSpectrumEvaluator,
    TestOperator,
    TradeoffCurve,
    TradeoffPoint,
    TradeoffSession,
    beta_alpha_quantum,
    dh_from_beta,
    dh_quantum,
    helstrom_projector,
    info_spectrum_Ds,
    test_errors,
)

__version__ = "0.1.0"
