"""framelab: frame-like Fourier expansions for mixed measures.

Builds and verifies dual systems reproducing f = sum_n <f, g_n> e^{2 pi i n x}
in L^2(mu) for measures mixing atoms, step densities, and Cantor-type mass,
on the circle and (through slicing) on the real line, and analyzes the
harmonic disk extensions the coefficient sequences generate.
"""

from .errors import (
    AtomTooClose,
    CantorRestriction,
    FramelabError,
    MissingAtomValue,
    NotAFrame,
    NotSeparated,
    OrderTooLarge,
    ParsevalInfeasible,
    SpecParseError,
    TruncationOrder,
    ZeroMass,
)
from .measures import (
    CircleMeasure,
    FunctionSpec,
    MomentTable,
    analysis_inner_products,
    cantor_fourier,
    evaluate,
    inner_product,
    moment,
    moments,
    norm_sq,
)
from .kaczmarz import (
    CoefficientTriangle,
    analysis_coefficients,
    auxiliary_sequence,
    defect_table,
    parseval_defect,
    reconstruction_residual,
)
from .dextrodual import (
    ExamplecaseDual,
    ExtensionPlan,
    ReconstructionReport,
    WitnessReport,
    analysis_coefficients_examplecase,
    analysis_coefficients_mixed,
    bessel_pythagoras_check,
    build_examplecase_dual,
    build_extension_plan,
    extended_function,
    frame_bounds_extension,
    nonrepresentability_witness,
    reconstruct_examplecase,
    reconstruct_mixed,
)
from .realline import (
    RealAtomicMeasure,
    SliceSystem,
    disintegrate,
    double_defect_table,
    double_expansion_coefficients,
    double_parseval_defect,
    lattice_effective_expansion,
    periodize,
    weighted_bessel_decay,
)
from .hardy import (
    DiskSeries,
    FiniteFrameFamily,
    boundary_error,
    cauchy_series,
    disk_extension,
    family_from_measure,
    frame_operator,
    kernel_reproduces,
    normalized_cauchy_series,
    reproducing_kernel_eval,
    shift_residual,
)

__version__ = "0.1.0"
