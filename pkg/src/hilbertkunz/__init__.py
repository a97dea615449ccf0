"""Hilbert-Kunz length functions over F_p[x_1..x_v] and their asymptotics."""

from .errors import (
    DivisionByZero,
    HilbertKunzError,
    InsufficientSamples,
    MatrixTooLarge,
    NotAPowerOfP,
    NotZeroDimensional,
    OrderMismatch,
    ParseError,
    RankMismatch,
    ResourceLimit,
    RingMismatch,
    SampleMismatch,
    SemanticError,
    TooManyVariables,
)
from .groebner import (
    FreeElement,
    GroebnerBasis,
    ModuleOrder,
    buchberger,
    count_standard_monomials,
    default_module_order,
    is_zero_dimensional,
    krull_dimension,
    normal_form,
    syzygies,
    unit_vector,
)
from .oracle import oracle_length
from .poly import (
    MonomialOrder,
    PolyRing,
    Polynomial,
    PrimeField,
    check_power_of_p,
    frobenius_power_poly,
    parse_polynomial,
    ring,
    standard_order,
)
from .presentations import (
    IdealSpec,
    ModulePresentation,
    RingSpec,
    SubmoduleSpec,
    cyclic_module,
    direct_sum,
    free_module,
    frobenius_power_ideal,
    frobenius_relations,
    ideal_spec,
    length_mod_frobenius,
    maximal_ideal,
    module_presentation,
    present_submodule,
    presentation_basis,
    quotient_presentation,
    ring_spec,
    submodule_spec,
)
from .analysis import (
    AdditiveErrorReport,
    AlphaEstimate,
    AsymptoticReport,
    BetaEstimate,
    BoundCheck,
    ExactSequenceSpec,
    GeometricTail,
    HKSample,
    HKSeries,
    PeriodicTail,
    PolynomialFit,
    TauEstimate,
    additive_error,
    analyze_module_vs_ring,
    analyze_series,
    bounded_by_power,
    check_delta_recursion,
    delta_sequence,
    detect_periodic_tail,
    estimate_alpha,
    estimate_beta,
    estimate_tau,
    evaluate_fit,
    fit_geometric_tail,
    fit_polynomial,
    geometric_accelerate,
    sample_hk,
)
from .problemfile import ProblemFile, parse_problem, serialize_problem

__version__ = "0.1.0"
