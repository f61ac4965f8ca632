"""Residue biases of partitions into distinct parts: exact counts and asymptotics."""
from .asymptotics import (
    AsymptoticEstimate,
    DomainError,
    class_weights,
    difference_estimate,
    full_series_estimate,
    lattice_class_count,
    main_simplified,
    main_two_term,
    mod3_bias_estimate,
    parity_bias_estimate,
    scaled_difference,
)
from .core import (
    BiasTable,
    DimensionError,
    QuadraticData,
    ResidueConfig,
    class_restricted_series,
    count_bias_table,
    enumerate_oracle,
    nahm_lattice_oracle,
    quad_data,
    quad_form_H,
    smallest_positive_residue,
)
from .qseries import (
    Certified,
    EvaluationPoint,
    TailBoundError,
    expansion_numeric,
    g_function_numeric,
    lambda_y,
    log_pochhammer_asym,
    log_pochhammer_direct,
    s_y,
)
from .saddle import (
    ExpansionLadder,
    c_abr,
    c_polynomials,
    e_coefficients,
    v_coefficients,
    w_coefficients,
)
from .verify import run_suite

__version__ = "0.1.0"
