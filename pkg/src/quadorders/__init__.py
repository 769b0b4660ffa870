"""Exact arithmetic for elasticity and unit-group invariants of quadratic orders."""

__version__ = "0.1.0"

from .errors import ConfigError, DomainError, ResourceBudgetError
from .arith import FactoredInteger, factor, is_prime, kronecker
from .quadfield import (
    FundamentalUnit,
    QuadField,
    SplittingType,
    TauKind,
    delta_exponent,
    fundamental_unit,
    is_split_free,
    new_field,
    splitting_type,
    unit_group_size,
)
from .abelian import (
    AbelianGroup,
    DavenportResult,
    davenport,
    davenport_bruteforce,
    ebk_upper,
    quotient_structure,
    rank2_exponent_bound_check,
)
from .residue import (
    PreClElement,
    ResidueElement,
    big_L,
    ell,
    precl_class,
    precl_order,
    precl_structure,
    psi,
    res_mul,
    res_pow,
)
from .classnum import ReducedForm, class_number
from .elasticity import (
    ElasticityInterval,
    HfdVerdict,
    elasticity_interval,
    hfd_check,
    princl_structure,
    roskam_condition,
    roskam_elasticity_cap,
)
from .experiments import (
    MxResult,
    ScanReport,
    VerifyConfig,
    extremal_lf_construct,
    four_to_one_check,
    mx_search,
    pell_scan,
    scan_splitfree,
    verify_suite,
)

__all__ = [
    "AbelianGroup",
    "ConfigError",
    "DavenportResult",
    "DomainError",
    "ElasticityInterval",
    "FactoredInteger",
    "FundamentalUnit",
    "HfdVerdict",
    "MxResult",
    "PreClElement",
    "QuadField",
    "ReducedForm",
    "ResidueElement",
    "ResourceBudgetError",
    "ScanReport",
    "SplittingType",
    "TauKind",
    "VerifyConfig",
    "big_L",
    "class_number",
    "davenport",
    "davenport_bruteforce",
    "delta_exponent",
    "ebk_upper",
    "elasticity_interval",
    "ell",
    "extremal_lf_construct",
    "factor",
    "four_to_one_check",
    "fundamental_unit",
    "hfd_check",
    "is_prime",
    "is_split_free",
    "kronecker",
    "mx_search",
    "new_field",
    "pell_scan",
    "precl_class",
    "precl_order",
    "precl_structure",
    "princl_structure",
    "psi",
    "quotient_structure",
    "rank2_exponent_bound_check",
    "res_mul",
    "res_pow",
    "roskam_condition",
    "roskam_elasticity_cap",
    "scan_splitfree",
    "splitting_type",
    "unit_group_size",
    "verify_suite",
]
