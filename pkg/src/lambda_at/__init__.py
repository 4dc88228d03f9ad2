"""Integer homology of finite chain complexes via lambda-AT-models."""

from .atmodel import (
    LambdaATModel,
    compute_lambda_at_model,
    normalize_sign,
    representative_cycles,
    to_at_model_mod_p,
    to_rational_at_model,
    torsion_prime_candidates,
    verify_model,
)
from .builders import (
    CubicalComplex,
    SimplicialComplex,
    complex_from_facets,
    complex_from_voxels,
    cubical_chain_complex,
    cubical_from_voxels,
    simplicial_chain_complex,
    simplicial_from_facets,
)
from .core import (
    INTEGERS,
    RATIONALS,
    Chain,
    ChainComplex,
    CoefficientSpec,
    GeneratorId,
    GradedMap,
    add_scaled,
    apply,
    coefficient_of,
    reduce_mod_p,
    verify_complex,
)
from .homology import (
    HomologyConsistencyError,
    HomologyReport,
    PrimeTorsion,
    compute_integer_homology,
    euler_characteristic,
    torsion_recurrence,
)
from .oracle import (
    IntegerMatrix,
    OracleScopeError,
    SNFResult,
    homology_via_snf,
    rho_at_model,
    smith_normal_form,
    torsion_witnesses,
)
from .reduce import ChainContraction, compose, contraction_mod_p, preprocess, verify_contraction

__version__ = "0.1.0"

__all__ = [
    "add_scaled",
    "apply",
    "Chain",
    "ChainComplex",
    "ChainContraction",
    "coefficient_of",
    "CoefficientSpec",
    "complex_from_facets",
    "complex_from_voxels",
    "compose",
    "compute_integer_homology",
    "compute_lambda_at_model",
    "contraction_mod_p",
    "cubical_chain_complex",
    "cubical_from_voxels",
    "CubicalComplex",
    "euler_characteristic",
    "GeneratorId",
    "GradedMap",
    "homology_via_snf",
    "HomologyConsistencyError",
    "HomologyReport",
    "IntegerMatrix",
    "INTEGERS",
    "LambdaATModel",
    "normalize_sign",
    "OracleScopeError",
    "preprocess",
    "PrimeTorsion",
    "RATIONALS",
    "reduce_mod_p",
    "representative_cycles",
    "rho_at_model",
    "simplicial_chain_complex",
    "simplicial_from_facets",
    "SimplicialComplex",
    "smith_normal_form",
    "SNFResult",
    "to_at_model_mod_p",
    "to_rational_at_model",
    "torsion_prime_candidates",
    "torsion_recurrence",
    "torsion_witnesses",
    "verify_complex",
    "verify_contraction",
    "verify_model",
]
