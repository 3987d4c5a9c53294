"""SO(3) -> SO(n) rotation operators and frequency-controlled equivariant features."""

from ._core import (
    CemConfig,
    CemResult,
    EncoderParams,
    GeneratorTriple,
    LatentCode,
    RegistrationResult,
    ValidationCheck,
    ValidationReport,
    canonical_f_triple,
    cem_minimize,
    chamfer,
    check_so_n,
    constraint_matrix,
    construct_generators,
    construct_low_freq,
    d_multi,
    d_of,
    encode,
    exp_skew,
    exp_so3,
    f_basis,
    frequency_sweep_energy,
    is_rotation,
    latent_register,
    load_generator_set,
    log_so3,
    make_registration_cloud,
    nullspace_basis,
    procrustes,
    psi,
    psi_multi,
    random_rotation,
    rot_from_z,
    rotation_distance,
    sample_j3,
    save_generator_set,
    sinusoid_eigenvalues,
    toy_regression_mse,
    validate,
    zero_eigenvector,
)

__all__ = [
    "CemConfig",
    "CemResult",
    "EncoderParams",
    "GeneratorTriple",
    "LatentCode",
    "RegistrationResult",
    "ValidationCheck",
    "ValidationReport",
    "canonical_f_triple",
    "cem_minimize",
    "chamfer",
    "check_so_n",
    "constraint_matrix",
    "construct_generators",
    "construct_low_freq",
    "d_multi",
    "d_of",
    "encode",
    "exp_skew",
    "exp_so3",
    "f_basis",
    "frequency_sweep_energy",
    "is_rotation",
    "latent_register",
    "load_generator_set",
    "log_so3",
    "make_registration_cloud",
    "nullspace_basis",
    "procrustes",
    "psi",
    "psi_multi",
    "random_rotation",
    "rot_from_z",
    "rotation_distance",
    "sample_j3",
    "save_generator_set",
    "sinusoid_eigenvalues",
    "toy_regression_mse",
    "validate",
    "zero_eigenvector",
]

__version__ = "0.1.0"
