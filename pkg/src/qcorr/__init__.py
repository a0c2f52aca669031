"""Fully entangled fraction and quantum discord of d x d^2 complements of
Werner and isotropic states, with numerical oracles for every closed form."""

from .errors import (
    CapabilityError,
    ConfigError,
    DegeneratePolarError,
    DimensionError,
    DomainError,
    PreconditionError,
    StateError,
)
from .fef import (
    appendix_two_angle_scan,
    eta_max_set,
    fef_isotropic_complement_lower_bound,
    fef_numeric,
    fef_werner_complement_closed,
    max_entangled_basis,
    phi_max_special,
    werner_complement_max_set,
)
from .linalg import DensityOperator, PureStateVector, partial_trace
from .measures import (
    binary_entropy,
    classical_correlation_oracle,
    discord_isotropic_complement_closed,
    discord_oracle,
    discord_werner_complement_closed,
    eof_isotropic,
    eof_werner,
    koashi_winter_residual,
    mutual_information,
    von_neumann_entropy,
)
from .optim import OptimizerConfig, OptimizerReport
from .states import (
    IsotropicParams,
    WernerParams,
    isotropic_complement_canonical,
    isotropic_complement_paper,
    isotropic_state,
    werner_complement,
    werner_state,
)

__version__ = "0.1.0"
