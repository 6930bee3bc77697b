"""Criteria for exact state discrimination with linear optics and photon counting."""

__version__ = "0.1.0"

from .fock import (  # noqa: E402
    FockState,
    apply_annihilation,
    apply_creation,
    apply_mode_annihilation,
    apply_mode_creation,
    basis_state,
    inner_product,
    make_state,
    tensor,
    vacuum,
)
from .optics import (  # noqa: E402
    PassiveUnitary,
    apply_unitary,
    beam_splitter,
    extend_to_unitary,
    from_hermitian,
)
from .criteria import (  # noqa: E402
    NonOrthogonalError,
    condcond_value,
    first_order_form,
    fixed_array_check,
    hierarchy_value,
)
from .feasibility import (  # noqa: E402
    augment_with_ancilla,
    conditional_search,
    find_tower_mode,
    partial_dephase,
    tower_objective,
)
from .estimation import (  # noqa: E402
    OutcomeDistribution,
    dephase,
    min_error_probability,
    optimize_min_error,
)
from .quadrature import (  # noqa: E402
    QuadratureSpec,
    apply_quadrature,
    bs_quadrature_identity_check,
    quadrature_condition,
)
from .estimators import (  # noqa: E402
    ConditionalProtocolSearch,
    Dephaser,
    FixedArrayChecker,
    MinErrorInterferometer,
    TowerModeSearch,
)
