"""Resonance dipole-dipole interaction of two correlated atoms near a perfect mirror."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    ANTISYMMETRIC,
    EV_INV_IN_METERS,
    SYMMETRIC,
    AtomOnOrBehindMirror,
    BellParity,
    CoincidentAtoms,
    DipoleVector,
    EnergyBreakdown,
    General,
    PairGeometry,
    Parallel,
    Perpendicular,
    ResonanceError,
    ZeroSeparation,
    classify_configuration,
    validate_geometry,
)
from .freespace import (  # noqa: E402
    free_space_energy,
    parallel_free_space,
    perpendicular_free_space,
    resonance_tensor,
)
from .mirror import (  # noqa: E402
    boundary_term,
    boundary_term_parallel,
    boundary_term_perpendicular,
    boundary_term_via_image,
    image_of,
    total_energy,
    total_energy_via_image,
)
from .asymptotics import (  # noqa: E402
    FreeSpacePartZero,
    enhancement_ratio,
    far_zone_probe,
    near_zone_parallel,
    near_zone_perpendicular,
)
from .spectral import (  # noqa: E402
    ConvergenceFailure,
    spectral_breakdown,
    spectral_energy_shift,
)
