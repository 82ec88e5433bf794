"""Four-band generalized-BdG lattice models, skyrmion/Chern invariants, and
observable-enriched entanglement spectra across open, cylinder and torus
geometries."""

__version__ = "0.1.0"

from .bulk import (
    BZGrid,
    GroundStateProjector,
    ReducedSpinState,
    SpinTexture,
    bulk_texture,
    ground_state_projector,
    occupied_frames,
    oept_bulk,
    oept_rotated,
    spin_expectation,
)
from .entanglement import (
    ChiralModeCount,
    CutSpec,
    count_chiral_modes,
    entanglement_spectrum,
    es_and_oees,
    oept_blocks,
    real_edge_anomaly_detect,
    restricted_correlation,
    torus_suite,
)
from .errors import (
    BlockDecompositionUnavailable,
    ConfigError,
    GapClosure,
    OeesError,
    RangeTooSmall,
    SingularSpin,
    SingularTriangle,
    TrackingAmbiguous,
)
from .models import (
    FourierField,
    ModelSpec,
    Qwz,
    Sticlet,
    assemble_bdg,
    bloch_hamiltonian,
    block_decompose,
    h_qwz,
    h_sticlet,
    wrap_momentum,
)
from .pauli import PAULI, SPIN, SpinRepresentation
from .realspace import (
    HoppingSet,
    LocalizationProfile,
    SlabHamiltonian,
    boundary_circulation,
    build_slab,
    extract_hoppings,
    localization_profile,
    realspace_texture,
    slab_ground_state_projector,
    slab_spectrum,
)
from .series import SpectrumSeries, uniform_momenta
from .topology import (
    InvariantResult,
    PhaseDiagram,
    analytic_chern,
    analytic_skyrmion,
    chern_number,
    compute_invariants,
    homotopy_interpolation_check,
    phase_diagram,
    skyrmion_number,
    winding_number,
)

__all__ = [
    "__version__",
    "BZGrid",
    "BlockDecompositionUnavailable",
    "ChiralModeCount",
    "ConfigError",
    "CutSpec",
    "FourierField",
    "GapClosure",
    "GroundStateProjector",
    "HoppingSet",
    "InvariantResult",
    "LocalizationProfile",
    "ModelSpec",
    "OeesError",
    "PAULI",
    "PhaseDiagram",
    "Qwz",
    "RangeTooSmall",
    "ReducedSpinState",
    "SPIN",
    "SingularSpin",
    "SingularTriangle",
    "SlabHamiltonian",
    "SpectrumSeries",
    "SpinRepresentation",
    "SpinTexture",
    "Sticlet",
    "TrackingAmbiguous",
    "analytic_chern",
    "analytic_skyrmion",
    "assemble_bdg",
    "bloch_hamiltonian",
    "block_decompose",
    "boundary_circulation",
    "build_slab",
    "bulk_texture",
    "chern_number",
    "compute_invariants",
    "count_chiral_modes",
    "entanglement_spectrum",
    "es_and_oees",
    "extract_hoppings",
    "ground_state_projector",
    "h_qwz",
    "h_sticlet",
    "homotopy_interpolation_check",
    "localization_profile",
    "occupied_frames",
    "oept_blocks",
    "oept_bulk",
    "oept_rotated",
    "phase_diagram",
    "real_edge_anomaly_detect",
    "realspace_texture",
    "restricted_correlation",
    "skyrmion_number",
    "slab_ground_state_projector",
    "slab_spectrum",
    "spin_expectation",
    "torus_suite",
    "uniform_momenta",
    "winding_number",
    "wrap_momentum",
]
