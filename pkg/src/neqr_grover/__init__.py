"""NEQR image encoding and Grover dark-pixel search on an exact statevector simulator."""

__version__ = "0.1.0"

from .errors import (
    CapacityExceededError,
    ImageIOError,
    InvalidArgumentError,
    InvalidImageError,
    NeqrGroverError,
    NoMarkedItemsError,
    NotAnNeqrStateError,
    ParseError,
)
from .grover import (
    GroverPlan,
    Outcome,
    PixelRun,
    SearchMode,
    SearchResult,
    build_bitstring_oracle,
    build_diffuser_about,
    build_diffuser_uniform,
    build_threshold_oracle,
    iteration_count,
    run_search,
    run_semiclassical_search,
    semiclassical_runs,
    success_probability,
)
from .image import DarkPixel, GrayImage, ThresholdConfig, classical_scan, load_pgm, save_pgm
from .neqr import (
    NeqrLayout,
    PreparedImage,
    decode_outcome,
    encode_neqr,
    prepare_state,
    reconstruct_image,
)
from .qasm import circuit_to_qasm, qasm_to_circuit
from .report import ComplexityReport, complexity_report
from .statevector import (
    CCX,
    CX,
    MCX,
    MCZ,
    Circuit,
    H,
    StateVector,
    X,
    Z,
    apply_circuit,
    inverse_circuit,
    new_basis_state,
    probabilities,
    sample,
)
