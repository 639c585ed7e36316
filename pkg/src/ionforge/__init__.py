"""Software model of a small programmable trapped-ion quantum computer.

Standard logic gates are compiled to the native equatorial rotation ``R`` and
the Ising gate ``XX`` (with pair-dependent signs), simulated exactly or under
a parametric noise model, and used to run Deutsch-Jozsa, Bernstein-Vazirani,
QFT period finding, QFT phase estimation and controlled-phase
characterization experiments.
"""

__version__ = "0.1.0"

from .algorithms import (
    BVOracle,
    DJOracle,
    PERIOD_INPUTS,
    build_bv_circuit,
    build_dj_circuit,
    build_qft,
    cp_characterization,
    detect_period,
    dft_oracle,
    execute,
    run_bv,
    run_dj,
    run_period_finding,
    run_phase_estimation,
)
from .circuit_io import parse_circuit, serialize_circuit
from .compiler import (
    CompiledCircuit,
    compile_circuit,
    equivalent_up_to_global_phase,
    unitary_of,
)
from .gates import (
    CNOT,
    CP,
    XX,
    Circuit,
    H,
    R,
    Rx,
    Ry,
    Rz,
    SignTable,
    default_sign_table,
    r_matrix,
    standard_matrix,
    xx_matrix,
)
from .noise import (
    ConfusionMatrix,
    NoiseModel,
    build_confusion,
    correct_readout,
    readout_standard_errors,
    run_noisy,
)
from .resources import TrapConfig, calibration_counts, gate_duration, max_axial_frequency
from .statevector import (
    Histogram,
    StateVector,
    init_zero,
    postselect,
    probabilities,
    sample,
    simulate,
    sso_fidelity,
)
