"""Entropy production, coherence and the Bures bound for a driven qubit."""

from .drive import DriveProtocol, drive_hamiltonian, evolve, propagator, time_ordered_product
from .linalg import (
    DensityMatrix,
    HermitianOperator,
    SpectralDecomposition,
    UnitaryOperator,
    matrix_function,
    pauli,
    spectral_decompose,
)
from .metrics import (
    ThermoRecord,
    WorkDistribution,
    average_work,
    bures_length,
    clausius_bound,
    coherence,
    entropy_decomposition,
    irreversible_entropy,
    overlap_fidelity,
    relative_entropy,
    thermo_record,
    tpm_work_distribution,
    uhlmann_fidelity,
    von_neumann_entropy,
    wootters_length,
)
from .sweep import SweepConfig, SweepRow, emit_csv, parse_config, run_sweep
from .svgplot import emit_svg_plot
from .thermal import (
    ThermalSpec,
    dephase,
    effective_temperature,
    free_energy_difference,
    gibbs_state,
    partition_function,
)

__version__ = "0.1.0"
