"""Single-photon scattering in a dimerized resonator waveguide coupled to a
driven three-level emitter: band structure, closed-form transmission for
three coupling geometries, pole/lineshape analysis, and an independent
finite-lattice oracle."""

from .bands import (
    BlochEigenvectors,
    BlochPoint,
    DVector,
    band_edges,
    band_phase,
    bloch_eigenvectors,
    bloch_point,
    d_vector,
    group_velocity,
    momentum_from_energy,
    winding_number,
    zak_phase,
)
from .lattice import (
    LatticeHamiltonian,
    ScatterSolution,
    WavepacketRun,
    boundary_matched_solve,
    build_hamiltonian,
    evolve,
    gaussian_packet,
    wavepacket_transport,
)
from .params import (
    Band,
    CouplingConfig,
    EmitterParams,
    ModelParams,
    Variant,
    WaveguideParams,
    validate,
)
from .scattering import (
    EffectivePotential,
    ScatteringMatrix,
    TransferMatrix,
    detuning_response,
    effective_potential,
    interference_factor,
    reflectance,
    scattering_matrix,
    transfer_matrix,
    transmittance,
)
from .spectra import (
    LineshapeFeature,
    PolePair,
    RegimeLabel,
    SpectrumGrid,
    ats_dip_positions,
    classify_regime,
    extract_features,
    lamb_shift,
    poles,
    sweep_contour,
    sweep_spectrum,
)
from .validation import agreement_report, bandwidth_averaged_transmission

__version__ = "0.1.0"

__all__ = [
    "Band",
    "BlochEigenvectors",
    "BlochPoint",
    "CouplingConfig",
    "DVector",
    "EffectivePotential",
    "EmitterParams",
    "LatticeHamiltonian",
    "LineshapeFeature",
    "ModelParams",
    "PolePair",
    "RegimeLabel",
    "ScatterSolution",
    "ScatteringMatrix",
    "SpectrumGrid",
    "TransferMatrix",
    "Variant",
    "WaveguideParams",
    "WavepacketRun",
    "agreement_report",
    "ats_dip_positions",
    "band_edges",
    "band_phase",
    "bandwidth_averaged_transmission",
    "bloch_eigenvectors",
    "bloch_point",
    "boundary_matched_solve",
    "build_hamiltonian",
    "classify_regime",
    "d_vector",
    "detuning_response",
    "effective_potential",
    "evolve",
    "extract_features",
    "gaussian_packet",
    "group_velocity",
    "interference_factor",
    "lamb_shift",
    "momentum_from_energy",
    "poles",
    "reflectance",
    "scattering_matrix",
    "sweep_contour",
    "sweep_spectrum",
    "transfer_matrix",
    "transmittance",
    "validate",
    "wavepacket_transport",
    "winding_number",
    "zak_phase",
]
