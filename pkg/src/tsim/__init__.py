"""Two-species fermion lattice simulator: stepwise evolution, phase erasure,
and entropy trajectories."""

from .erasure import (ErasureSpec, apply_random_phases, apply_site_phase,
                      draw_phases)
from .fock import FockBasis, composite_index, composite_split, enumerate_basis
from .model import (BlockSlice, LatticeSpec, ModelParams,
                    SparseHermitianOperator, build_full, build_h1, build_h2,
                    effective_potential)
from .observables import (EntropyReport, entanglement_entropy, fidelity,
                          measure, occupation_density, shannon_entropies)
from .propagate import (ManyBodyState, PropagationError, PropagatorSettings,
                        evolve, evolve_blockwise)
from .protocol import (ProtocolConfig, ProtocolResult, StageRecord,
                       build_initial_state, prepare, run_cycle,
                       run_full_hamiltonian, run_protocol, run_trotter,
                       stepwise_generator)

__all__ = [
    "BlockSlice",
    "EntropyReport",
    "ErasureSpec",
    "FockBasis",
    "LatticeSpec",
    "ManyBodyState",
    "ModelParams",
    "PropagationError",
    "PropagatorSettings",
    "ProtocolConfig",
    "ProtocolResult",
    "SparseHermitianOperator",
    "StageRecord",
    "apply_random_phases",
    "apply_site_phase",
    "build_full",
    "build_h1",
    "build_h2",
    "build_initial_state",
    "composite_index",
    "composite_split",
    "draw_phases",
    "effective_potential",
    "entanglement_entropy",
    "enumerate_basis",
    "evolve",
    "evolve_blockwise",
    "fidelity",
    "measure",
    "occupation_density",
    "prepare",
    "run_cycle",
    "run_full_hamiltonian",
    "run_protocol",
    "run_trotter",
    "shannon_entropies",
    "stepwise_generator",
]
