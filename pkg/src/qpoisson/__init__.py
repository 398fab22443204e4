"""Statevector simulation of a phase-estimation Poisson solver.

The package splits into a small gate-level simulator (`ops`,
`statevector`), a classical oracle for the discretized problem
(`classical`), circuit constructors (`circuits`), the end-to-end solver
(`pipeline`), and a command-line front end (`cli`).
"""

from ._backend import backend_name
from .classical import (EigenSystem, PoissonProblem, default_alpha,
                        default_register_size, dst_matrix, eigen_nd,
                        eigenvalue_1d, eigenvector_1d,
                        expected_success_probability, pea_kernel_weights,
                        poisson_matrix_1d, poisson_matrix_nd, solve_classical,
                        to_eigenbasis)
from .circuits import (PhaseSchedule, RegisterLayout, dst_block_op,
                       hamiltonian_sim_1d, hamiltonian_sim_nd, pea_circuit,
                       qft_circuit)
from .errors import (CapacityError, ConfigError, DegenerateBranchError,
                     EntangledCutError, InvalidEncodingError, NoSuccessError,
                     QPoissonError)
from .ops import (BlockUnitary, Circuit, ControlledGate, SelectivePhase,
                  SingleQubitGate)
from .pipeline import (InvSpec, SolveReport, basis_index_to_grid, encode_rhs,
                       grid_to_basis_index, inv_circuit, newton_x1,
                       pea_histogram, resource_estimate, rot_circuit,
                       run_pipeline, success_probability_curve, x0_exponent)
from .statevector import Statevector

__version__ = "0.1.0"
