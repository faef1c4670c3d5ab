"""Auxiliary-field Monte Carlo simulation of quantum circuits.

Each two-bit gate ``exp(-i alpha A x B)`` is decoupled by a Gaussian
(Hubbard-Stratonovich) integral over two real fields, which turns the circuit
into a sum over paths of independent one-qubit evolutions. The path integral
is sampled either by complex Langevin or by Metropolis with phase
reweighting, and checked against a dense state-vector oracle.
"""
from .action import action, drift, estimator
from .circuit import (
    Circuit,
    Measured,
    ObservableSpec,
    OneBitGate,
    Prescribed,
    TRACED,
    TwoBitGate,
    build_fft_circuit,
    cnot,
    controlled_phase,
    fft_demo_problem,
    hadamard,
)
from .errors import (
    QsimError,
    NonHermitianInput,
    ParseError,
    ValidationError,
    InsertionMismatch,
    SingularBracket,
    DriftOverflow,
    ConvergenceFailure,
    ZeroSignal,
    WalkerError,
    DimensionMismatch,
    QubitCountExceeded,
    ImpossiblePrescription,
    QuadratureDiverged,
)
from .oracle import exact_evolve, exact_expectation, exact_expectations
from .samplers import (
    Estimate,
    LangevinConfig,
    MetropolisConfig,
    langevin_run,
    metropolis_run,
    run_parallel_walkers,
)
from .textformat import format_circuit, parse_circuit

__version__ = "0.1.0"
