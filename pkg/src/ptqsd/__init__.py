"""Discrimination of nonorthogonal qubit states with PT-symmetric evolution.

Modules:

- ``qmath``: closed-form 2x2 linear algebra
- ``ptcore``: the PT-symmetric Hamiltonian and its propagator
- ``qsd2``: two-state discrimination, POVMs, mutual information
- ``qsd3``: three-state canonicalisation and the two-stage protocol
- ``optics``: compile operators into wave-plate and loss-element recipes
- ``photonlab``: Monte-Carlo photon counts, tomography, error bars
- ``sweeps`` / ``figures``: tables, CSV output and figure presets
"""

from .errors import (
    BrokenRegime,
    DegenerateTriple,
    InvalidParameter,
    NoOrthogonalityTime,
    NotDiscriminating,
    PtqsdError,
)
from .ptcore import PtHamiltonian, make_hamiltonian, physical_evolution, propagator
from .qsd2 import (
    critical_alpha,
    critical_s,
    discrimination_povm,
    make_pair,
    mutual_information,
    orthogonality_times,
)
from .qsd3 import BlochState, canonicalize, stage_one, stage_two, symmetric_triple

__version__ = "0.1.0"
