"""Exception hierarchy shared by every module."""


class PtqsdError(Exception):
    """Base class for all package errors."""


class InvalidParameter(PtqsdError, ValueError):
    """A physics or configuration parameter is outside its allowed range."""


class BrokenRegime(InvalidParameter):
    """The Hamiltonian parameters sit at or beyond the exceptional point."""


class NotDiscriminating(PtqsdError):
    """The evolved states are not orthogonal at the requested time."""


class NoOrthogonalityTime(InvalidParameter):
    """No evolution time makes the two states orthogonal for these parameters."""


class DegenerateTriple(InvalidParameter):
    """Two states of a triple coincide or are orthogonal."""
