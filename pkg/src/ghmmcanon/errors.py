"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class GhmmCanonError(Exception):
    exit_code = 1


class ModelError(GhmmCanonError, ValueError):
    """Malformed input: unknown symbol, shape mismatch, non-unitary matrix..."""

    exit_code = 2


class UnsupportedModelError(ModelError):
    """Operation requires a model class (e.g. HMM) that was not supplied."""


class DegenerateConditionError(GhmmCanonError, ValueError):
    """Conditioning on (or normalizing) something with zero probability/trace."""

    exit_code = 2


class NumericalIntegrityError(GhmmCanonError, ArithmeticError):
    """A result failed a numerical sanity check (imaginary residue, singular HF...)."""

    exit_code = 4


class DegenerateSteadyStateError(NumericalIntegrityError):
    """The net transition operator has more than one unit-eigenvalue left eigenvector."""

    def __init__(self, message, multiplicity, vectors):
        super().__init__(message)
        self.multiplicity = multiplicity
        self.vectors = vectors


class AlgorithmBugError(NumericalIntegrityError):
    """A proven bound was violated; indicates an implementation fault."""


class ResourceCapError(GhmmCanonError, RuntimeError):
    exit_code = 5
