"""Exception taxonomy.

Three broad families map onto CLI exit codes: configuration problems
(exit 2), generation/computation failures (exit 3), and bundle I/O or
schema problems (exit 4).
"""


class AdcsbmError(Exception):
    """Base class for all library errors."""


class ConfigError(AdcsbmError):
    """Invalid configuration or parameters (CLI exit code 2)."""


class InvalidParams(ConfigError):
    pass


class ModeMismatch(ConfigError):
    """Feature-membership mode incompatible with the cluster counts."""


class GenerationError(AdcsbmError):
    """Failure while generating or evaluating data (CLI exit code 3)."""


class EmptyBlock(GenerationError):
    """A cluster received zero nodes; the caller may retry with a new seed."""


class RateOverflow(GenerationError):
    """A pairwise edge rate exceeded the degeneracy guard."""


class ConvergenceFailure(GenerationError):
    """Iterative eigensolver did not converge within its budget."""


class DegenerateInput(GenerationError):
    """Input does not support the requested computation (e.g. < k distinct rows)."""


class DegenerateClusters(GenerationError):
    """A cluster required by the computation is empty or absent."""


class ClassTooSmall(GenerationError):
    """A class has too few members for the requested split."""


class NotBracketed(GenerationError):
    """Calibration target does not lie between the search endpoints."""


class LengthMismatch(ConfigError):
    """Paired label vectors differ in length."""


class EmptyMask(ConfigError):
    """An evaluation mask selects no nodes."""


class TooFewSamples(ConfigError):
    """Aggregation needs at least two samples."""


class BundleError(AdcsbmError):
    """Bundle I/O or schema problem (CLI exit code 4)."""


class SchemaError(BundleError):
    """Missing file, wrong schema version, or malformed bundle layout."""


class ValidationError(BundleError):
    """Bundle contents violate their documented invariants."""
