"""Array-level bindings to the adcsbm generator.

The boundary is the ``adcsbm`` command-line tool and its on-disk bundle
format; nothing here imports the generator package.  ``generate_py`` runs
the CLI into a scratch directory and ``load_bundle_py`` parses a bundle
directory into plain numpy arrays.
"""

from .bindings import (
    SCHEMA_VERSION,
    ArrayBundle,
    BindingsError,
    BundleException,
    ConfigException,
    GenerationException,
    SchemaException,
    generate_py,
    load_bundle_py,
)

__version__ = "0.1.0"

__all__ = [
    "SCHEMA_VERSION",
    "ArrayBundle",
    "BindingsError",
    "BundleException",
    "ConfigException",
    "GenerationException",
    "SchemaException",
    "generate_py",
    "load_bundle_py",
]
