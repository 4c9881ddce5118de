"""conjlab: exact linear algebra for conjugation-stable rank strata,
classical diagonal chains, and multigraph reduction certificates."""

__version__ = "0.1.0"
