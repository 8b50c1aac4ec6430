"""Model server kernel: metamodel runtime, command-based editing, validation, diagrams."""

__version__ = "0.1.0"
