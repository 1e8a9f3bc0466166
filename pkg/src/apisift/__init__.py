"""Workbench for classifying framework API methods as sensitive sources,
sinks, or neither, by fusing documentation and code embeddings, with
evaluation, baseline-comparison, and taint-flow tooling."""

__version__ = "0.1.0"
