"""sensorgrid: multi-sensor telemetry to image-like tensors, plus evaluation.

The library is organised as one module per pipeline stage: :mod:`~sensorgrid.schema`
(domain types), :mod:`~sensorgrid.ingest`, :mod:`~sensorgrid.synth`,
:mod:`~sensorgrid.pipeline`, :mod:`~sensorgrid.impute`, :mod:`~sensorgrid.encode`,
:mod:`~sensorgrid.metrics` and the :mod:`~sensorgrid.cli` orchestrator.
"""

__version__ = "0.1.0"
