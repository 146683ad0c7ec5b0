"""BERT masked-LM checkpoint export to the ONNX interchange format."""

from .bertgraph import ConversionFailedError, build_bert_mlm_graph
from .export import (
    DEFAULT_PROBES,
    DownloadFailedError,
    ExportManifest,
    ProbeResult,
    export,
)
from .parity import (
    ParityFailureError,
    ParityReport,
    SignatureMismatchError,
    verify_parity,
)

__version__ = "0.1.0"
