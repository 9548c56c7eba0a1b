"""Long-code retrieval toolkit.

Structure-aware code splitting, sliding-window block embeddings, learned
attention fusion, exhaustive cosine search, a BM25 lexical baseline, and an
MRR/R@k evaluation harness.
"""

from .config import PipelineConfig
from .encoding import EncoderSpec
from .fusion import FusionParams, fuse, init_params
from .splitting import CodePiece, SourceSnippet, SplitStrategy, split
from .windowing import CodeBlock, WindowConfig, block_count, window

__version__ = "0.1.0"

__all__ = [
    "CodeBlock",
    "CodePiece",
    "EncoderSpec",
    "FusionParams",
    "PipelineConfig",
    "SourceSnippet",
    "SplitStrategy",
    "WindowConfig",
    "block_count",
    "fuse",
    "init_params",
    "split",
    "window",
    "__version__",
]
