"""Reference model-serving shim for the retrieval pipeline's gateway protocol."""

__version__ = "0.1.0"

from .config import LOCAL_MODELS, REFERENCE_MODELS, ShimConfig, load_shim_config
from .server import create_app

__all__ = ["LOCAL_MODELS", "REFERENCE_MODELS", "ShimConfig", "load_shim_config",
           "create_app", "__version__"]
