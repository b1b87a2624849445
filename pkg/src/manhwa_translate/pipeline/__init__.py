"""End-to-end panel translation and batch runs with JSON sidecars."""

from .config import ConfigError, PipelineConfig, load_config
from .record import BubbleEntry, PanelRecord, SidecarError, read_sidecar, write_sidecar
from .runner import Adapters, BatchSummary, build_adapters, process_panel, run_batch

__all__ = [
    "Adapters",
    "BatchSummary",
    "BubbleEntry",
    "ConfigError",
    "PanelRecord",
    "PipelineConfig",
    "SidecarError",
    "build_adapters",
    "load_config",
    "process_panel",
    "read_sidecar",
    "run_batch",
    "write_sidecar",
]
