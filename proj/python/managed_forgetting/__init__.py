"""Managed-forgetting engine: buoyancy, preservation value, context spaces and
forgetting-aware search over a personal knowledge graph."""

from ._core import (
    Engine,
    Error,
    default_config,
    ds_combine,
    generate_activity,
    generate_photos,
    normalize,
)

__all__ = [
    "Engine",
    "Error",
    "default_config",
    "ds_combine",
    "generate_activity",
    "generate_photos",
    "normalize",
]
