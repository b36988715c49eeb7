"""
JSON Adapters

Convert between JSON documents (config files, run manifests, the
feature-table manifest) and internal objects.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .. import __version__
from ..config import RunConfig
from ..domain.models import FeatureTable, ScalerParams
from ..errors import DataError, UsageError
from .checkpoint import FORMAT_VERSION

logger = logging.getLogger(__name__)


def flatten_document(document: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """
    Nested objects become dotted keys; lists and scalars are kept.

    Objects under a key that names a mapping setting (weather_rename)
    are kept whole.
    """
    flat: Dict[str, Any] = {}
    for key, value in document.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict) and not name.endswith("weather_rename"):
            flat.update(flatten_document(value, prefix=f"{name}."))
        else:
            flat[name] = value
    return flat


def load_config_file(path: Optional[Union[str, Path]]) -> RunConfig:
    """
    Read a JSON config file; None gives the defaults.

    Raises:
        UsageError: file missing, not JSON, unknown key or bad value
    """
    if path is None:
        return RunConfig()

    path = Path(path)
    if not path.is_file():
        raise UsageError(f"config file not found: {path}")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(document, dict):
        raise UsageError(f"config file {path} must hold a JSON object")

    return RunConfig.from_flat_dict(flatten_document(document))


def write_json(document: Any, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_manifest(
    command: str,
    config: RunConfig,
    artifacts: List[str],
    output_dir: Union[str, Path],
    extra: Optional[Dict[str, Any]] = None
) -> Path:
    """
    Record what a subcommand produced and how to rerun it exactly.

    Returns:
        Path of <output_dir>/<command>_manifest.json
    """
    manifest = {
        "command": command,
        "version": __version__,
        "checkpoint_format_version": FORMAT_VERSION,
        "config_hash": config.config_hash(),
        "seed": config.model.seed,
        "config": config.to_flat_dict(),
        "artifacts": sorted(artifacts),
    }
    if extra:
        manifest.update(extra)

    path = Path(output_dir) / f"{command.replace('-', '_')}_manifest.json"
    write_json(manifest, path)
    return path


def feature_manifest(table: FeatureTable, scaler: Optional[ScalerParams], species: List[str]) -> Dict[str, Any]:
    """Sidecar document describing a scaled feature table."""
    return {
        "feature_names": table.feature_names,
        "numeric_columns": list(table.numeric_columns),
        "species_columns": list(table.species_columns),
        "species": list(species),
        "scaler": scaler.to_dict() if scaler else {},
    }


def read_feature_manifest(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Raises:
        DataError: manifest missing or lacking a required field
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"feature manifest not found: {path}")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"feature manifest {path} is not valid JSON: {exc}")

    for key in ("feature_names", "numeric_columns", "species_columns", "scaler"):
        if key not in document:
            raise DataError(f"feature manifest {path} lacks '{key}'")
    document["scaler"] = ScalerParams.from_dict(document["scaler"]) if document["scaler"] else None
    document.setdefault("species", [])
    return document
