"""
Adapters

Convert between file formats (CSV, ESRI ASCII grid, JSON checkpoints and
manifests) and domain models. No business logic lives here.
"""
