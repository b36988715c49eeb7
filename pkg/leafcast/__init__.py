"""
Leafcast - Leaf-Fall Period Prediction

Ingests ground-truth phenology, reanalysis weather and spectral-index
rasters, assembles daily per-tree feature series, trains a sliding-window
LSTM classifier and evaluates predicted leaf-fall periods.
"""

__version__ = "1.0.0"
