"""Spanning-Tree Designs - covariate-balancing experiments via Maxcut on spanning trees."""

__version__ = "0.1.0"
__author__ = "Lankamar"

from src.designs import Design, DesignMethod, ExperimentDesigner
from src.estimators import EstimatorType

__all__ = ["Design", "DesignMethod", "ExperimentDesigner", "EstimatorType"]
