"""Distributed rate splitting for Gaussian and discrete memoryless multiple-access channels."""

from .gaussian_core import GaussianChannel, PowerSplit, RateAllocation
from .dmc_core import DmcChannel, SwitchDistribution

__all__ = ["GaussianChannel", "PowerSplit", "RateAllocation", "DmcChannel", "SwitchDistribution"]
