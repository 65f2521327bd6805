"""Time series property profiling, synthetic generation, and
retrieval-based forecasting-model recommendation."""

from .backend import BACKEND
from .profiling import ProfileConfig, PropertyProfile, profile, profile_set
from .recommend import RecommendationReport, recommend
from .series import SeriesSet, SplitSpec, TimeSeries
from .store import PerfRecord, PropertyVector, Store, bin_profile, build_store
from .synth import CompositeKernel, KernelSpec, SynthConfig, generate_dataset

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CompositeKernel",
    "KernelSpec",
    "PerfRecord",
    "ProfileConfig",
    "PropertyProfile",
    "PropertyVector",
    "RecommendationReport",
    "SeriesSet",
    "SplitSpec",
    "Store",
    "SynthConfig",
    "TimeSeries",
    "__version__",
    "bin_profile",
    "build_store",
    "generate_dataset",
    "profile",
    "profile_set",
    "recommend",
]
