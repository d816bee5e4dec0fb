"""Multiresolution change-point detection with human-in-the-loop refinement."""

from .active import (
    Query,
    ReplayError,
    Session,
    SessionComplete,
    SimulationResult,
    UnknownQueryError,
    build_session,
    replay,
    run_simulated,
)
from .annotations import AnnotatedWindow, AnnotationSet
from .config import PRESETS, Config, load_config
from .detect import Detections, Hyperparams, ScoreVector, aggregate, detect, prominence
from .discrepancy import FeatureMatrix, extract_features
from .init import (
    DegenerateScoresError,
    ElbowPoint,
    SortedScoreCurve,
    build_curve,
    curvature,
    elbow,
    init_threshold,
    init_weights,
)
from .io import LabelSet, SignalFormatError, TimeSeries, load_csv, load_labels, save_csv, save_labels, standardize
from .metrics import MatchReport, match
from .optimize import ObjectiveValue, OptimizeResult, SearchSpace, candidate_pool, evaluate, optimize
from .pipeline import PipelineResult, initial_params, prepare, run_unsupervised
from .synth import CHANGE_KINDS, SynthSpec, generate
from .wavelet import DecompositionDepthError, SubbandSet, WaveletFilters, db2, dwt_step, max_decomposition_level, mdwd

__version__ = "0.1.0"

__all__ = [
    "AnnotatedWindow",
    "AnnotationSet",
    "CHANGE_KINDS",
    "Config",
    "DegenerateScoresError",
    "Detections",
    "ElbowPoint",
    "Hyperparams",
    "FeatureMatrix",
    "LabelSet",
    "DecompositionDepthError",
    "MatchReport",
    "ObjectiveValue",
    "OptimizeResult",
    "PRESETS",
    "PipelineResult",
    "Query",
    "ReplayError",
    "ScoreVector",
    "SearchSpace",
    "Session",
    "SessionComplete",
    "SignalFormatError",
    "SimulationResult",
    "SortedScoreCurve",
    "SubbandSet",
    "SynthSpec",
    "WaveletFilters",
    "TimeSeries",
    "UnknownQueryError",
    "aggregate",
    "build_curve",
    "build_session",
    "candidate_pool",
    "curvature",
    "db2",
    "detect",
    "dwt_step",
    "elbow",
    "evaluate",
    "extract_features",
    "generate",
    "init_threshold",
    "init_weights",
    "initial_params",
    "load_config",
    "load_csv",
    "load_labels",
    "match",
    "max_decomposition_level",
    "mdwd",
    "optimize",
    "prepare",
    "prominence",
    "replay",
    "run_simulated",
    "run_unsupervised",
    "save_csv",
    "save_labels",
    "standardize",
    "__version__",
]
