"""Multi-view binary clustering with graph-collaborated auto-encoder hashing."""

from .binclust import BinaryClusterModel, assign_H, hamming_distance, solve_QH
from .data import MultiViewDataset, load_manifest, sample_anchors, synth_multiview
from .encoder import EncoderState, Hyperparameters, LossTrajectory, run_gcae
from .graphs import FactorPair, learn_factors
from .kernel import KernelizedView, rbf_map
from .metrics import evaluate

__all__ = [
    "BinaryClusterModel",
    "EncoderState",
    "FactorPair",
    "Hyperparameters",
    "KernelizedView",
    "LossTrajectory",
    "MultiViewDataset",
    "assign_H",
    "evaluate",
    "hamming_distance",
    "learn_factors",
    "load_manifest",
    "rbf_map",
    "run_gcae",
    "sample_anchors",
    "solve_QH",
    "synth_multiview",
]
