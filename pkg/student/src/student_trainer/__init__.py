"""Distill silver domain labels into a compact supervised classifier.

The zero-shot engine annotates an unlabelled gloss pool and exports silver
training files (train/dev JSONL plus a labels file).  This package consumes
only those files: it fine-tunes a small encoder on them, reports agreement
with the teacher, and dumps predictions in the engine's own prediction
format so the engine's evaluation command scores the student unchanged.
"""

__version__ = "0.1.0"

from .data import (
    SilverExample,
    check_silver_labels,
    read_corpus_file,
    read_labels_file,
    read_silver_file,
)
from .errors import DataError, ManifestError, StudentError
from .manifest import TrainManifest, load_manifest
from .predict import predict_student
from .training import TrainResult, train_student

__all__ = [
    "DataError",
    "ManifestError",
    "SilverExample",
    "StudentError",
    "TrainManifest",
    "TrainResult",
    "check_silver_labels",
    "load_manifest",
    "predict_student",
    "read_corpus_file",
    "read_labels_file",
    "read_silver_file",
    "train_student",
    "__version__",
]
