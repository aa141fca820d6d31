"""Semi-supervised rule learning for intrusion detection with Logical Analysis of Data."""
from .binarize import BinaryDataset, Descriptor, binarize
from .data import NEGATIVE, NSL_KDD, POSITIVE, Dataset, FeatureSchema, Observation, load_csv
from .errors import ConfigError, ConflictError, DataError, LadError, ModelError, SupportSetError
from .evaluate import Metrics, evaluate, evaluate_all, time_classification
from .model import LadModel
from .patterns import Literal, Pattern, generate_patterns
from .pipeline import PipelineConfig, fit_lad, self_label, train_offline
from .rules import RuleSet, balance_score, compile_rules
from .support import project, select_support_set

__all__ = [
    "BinaryDataset", "ConfigError", "ConflictError", "DataError", "Dataset", "Descriptor", "FeatureSchema",
    "LadError", "LadModel", "Literal", "Metrics", "ModelError", "NEGATIVE", "NSL_KDD", "Observation", "POSITIVE",
    "Pattern", "PipelineConfig", "RuleSet", "SupportSetError", "balance_score", "binarize", "compile_rules",
    "evaluate", "evaluate_all", "fit_lad", "generate_patterns", "load_csv", "project", "select_support_set",
    "self_label", "time_classification", "train_offline",
]
