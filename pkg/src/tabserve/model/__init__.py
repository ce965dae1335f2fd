from .config import ModelConfig
from .network import Explanation, ForwardResult, PredictionOutput, TabNetModel, init_parameters
from .sparsemax import project_simplex_bruteforce, sparsemax
from .training import TrainingSchedule, accuracy, roc_auc, train
from .io import load_model, load_model_file, save_model, save_model_file

__all__ = [
    "ModelConfig", "TabNetModel", "Explanation", "PredictionOutput", "ForwardResult",
    "init_parameters", "sparsemax", "project_simplex_bruteforce",
    "TrainingSchedule", "train", "accuracy", "roc_auc",
    "save_model", "load_model", "save_model_file", "load_model_file",
]
