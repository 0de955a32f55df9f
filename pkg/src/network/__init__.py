"""Feed-forward regressor, its trainers and evaluation metrics."""

from .io import from_model_file, load_model, save_model, to_model_file, write_report
from .metrics import accuracies, evaluate, evaluate_outputs, restart_summary
from .mlp import (
    cost,
    flatten,
    forward,
    gradient,
    init_network,
    jacobian,
    normal_equations,
    unflatten,
)
from .trainers import (
    GradientDescent,
    LevenbergMarquardt,
    Trainer,
    TrainingData,
    damped_step,
    make_trainer,
    train,
    train_gd,
    train_lm,
)

__all__ = [
    "from_model_file",
    "load_model",
    "save_model",
    "to_model_file",
    "write_report",
    "accuracies",
    "evaluate",
    "evaluate_outputs",
    "restart_summary",
    "cost",
    "flatten",
    "forward",
    "gradient",
    "init_network",
    "jacobian",
    "normal_equations",
    "unflatten",
    "GradientDescent",
    "LevenbergMarquardt",
    "Trainer",
    "TrainingData",
    "damped_step",
    "make_trainer",
    "train",
    "train_gd",
    "train_lm",
]
