"""Learning Take-The-Best lexicographic trees by approximate Bayesian computation."""

from .core import (BetaCount, Choice, CuePosterior, Direction, EvalReport, LexTree,
                   PairedComparison, PairSet, Prediction, evaluate_tree, importance_shares,
                   score_subsample)
from .errors import (AcceptanceStall, ContractViolation, DataError, DegenerateSplit,
                     DuplicateName, EmptyTable, EmptyTraining, ParseError)
from .learn import LearnerConfig, LearnerState, accept_test, fit, reinforce
from .predict import EnsemblePrediction, mean_correct_predictions, predict_pair
from .proposal import (make_rng, propose_tree, sample_directions, sample_importance_weights,
                       sample_order)
from .synth import SynthConfig, generate

__version__ = "0.1.0"

__all__ = [
    "AcceptanceStall", "BetaCount", "Choice", "ContractViolation", "CuePosterior", "DataError",
    "DegenerateSplit", "Direction", "DuplicateName", "EmptyTable", "EmptyTraining",
    "EnsemblePrediction", "EvalReport", "LearnerConfig", "LearnerState", "LexTree",
    "PairedComparison", "PairSet", "ParseError", "Prediction", "SynthConfig", "accept_test",
    "evaluate_tree", "fit", "generate", "importance_shares", "make_rng", "mean_correct_predictions",
    "predict_pair", "propose_tree", "reinforce", "sample_directions", "sample_importance_weights",
    "sample_order", "score_subsample",
]
