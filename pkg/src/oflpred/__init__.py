"""Online facility location with predictions.

Prediction-augmented Meyerson (PAM), the Meyerson and Follow-Predict
baselines, an offline 3-approximation, prediction generators and a
benchmark harness.
"""
from .algorithms import ALGORITHMS, CostSummary, run_follow_predict, run_meyerson, run_pam
from .errors import ConfigurationError, ParseError, ValidationError
from .hst import HstInstanceSpec, generate_hst_instance, paper_parameters
from .instance import OnlineInstance, PredictionStream, compute_errors, load_euclidean, load_graph
from .metric import EuclideanSpace, FacilityUniverse, GraphSpace, normalize_costs
from .offline import OfflineSolution, brute_force, mp_solve
from .predictors import controlled_predictions, random_predictions, simple_predictor
from .synthetic import synth_noncost

__all__ = [
    "ALGORITHMS", "ConfigurationError", "CostSummary", "EuclideanSpace", "FacilityUniverse",
    "GraphSpace", "HstInstanceSpec", "OfflineSolution", "OnlineInstance", "ParseError",
    "PredictionStream", "ValidationError", "brute_force", "compute_errors", "controlled_predictions",
    "generate_hst_instance", "load_euclidean", "load_graph", "mp_solve", "normalize_costs",
    "paper_parameters", "random_predictions", "run_follow_predict", "run_meyerson", "run_pam",
    "simple_predictor", "synth_noncost",
]
