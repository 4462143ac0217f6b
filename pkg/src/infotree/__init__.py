"""Entropy and mutual-information estimation on large alphabets, with
Chow-Liu tree learning and tree-augmented naive Bayes built on top."""

__version__ = "0.1.0"

from .approx import (PolynomialApprox, RescaledPoly, best_entropy_poly,
                     entropy_kernel, eval_poly, rescale_to_interval)
from .estimators import (DEFAULT_CONFIG, EstimatorConfig,
                         conditional_mutual_information, entropy_mle,
                         entropy_miller_madow, entropy_poly,
                         falling_factorial_moment, mutual_information)
from .graphical import (EdgeWeights, TreeModel, TreeStructure, chow_liu,
                        exact_mi_weights, mwst, pairwise_mi_weights,
                        random_star_model, random_tree_model,
                        sample_from_tree, wrong_edges_ratio)
from .histograms import Histogram, JointHistogram, SparseJointHistogram
from .models import ChowLiuTree, TanClassifier
from .rng import SeededGenerator, derive_stream
from .tan import (EvalReport, LabeledDataset, TanModel, cluster_attributes,
                  cross_validate, fit_tan, learning_curve, predict,
                  predict_batch, quantize_uniform, random_tan_model,
                  random_weak_link_tan_model, sample_from_tan)

__all__ = [
    "__version__",
    "PolynomialApprox", "RescaledPoly", "best_entropy_poly", "entropy_kernel",
    "eval_poly", "rescale_to_interval",
    "DEFAULT_CONFIG", "EstimatorConfig", "conditional_mutual_information",
    "entropy_mle", "entropy_miller_madow", "entropy_poly",
    "falling_factorial_moment", "mutual_information",
    "EdgeWeights", "TreeModel", "TreeStructure", "chow_liu", "exact_mi_weights",
    "mwst", "pairwise_mi_weights", "random_star_model", "random_tree_model",
    "sample_from_tree", "wrong_edges_ratio",
    "Histogram", "JointHistogram", "SparseJointHistogram",
    "ChowLiuTree", "TanClassifier",
    "SeededGenerator", "derive_stream",
    "EvalReport", "LabeledDataset", "TanModel", "cluster_attributes",
    "cross_validate", "fit_tan", "learning_curve", "predict", "predict_batch",
    "quantize_uniform", "random_tan_model", "random_weak_link_tan_model",
    "sample_from_tan",
]
