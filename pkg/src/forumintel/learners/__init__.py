"""The four supervised learners, all implemented from first principles."""

from .forest import BaggedForest
from .gbdt import HistogramGbdt
from .linear import BatchLogisticRegression, PegasosSvm, logistic_loss_and_grad

LINEAR_SVM = "linear_svm"
LOGISTIC_REGRESSION = "logistic_regression"
RANDOM_FOREST = "random_forest"
GBDT = "gbdt"

LEARNER_KINDS = (LINEAR_SVM, LOGISTIC_REGRESSION, RANDOM_FOREST, GBDT)

LEARNER_CLASSES = {
    LINEAR_SVM: PegasosSvm,
    LOGISTIC_REGRESSION: BatchLogisticRegression,
    RANDOM_FOREST: BaggedForest,
    GBDT: HistogramGbdt,
}

__all__ = [
    "BaggedForest",
    "BatchLogisticRegression",
    "HistogramGbdt",
    "PegasosSvm",
    "logistic_loss_and_grad",
    "LEARNER_KINDS",
    "LEARNER_CLASSES",
    "LINEAR_SVM",
    "LOGISTIC_REGRESSION",
    "RANDOM_FOREST",
    "GBDT",
]
