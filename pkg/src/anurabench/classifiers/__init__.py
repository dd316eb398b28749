"""The six supervised classifiers behind one fit/predict contract."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import PipelineError
from .base import Classifier
from .bayes import GaussianNaiveBayes
from .discriminant import LinearDiscriminant
from .logistic import LogisticRegression
from .neighbors import KNearestNeighbors
from .svm import SupportVectorMachine
from .tree import DecisionTree

KINDS = ("LR", "LDA", "KNN", "CART", "NB", "SVM")

_BUILDERS = {
    "LR": LogisticRegression,
    "LDA": LinearDiscriminant,
    "KNN": KNearestNeighbors,
    "CART": DecisionTree,
    "NB": GaussianNaiveBayes,
    "SVM": SupportVectorMachine,
}


@dataclass(frozen=True)
class ClassifierSpec:
    """Which model to build, with its kind-specific hyperparameters."""

    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PipelineError(f"unknown classifier kind {self.kind!r}")

    def build(self) -> Classifier:
        return _BUILDERS[self.kind](seed=self.seed, **self.hyperparameters)


def make_classifier(kind: str, hyperparameters: dict | None = None, seed: int = 0) -> Classifier:
    return ClassifierSpec(kind, hyperparameters or {}, seed).build()


__all__ = [
    "Classifier",
    "ClassifierSpec",
    "DecisionTree",
    "GaussianNaiveBayes",
    "KINDS",
    "KNearestNeighbors",
    "LinearDiscriminant",
    "LogisticRegression",
    "SupportVectorMachine",
    "make_classifier",
]
