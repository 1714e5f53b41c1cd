"""
Node classification: multinomial softmax regression and F1 scores.
"""
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from sklearn.metrics import f1_score, precision_recall_fscore_support
from sklearn.model_selection import train_test_split

from config.constants import CLASSIFY_ITERATIONS, CLASSIFY_L2, CLASSIFY_LEARNING_RATE, CLASSIFY_TEST_FRACTION
from utils.exceptions import LabelError
from utils.logger import log


class SoftmaxRegression:
    """Multinomial logistic regression fit by full-batch gradient descent."""

    def __init__(
        self,
        num_classes: int,
        l2: float = CLASSIFY_L2,
        learning_rate: float = CLASSIFY_LEARNING_RATE,
        iterations: int = CLASSIFY_ITERATIONS
    ):
        self.num_classes = num_classes
        self.l2 = l2
        self.learning_rate = learning_rate
        self.iterations = iterations
        self.weights: Optional[np.ndarray] = None
        self.bias: Optional[np.ndarray] = None

    def loss_and_grad(
        self,
        weights: np.ndarray,
        bias: np.ndarray,
        x: np.ndarray,
        y: np.ndarray
    ) -> Tuple[float, np.ndarray, np.ndarray]:
        """
        Mean cross-entropy plus (l2 / 2) * ||W||^2 and its gradients.

        Args:
            weights: (d, K)
            bias: (K,)
            x: (n, d) inputs
            y: (n,) class ids

        Returns:
            (loss, dW, db)
        """
        n = x.shape[0]
        logits = x @ weights + bias
        logits -= logits.max(axis=1, keepdims=True)
        log_norm = np.log(np.exp(logits).sum(axis=1))
        loss = float(np.mean(log_norm - logits[np.arange(n), y])) + 0.5 * self.l2 * float(np.sum(weights * weights))

        probs = np.exp(logits - log_norm[:, None])
        probs[np.arange(n), y] -= 1.0
        probs /= n
        return loss, x.T @ probs + self.l2 * weights, probs.sum(axis=0)

    def fit(self, x: np.ndarray, y: np.ndarray) -> 'SoftmaxRegression':
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        self.weights = np.zeros((x.shape[1], self.num_classes))
        self.bias = np.zeros(self.num_classes)
        for _ in range(self.iterations):
            _, grad_w, grad_b = self.loss_and_grad(self.weights, self.bias, x, y)
            self.weights -= self.learning_rate * grad_w
            self.bias -= self.learning_rate * grad_b
        return self

    def predict(self, x: np.ndarray) -> np.ndarray:
        if self.weights is None:
            raise RuntimeError("model is not fitted")
        return (np.asarray(x, dtype=np.float64) @ self.weights + self.bias).argmax(axis=1)


def classify(
    train_embeds: np.ndarray,
    train_labels: Sequence[int],
    test_embeds: np.ndarray,
    num_classes: Optional[int] = None
) -> np.ndarray:
    """
    Fit on the training rows and predict the test rows.

    Raises:
        LabelError: Fewer than two classes in the training labels
    """
    train_labels = np.asarray(train_labels, dtype=np.int64)
    if np.unique(train_labels).size < 2:
        raise LabelError("classification needs at least two classes in the training set")
    num_classes = num_classes or int(train_labels.max()) + 1
    model = SoftmaxRegression(num_classes).fit(train_embeds, train_labels)
    return model.predict(test_embeds)


def f1_scores(predictions: Sequence[int], truth: Sequence[int], num_classes: Optional[int] = None) -> Tuple[float, float]:
    """
    (macro, micro) F1. A declared class with no support or predictions scores 0 in the macro mean.
    """
    truth = np.asarray(truth)
    predictions = np.asarray(predictions)
    if num_classes is None:
        num_classes = int(max(truth.max(initial=0), predictions.max(initial=0))) + 1
    labels = list(range(num_classes))
    macro = f1_score(truth, predictions, labels=labels, average='macro', zero_division=0)
    micro = f1_score(truth, predictions, labels=labels, average='micro', zero_division=0)
    return float(macro), float(micro)


def per_class_scores(predictions: Sequence[int], truth: Sequence[int], class_names: Sequence[str]) -> Dict[str, Tuple[float, float]]:
    """Precision and recall per class name."""
    precision, recall, _, _ = precision_recall_fscore_support(
        truth, predictions, labels=list(range(len(class_names))), zero_division=0
    )
    return {name: (float(p), float(r)) for name, p, r in zip(class_names, precision, recall)}


def stratified_split(
    classes: np.ndarray,
    test_fraction: float = CLASSIFY_TEST_FRACTION,
    seed: int = 0
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Train/test index split, stratified by class when every class has at least two members.
    """
    indices = np.arange(len(classes))
    try:
        train, test = train_test_split(indices, test_size=test_fraction, random_state=seed, stratify=classes)
    except ValueError as e:
        log.warning(f"[EVAL] SPLIT | stratification impossible ({e}); using an unstratified split")
        train, test = train_test_split(indices, test_size=test_fraction, random_state=seed)
    return np.sort(train), np.sort(test)
