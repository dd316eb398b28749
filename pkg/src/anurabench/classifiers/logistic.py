"""Multinomial logistic regression trained by full-batch gradient descent."""

from __future__ import annotations

import numpy as np

from .base import Classifier


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_gradient(W, Xb, Y, lam):
    """Mean cross-entropy plus (lam/2)||W||^2 on the non-bias rows.

    W: (d + 1, C) with the bias in the last row. Xb: (n, d + 1) with a ones
    column appended. Y: (n, C) one-hot targets.
    """
    n = Xb.shape[0]
    P = softmax(Xb @ W)
    eps = 1e-300  # log(0) guard for fully confident wrong predictions
    data_loss = -np.log(np.maximum((P * Y).sum(axis=1), eps)).mean()
    penalty = 0.5 * lam * float((W[:-1] * W[:-1]).sum())
    grad = Xb.T @ (P - Y) / n
    grad[:-1] += lam * W[:-1]
    return data_loss + penalty, grad


class LogisticRegression(Classifier):
    """Softmax regression; fixed step that halves whenever a step would
    increase the loss, so the recorded loss sequence never goes up."""

    def __init__(self, lam=1e-4, step=1.0, max_iter=500, tol=1e-6, seed=0):
        super().__init__(seed)
        self.lam = float(lam)
        self.step = float(step)
        self.max_iter = int(max_iter)
        self.tol = float(tol)
        self.weights = None
        self.loss_history_: list[float] = []

    def _fit(self, X, y):
        n, d = X.shape
        C = self.class_count
        Xb = np.hstack([X, np.ones((n, 1))])
        Y = np.zeros((n, C))
        Y[np.arange(n), y] = 1.0

        W = np.zeros((d + 1, C))
        step = self.step
        loss, grad = loss_and_gradient(W, Xb, Y, self.lam)
        history = [loss]
        for _ in range(self.max_iter):
            while True:
                candidate = W - step * grad
                new_loss, new_grad = loss_and_gradient(candidate, Xb, Y, self.lam)
                if new_loss <= loss or step < 1e-12:
                    break
                step *= 0.5
            if new_loss > loss:
                break  # step floor reached without progress
            W, prev_loss, loss, grad = candidate, loss, new_loss, new_grad
            history.append(loss)
            if abs(prev_loss - loss) < self.tol * max(abs(prev_loss), 1e-12):
                break
        self.weights = W
        self.loss_history_ = history

    def decision_scores(self, X) -> np.ndarray:
        Xb = np.hstack([np.asarray(X, dtype=np.float64), np.ones((len(X), 1))])
        return Xb @ self.weights

    def _predict(self, X):
        return self.decision_scores(X).argmax(axis=1)
