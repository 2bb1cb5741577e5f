"""Numeric inner loops: hashed-feature linear softmax and confusion counting.

Each kernel exists twice, a numba ``_nb`` version and a vectorised numpy
``_np`` version. The unsuffixed names dispatch on ``_accel.USE_NUMBA``.

Shapes used throughout:

* ``feat_idx`` -- ``(n, F)`` int64, hashed feature ids per example
* ``weights``  -- ``(D, V)`` float64, one column per output word
* ``cols``     -- ``(C,)`` int64, columns of ``weights`` that form the
  candidate set, in caller order
* ``gold``     -- ``(n,)`` int64, index into ``cols``
"""

from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit

# -- numba kernels ------------------------------------------------------------


@njit(cache=True)
def _softmax_rows_nb(feat_idx, weights, cols):
    n, nf = feat_idx.shape
    nc = cols.shape[0]
    probs = np.empty((n, nc))
    for i in range(n):
        mx = -np.inf
        for c in range(nc):
            s = 0.0
            col = cols[c]
            for f in range(nf):
                s += weights[feat_idx[i, f], col]
            probs[i, c] = s
            if s > mx:
                mx = s
        z = 0.0
        for c in range(nc):
            e = np.exp(probs[i, c] - mx)
            probs[i, c] = e
            z += e
        for c in range(nc):
            probs[i, c] /= z
    return probs


@njit(cache=True)
def _loss_grad_nb(feat_idx, weights, cols, gold, floor):
    probs = _softmax_rows_nb(feat_idx, weights, cols)
    n, nf = feat_idx.shape
    nc = cols.shape[0]
    grad = np.zeros(weights.shape)
    loss = 0.0
    clamped = 0
    for i in range(n):
        p = probs[i, gold[i]]
        if p < floor:
            p = floor
            clamped += 1
        loss -= np.log(p)
        for c in range(nc):
            d = probs[i, c]
            if c == gold[i]:
                d -= 1.0
            col = cols[c]
            for f in range(nf):
                grad[feat_idx[i, f], col] += d
    return loss, clamped, grad, probs


@njit(cache=True)
def _confusion_nb(gold_idx, pred_idx, n_classes):
    out = np.zeros((n_classes, n_classes), dtype=np.int64)
    for i in range(gold_idx.shape[0]):
        out[gold_idx[i], pred_idx[i]] += 1
    return out


# -- numpy kernels ------------------------------------------------------------


def _softmax_rows_np(feat_idx, weights, cols):
    logits = weights[:, cols][feat_idx].sum(axis=1)
    logits = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(logits)
    return e / e.sum(axis=1, keepdims=True)


def _loss_grad_np(feat_idx, weights, cols, gold, floor):
    probs = _softmax_rows_np(feat_idx, weights, cols)
    n, nf = feat_idx.shape
    rows = np.arange(n)
    p_gold = probs[rows, gold]
    clamped = int(np.count_nonzero(p_gold < floor))
    loss = float(-np.log(np.maximum(p_gold, floor)).sum())
    delta = probs.copy()
    delta[rows, gold] -= 1.0
    sub = np.zeros((weights.shape[0], cols.shape[0]))
    np.add.at(sub, feat_idx.ravel(), np.repeat(delta, nf, axis=0))
    grad = np.zeros(weights.shape)
    grad[:, cols] += sub
    return loss, clamped, grad, probs


def _confusion_np(gold_idx, pred_idx, n_classes):
    flat = np.bincount(gold_idx * n_classes + pred_idx, minlength=n_classes * n_classes)
    return flat.reshape(n_classes, n_classes).astype(np.int64)


# -- dispatch -----------------------------------------------------------------


def _as_i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def softmax_rows(feat_idx, weights, cols) -> np.ndarray:
    """Candidate-restricted softmax of summed feature weights, ``(n, C)``."""
    args = (_as_i64(feat_idx), np.ascontiguousarray(weights, dtype=np.float64), _as_i64(cols))
    if _accel.USE_NUMBA:
        return _softmax_rows_nb(*args)
    return _softmax_rows_np(*args)


def loss_grad(feat_idx, weights, cols, gold, floor: float = 1e-12):
    """Summed cross-entropy, clamp count, gradient w.r.t. ``weights`` and probs.

    The loss is ``-sum_i log max(p_i[gold_i], floor)``. The gradient is the
    unclamped softmax gradient, so it matches finite differences only where
    no clamping occurred.
    """
    args = (
        _as_i64(feat_idx),
        np.ascontiguousarray(weights, dtype=np.float64),
        _as_i64(cols),
        _as_i64(gold),
        float(floor),
    )
    if _accel.USE_NUMBA:
        loss, clamped, grad, probs = _loss_grad_nb(*args)
    else:
        loss, clamped, grad, probs = _loss_grad_np(*args)
    return float(loss), int(clamped), grad, probs


def confusion_matrix(gold_idx, pred_idx, n_classes: int) -> np.ndarray:
    """``out[g, p]`` counts positions with gold class g and predicted class p."""
    g, p = _as_i64(gold_idx), _as_i64(pred_idx)
    if _accel.USE_NUMBA:
        return _confusion_nb(g, p, int(n_classes))
    return _confusion_np(g, p, int(n_classes))
