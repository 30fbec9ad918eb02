"""Dense forward/backward kernels for power-concatenation graph-conv layers.

Two layer families share the machinery.  The power layer concatenates
sigma(A^L @ H @ W_L) over the powers L in P along the column axis, so its
output width is |P| times the per-power width.  The tensor-slice layer
replaces A^L with the d depth slices of a compressed occurrence tensor: it
computes sigma(S_k @ H @ W_L) for k = 1..d with the same W_L shared across
slices, combines the d results entry-wise (mean by default), and concatenates
over L as before.  With d = 1 and slices produced by the depth-sum reduction
of a walk tensor, the two layers coincide.

Everything is float64 and deterministic; gradients are hand-derived and
checked against central differences in the test suite.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError

AGGREGATIONS = ("mean", "sum", "max")


def _relu(z):
    return np.maximum(z, 0.0)


def _relu_prime(z):
    return (z > 0.0).astype(np.float64)


def _identity(z):
    return z


def _one(z):
    return np.ones_like(z)


def _tanh_prime(z):
    t = np.tanh(z)
    return 1.0 - t * t


ACTIVATIONS = {
    "relu": (_relu, _relu_prime),
    "identity": (_identity, _one),
    "tanh": (np.tanh, _tanh_prime),
}


def activation_pair(name: str):
    try:
        return ACTIVATIONS[name]
    except KeyError:
        raise ValueError(f"unknown activation {name!r}; options: {sorted(ACTIVATIONS)}") from None


def _check_operator(op, n, what):
    op = np.asarray(op, dtype=np.float64)
    if op.shape != (n, n):
        raise DimensionError(f"{what} must be {n} x {n}, got shape {op.shape}")
    return op


def mixhop_forward(h, operators, weights, activation: str = "relu"):
    """Concatenate sigma(op_L @ h @ W_L) over the operators, in order.

    Returns (output, cache); the output has one block of columns per
    operator, each as wide as the corresponding weight matrix.
    """
    act, _ = activation_pair(activation)
    h = np.asarray(h, dtype=np.float64)
    if len(operators) != len(weights):
        raise DimensionError("one weight matrix per operator is required")
    if not operators:
        raise DimensionError("at least one operator is required")
    n, s = h.shape
    mids, pre, outs = [], [], []
    for op, w in zip(operators, weights):
        op = _check_operator(op, n, "operator")
        w = np.asarray(w, dtype=np.float64)
        if w.shape[0] != s:
            raise DimensionError(f"weight rows {w.shape[0]} do not match input width {s}")
        m = op @ h
        z = m @ w
        mids.append(m)
        pre.append(z)
        outs.append(act(z))
    out = np.concatenate(outs, axis=1)
    cache = {
        "h": h,
        "operators": [np.asarray(op, dtype=np.float64) for op in operators],
        "weights": weights,
        "mids": mids,
        "pre": pre,
        "activation": activation,
    }
    return out, cache


def mixhop_backward(cache, grad_out):
    """Gradients of the concatenated output w.r.t. the layer input and each W_L."""
    _, act_prime = activation_pair(cache["activation"])
    grad_h = np.zeros_like(cache["h"])
    grad_weights = []
    col = 0
    for op, w, m, z in zip(cache["operators"], cache["weights"], cache["mids"], cache["pre"]):
        width = w.shape[1]
        g = grad_out[:, col : col + width]
        col += width
        gz = act_prime(z) * g
        grad_weights.append(m.T @ gz)
        grad_h += op.T @ (gz @ w.T)
    return grad_h, grad_weights


def thop_forward(h, slice_operators, weights, activation: str = "relu", aggregation: str = "mean"):
    """Tensor-slice layer: aggregate sigma(S_k @ h @ W_L) over depth slices.

    slice_operators holds one list of d >= 1 matrices per power, every power
    with the same d and the weight matrix shared across its slices; the
    aggregation ('mean', 'sum', or 'max') combines the d activated results
    entry-wise before concatenation over powers.
    """
    act, _ = activation_pair(activation)
    if aggregation not in AGGREGATIONS:
        raise ValueError(f"unknown aggregation {aggregation!r}; options: {AGGREGATIONS}")
    h = np.asarray(h, dtype=np.float64)
    if len(slice_operators) != len(weights):
        raise DimensionError("one weight matrix per power is required")
    if not slice_operators:
        raise DimensionError("at least one power is required")
    depths = {len(slices) for slices in slice_operators}
    if 0 in depths:
        raise DimensionError("each power needs at least one depth slice")
    if len(depths) != 1:
        raise DimensionError(f"all powers must share one depth, got {sorted(depths)}")
    n, s = h.shape
    mids, pre, stacks, outs = [], [], [], []
    for slices, w in zip(slice_operators, weights):
        w = np.asarray(w, dtype=np.float64)
        if w.shape[0] != s:
            raise DimensionError(f"weight rows {w.shape[0]} do not match input width {s}")
        m_list, z_list, y_list = [], [], []
        for sl in slices:
            sl = _check_operator(sl, n, "depth slice")
            m = sl @ h
            z = m @ w
            m_list.append(m)
            z_list.append(z)
            y_list.append(act(z))
        stacked = np.stack(y_list, axis=0)
        if aggregation == "mean":
            agg = stacked.sum(axis=0) / len(slices)
        elif aggregation == "sum":
            agg = stacked.sum(axis=0)
        else:
            agg = stacked.max(axis=0)
        mids.append(m_list)
        pre.append(z_list)
        stacks.append(stacked)
        outs.append(agg)
    out = np.concatenate(outs, axis=1)
    cache = {
        "h": h,
        "slice_operators": [
            [np.asarray(sl, dtype=np.float64) for sl in slices] for slices in slice_operators
        ],
        "weights": weights,
        "mids": mids,
        "pre": pre,
        "stacks": stacks,
        "activation": activation,
        "aggregation": aggregation,
    }
    return out, cache


def thop_backward(cache, grad_out):
    """Gradients for the tensor-slice layer; shared W_L sums over its slices."""
    _, act_prime = activation_pair(cache["activation"])
    aggregation = cache["aggregation"]
    grad_h = np.zeros_like(cache["h"])
    grad_weights = []
    col = 0
    for slices, w, m_list, z_list, stacked in zip(
        cache["slice_operators"], cache["weights"], cache["mids"], cache["pre"], cache["stacks"]
    ):
        width = w.shape[1]
        g = grad_out[:, col : col + width]
        col += width
        d = len(slices)
        if aggregation == "max":
            winners = np.argmax(stacked, axis=0)  # ties go to the lowest slice
        gw = np.zeros_like(w)
        for k, (sl, m, z) in enumerate(zip(slices, m_list, z_list)):
            if aggregation == "mean":
                gy = g / d
            elif aggregation == "sum":
                gy = g
            else:
                gy = g * (winners == k)
            gz = act_prime(z) * gy
            gw += m.T @ gz
            grad_h += sl.T @ (gz @ w.T)
        grad_weights.append(gw)
    return grad_h, grad_weights


def softmax_cross_entropy(logits, labels, mask):
    """Mean cross-entropy over the masked rows plus its gradient w.r.t. logits.

    The gradient is (softmax - onehot) / |mask| on masked rows, zero elsewhere.
    """
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (logits.shape[0],):
        raise ValueError("mask must have one entry per row of logits")
    rows = np.flatnonzero(mask)
    if rows.size == 0:
        raise ValueError("mask selects no rows")
    picked = labels[rows]
    if picked.min() < 0 or picked.max() >= logits.shape[1]:
        raise ValueError("labels out of range for the logit width")
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_probs = shifted - log_norm
    loss = -float(log_probs[rows, picked].mean())
    grad = np.zeros_like(logits)
    probs = np.exp(log_probs[rows])
    probs[np.arange(rows.size), picked] -= 1.0
    grad[rows] = probs / rows.size
    return loss, grad


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    """U(-a, a) with a = sqrt(6 / (fan_in + fan_out))."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


class LayerStack:
    """Hidden graph-conv layers plus a linear head, trained by full-batch GD.

    kind 'mixhop' takes one (n, n) operator per power; kind 'thop' takes one
    list of depth slices per power.  Hidden layer l maps its input width to
    |P| * hidden_dims[l]; the head maps the final width to num_classes and
    carries a bias initialized at zero.  All weights are drawn from a PCG64
    stream seeded once, so construction is reproducible bit for bit.
    """

    def __init__(
        self,
        kind: str,
        operators,
        in_dim: int,
        hidden_dims,
        num_classes: int,
        *,
        activation: str = "relu",
        aggregation: str = "mean",
        seed: int = 0,
    ):
        if kind not in ("mixhop", "thop"):
            raise ValueError(f"unknown layer kind {kind!r}")
        if not hidden_dims:
            raise ValueError("at least one hidden layer is required")
        if any(int(w) <= 0 for w in hidden_dims):
            raise ValueError("hidden layer widths must be positive")
        if num_classes < 2:
            raise ValueError("need at least two classes")
        if not operators:
            raise DimensionError("at least one operator is required")
        self.kind = kind
        self.operators = list(operators)
        self.activation = activation
        self.aggregation = aggregation
        rng = np.random.Generator(np.random.PCG64(seed))
        num_powers = len(self.operators)
        self.layer_weights: list[list[np.ndarray]] = []
        width = int(in_dim)
        for hidden in hidden_dims:
            hidden = int(hidden)
            self.layer_weights.append(
                [glorot_uniform(rng, width, hidden) for _ in range(num_powers)]
            )
            width = num_powers * hidden
        self.head_w = glorot_uniform(rng, width, num_classes)
        self.head_b = np.zeros(num_classes, dtype=np.float64)
        self._caches = None

    def forward(self, features) -> np.ndarray:
        """Logits for every node; caches activations for backward."""
        h = np.asarray(features, dtype=np.float64)
        caches = []
        for weights in self.layer_weights:
            if self.kind == "mixhop":
                h, cache = mixhop_forward(h, self.operators, weights, self.activation)
            else:
                h, cache = thop_forward(
                    h, self.operators, weights, self.activation, self.aggregation
                )
            caches.append(cache)
        logits = h @ self.head_w + self.head_b
        self._caches = (caches, h)
        return logits

    def backward(self, grad_logits):
        """Gradients for every parameter of the last forward pass."""
        if self._caches is None:
            raise RuntimeError("forward must run before backward")
        caches, last_h = self._caches
        grads = {
            "head_w": last_h.T @ grad_logits,
            "head_b": grad_logits.sum(axis=0),
        }
        grad_h = grad_logits @ self.head_w.T
        layer_grads = []
        for cache in reversed(caches):
            if self.kind == "mixhop":
                grad_h, gws = mixhop_backward(cache, grad_h)
            else:
                grad_h, gws = thop_backward(cache, grad_h)
            layer_grads.append(gws)
        layer_grads.reverse()
        grads["layers"] = layer_grads
        return grads

    def apply_gradients(self, grads, lr: float) -> None:
        """In-place descent step: every parameter moves by -lr * gradient."""
        for weights, gws in zip(self.layer_weights, grads["layers"]):
            for w, gw in zip(weights, gws):
                w -= lr * gw
        self.head_w -= lr * grads["head_w"]
        self.head_b -= lr * grads["head_b"]

    def backward_and_step(self, grad_logits, lr: float):
        grads = self.backward(grad_logits)
        self.apply_gradients(grads, lr)
        return grads

    def parameters(self):
        """(name, array) pairs for all trainable parameters, layers first."""
        for layer_idx, weights in enumerate(self.layer_weights):
            for power_idx, w in enumerate(weights):
                yield f"layer{layer_idx}/W{power_idx}", w
        yield "head/W", self.head_w
        yield "head/b", self.head_b


def _named_gradients(stack: LayerStack, grads) -> dict[str, np.ndarray]:
    named = {}
    for layer_idx, gws in enumerate(grads["layers"]):
        for power_idx, gw in enumerate(gws):
            named[f"layer{layer_idx}/W{power_idx}"] = gw
    named["head/W"] = grads["head_w"]
    named["head/b"] = grads["head_b"]
    return named


def gradient_check(stack: LayerStack, features, labels, mask, h: float = 1e-5):
    """Max relative error between analytic and central-difference gradients.

    Returns a mapping from parameter name to its worst entry.  Relative error
    uses max(|analytic|, |numeric|, 1e-6) as the denominator; the floor
    absorbs finite-difference noise on near-zero gradients.
    """
    if not 1e-7 <= h <= 1e-3:
        raise ValueError("step size h out of the supported range [1e-7, 1e-3]")

    def loss_now() -> float:
        logits = stack.forward(features)
        loss, _ = softmax_cross_entropy(logits, labels, mask)
        return loss

    logits = stack.forward(features)
    _, grad_logits = softmax_cross_entropy(logits, labels, mask)
    analytic = _named_gradients(stack, stack.backward(grad_logits))
    report = {}
    for name, param in stack.parameters():
        numeric = np.zeros_like(param)
        for idx in np.ndindex(param.shape):
            original = param[idx]
            param[idx] = original + h
            loss_plus = loss_now()
            param[idx] = original - h
            loss_minus = loss_now()
            param[idx] = original
            numeric[idx] = (loss_plus - loss_minus) / (2.0 * h)
        ga = analytic[name]
        denom = np.maximum(np.maximum(np.abs(ga), np.abs(numeric)), 1e-6)
        report[name] = float(np.max(np.abs(ga - numeric) / denom, initial=0.0))
    return report
