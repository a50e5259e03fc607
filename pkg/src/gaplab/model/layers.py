"""Dense layer primitives with hand-derived reverse-mode gradients.

Every forward returns (output, cache); the matching backward consumes the
cache and the upstream gradient and returns gradients for inputs and
parameters. Shapes follow the (batch, time, hidden) convention. All math is
done in the dtype of the incoming arrays; the gradient-check suite runs these
at float64 against central finite differences.
"""

import numpy as np

NEG_INF = -1e9  # additive mask value; large enough to zero attention at float64


def layer_norm(x, g, b, eps=1e-5):
    mu = x.mean(axis=-1, keepdims=True)
    var = ((x - mu) ** 2).mean(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + eps)
    xhat = (x - mu) * inv
    return g * xhat + b, (xhat, inv, g)


def layer_norm_backward(dy, cache):
    xhat, inv, g = cache
    h = xhat.shape[-1]
    dg = (dy * xhat).reshape(-1, h).sum(axis=0)
    db = dy.reshape(-1, h).sum(axis=0)
    dxhat = dy * g
    dx = inv * (
        dxhat
        - dxhat.mean(axis=-1, keepdims=True)
        - xhat * (dxhat * xhat).mean(axis=-1, keepdims=True)
    )
    return dx, dg, db


def linear(x, w, b=None):
    y = x @ w
    if b is not None:
        y = y + b
    return y, (x, w, b is not None)


def linear_backward(dy, cache):
    x, w, has_b = cache
    dx = dy @ w.T
    dy2 = dy.reshape(-1, dy.shape[-1])
    dw = x.reshape(-1, x.shape[-1]).T @ dy2
    db = dy2.sum(axis=0) if has_b else None
    return dx, dw, db


_GELU_C = 0.044715
_GELU_G = float(np.sqrt(2.0 / np.pi))  # plain float so float32 inputs stay float32


def gelu(x):
    u = _GELU_G * (x + _GELU_C * x**3)
    t = np.tanh(u)
    return 0.5 * x * (1.0 + t), (x, t)


def gelu_backward(dy, cache):
    x, t = cache
    du = _GELU_G * (1.0 + 3.0 * _GELU_C * x**2)
    return dy * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t**2) * du)


def softmax(x, axis=-1):
    z = x - x.max(axis=axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=axis, keepdims=True)


def attention(x_q, x_kv, wq, wk, wv, wo, mask):
    """Single-head scaled dot-product attention.

    mask is additive, broadcastable to (batch, t_q, t_k); masked entries carry
    NEG_INF. Rows that are fully masked degenerate to a uniform distribution,
    which is harmless because their outputs never reach the loss.
    """
    h = x_q.shape[-1]
    scale = 1.0 / float(np.sqrt(h))
    q = x_q @ wq
    k = x_kv @ wk
    v = x_kv @ wv
    scores = np.einsum("bth,bkh->btk", q, k) * scale + mask
    a = softmax(scores, axis=-1)
    o = np.einsum("btk,bkh->bth", a, v)
    y = o @ wo
    return y, (x_q, x_kv, q, k, v, a, o, wq, wk, wv, wo, scale)


def attention_backward(dy, cache):
    x_q, x_kv, q, k, v, a, o, wq, wk, wv, wo, scale = cache
    dwo = np.einsum("bti,btj->ij", o, dy)
    do = dy @ wo.T
    da = np.einsum("bth,bkh->btk", do, v)
    dv = np.einsum("btk,bth->bkh", a, do)
    ds = a * (da - (da * a).sum(axis=-1, keepdims=True))
    dq = np.einsum("btk,bkh->bth", ds, k) * scale
    dk = np.einsum("btk,bth->bkh", ds, q) * scale
    dx_q = dq @ wq.T
    dx_kv = dk @ wk.T + dv @ wv.T
    dwq = np.einsum("bti,btj->ij", x_q, dq)
    dwk = np.einsum("bti,btj->ij", x_kv, dk)
    dwv = np.einsum("bti,btj->ij", x_kv, dv)
    return dx_q, dx_kv, dwq, dwk, dwv, dwo


def cross_entropy(logits, targets, mask):
    """Mean per-token NLL over mask-selected positions.

    Returns (mean_nll, n_tokens, dlogits_of_mean). Gradient is with respect to
    the mean, so callers rescale by token counts when pooling batches.
    """
    m = logits.max(axis=-1, keepdims=True)
    z = logits - m
    lse = np.log(np.exp(z).sum(axis=-1, keepdims=True))
    logp = z - lse
    n = int(mask.sum())
    if n == 0:
        raise ValueError("cross_entropy: empty target mask")
    picked = np.take_along_axis(logp, targets[..., None], axis=-1)[..., 0]
    loss = -(picked * mask).sum() / n
    dlogits = np.exp(logp)
    flat = dlogits.reshape(-1, logits.shape[-1])
    flat[np.arange(flat.shape[0]), targets.ravel()] -= 1.0
    dlogits *= mask[..., None] / n
    return loss, n, dlogits
