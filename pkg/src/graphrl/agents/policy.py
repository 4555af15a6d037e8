"""Masked categorical policies, returns, and the three training losses.

Each loss returns ``(value, grad)`` where ``grad`` is the derivative of the
value with respect to the network output it was given, ready for
``Network.backward``.
"""

from __future__ import annotations

import numpy as np

MASKED_LOGIT = -1e9


def _masked(logits, mask) -> np.ndarray:
    logits = np.asarray(logits, dtype=np.float64)
    if mask is None:
        return logits
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != logits.shape:
        raise ValueError(f"mask shape {mask.shape} does not match logits {logits.shape}")
    if not mask.any(axis=-1).all():
        raise ValueError("every row needs at least one available action")
    return np.where(mask, logits, MASKED_LOGIT)


def masked_log_probs(logits, mask=None) -> np.ndarray:
    z = _masked(logits, mask)
    z = z - z.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


def masked_probs(logits, mask=None) -> np.ndarray:
    z = _masked(logits, mask)
    e = np.exp(z - z.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def masked_sample(logits, mask, rng: np.random.Generator) -> np.ndarray:
    """One action per row, by inverse CDF on a single uniform draw per row."""
    p = masked_probs(logits, mask)
    cdf = np.cumsum(p, axis=-1)
    u = rng.random(p.shape[0])[:, None] * cdf[:, -1:]
    actions = (cdf <= u).sum(axis=-1)
    if mask is not None:
        # guard against landing on a masked zero-width bin through rounding
        mask = np.asarray(mask, dtype=bool)
        bad = ~mask[np.arange(len(actions)), np.minimum(actions, p.shape[1] - 1)]
        if bad.any():
            actions[bad] = np.argmax(p[bad], axis=-1)
    return np.minimum(actions, p.shape[1] - 1)


def uniform_masked_sample(mask, rng: np.random.Generator) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    return masked_sample(np.zeros(mask.shape), mask, rng)


def discounted_returns(rewards, gamma: float) -> np.ndarray:
    """``G_t = sum_j gamma^j r_{t+j}`` along the last axis."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    rewards = np.asarray(rewards, dtype=np.float64)
    out = np.empty_like(rewards)
    running = np.zeros(rewards.shape[:-1])
    for t in range(rewards.shape[-1] - 1, -1, -1):
        running = rewards[..., t] + gamma * running
        out[..., t] = running
    return out


def _one_hot(actions, width) -> np.ndarray:
    out = np.zeros((len(actions), width))
    out[np.arange(len(actions)), actions] = 1.0
    return out


def cross_entropy_loss(logits, actions, mask=None):
    """Mean negative log-likelihood of ``actions``."""
    logp = masked_log_probs(logits, mask)
    n = len(actions)
    loss = -logp[np.arange(n), actions].mean()
    grad = (np.exp(logp) - _one_hot(actions, logp.shape[1])) / n
    return loss, grad


def reinforce_loss(logits, actions, advantages, mask=None):
    """``-mean(log pi(a|s) * advantage)``."""
    logp = masked_log_probs(logits, mask)
    n = len(actions)
    adv = np.asarray(advantages, dtype=np.float64)
    loss = -(logp[np.arange(n), actions] * adv).mean()
    grad = -(adv[:, None] * (_one_hot(actions, logp.shape[1]) - np.exp(logp))) / n
    return loss, grad


def ppo_policy_loss(logits, actions, old_log_probs, advantages, clip: float, mask=None,
                    entropy_coef: float = 0.0):
    """Clipped surrogate, minus an optional entropy bonus.  Also returns the ratios."""
    logp_all = masked_log_probs(logits, mask)
    p = np.exp(logp_all)
    n = len(actions)
    adv = np.asarray(advantages, dtype=np.float64)
    ratio = np.exp(logp_all[np.arange(n), actions] - old_log_probs)
    unclipped = ratio * adv
    clipped = np.clip(ratio, 1.0 - clip, 1.0 + clip) * adv
    loss = -np.minimum(unclipped, clipped).mean()
    # gradient flows through whichever term is the minimum, unless it is the clamped one
    use_unclipped = (unclipped <= clipped) | ((ratio >= 1.0 - clip) & (ratio <= 1.0 + clip))
    d_logp = -np.where(use_unclipped, unclipped, 0.0) / n
    grad = d_logp[:, None] * (_one_hot(actions, p.shape[1]) - p)
    if entropy_coef:
        safe = np.where(p > 0.0, logp_all, 0.0)
        entropy = -(p * safe).sum(axis=1)
        loss -= entropy_coef * entropy.mean()
        # dH/dz_i = -p_i (log p_i + H)
        grad -= entropy_coef * (-(p * (safe + entropy[:, None]))) / n
    return loss, grad, ratio


def value_loss(values, returns):
    """``mean((V - G)^2)`` for a ``(batch, 1)`` value output."""
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    diff = v - np.asarray(returns, dtype=np.float64)
    loss = (diff * diff).mean()
    grad = (2.0 * diff / len(diff)).reshape(-1, 1)
    return loss, grad
