"""Scaled forward-backward recursions, smoothing posteriors, and likelihoods.

All recursions use the column-stochastic transition convention declared in
:mod:`mshmm.model`: ``P[i, j]`` is the probability of moving to ``i`` from
``j``.  The scaled forward pass divides each time slice by its sum ``c(t)``,
so ``sum_i alpha_hat[t, i] == 1`` and the sequence log-likelihood is
``sum_t ln c(t)``.  The backward pass reuses the same scales, which makes
``gamma = alpha_hat * beta_hat`` hold without further normalization.

The module also ships enumeration-based reference implementations
(:func:`brute_force_loglik`, :func:`brute_force_posteriors`).  They share
nothing with the recursions except the emission table and exist so that
every recursion can be checked against an independent computation on small
instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._util import chunk_indices, thread_map
from .emissions import EmissionTable, _log_density_block, emission_table
from .errors import DimensionError, NumericalError, ZeroProbabilityError


@dataclass(frozen=True, eq=False)
class SequencePosteriors:
    """Everything the E-step needs from one sequence.

    ``xi_sum[i, j]`` accumulates the pairwise posteriors
    ``Pr(x(t-1)=j, x(t)=i | sequence)`` over t = 2..T, matching the
    transition matrix orientation.  Per-step values are kept only when
    requested (testing/debugging); the training updates consume the sum.
    """

    alpha_hat: np.ndarray
    beta_hat: np.ndarray
    scales: np.ndarray
    gamma: np.ndarray
    xi_sum: np.ndarray
    xi_steps: np.ndarray | None = None

    @property
    def loglik(self) -> float:
        return sequence_loglik(self.scales)


def forward_scaled(table: EmissionTable, initial_probs, transitions):
    """Scaled forward recursion for one sequence.

    Returns ``(alpha_hat, scales)`` where ``alpha_hat[t]`` is the normalized
    forward slice and ``scales[t]`` the normalizer, i.e. the conditional
    density of observation ``t`` given the previous ones.  Raises
    :class:`ZeroProbabilityError` as soon as a slice sums to zero: the
    observation at that step is impossible under the model.
    """
    b = table.densities
    t_len, k = b.shape
    alpha = np.empty((t_len, k))
    scales = np.empty(t_len)
    slice_raw = initial_probs * b[0]
    for t in range(t_len):
        if t > 0:
            slice_raw = b[t] * (transitions @ alpha[t - 1])
        c = slice_raw.sum()
        if c == 0.0:
            raise ZeroProbabilityError(t_index=t)
        if not np.isfinite(c):
            raise NumericalError(f"non-finite forward scale at t={t + 1}")
        alpha[t] = slice_raw / c
        scales[t] = c
    return alpha, scales


def backward_scaled(table: EmissionTable, transitions, scales):
    """Scaled backward recursion, reusing the forward scales.

    ``beta_hat[T-1]`` is all ones; earlier slices follow
    ``beta_hat[t, i] = sum_j beta_hat[t+1, j] P[j, i] b[t+1, j] / c(t+1)``,
    where ``P[j, i]`` is the probability of moving from ``i`` to ``j``.
    """
    b = table.densities
    t_len, k = b.shape
    beta = np.empty((t_len, k))
    beta[t_len - 1] = 1.0
    for t in range(t_len - 2, -1, -1):
        beta[t] = (transitions.T @ (beta[t + 1] * b[t + 1])) / scales[t + 1]
    return beta


def posteriors(alpha_hat, beta_hat, table: EmissionTable, transitions, scales,
               keep_steps: bool = False) -> SequencePosteriors:
    """Combine the two recursions into smoothing and pairwise posteriors.

    ``gamma[t] = alpha_hat[t] * beta_hat[t]`` and the pairwise posterior for
    step t is ``P * outer(b[t] * beta_hat[t], alpha_hat[t-1]) / c(t)``,
    accumulated over t in ascending order so results are reproducible.
    """
    b = table.densities
    t_len, k = b.shape
    gamma = alpha_hat * beta_hat
    xi_sum = np.zeros((k, k))
    xi_steps = np.empty((t_len - 1, k, k)) if keep_steps else None
    for t in range(1, t_len):
        step = transitions * np.outer(b[t] * beta_hat[t], alpha_hat[t - 1]) / scales[t]
        xi_sum += step
        if keep_steps:
            xi_steps[t - 1] = step
    return SequencePosteriors(
        alpha_hat=alpha_hat, beta_hat=beta_hat, scales=np.asarray(scales),
        gamma=gamma, xi_sum=xi_sum, xi_steps=xi_steps,
    )


def sequence_posteriors(model, obs, alive_mask=None,
                        keep_steps: bool = False) -> SequencePosteriors:
    """Full per-sequence pipeline: emissions, both recursions, posteriors."""
    table = emission_table(model, obs, alive_mask)
    alpha, scales = forward_scaled(table, model.initial_probs, model.transitions)
    beta = backward_scaled(table, model.transitions, scales)
    return posteriors(alpha, beta, table, model.transitions, scales,
                      keep_steps=keep_steps)


def sequence_loglik(scales) -> float:
    """ln p(sequence | model) from the forward scales: sum_t ln c(t)."""
    return float(np.log(scales).sum())


def dataset_loglik(model, data, threads: int = 1) -> float:
    """Total log-likelihood of a dataset: sum over sequences and steps of ln c.

    Uses the grouped forward pass only; divide by ``data.total_timesteps``
    for the per-sample normalized value reported during training.
    """
    _check_dims(model, data)
    total = 0.0
    for t_len, idx in _length_groups(data):
        obs, alive = _stack_group(data, idx)
        chunks = chunk_indices(len(idx), threads)
        parts = thread_map(
            lambda lohi: float(np.log(_group_forward(
                model, obs[lohi[0]:lohi[1]], alive[lohi[0]:lohi[1]],
                idx[lohi[0]:lohi[1]], scales_only=True)).sum(axis=1).sum()),
            chunks, threads)
        total += sum(parts)
    return total


# --- enumeration-based reference implementations ------------------------------

_MAX_PATHS = 10 ** 6


def _path_log_scores(model, table: EmissionTable):
    """Log joint score of every state path, by explicit enumeration."""
    t_len, k = table.log_densities.shape
    if k ** t_len > _MAX_PATHS:
        raise ValueError(f"instance too large to enumerate: K^T = {k}^{t_len}")
    with np.errstate(divide="ignore"):
        log_pi = np.log(model.initial_probs)
        log_p = np.log(model.transitions)
    log_b = table.log_densities
    paths = []
    scores = []
    for path in itertools.product(range(k), repeat=t_len):
        s = log_pi[path[0]] + log_b[0, path[0]]
        for t in range(1, t_len):
            s += log_p[path[t], path[t - 1]] + log_b[t, path[t]]
        paths.append(path)
        scores.append(s)
    return paths, np.array(scores)


def _logsumexp(values):
    m = values.max()
    if m == -np.inf:
        return -np.inf
    return float(m + np.log(np.exp(values - m).sum()))


def brute_force_loglik(model, obs, alive_mask=None) -> float:
    """Reference log-likelihood: log-sum-exp over all K^T state paths.

    Marginalizes the joint path scores by enumeration; only feasible for
    ``K^T <= 1e6``.  Returns ``-inf`` when no path has positive probability
    (the recursions raise in that situation instead).
    """
    table = emission_table(model, obs, alive_mask)
    _, scores = _path_log_scores(model, table)
    return _logsumexp(scores)


def brute_force_posteriors(model, obs, alive_mask=None):
    """Reference smoothing and pairwise posteriors by path enumeration.

    Returns ``(gamma, xi_steps)`` with ``gamma[t, i] = Pr(x(t)=i | sequence)``
    and ``xi_steps[t-1, i, j] = Pr(x(t-1)=j, x(t)=i | sequence)``.
    """
    table = emission_table(model, obs, alive_mask)
    paths, scores = _path_log_scores(model, table)
    total = _logsumexp(scores)
    if total == -np.inf:
        raise ZeroProbabilityError(t_index=0, detail="no path has positive probability")
    weights = np.exp(scores - total)
    t_len, k = table.log_densities.shape
    gamma = np.zeros((t_len, k))
    xi_steps = np.zeros((t_len - 1, k, k))
    for path, w in zip(paths, weights):
        for t, state in enumerate(path):
            gamma[t, state] += w
        for t in range(1, t_len):
            xi_steps[t - 1, path[t], path[t - 1]] += w
    return gamma, xi_steps


# --- grouped engine -----------------------------------------------------------
#
# Training runs the recursions for a whole batch of equal-length sequences at
# once; the per-sequence functions above stay the readable reference and the
# two paths are pinned against each other in the test suite.

def _check_dims(model, data):
    if data.obs_dim != model.obs_dim:
        raise DimensionError(
            f"dataset dimension {data.obs_dim} does not match model D={model.obs_dim}"
        )


def _length_groups(data):
    """Sequence indices grouped by length, ascending; order is data order."""
    groups = {}
    for n, t_len in enumerate(data.lengths):
        groups.setdefault(t_len, []).append(n)
    return [(t_len, np.array(groups[t_len])) for t_len in sorted(groups)]


def _stack_group(data, idx):
    obs = np.stack([data.sequences[n] for n in idx])
    alive = np.stack([data.alive_masks[n] for n in idx])
    return obs, alive


def _group_log_densities(model, obs, alive):
    g, t_len, d = obs.shape
    log_b = _log_density_block(model, obs.reshape(g * t_len, d), alive.reshape(g * t_len))
    return log_b.reshape(g, t_len, -1)


def _group_forward(model, obs, alive, orig_idx, scales_only=False):
    """Forward recursion over a (G, T, D) batch; returns scales (and alphas)."""
    g, t_len, _ = obs.shape
    b = np.exp(_group_log_densities(model, obs, alive))
    trans = model.transitions
    alpha = None if scales_only else np.empty_like(b)
    scales = np.empty((g, t_len))
    prev = np.broadcast_to(model.initial_probs, (g, b.shape[2]))
    for t in range(t_len):
        raw = b[:, t, :] * (prev if t == 0 else np.einsum("ij,gj->gi", trans, prev))
        c = raw.sum(axis=1)
        dead = np.nonzero(c == 0.0)[0]
        if dead.size:
            n = int(dead[0])
            raise ZeroProbabilityError(t_index=t, seq_index=int(orig_idx[n]))
        if not np.all(np.isfinite(c)):
            raise NumericalError(f"non-finite forward scale at t={t + 1}")
        prev = raw / c[:, None]
        if alpha is not None:
            alpha[:, t, :] = prev
        scales[:, t] = c
    if scales_only:
        return scales
    return b, alpha, scales


def _group_posterior_stats(model, obs, alive, orig_idx):
    """One batched E-step pass: pooled statistics for a group of sequences.

    Every reduction first sums over time *per sequence* and only then over
    the group, so pooling is exactly linear in the sequences (duplicating a
    sequence exactly doubles its contribution) and reproducible.
    """
    b, alpha, scales = _group_forward(model, obs, alive, orig_idx)
    g, t_len, k = b.shape
    trans = model.transitions

    beta = np.empty_like(b)
    beta[:, t_len - 1, :] = 1.0
    for t in range(t_len - 2, -1, -1):
        weighted = beta[:, t + 1, :] * b[:, t + 1, :]
        beta[:, t, :] = np.einsum("ji,gj->gi", trans, weighted) / scales[:, t + 1, None]
    xi_outer = np.zeros((g, k, k))
    for t in range(1, t_len):
        w = beta[:, t, :] * b[:, t, :] / scales[:, t, None]
        xi_outer += np.einsum("gi,gj->gij", w, alpha[:, t - 1, :])
    xi_pool = trans * xi_outer.sum(axis=0)

    gamma = alpha * beta
    gamma1 = gamma[:, 0, :].sum(axis=0)
    gamma_weight = gamma.sum(axis=1).sum(axis=0)
    weighted_obs = np.einsum("gti,gtd->gid", gamma, obs).sum(axis=0)
    weighted_sq = np.einsum("gti,gtd,gte->gide", gamma, obs, obs).sum(axis=0)
    loglik = float(np.log(scales).sum(axis=1).sum())
    return gamma1, xi_pool, gamma_weight, weighted_obs, weighted_sq, loglik


def _pooled_group_stats(model, data, threads: int = 1):
    """Grouped E-step over a whole dataset, reduced in a fixed order."""
    _check_dims(model, data)
    k, d = model.num_states, model.obs_dim
    parts = []
    for t_len, idx in _length_groups(data):
        obs, alive = _stack_group(data, idx)
        chunks = chunk_indices(len(idx), threads)
        parts.extend(thread_map(
            lambda lohi: _group_posterior_stats(
                model, obs[lohi[0]:lohi[1]], alive[lohi[0]:lohi[1]],
                idx[lohi[0]:lohi[1]]),
            chunks, threads))
    gamma1 = np.zeros(k)
    xi_pool = np.zeros((k, k))
    gamma_weight = np.zeros(k)
    weighted_obs = np.zeros((k, d))
    weighted_sq = np.zeros((k, d, d))
    loglik = 0.0
    for p in parts:
        gamma1 += p[0]
        xi_pool += p[1]
        gamma_weight += p[2]
        weighted_obs += p[3]
        weighted_sq += p[4]
        loglik += p[5]
    return gamma1, xi_pool, gamma_weight, weighted_obs, weighted_sq, loglik
