"""EM training over many independent sequences (multi-sequence Baum-Welch).

Each iteration pools the smoothing and pairwise posteriors of every sequence
into one set of sufficient statistics, applies the closed-form parameter
updates, and then re-scores the dataset under the updated model.  The
reported trace value for iteration ``l`` therefore always describes the
model that iteration produced, and re-evaluating the returned model on the
training data reproduces the last trace entry exactly.

Convergence: stop at iteration ``l >= min_iterations`` once
``llh(l) - llh(l-1) < rel_tolerance * |llh(l-1)|``, where ``llh`` is the
log-likelihood normalized by the total number of time steps (with uniform
sequence lengths this is the usual per-sequence, per-step normalization).
``llh(0)`` is taken as ``-inf``, so the very first iteration never
converges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NumericalError, StarvedStateError
from .inference import _pooled_group_stats, dataset_loglik
from .model import (
    FitConfig,
    FitReport,
    HmmModel,
    _require_valid,
    init_model,
)

#: A state whose pooled posterior mass falls below this fraction of the total
#: time-step count is considered starved.
STARVATION_FRACTION = 1e-12


@dataclass(frozen=True, eq=False)
class SufficientStats:
    """Pooled E-step statistics, ready for one M-step.

    All sums run over every sequence and time step: ``gamma1_sum`` over the
    first step only, ``xi_pool[i, j]`` over the pairwise posteriors of moving
    from ``j`` to ``i``, and the weighted moments over all steps.
    ``total_loglik`` is the dataset log-likelihood under the model the E-step
    was run with.
    """

    gamma1_sum: np.ndarray
    xi_pool: np.ndarray
    gamma_weight: np.ndarray
    weighted_obs: np.ndarray
    weighted_sq: np.ndarray
    total_loglik: float
    total_timesteps: int
    num_sequences: int


@dataclass(frozen=True, eq=False)
class TraceRecord:
    """Per-iteration training record handed to a caller-supplied sink."""

    iteration: int
    loglik: float
    delta: float
    model: HmmModel


def e_step(model: HmmModel, data, threads: int = 1) -> SufficientStats:
    """Pool the posterior statistics of every sequence under ``model``.

    Sequences are processed grouped by length and reduced in a fixed order,
    so the result does not depend on thread scheduling.  Raises
    :class:`ZeroProbabilityError` naming the first (sequence, t) whose
    forward scale vanishes.
    """
    g1, xi, gw, wo, ws, ll = _pooled_group_stats(model, data, threads=threads)
    return SufficientStats(
        gamma1_sum=g1, xi_pool=xi, gamma_weight=gw,
        weighted_obs=wo, weighted_sq=ws, total_loglik=ll,
        total_timesteps=data.total_timesteps, num_sequences=data.num_sequences,
    )


def m_step(stats: SufficientStats, prev: HmmModel, config: FitConfig) -> HmmModel:
    """Closed-form parameter update from pooled statistics.

    Initial probabilities are the normalized first-step posteriors;
    transition columns are the normalized pairwise pools; means and
    covariances are the posterior-weighted moments, the covariance taken
    around the *new* mean.  ``config.variance_floor`` is added to every
    covariance diagonal, diagonal mode zeroes the off-diagonal terms, and
    absorbing-state constraints are re-imposed exactly (its mean and
    covariance are carried over untouched).
    """
    k = prev.num_states
    absorbing = prev.absorbing_state
    floor = config.variance_floor

    for i in range(k):
        if i == absorbing:
            continue
        if stats.gamma_weight[i] < STARVATION_FRACTION * stats.total_timesteps:
            raise StarvedStateError(i)

    pi = stats.gamma1_sum / stats.gamma1_sum.sum()
    trans = np.empty((k, k))
    for j in range(k):
        if j == absorbing:
            continue
        col_total = stats.xi_pool[:, j].sum()
        if col_total == 0.0:
            if stats.total_timesteps == stats.num_sequences:
                raise StarvedStateError(
                    j, "no transitions observed (all sequences have length 1)")
            raise StarvedStateError(j, "no outgoing transition mass")
        trans[:, j] = stats.xi_pool[:, j] / col_total

    means = np.array(prev.means)
    covs = np.array(prev.covariances)
    eye = np.eye(prev.obs_dim)
    for i in range(k):
        if i == absorbing:
            continue
        weight = stats.gamma_weight[i]
        m_i = stats.weighted_obs[i] / weight
        cov = stats.weighted_sq[i] / weight - np.outer(m_i, m_i)
        cov = 0.5 * (cov + cov.T)
        if prev.covariance_mode == "diagonal":
            cov = np.diag(np.diagonal(cov).copy())
        means[i] = m_i
        covs[i] = cov + floor * eye

    if absorbing is not None:
        pi[absorbing] = 0.0
        trans[:, absorbing] = 0.0
        trans[absorbing, absorbing] = 1.0

    return HmmModel(pi, trans, means, covs,
                    covariance_mode=prev.covariance_mode,
                    absorbing_state=absorbing)


def fit(
    data,
    num_states: Optional[int] = None,
    config: Optional[FitConfig] = None,
    initial: Optional[HmmModel] = None,
    *,
    absorbing: bool = False,
    covariance_mode: str = "full",
    threads: int = 1,
    trace: Optional[Callable[[TraceRecord], None]] = None,
):
    """Train a model by iterating E and M steps until convergence.

    Either supply ``initial`` (its structure wins; ``num_states`` may be
    given redundantly) or let the configured ``init_strategy`` build a
    starting point from the data.  ``trace`` receives one
    :class:`TraceRecord` per iteration, including the interim model.

    Returns ``(model, report)``; the report's trace is normalized by the
    total number of time steps and its last entry equals the log-likelihood
    of the returned model on ``data``.  Numerical failures inside the loop
    propagate with the iteration index attached.
    """
    config = config or FitConfig()
    if initial is not None:
        if num_states is not None and num_states != initial.num_states:
            raise ValueError(
                f"num_states={num_states} conflicts with the initial model "
                f"(K={initial.num_states})"
            )
        _require_valid(initial, 0.0, "initial model")
        model = initial
    else:
        if num_states is None:
            raise ValueError("either num_states or an initial model is required")
        model = init_model(data, num_states, config,
                           absorbing=absorbing, covariance_mode=covariance_mode)

    total_steps = data.total_timesteps
    history = []
    prev_llh = -np.inf
    reason = "max_iterations"
    iterations = 0
    for l in range(1, config.max_iterations + 1):
        try:
            stats = e_step(model, data, threads=threads)
            model = m_step(stats, model, config)
            llh = dataset_loglik(model, data, threads=threads) / total_steps
        except NumericalError as exc:
            exc.iteration = l
            raise
        delta = llh - prev_llh
        history.append(llh)
        iterations = l
        if trace is not None:
            trace(TraceRecord(iteration=l, loglik=llh, delta=delta, model=model))
        if l >= config.min_iterations and delta < config.rel_tolerance * abs(prev_llh):
            reason = "converged"
            break
        prev_llh = llh
    report = FitReport(loglik_trace=tuple(history), reason=reason,
                       iterations=iterations)
    return model, report


def ungrouped_em_update(model: HmmModel, data, config: FitConfig) -> HmmModel:
    """One EM iteration via the per-sequence reference path (no batching).

    Exists to pin the grouped training engine against the plainly written
    recursions; slower, otherwise equivalent.
    """
    from .inference import sequence_posteriors

    k, d = model.num_states, model.obs_dim
    gamma1 = np.zeros(k)
    xi_pool = np.zeros((k, k))
    gamma_weight = np.zeros(k)
    weighted_obs = np.zeros((k, d))
    weighted_sq = np.zeros((k, d, d))
    loglik = 0.0
    for seq, mask in zip(data.sequences, data.alive_masks):
        post = sequence_posteriors(model, seq, mask)
        gamma1 += post.gamma[0]
        xi_pool += post.xi_sum
        gamma_weight += post.gamma.sum(axis=0)
        weighted_obs += post.gamma.T @ seq
        weighted_sq += np.einsum("ti,td,te->ide", post.gamma, seq, seq)
        loglik += post.loglik
    stats = SufficientStats(
        gamma1_sum=gamma1, xi_pool=xi_pool, gamma_weight=gamma_weight,
        weighted_obs=weighted_obs, weighted_sq=weighted_sq, total_loglik=loglik,
        total_timesteps=data.total_timesteps, num_sequences=data.num_sequences,
    )
    return m_step(stats, model, config)
