"""Shared builders and independent oracles for the test suite.

The oracles here deliberately avoid the library's recursion code paths:
paths are scored by explicit enumeration and densities (where needed) come
from scipy, so a bug in the package cannot hide in its own checker.
"""

import itertools

import numpy as np
import pytest
from scipy.stats import multivariate_normal

import mshmm


def random_model(rng, num_states, obs_dim, absorbing=False,
                 covariance_mode="full", mean_spread=3.0, death_prob=0.25):
    """Random valid model with well-conditioned covariances."""
    def _simplex(n):
        # dirichlet(ones(1)) can return 1-ulp; a single weight must be exact
        return np.array([1.0]) if n == 1 else rng.dirichlet(np.ones(n))

    k, d = num_states, obs_dim
    live = k - 1 if absorbing else k
    pi = np.zeros(k)
    pi[:live] = _simplex(live)
    trans = np.zeros((k, k))
    for j in range(live):
        col = _simplex(live)
        if absorbing:
            death = death_prob * rng.random()
            trans[:live, j] = col * (1.0 - death)
            trans[k - 1, j] = death
        else:
            trans[:, j] = col
    if absorbing:
        trans[k - 1, k - 1] = 1.0
    means = np.zeros((k, d))
    means[:live] = rng.normal(0.0, mean_spread, (live, d))
    covs = np.zeros((k, d, d))
    for i in range(live):
        if covariance_mode == "diagonal":
            covs[i] = np.diag(rng.uniform(0.3, 2.0, d))
        else:
            a = rng.normal(0.0, 1.0, (d, d))
            covs[i] = a @ a.T + 0.4 * np.eye(d)
    if absorbing:
        covs[k - 1] = np.eye(d)
    model = mshmm.HmmModel(pi, trans, means, covs,
                           covariance_mode=covariance_mode,
                           absorbing_state=k - 1 if absorbing else None)
    assert mshmm.validate_model(model, variance_floor=0.0) == []
    return model


def simulated(rng, model, num_sequences, length):
    """Dataset simulated from the model with an rng-derived seed."""
    seed = int(rng.integers(2 ** 31))
    data, truths = mshmm.sample_dataset(mshmm.SimulationSpec(
        model=model, num_sequences=num_sequences, length=length,
        seed=seed, emit_truth=True))
    return data, truths


def brute_force_viterbi(model, obs, alive_mask=None):
    """Independent best-path search by full enumeration.

    Ties resolve to the path whose reversed state tuple is smallest, which
    is the order the backpointer recursion realizes with smallest-index
    argmax.  Returns (states array, score).
    """
    table = mshmm.emission_table(model, obs, alive_mask)
    log_b = table.log_densities
    t_len, k = log_b.shape
    with np.errstate(divide="ignore"):
        log_pi = np.log(model.initial_probs)
        log_p = np.log(model.transitions)
    best_path = None
    best_score = -np.inf
    for path in itertools.product(range(k), repeat=t_len):
        s = log_pi[path[0]] + log_b[0, path[0]]
        for t in range(1, t_len):
            s += log_p[path[t], path[t - 1]] + log_b[t, path[t]]
        if s > best_score or (
            s == best_score and best_path is not None
            and path[::-1] < best_path[::-1]
        ):
            best_score = s
            best_path = path
    assert best_path is not None and best_score > -np.inf
    return np.array(best_path), best_score


def classical_single_sequence_update(model, seq, variance_floor):
    """One hand-coded, unscaled, loop-written Baum-Welch iteration (N=1).

    Densities come from scipy and nothing is shared with the package's
    scaled implementation; used to pin the single-sequence reduction.
    """
    k, d = model.num_states, model.obs_dim
    t_len = seq.shape[0]
    b = np.empty((t_len, k))
    for i in range(k):
        b[:, i] = multivariate_normal(
            mean=model.means[i], cov=model.covariances[i]).pdf(seq)
    p = model.transitions

    alpha = np.zeros((t_len, k))
    for i in range(k):
        alpha[0, i] = model.initial_probs[i] * b[0, i]
    for t in range(1, t_len):
        for i in range(k):
            alpha[t, i] = b[t, i] * sum(alpha[t - 1, j] * p[i, j] for j in range(k))
    beta = np.zeros((t_len, k))
    beta[t_len - 1] = 1.0
    for t in range(t_len - 2, -1, -1):
        for i in range(k):
            beta[t, i] = sum(beta[t + 1, j] * p[j, i] * b[t + 1, j] for j in range(k))
    prob = alpha[t_len - 1].sum()

    gamma = alpha * beta / prob
    xi = np.zeros((t_len - 1, k, k))
    for t in range(1, t_len):
        for i in range(k):
            for j in range(k):
                xi[t - 1, i, j] = alpha[t - 1, j] * p[i, j] * b[t, i] * beta[t, i] / prob

    new_pi = gamma[0] / gamma[0].sum()
    new_p = np.zeros((k, k))
    for j in range(k):
        denom = xi[:, :, j].sum()
        for i in range(k):
            new_p[i, j] = xi[:, i, j].sum() / denom
    new_means = np.zeros((k, d))
    new_covs = np.zeros((k, d, d))
    for i in range(k):
        w = gamma[:, i].sum()
        new_means[i] = (gamma[:, i:i + 1] * seq).sum(axis=0) / w
        diff = seq - new_means[i]
        new_covs[i] = (gamma[:, i:i + 1] * diff).T @ diff / w
        new_covs[i] = 0.5 * (new_covs[i] + new_covs[i].T) + variance_floor * np.eye(d)
    return new_pi, new_p, new_means, new_covs


def oracle_pooled_stats(model, data):
    """Pooled E-step statistics computed from enumeration posteriors."""
    k, d = model.num_states, model.obs_dim
    gamma1 = np.zeros(k)
    xi_pool = np.zeros((k, k))
    gamma_weight = np.zeros(k)
    weighted_obs = np.zeros((k, d))
    weighted_sq = np.zeros((k, d, d))
    for seq, mask in zip(data.sequences, data.alive_masks):
        gamma, xi_steps = mshmm.brute_force_posteriors(model, seq, mask)
        gamma1 += gamma[0]
        xi_pool += xi_steps.sum(axis=0)
        gamma_weight += gamma.sum(axis=0)
        weighted_obs += gamma.T @ seq
        weighted_sq += np.einsum("ti,td,te->ide", gamma, seq, seq)
    return gamma1, xi_pool, gamma_weight, weighted_obs, weighted_sq


def oracle_m_step(model, data, variance_floor):
    """Parameter ratios built directly from enumeration posteriors."""
    k, d = model.num_states, model.obs_dim
    absorbing = model.absorbing_state
    gamma1, xi_pool, gw, wo, ws = oracle_pooled_stats(model, data)
    pi = gamma1 / gamma1.sum()
    trans = np.zeros((k, k))
    for j in range(k):
        if j == absorbing:
            trans[j, j] = 1.0
            continue
        trans[:, j] = xi_pool[:, j] / xi_pool[:, j].sum()
    means = np.array(model.means)
    covs = np.array(model.covariances)
    for i in range(k):
        if i == absorbing:
            continue
        means[i] = wo[i] / gw[i]
        cov = ws[i] / gw[i] - np.outer(means[i], means[i])
        cov = 0.5 * (cov + cov.T)
        if model.covariance_mode == "diagonal":
            cov = np.diag(np.diagonal(cov).copy())
        covs[i] = cov + variance_floor * np.eye(d)
    if absorbing is not None:
        pi[absorbing] = 0.0
    return pi, trans, means, covs


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
