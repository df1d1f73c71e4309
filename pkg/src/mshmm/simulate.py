"""Synthetic dataset generation from a known ground-truth model.

The sampler is the oracle for parameter-recovery and decoding tests, so its
random stream is part of the contract: one ``numpy`` PCG64 generator seeded
with ``spec.seed``, consumed in sequence order.  Per sequence: one uniform
for the initial state, then for each later step one uniform for the
transition draw; every alive step consumes ``D`` standard normals mapped
through the Cholesky factor of the state covariance (redrawn in the
probability-zero event of an exactly zero vector).  Once the chain enters
the absorbing state the remaining steps are filled with zero rows without
consuming randomness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .emissions import _chol_lower
from .errors import NotPositiveDefiniteError
from .model import Dataset, HmmModel, StatePath, validate_model


@dataclass(frozen=True, eq=False)
class SimulationSpec:
    """What to simulate: ground truth, shape, seed, and whether to keep truth."""

    model: HmmModel
    num_sequences: int
    length: object  # common length, or one length per sequence
    seed: int = 0
    emit_truth: bool = False

    def lengths(self):
        if np.isscalar(self.length):
            return [int(self.length)] * self.num_sequences
        lengths = [int(t) for t in self.length]
        if len(lengths) != self.num_sequences:
            raise ValueError("per-sequence lengths must match num_sequences")
        return lengths


def _draw_index(rng, cdf):
    u = rng.random()
    return min(int(np.searchsorted(cdf, u, side="right")), cdf.shape[0] - 1)


def sample_dataset(spec: SimulationSpec):
    """Draw a dataset from the generative model.

    Returns ``(dataset, paths)`` where ``paths`` is the list of true state
    trajectories when ``spec.emit_truth`` is set, else ``None``.  Bitwise
    deterministic given the spec.
    """
    model = spec.model
    if spec.num_sequences < 1:
        raise ValueError("num_sequences must be at least 1")
    lengths = spec.lengths()
    if any(t < 1 for t in lengths):
        raise ValueError("sequence lengths must be at least 1")
    violations = validate_model(model, variance_floor=0.0)
    if violations:
        raise ValueError(f"cannot simulate from an invalid model: {violations[0]}")

    k, d = model.num_states, model.obs_dim
    absorbing = model.absorbing_state
    init_cdf = np.cumsum(model.initial_probs)
    trans_cdf = np.cumsum(model.transitions, axis=0)  # column j: draw of next state
    chols = [None] * k
    for i in range(k):
        if i == absorbing:
            continue
        try:
            chols[i] = _chol_lower(model.covariances[i])
        except NotPositiveDefiniteError:
            raise NotPositiveDefiniteError(state_index=i) from None

    rng = np.random.default_rng(spec.seed)
    sequences = []
    masks = []
    truths = [] if spec.emit_truth else None
    for n in range(spec.num_sequences):
        t_len = lengths[n]
        obs = np.zeros((t_len, d))
        alive = np.zeros(t_len, dtype=bool)
        states = np.empty(t_len, dtype=np.int64)
        state = _draw_index(rng, init_cdf)
        for t in range(t_len):
            if t > 0:
                state = _draw_index(rng, trans_cdf[:, state])
            states[t] = state
            if state == absorbing:
                states[t:] = absorbing
                break
            y = model.means[state] + chols[state] @ rng.standard_normal(d)
            while not y.any():  # zero vector is reserved for death
                y = model.means[state] + chols[state] @ rng.standard_normal(d)
            obs[t] = y
            alive[t] = True
        sequences.append(obs)
        masks.append(alive)
        if truths is not None:
            truths.append(StatePath(seq_index=n, states=states))
    data = Dataset(sequences=tuple(sequences), alive_masks=tuple(masks))
    return data, truths
