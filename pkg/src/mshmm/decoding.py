"""Most-probable state paths via log-domain Viterbi decoding.

Scores are unnormalized log joints ``ln pi + sum ln P + sum ln b``; zero
probabilities become ``-inf`` without flooring, so exactly-impossible moves
(e.g. leaving an absorbing state) are never selected.  Ties in any argmax
resolve to the smallest state index, which makes decoding deterministic:
among equally probable paths the decoder returns the one whose reversed
state tuple is lexicographically smallest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._util import thread_map
from .emissions import emission_table
from .errors import HmmError, ZeroProbabilityError
from .model import StatePath


@dataclass(frozen=True, eq=False)
class ViterbiTrellis:
    """Dynamic-programming tables of one decode.

    ``delta[t, i]`` is the best log score over paths ending in state ``i``
    at step ``t``; ``psi[t, i]`` the predecessor realizing it (first row is
    the -1 sentinel, states being 0-based).
    """

    delta: np.ndarray
    psi: np.ndarray


@dataclass(frozen=True)
class DecodeFailure:
    """Record of one sequence that could not be decoded."""

    seq_index: int
    seq_id: str
    message: str


def _trellis_from_log_table(log_b, log_pi, log_p) -> ViterbiTrellis:
    t_len, k = log_b.shape
    delta = np.empty((t_len, k))
    psi = np.empty((t_len, k), dtype=np.int64)
    delta[0] = log_pi + log_b[0]
    psi[0] = -1
    if delta[0].max() == -np.inf:
        raise ZeroProbabilityError(t_index=0, detail="all paths have -inf score")
    for t in range(1, t_len):
        cand = log_p + delta[t - 1][None, :]
        psi[t] = np.argmax(cand, axis=1)
        delta[t] = cand[np.arange(k), psi[t]] + log_b[t]
        if delta[t].max() == -np.inf:
            raise ZeroProbabilityError(t_index=t, detail="all paths have -inf score")
    return ViterbiTrellis(delta=delta, psi=psi)


def viterbi_trellis(model, obs, alive_mask=None) -> ViterbiTrellis:
    """Fill the score and backpointer tables for one sequence."""
    table = emission_table(model, obs, alive_mask)
    with np.errstate(divide="ignore"):
        log_pi = np.log(model.initial_probs)
        log_p = np.log(model.transitions)
    return _trellis_from_log_table(table.log_densities, log_pi, log_p)


def backtrack(trellis: ViterbiTrellis) -> np.ndarray:
    """Recover the best path from a filled trellis (0-based states)."""
    t_len = trellis.delta.shape[0]
    states = np.empty(t_len, dtype=np.int64)
    states[t_len - 1] = int(np.argmax(trellis.delta[t_len - 1]))
    for t in range(t_len - 2, -1, -1):
        states[t] = trellis.psi[t + 1, states[t + 1]]
    return states


def viterbi(model, obs, alive_mask=None, seq_index: int = 0) -> StatePath:
    """Decode the most probable state path of one sequence.

    Raises :class:`ZeroProbabilityError` with the first time step at which
    every partial path has score ``-inf`` (the observation sequence is
    impossible under the model).
    """
    trellis = viterbi_trellis(model, obs, alive_mask)
    return StatePath(seq_index=seq_index, states=backtrack(trellis))


def path_log_joint(model, obs, alive_mask, states) -> float:
    """Log joint score of an explicit path, summed independently of the DP."""
    table = emission_table(model, obs, alive_mask)
    with np.errstate(divide="ignore"):
        log_pi = np.log(model.initial_probs)
        log_p = np.log(model.transitions)
    states = np.asarray(states)
    total = log_pi[states[0]] + table.log_densities[0, states[0]]
    for t in range(1, len(states)):
        total += log_p[states[t], states[t - 1]] + table.log_densities[t, states[t]]
    return float(total)


def decode_dataset(model, data, threads: int = 1):
    """Decode every sequence of a dataset, collecting failures.

    Returns ``(paths, failures)``: successfully decoded paths in dataset
    order plus one :class:`DecodeFailure` per sequence that has no possible
    path.  Never fail-fast on impossible sequences; one bad sequence does
    not hide the others.  Dimension mismatches are dataset-level and raise
    immediately.
    """
    from .inference import _check_dims

    _check_dims(model, data)

    def _one(n):
        try:
            return viterbi(model, data.sequences[n], data.alive_masks[n], seq_index=n)
        except HmmError as exc:
            return DecodeFailure(seq_index=n, seq_id=data.seq_ids[n], message=str(exc))

    results = thread_map(_one, range(data.num_sequences), threads)
    paths = [r for r in results if isinstance(r, StatePath)]
    failures = [r for r in results if isinstance(r, DecodeFailure)]
    return paths, failures
