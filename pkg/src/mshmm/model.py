"""Model and dataset containers, validation, initialization, and alignment.

Index conventions used everywhere in this package:

* ``transitions`` is column-stochastic: ``transitions[i, j]`` is the
  probability of moving to state ``i`` given the chain was in state ``j``,
  so every *column* sums to one.  Most HMM texts use the row convention;
  every file this package writes carries an explicit ``convention`` field
  so the orientation is never ambiguous on disk.
* States and time steps are 0-based in the Python API and 1-based in all
  text files and error messages.
* The all-zero observation vector is reserved as the death sentinel: it
  marks time steps spent in the absorbing state, and it is rejected on
  alive time steps (jitter or re-encode such data before ingestion).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DataError

#: Lower bound kept on covariance diagonals so densities stay well defined.
DEFAULT_VARIANCE_FLOOR = 1e-6

COVARIANCE_MODES = ("full", "diagonal")
INIT_STRATEGIES = ("user_supplied", "random_responsibility", "spread_means")

#: Marker stored in model documents: ``transitions[j][i]`` in the file is the
#: probability of moving *to* state ``i`` *given* the chain was in state ``j``.
TRANSITION_CONVENTION = "to_given_from_columns"

_PROB_TOL = 1e-12


def _float_array(value, name, shape=None):
    arr = np.array(value, dtype=np.float64)
    if shape is not None and arr.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class HmmModel:
    """Complete parameter set of a Gaussian-emission hidden Markov model.

    Attributes:
        initial_probs: ``(K,)`` initial state distribution.
        transitions: ``(K, K)`` column-stochastic transition matrix;
            ``transitions[i, j] = Pr(state i at t | state j at t-1)``.
        means: ``(K, D)`` per-state emission means.  The absorbing state's
            row is carried for shape regularity but never used.
        covariances: ``(K, D, D)`` per-state emission covariances, symmetric
            positive definite for every non-absorbing state.
        covariance_mode: ``"full"`` or ``"diagonal"``.  Diagonal models keep
            every off-diagonal covariance entry exactly zero.
        absorbing_state: 0-based index of the absorbing (death) state, or
            ``None``.  When present it must be the last state.
    """

    initial_probs: np.ndarray
    transitions: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    covariance_mode: str = "full"
    absorbing_state: int | None = None

    def __post_init__(self):
        pi = _float_array(self.initial_probs, "initial_probs")
        if pi.ndim != 1 or pi.shape[0] < 1:
            raise ValueError("initial_probs must be a non-empty 1-D vector")
        k = pi.shape[0]
        trans = _float_array(self.transitions, "transitions", (k, k))
        means = _float_array(self.means, "means")
        if means.ndim != 2 or means.shape[0] != k or means.shape[1] < 1:
            raise ValueError(f"means must have shape (K={k}, D), got {means.shape}")
        d = means.shape[1]
        covs = _float_array(self.covariances, "covariances", (k, d, d))
        if self.covariance_mode not in COVARIANCE_MODES:
            raise ValueError(f"covariance_mode must be one of {COVARIANCE_MODES}")
        if self.absorbing_state is not None:
            a = int(self.absorbing_state)
            if not 0 <= a < k:
                raise ValueError(f"absorbing_state {a} out of range for K={k}")
            object.__setattr__(self, "absorbing_state", a)
        object.__setattr__(self, "initial_probs", pi)
        object.__setattr__(self, "transitions", trans)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "covariances", covs)

    @property
    def num_states(self) -> int:
        return self.initial_probs.shape[0]

    @property
    def obs_dim(self) -> int:
        return self.means.shape[1]

    def living_states(self) -> np.ndarray:
        """Indices of the states that actually emit observations."""
        if self.absorbing_state is None:
            return np.arange(self.num_states)
        return np.array([i for i in range(self.num_states) if i != self.absorbing_state])


@dataclass(frozen=True, eq=False)
class Dataset:
    """N independent observation sequences with per-step alive flags.

    ``sequences[n]`` is a ``(T_n, D)`` float matrix; ``alive_masks[n]`` is a
    ``(T_n,)`` bool vector that is True while the subject is alive.  Masks
    may be omitted, in which case they are derived from the death sentinel:
    the first all-zero row of a sequence marks death from that step onward.

    Instances are immutable after construction and safe to share across
    threads.
    """

    sequences: tuple
    alive_masks: tuple = None
    seq_ids: tuple = None

    def __post_init__(self):
        raw = self.sequences
        if len(raw) == 0:
            raise DataError("dataset must contain at least one sequence")
        seqs = []
        for n, s in enumerate(raw):
            arr = np.array(s, dtype=np.float64)
            if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
                raise DataError(f"sequence {n + 1} must be a (T, D) matrix with T, D >= 1")
            if not np.all(np.isfinite(arr)):
                raise DataError(f"sequence {n + 1} contains non-finite values")
            arr.setflags(write=False)
            seqs.append(arr)
        d = seqs[0].shape[1]
        for n, s in enumerate(seqs):
            if s.shape[1] != d:
                raise DataError(
                    f"sequence {n + 1} has dimension {s.shape[1]}, expected {d}"
                )

        ids = self.seq_ids
        if ids is None:
            ids = tuple(str(n + 1) for n in range(len(seqs)))
        else:
            ids = tuple(str(i) for i in ids)
            if len(ids) != len(seqs):
                raise DataError("seq_ids length does not match number of sequences")
            if len(set(ids)) != len(ids):
                raise DataError("seq_ids must be unique")

        masks = []
        for n, s in enumerate(seqs):
            zero_row = ~s.any(axis=1)
            if self.alive_masks is None:
                dead_from = int(np.argmax(zero_row)) if zero_row.any() else s.shape[0]
                if not zero_row[dead_from:].all():
                    # a zero row followed by data again: that zero row was alive
                    raise DataError(
                        f"reserved zero vector on alive row (sequence {ids[n]}, "
                        f"t={dead_from + 1}): the all-zero observation marks death; "
                        "jitter or re-encode it"
                    )
                mask = np.arange(s.shape[0]) < dead_from
            else:
                mask = np.array(self.alive_masks[n], dtype=bool)
                if mask.shape != (s.shape[0],):
                    raise DataError(f"alive mask of sequence {ids[n]} has wrong length")
                if np.any(mask[1:] & ~mask[:-1]):
                    raise DataError(
                        f"alive mask of sequence {ids[n]} is not prefix-monotone "
                        "(death is absorbing)"
                    )
            bad_alive = mask & zero_row
            if bad_alive.any():
                t = int(np.argmax(bad_alive))
                raise DataError(
                    f"reserved zero vector on alive row (sequence {ids[n]}, t={t + 1}): "
                    "the all-zero observation marks death; jitter or re-encode it"
                )
            bad_dead = ~mask & ~zero_row
            if bad_dead.any():
                t = int(np.argmax(bad_dead))
                raise DataError(
                    f"nonzero observation on dead time step (sequence {ids[n]}, t={t + 1})"
                )
            mask.setflags(write=False)
            masks.append(mask)

        object.__setattr__(self, "sequences", tuple(seqs))
        object.__setattr__(self, "alive_masks", tuple(masks))
        object.__setattr__(self, "seq_ids", ids)

    @property
    def num_sequences(self) -> int:
        return len(self.sequences)

    @property
    def obs_dim(self) -> int:
        return self.sequences[0].shape[1]

    @property
    def lengths(self) -> tuple:
        return tuple(s.shape[0] for s in self.sequences)

    @property
    def total_timesteps(self) -> int:
        return sum(self.lengths)

    def has_dead_steps(self) -> bool:
        return any(not m.all() for m in self.alive_masks)


@dataclass(frozen=True, eq=False)
class StatePath:
    """Decoded (or true) hidden trajectory of one sequence, 0-based states."""

    seq_index: int
    states: np.ndarray

    def __post_init__(self):
        arr = np.array(self.states, dtype=np.int64)
        if arr.ndim != 1 or arr.shape[0] < 1:
            raise ValueError("states must be a non-empty 1-D integer vector")
        arr.setflags(write=False)
        object.__setattr__(self, "states", arr)

    def __len__(self):
        return self.states.shape[0]


@dataclass(frozen=True)
class FitConfig:
    """Knobs of the EM training loop.

    Defaults follow the usual practice for this family of trainers:
    tolerance 1e-4, at most 1000 and at least 10 iterations.
    """

    max_iterations: int = 1000
    min_iterations: int = 10
    rel_tolerance: float = 1e-4
    variance_floor: float = DEFAULT_VARIANCE_FLOOR
    seed: int = 0
    init_strategy: str = "spread_means"

    def __post_init__(self):
        if self.max_iterations < 1 or self.min_iterations < 1:
            raise ValueError("iteration counts must be positive")
        if self.min_iterations > self.max_iterations:
            raise ValueError("min_iterations must not exceed max_iterations")
        if not self.rel_tolerance > 0:
            raise ValueError("rel_tolerance must be positive")
        if not self.variance_floor > 0:
            raise ValueError("variance_floor must be positive")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.init_strategy not in INIT_STRATEGIES:
            raise ValueError(f"init_strategy must be one of {INIT_STRATEGIES}")


@dataclass(frozen=True)
class FitReport:
    """Outcome of one training run.

    ``loglik_trace[l-1]`` is the per-sample normalized log-likelihood of the
    model produced by iteration ``l`` (after its M-step), so the last entry
    always describes the returned model.
    """

    loglik_trace: tuple
    reason: str
    iterations: int

    @property
    def final_loglik(self) -> float:
        return self.loglik_trace[-1]


def validate_model(model: HmmModel, variance_floor: float = DEFAULT_VARIANCE_FLOOR):
    """Check every structural invariant of a model.

    Returns a list of human-readable violation strings (1-based indices);
    an empty list means the model is valid.  Violations are data, not
    exceptions: callers that require validity raise on a non-empty result.

    ``variance_floor`` is the smallest admissible covariance eigenvalue.
    Pass 0.0 to only require positive semi-definiteness, e.g. when checking
    externally supplied models whose training floor is unknown.
    """
    out = []
    k = model.num_states
    pi = model.initial_probs
    trans = model.transitions
    absorbing = model.absorbing_state

    if not np.all(np.isfinite(pi)):
        out.append("initial probabilities contain non-finite values")
    else:
        for i in np.nonzero(pi < 0)[0]:
            out.append(f"initial probability of state {i + 1} is negative: {float(pi[i])!r}")
        s = pi.sum()
        if not abs(s - 1.0) <= _PROB_TOL:
            out.append(f"initial probabilities sum to {float(s)!r}, expected 1")

    if not np.all(np.isfinite(trans)):
        out.append("transition matrix contains non-finite values")
    else:
        bad = np.argwhere((trans < 0) | (trans > 1))
        for i, j in bad:
            out.append(
                f"transition P[{i + 1}][{j + 1}] = {float(trans[i, j])!r} outside [0, 1]"
            )
        col_sums = trans.sum(axis=0)
        for j in range(k):
            if not abs(col_sums[j] - 1.0) <= _PROB_TOL:
                out.append(f"transition column {j + 1} sums to {float(col_sums[j])!r}, expected 1")

    if absorbing is not None:
        if absorbing != k - 1:
            out.append(
                f"absorbing state must be the last state (K={k}), got index {absorbing + 1}"
            )
        if pi[absorbing] != 0.0:
            out.append(f"absorbing initial probability must be exactly 0, got {float(pi[absorbing])!r}")
        col = trans[:, absorbing]
        expected = np.zeros(k)
        expected[absorbing] = 1.0
        if not np.array_equal(col, expected):
            out.append(
                f"absorbing column {absorbing + 1} not exactly one-hot: {col.tolist()!r}"
            )

    for i in range(k):
        if i == absorbing:
            continue
        if not np.all(np.isfinite(model.means[i])):
            out.append(f"mean of state {i + 1} contains non-finite values")
        cov = model.covariances[i]
        if not np.all(np.isfinite(cov)):
            out.append(f"covariance of state {i + 1} contains non-finite values")
            continue
        asym = np.abs(cov - cov.T).max()
        if not asym <= 1e-12:
            out.append(f"covariance of state {i + 1} is not symmetric (max asymmetry {float(asym)!r})")
            continue
        min_eig = float(np.linalg.eigvalsh(cov).min())
        # slack for factorization round-off, scaled to the matrix magnitude
        slack = 1e-9 * max(1.0, float(np.abs(cov).max()))
        if min_eig < variance_floor - slack:
            out.append(
                f"covariance of state {i + 1} has eigenvalue {min_eig!r} "
                f"below the variance floor {variance_floor!r}"
            )

    if model.covariance_mode == "diagonal":
        for i in range(k):
            off = model.covariances[i] - np.diag(np.diagonal(model.covariances[i]))
            if np.any(off != 0.0):
                out.append(
                    f"covariance of state {i + 1} has nonzero off-diagonal entries "
                    "in diagonal mode"
                )

    return out


def _require_valid(model, variance_floor, what):
    violations = validate_model(model, variance_floor=variance_floor)
    if violations:
        raise DataError(f"invalid {what}: {violations[0]}")


def _pooled_alive_rows(data: Dataset) -> np.ndarray:
    rows = [s[m] for s, m in zip(data.sequences, data.alive_masks) if m.any()]
    if not rows:
        raise DataError("dataset has no alive observations")
    return np.concatenate(rows, axis=0)


def _spread_centers(rows, count, rng):
    """Seeded farthest-point draw of ``count`` distinct rows."""
    distinct = np.unique(rows, axis=0)
    if distinct.shape[0] < count:
        raise DataError(
            f"spread_means cannot seed {count} distinct centers: dataset has only "
            f"{distinct.shape[0]} distinct alive observation rows"
        )
    centers = [distinct[rng.integers(distinct.shape[0])]]
    min_d = ((distinct - centers[0]) ** 2).sum(axis=1)
    while len(centers) < count:
        nxt = int(np.argmax(min_d))
        centers.append(distinct[nxt])
        min_d = np.minimum(min_d, ((distinct - distinct[nxt]) ** 2).sum(axis=1))
    return np.array(centers)


def _structural_arrays(k, absorbing):
    """Uniform initial/transition probabilities honoring absorbing structure."""
    pi = np.zeros(k)
    trans = np.full((k, k), 1.0 / k)
    if absorbing is None:
        pi[:] = 1.0 / k
    else:
        pi[:k - 1] = 1.0 / (k - 1)
        trans[:, absorbing] = 0.0
        trans[absorbing, absorbing] = 1.0
    return pi, trans


def init_model(
    data: Dataset,
    num_states: int,
    config: FitConfig | None = None,
    *,
    absorbing: bool = False,
    covariance_mode: str = "full",
) -> HmmModel:
    """Build a deterministic, data-aware starting model.

    ``spread_means`` (the default strategy) picks well-separated alive
    observation rows as means via a seeded farthest-point sweep, pools the
    diagonal covariance of all alive rows, and spreads probabilities
    uniformly.  ``random_responsibility`` draws random soft state labels for
    every alive time step and runs a single M-step on them.  A model with a
    single emitting state gets the pooled mean directly.

    Deterministic given ``config.seed``; the result always passes
    :func:`validate_model` at ``config.variance_floor``.
    """
    from .training import SufficientStats, m_step  # deferred: avoids import cycle

    config = config or FitConfig()
    if covariance_mode not in COVARIANCE_MODES:
        raise ValueError(f"covariance_mode must be one of {COVARIANCE_MODES}")
    if config.init_strategy == "user_supplied":
        raise ValueError("init_strategy 'user_supplied' requires an explicit model")
    k = int(num_states)
    if k < 1:
        raise ValueError("num_states must be at least 1")
    if absorbing and k < 2:
        raise ValueError("an absorbing state requires at least 2 states")

    absorb = k - 1 if absorbing else None
    d = data.obs_dim
    rows = _pooled_alive_rows(data)
    pooled_mean = rows.mean(axis=0)
    pooled_var = np.maximum(rows.var(axis=0), config.variance_floor)
    n_live = k - 1 if absorbing else k

    rng = np.random.default_rng(config.seed)
    pi, trans = _structural_arrays(k, absorb)
    covs = np.broadcast_to(np.diag(pooled_var), (k, d, d)).copy()
    if absorb is not None:
        covs[absorb] = np.eye(d)

    if config.init_strategy == "spread_means":
        if n_live == 1:
            centers = pooled_mean[None, :]
        else:
            centers = _spread_centers(rows, n_live, rng)
        means = np.zeros((k, d))
        means[:n_live] = centers
        return HmmModel(pi, trans, means, covs,
                        covariance_mode=covariance_mode, absorbing_state=absorb)

    # random_responsibility: random soft labels over the emitting states,
    # pairwise responsibilities factorized, then one ordinary M-step.
    gamma1 = np.zeros(k)
    xi_pool = np.zeros((k, k))
    gamma_weight = np.zeros(k)
    weighted_obs = np.zeros((k, d))
    weighted_sq = np.zeros((k, d, d))
    for seq, mask in zip(data.sequences, data.alive_masks):
        t_n = seq.shape[0]
        gamma = np.zeros((t_n, k))
        n_alive = int(mask.sum())
        if n_alive:
            gamma[mask, :n_live] = rng.dirichlet(np.ones(n_live), size=n_alive)
        if absorb is not None:
            gamma[~mask, absorb] = 1.0
        gamma1 += gamma[0]
        gamma_weight += gamma.sum(axis=0)
        weighted_obs += gamma.T @ seq
        weighted_sq += np.einsum("ti,td,te->ide", gamma, seq, seq)
        xi_pool += np.einsum("ti,tj->ij", gamma[1:], gamma[:-1])
    stats = SufficientStats(
        gamma1_sum=gamma1, xi_pool=xi_pool, gamma_weight=gamma_weight,
        weighted_obs=weighted_obs, weighted_sq=weighted_sq,
        total_loglik=0.0, total_timesteps=data.total_timesteps,
        num_sequences=data.num_sequences,
    )
    template = HmmModel(pi, trans, np.zeros((k, d)), covs,
                        covariance_mode=covariance_mode, absorbing_state=absorb)
    return m_step(stats, template, config)


def align_states(model_a: HmmModel, model_b: HmmModel) -> np.ndarray:
    """Match states of ``model_b`` to ``model_a`` by mean proximity.

    Returns the permutation ``perm`` minimizing the total squared distance
    between ``model_a.means[i]`` and ``model_b.means[perm[i]]``; absorbing
    states always map to themselves.  Use :func:`permute_states` on
    ``model_b`` with the result to make the two models directly comparable
    (label switching makes raw comparison meaningless otherwise).
    """
    k = model_a.num_states
    if model_b.num_states != k or model_b.obs_dim != model_a.obs_dim:
        raise ValueError("models must share the number of states and dimension")
    if model_a.absorbing_state != model_b.absorbing_state:
        raise ValueError("models must agree on the absorbing state")
    live = model_a.living_states()
    cost = (
        (model_a.means[live][:, None, :] - model_b.means[live][None, :, :]) ** 2
    ).sum(axis=2)
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(k, dtype=np.int64)
    perm[live[rows]] = live[cols]
    if model_a.absorbing_state is not None:
        perm[model_a.absorbing_state] = model_a.absorbing_state
    return perm


def permute_states(model: HmmModel, perm) -> HmmModel:
    """Relabel states so that new state ``i`` is old state ``perm[i]``."""
    perm = np.asarray(perm, dtype=np.int64)
    k = model.num_states
    if sorted(perm.tolist()) != list(range(k)):
        raise ValueError("perm must be a permutation of 0..K-1")
    if model.absorbing_state is not None and perm[model.absorbing_state] != model.absorbing_state:
        raise ValueError("perm must map the absorbing state to itself")
    return HmmModel(
        model.initial_probs[perm],
        model.transitions[np.ix_(perm, perm)],
        model.means[perm],
        model.covariances[perm],
        covariance_mode=model.covariance_mode,
        absorbing_state=model.absorbing_state,
    )


# --- model document serialization -------------------------------------------

def format_real(x) -> str:
    """Render a float with 17 significant digits (round-trips IEEE doubles)."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("cannot serialize non-finite value")
    return format(x, ".17g")


def _emit_json(value):
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_real(value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_emit_json(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def model_document(model: HmmModel) -> str:
    """Serialize a model to its canonical JSON document (deterministic bytes).

    ``transitions`` is stored with one array per *source* state:
    ``transitions[j][i]`` in the document equals ``model.transitions[i, j]``,
    as announced by the ``convention`` field.  ``absorbing_state`` is stored
    1-based (or null) to match the other file formats.
    """
    pairs = [
        ("convention", TRANSITION_CONVENTION),
        ("k", model.num_states),
        ("d", model.obs_dim),
        ("covariance_mode", model.covariance_mode),
        ("absorbing_state",
         None if model.absorbing_state is None else model.absorbing_state + 1),
        ("pi", model.initial_probs),
        ("transitions", model.transitions.T),
        ("means", model.means),
        ("covariances", model.covariances),
    ]
    body = ",\n".join(f'  "{k}": {_emit_json(v)}' for k, v in pairs)
    return "{\n" + body + "\n}\n"


def save_model(model: HmmModel, path) -> None:
    """Write the model document to ``path``; deterministic byte-for-byte."""
    Path(path).write_text(model_document(model), encoding="utf-8", newline="\n")


_REQUIRED_FIELDS = (
    "convention", "k", "d", "covariance_mode", "absorbing_state",
    "pi", "transitions", "means", "covariances",
)


def _document_to_model(doc) -> HmmModel:
    if not isinstance(doc, dict):
        raise DataError("model document must be a JSON object")
    for field_name in _REQUIRED_FIELDS:
        if field_name not in doc:
            raise DataError(f"missing field: {field_name}")
    if doc["convention"] != TRANSITION_CONVENTION:
        raise DataError(
            f"unsupported transition convention {doc['convention']!r}; "
            f"expected {TRANSITION_CONVENTION!r}"
        )
    try:
        k = int(doc["k"])
        d = int(doc["d"])
    except (TypeError, ValueError) as exc:
        raise DataError(f"fields k and d must be integers: {exc}") from None
    if k < 1 or d < 1:
        raise DataError("fields k and d must be positive")
    absorbing_doc = doc["absorbing_state"]
    if absorbing_doc is None:
        absorbing = None
    else:
        try:
            absorbing = int(absorbing_doc) - 1
        except (TypeError, ValueError):
            raise DataError("absorbing_state must be an integer or null") from None
        if not 0 <= absorbing < k:
            raise DataError(f"absorbing_state {absorbing_doc} out of range 1..{k}")
    try:
        pi = np.array(doc["pi"], dtype=np.float64)
        stored = np.array(doc["transitions"], dtype=np.float64)
        means = np.array(doc["means"], dtype=np.float64)
        covs = np.array(doc["covariances"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise DataError(f"non-numeric model arrays: {exc}") from None
    if pi.shape != (k,):
        raise DataError(f"pi must have length k={k}, got shape {pi.shape}")
    if stored.shape != (k, k):
        raise DataError(f"transitions must be {k} arrays of {k}, got shape {stored.shape}")
    if means.shape != (k, d):
        raise DataError(f"means must have shape ({k}, {d}), got {means.shape}")
    if covs.shape != (k, d, d):
        raise DataError(f"covariances must have shape ({k}, {d}, {d}), got {covs.shape}")
    mode = doc["covariance_mode"]
    if mode not in COVARIANCE_MODES:
        raise DataError(f"covariance_mode must be one of {COVARIANCE_MODES}, got {mode!r}")
    model = HmmModel(pi, stored.T, means, covs,
                     covariance_mode=mode, absorbing_state=absorbing)
    # PSD is required to load; the training-time variance floor is not
    # recorded in the document, so it is not re-imposed here.
    _require_valid(model, 0.0, "model document")
    return model


def load_model(path) -> HmmModel:
    """Parse and validate a model document; raises DataError on any defect."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read model document: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"model document parse failure: {exc}") from None
    return _document_to_model(doc)
