"""State-conditioned Gaussian observation densities, evaluated in log scale.

Densities are computed through a Cholesky factorization (never via the
determinant in linear scale) and exponentiated only where the scaled
recursions need linear values.  Models with an absorbing state override the
Gaussian on dead time steps: the emission row becomes exactly one-hot on the
absorbing state, and the absorbing state emits nothing while the subject is
alive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DataError, DimensionError, NotPositiveDefiniteError

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class EmissionTable:
    """Per-sequence emission densities.

    ``densities[t, i]`` is the linear-scale density of observation ``t``
    under state ``i``; ``log_densities`` is the same table in log scale with
    ``-inf`` standing in for exact zeros.
    """

    densities: np.ndarray
    log_densities: np.ndarray

    def __post_init__(self):
        for name in ("densities", "log_densities"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def num_steps(self) -> int:
        return self.densities.shape[0]

    @property
    def num_states(self) -> int:
        return self.densities.shape[1]


def _chol_lower(cov):
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise NotPositiveDefiniteError() from None


def _log_gaussian_rows(rows, mean, cov, mode):
    """log N(row; mean, cov) for every row of a (M, D) matrix."""
    diff = rows - mean
    d = rows.shape[1]
    if mode == "diagonal":
        var = np.diagonal(cov)
        if np.any(var <= 0.0):
            raise NotPositiveDefiniteError()
        return -0.5 * (
            d * _LOG_2PI + np.log(var).sum() + (diff * diff / var).sum(axis=1)
        )
    chol = _chol_lower(cov)
    z = solve_triangular(chol, diff.T, lower=True)
    log_det = 2.0 * np.log(np.diagonal(chol)).sum()
    return -0.5 * (d * _LOG_2PI + log_det + (z * z).sum(axis=0))


def log_gaussian_pdf(y, mean, cov, mode: str = "full") -> float:
    """Log density of a single D-vector under N(mean, cov).

    ``mode="diagonal"`` uses the O(D) closed form and only reads the
    diagonal of ``cov``; ``mode="full"`` factorizes the matrix.  Raises
    :class:`NotPositiveDefiniteError` when the factorization fails.
    """
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    mean = np.asarray(mean, dtype=np.float64).reshape(-1)
    cov = np.asarray(cov, dtype=np.float64)
    d = y.shape[0]
    if mean.shape[0] != d or cov.shape != (d, d):
        raise DimensionError(
            f"log_gaussian_pdf: y has dimension {d} but mean/cov have shapes "
            f"{mean.shape} and {cov.shape}"
        )
    return float(_log_gaussian_rows(y[None, :], mean, cov, mode)[0])


def _log_density_block(model, rows, alive):
    """Log emission table for a stack of observation rows.

    ``rows`` is (M, D) and ``alive`` a boolean (M,) vector; rows belonging
    to different sequences may be stacked freely because emissions depend on
    single time steps only.  Dead rows are one-hot (in log scale: 0 on the
    absorbing state, -inf elsewhere); the absorbing state scores -inf on
    every alive row.
    """
    k = model.num_states
    absorbing = model.absorbing_state
    log_b = np.full((rows.shape[0], k), -np.inf)
    if absorbing is None:
        if not alive.all():
            raise DataError(
                "dataset has dead time steps but the model has no absorbing state"
            )
        targets = range(k)
        live_rows = slice(None)
        sub = rows
    else:
        targets = (i for i in range(k) if i != absorbing)
        live_rows = np.nonzero(alive)[0]
        sub = rows[live_rows]
        log_b[~alive, absorbing] = 0.0
    for i in targets:
        try:
            log_b[live_rows, i] = _log_gaussian_rows(
                sub, model.means[i], model.covariances[i], model.covariance_mode
            )
        except NotPositiveDefiniteError:
            raise NotPositiveDefiniteError(state_index=i) from None
    return log_b


def emission_table(model, obs, alive_mask=None) -> EmissionTable:
    """Evaluate all state-conditioned densities for one sequence.

    ``obs`` is the (T, D) observation matrix and ``alive_mask`` an optional
    (T,) boolean vector (default: all alive).  The mask is authoritative for
    the absorbing-state override; datasets built by this package guarantee
    it is consistent with the zero-row sentinel.
    """
    obs = np.asarray(obs, dtype=np.float64)
    if obs.ndim != 2:
        raise DimensionError("obs must be a (T, D) matrix")
    if obs.shape[1] != model.obs_dim:
        raise DimensionError(
            f"observation dimension {obs.shape[1]} does not match model D={model.obs_dim}"
        )
    if alive_mask is None:
        alive = np.ones(obs.shape[0], dtype=bool)
    else:
        alive = np.asarray(alive_mask, dtype=bool)
        if alive.shape != (obs.shape[0],):
            raise DimensionError("alive_mask length does not match the sequence")
    log_b = _log_density_block(model, obs, alive)
    return EmissionTable(densities=np.exp(log_b), log_densities=log_b)
