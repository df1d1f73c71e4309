"""Exception types shared across the package."""


class HmmError(Exception):
    """Base class for every error raised by this package."""


class DataError(HmmError):
    """Malformed input: file parse failures, schema violations, bad datasets."""


class DimensionError(DataError):
    """Observation dimension does not match the model."""


class NumericalError(HmmError):
    """Numerical failure during inference or training.

    ``iteration`` is filled in by the training loop (1-based) when the
    failure happens inside an EM iteration.
    """

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.message = message
        self.iteration = iteration

    def __str__(self):
        if self.iteration is None:
            return self.message
        return f"iteration {self.iteration}: {self.message}"


class ZeroProbabilityError(NumericalError):
    """Some time step has probability zero under the model.

    ``t_index`` is the 0-based time index; ``seq_index``/``seq_id`` identify
    the sequence when known. Messages render time steps 1-based to match the
    file formats.
    """

    def __init__(self, t_index, seq_index=None, seq_id=None, detail=None):
        self.t_index = t_index
        self.seq_index = seq_index
        self.seq_id = seq_id
        where = f"t={t_index + 1}"
        if seq_id is not None:
            where = f"sequence {seq_id}, {where}"
        elif seq_index is not None:
            where = f"sequence {seq_index + 1}, {where}"
        msg = f"zero-probability time step at ({where})"
        msg += f": {detail}" if detail else ": observation impossible under the model"
        super().__init__(msg)


class StarvedStateError(NumericalError):
    """A state received (almost) no posterior mass during the E-step."""

    def __init__(self, state_index, detail=""):
        self.state_index = state_index
        msg = f"starved state {state_index + 1}: {detail}" if detail else (
            f"starved state {state_index + 1}: no posterior mass; "
            "re-initialize with a different seed, strategy, or fewer states"
        )
        super().__init__(msg)


class NotPositiveDefiniteError(NumericalError):
    """A covariance matrix could not be factorized."""

    def __init__(self, state_index=None):
        self.state_index = state_index
        where = "" if state_index is None else f" for state {state_index + 1}"
        super().__init__(f"covariance matrix{where} is not positive definite")
