"""Gaussian-emission HMMs trained from many short independent sequences.

Training pools the scaled forward-backward posteriors of N independent
sequences into a single EM update per iteration; decoding runs log-domain
Viterbi per sequence.  Models may reserve their last state as an absorbing
death state (observed as the all-zero vector) and may restrict covariances
to diagonal form.
"""

from .decoding import (
    DecodeFailure,
    ViterbiTrellis,
    backtrack,
    decode_dataset,
    path_log_joint,
    viterbi,
    viterbi_trellis,
)
from .emissions import EmissionTable, emission_table, log_gaussian_pdf
from .errors import (
    DataError,
    DimensionError,
    HmmError,
    NotPositiveDefiniteError,
    NumericalError,
    StarvedStateError,
    ZeroProbabilityError,
)
from .inference import (
    SequencePosteriors,
    backward_scaled,
    brute_force_loglik,
    brute_force_posteriors,
    dataset_loglik,
    forward_scaled,
    posteriors,
    sequence_loglik,
    sequence_posteriors,
)
from .io import (
    load_dataset,
    load_paths,
    load_trace,
    save_dataset,
    save_paths,
    save_trace,
)
from .model import (
    DEFAULT_VARIANCE_FLOOR,
    Dataset,
    FitConfig,
    FitReport,
    HmmModel,
    StatePath,
    align_states,
    init_model,
    load_model,
    model_document,
    permute_states,
    save_model,
    validate_model,
)
from .simulate import SimulationSpec, sample_dataset
from .training import SufficientStats, TraceRecord, e_step, fit, m_step, ungrouped_em_update

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_VARIANCE_FLOOR",
    "DataError",
    "Dataset",
    "DecodeFailure",
    "DimensionError",
    "EmissionTable",
    "FitConfig",
    "FitReport",
    "HmmError",
    "HmmModel",
    "NotPositiveDefiniteError",
    "NumericalError",
    "SequencePosteriors",
    "SimulationSpec",
    "StarvedStateError",
    "StatePath",
    "SufficientStats",
    "TraceRecord",
    "ViterbiTrellis",
    "ZeroProbabilityError",
    "align_states",
    "backtrack",
    "backward_scaled",
    "brute_force_loglik",
    "brute_force_posteriors",
    "dataset_loglik",
    "decode_dataset",
    "e_step",
    "emission_table",
    "fit",
    "forward_scaled",
    "init_model",
    "load_dataset",
    "load_model",
    "load_paths",
    "load_trace",
    "log_gaussian_pdf",
    "m_step",
    "model_document",
    "path_log_joint",
    "permute_states",
    "posteriors",
    "sample_dataset",
    "save_dataset",
    "save_model",
    "save_paths",
    "save_trace",
    "sequence_loglik",
    "sequence_posteriors",
    "ungrouped_em_update",
    "validate_model",
    "viterbi",
    "viterbi_trellis",
]
