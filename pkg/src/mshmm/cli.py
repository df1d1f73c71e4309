"""Command-line front end: train, decode, simulate, and eval subcommands.

Exit codes: 0 success, 2 usage, 3 data/format problems, 4 numerical
failures (zero-probability time steps, starved states).  Every run first
echoes its fully resolved configuration on one line, so a run can be
reproduced from its own output.  Errors are reported on stderr as one
machine-parsable line: ``ERROR <code>: <message>``.
"""

from __future__ import annotations

import argparse
import os
import sys

from .decoding import decode_dataset
from .errors import (
    DataError,
    HmmError,
    NumericalError,
    StarvedStateError,
    ZeroProbabilityError,
)
from .inference import dataset_loglik
from .io import load_dataset, save_dataset, save_paths, save_trace
from .model import (
    COVARIANCE_MODES,
    FitConfig,
    load_model,
    save_model,
)
from .simulate import SimulationSpec, sample_dataset
from .training import fit

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def _error(code, message, status):
    print(f"ERROR {code}: {message}", file=sys.stderr)
    return status


def _report(exc):
    if isinstance(exc, ZeroProbabilityError):
        return _error("zero_probability", exc, EXIT_NUMERICAL)
    if isinstance(exc, StarvedStateError):
        return _error("starved_state", exc, EXIT_NUMERICAL)
    if isinstance(exc, NumericalError):
        return _error("numerical", exc, EXIT_NUMERICAL)
    if isinstance(exc, DataError):
        return _error("data_format", exc, EXIT_DATA)
    return _error("usage", exc, EXIT_USAGE)


def _banner(command, pairs):
    rendered = " ".join(f"{k}={v}" for k, v in pairs)
    print(f"config command={command} {rendered}")


def _default_threads():
    return os.cpu_count() or 1


def _add_threads(parser):
    parser.add_argument(
        "--threads", type=int, default=None,
        help="worker threads (default: all cores; 1 = serial reference order)")


def _fit_config(args):
    # an unset minimum follows a lowered maximum instead of rejecting it
    min_iterations = args.min_iterations
    if min_iterations is None:
        min_iterations = min(10, args.max_iterations)
    return FitConfig(
        max_iterations=args.max_iterations,
        min_iterations=min_iterations,
        rel_tolerance=args.rel_tolerance,
        variance_floor=args.variance_floor,
        seed=args.seed,
        init_strategy=args.init_strategy,
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mshmm",
        description="Gaussian-emission HMMs trained from many short sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="fit a model to a dataset file")
    train.add_argument("--data", required=True, help="dataset file to train on")
    train.add_argument("--k", type=int, help="number of states (omit with --init-model)")
    train.add_argument("--absorbing", action="store_true",
                       help="reserve the last state as an absorbing death state")
    train.add_argument("--covariance-mode", choices=COVARIANCE_MODES, default="full")
    train.add_argument("--init-model", help="start from this model document")
    train.add_argument("--model-out", required=True, help="where to write the fitted model")
    train.add_argument("--trace-out", help="where to write the iter,llh,delta trace")
    train.add_argument("--max-iterations", type=int, default=1000)
    train.add_argument("--min-iterations", type=int, default=None,
                       help="default: min(10, --max-iterations)")
    train.add_argument("--rel-tolerance", type=float, default=1e-4)
    train.add_argument("--variance-floor", type=float, default=1e-6)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--init-strategy", default="spread_means",
                       choices=("spread_means", "random_responsibility"))
    _add_threads(train)

    decode = sub.add_parser("decode", help="Viterbi-decode a dataset under a model")
    decode.add_argument("--model", required=True)
    decode.add_argument("--data", required=True)
    decode.add_argument("--paths-out", required=True,
                        help="where to write seq_id,t,state rows")
    _add_threads(decode)

    sim = sub.add_parser("simulate", help="sample a synthetic dataset from a model")
    sim.add_argument("--model", required=True)
    sim.add_argument("--n", type=int, required=True, help="number of sequences")
    sim.add_argument("--t", type=int, required=True, help="length of each sequence")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--data-out", required=True)
    sim.add_argument("--truth-out", help="also write the true state paths")

    ev = sub.add_parser("eval", help="normalized log-likelihood of data under a model")
    ev.add_argument("--model", required=True)
    ev.add_argument("--data", required=True)
    _add_threads(ev)

    return parser


def cmd_train(args) -> int:
    threads = args.threads if args.threads is not None else _default_threads()
    if args.init_model is None and args.k is None:
        return _error("usage", "train requires --k or --init-model", EXIT_USAGE)
    try:
        config = _fit_config(args)
    except ValueError as exc:
        return _error("usage", exc, EXIT_USAGE)
    _banner("train", [
        ("data", args.data), ("k", args.k), ("absorbing", args.absorbing),
        ("covariance_mode", args.covariance_mode), ("init_model", args.init_model),
        ("model_out", args.model_out), ("trace_out", args.trace_out),
        ("max_iterations", config.max_iterations),
        ("min_iterations", config.min_iterations),
        ("rel_tolerance", config.rel_tolerance),
        ("variance_floor", config.variance_floor),
        ("seed", config.seed), ("init_strategy", config.init_strategy),
        ("threads", threads),
    ])
    try:
        data = load_dataset(args.data)
        initial = load_model(args.init_model) if args.init_model else None
        if initial is not None and args.k is not None and args.k != initial.num_states:
            return _error(
                "usage",
                f"--k {args.k} conflicts with the initial model (K={initial.num_states})",
                EXIT_USAGE)
        model, report = fit(
            data, num_states=args.k, config=config, initial=initial,
            absorbing=args.absorbing, covariance_mode=args.covariance_mode,
            threads=threads)
        save_model(model, args.model_out)
        if args.trace_out:
            save_trace(report.loglik_trace, args.trace_out)
    except HmmError as exc:
        return _report(exc)
    except ValueError as exc:
        return _error("usage", exc, EXIT_USAGE)
    print(f"termination reason={report.reason} iterations={report.iterations} "
          f"llh={report.final_loglik:.17g}")
    return EXIT_OK


def cmd_decode(args) -> int:
    threads = args.threads if args.threads is not None else _default_threads()
    _banner("decode", [("model", args.model), ("data", args.data),
                       ("paths_out", args.paths_out), ("threads", threads)])
    try:
        model = load_model(args.model)
        data = load_dataset(args.data)
        paths, failures = decode_dataset(model, data, threads=threads)
        save_paths(paths, data.seq_ids, args.paths_out)
    except HmmError as exc:
        return _report(exc)
    print(f"decoded sequences={len(paths)} failures={len(failures)}")
    if failures:
        for f in failures:
            _error("zero_probability", f"sequence {f.seq_id}: {f.message}", 0)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.n < 1:
        return _error("usage", "--n must be at least 1", EXIT_USAGE)
    if args.t < 1:
        return _error("usage", "--t must be at least 1", EXIT_USAGE)
    _banner("simulate", [("model", args.model), ("n", args.n), ("t", args.t),
                         ("seed", args.seed), ("data_out", args.data_out),
                         ("truth_out", args.truth_out)])
    try:
        model = load_model(args.model)
        spec = SimulationSpec(model=model, num_sequences=args.n, length=args.t,
                              seed=args.seed, emit_truth=args.truth_out is not None)
        data, truths = sample_dataset(spec)
        save_dataset(data, args.data_out)
        if args.truth_out:
            save_paths(truths, data.seq_ids, args.truth_out)
    except HmmError as exc:
        return _report(exc)
    except ValueError as exc:
        return _error("usage", exc, EXIT_USAGE)
    print(f"simulated sequences={args.n} steps={args.t}")
    return EXIT_OK


def cmd_eval(args) -> int:
    threads = args.threads if args.threads is not None else _default_threads()
    _banner("eval", [("model", args.model), ("data", args.data),
                     ("threads", threads)])
    try:
        model = load_model(args.model)
        data = load_dataset(args.data)
        total = dataset_loglik(model, data, threads=threads)
    except HmmError as exc:
        return _report(exc)
    print(f"llh={total / data.total_timesteps:.17g}")
    return EXIT_OK


_COMMANDS = {
    "train": cmd_train,
    "decode": cmd_decode,
    "simulate": cmd_simulate,
    "eval": cmd_eval,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return _COMMANDS[args.command](args)


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
