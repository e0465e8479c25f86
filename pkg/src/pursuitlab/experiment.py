"""Monte-Carlo sweep execution, aggregation, and CSV output.

Every trial owns a child random stream keyed by (master seed, m, SNR bits,
trial index), so results do not depend on scheduling: serial and parallel
runs of the same config produce byte-identical output.  All algorithms of a
cell run on the *same* generated instance per trial, which keeps algorithm
comparisons paired the way a shared stopping rule intends.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from hashlib import sha256

import numpy as np

from . import analysis, pursuit
from .analysis import TrialMetrics
from .config import AlgorithmEntry, ExperimentConfig
from .model import Measurement, SensingMatrix, SparseSignal, gen_measurement, gen_sensing_matrix, gen_sparse_signal
from .pursuit import MAX_ITERATIONS, RESIDUAL_MET, STALLED, StoppingRule
from .rng import Rng

__all__ = [
    "CellSummary",
    "TrialRecord",
    "ExperimentResult",
    "make_instance",
    "run_trial",
    "run_experiment",
    "write_csv",
    "write_trials_csv",
    "write_manifest",
    "CSV_COLUMNS",
    "TRIALS_CSV_COLUMNS",
]

# Domain tag separating trial-instance streams from any other use of the seed.
_TRIAL_STREAM_TAG = 0x545249414C  # "TRIAL"

# Trials per parallel work unit; fixed so the schedule never affects results.
CHUNK_TRIALS = 100

_TERMINATION_CODE = {RESIDUAL_MET: 0, MAX_ITERATIONS: 1, STALLED: 2}
_CODE_TERMINATION = {v: k for k, v in _TERMINATION_CODE.items()}

CSV_COLUMNS = (
    "algorithm,params,m,snr_db,trials,nrmse_mean,nrmse_std,support_size_mean,"
    "support_recovered_rate,exact_support_rate,iterations_mean,stalled_count"
)

TRIALS_CSV_COLUMNS = (
    "algorithm,params,m,snr_db,trial,nrmse,support_size,effective_support_size,"
    "support_recovered,exact_support,residual_final,iterations,termination"
)


@dataclass(frozen=True)
class CellSummary:
    """Aggregates over the trials of one (algorithm, m, snr) cell."""

    algorithm: str
    params: str
    m: int
    snr_db: float | None
    trials: int
    nrmse_mean: float
    nrmse_std: float
    support_size_mean: float
    support_recovered_rate: float
    exact_support_rate: float
    iterations_mean: float
    stalled_count: int


@dataclass(frozen=True)
class TrialRecord:
    """One retained per-trial outcome (see ``run_experiment(retain_trials=True)``)."""

    algorithm: str
    params: str
    m: int
    snr_db: float | None
    trial: int
    metrics: TrialMetrics


@dataclass(frozen=True)
class ExperimentResult:
    summaries: tuple[CellSummary, ...]
    trial_records: tuple[TrialRecord, ...] | None = None


def _snr_key(snr_db: float | None) -> int:
    if snr_db is None:
        return (1 << 64) - 1  # not a finite float64 bit pattern
    return int(np.float64(snr_db).view(np.uint64))


def make_instance(
    master_seed: int, n: int, k: int, m: int, snr_db: float | None, trial: int
) -> tuple[SensingMatrix, SparseSignal, Measurement]:
    """Generate the (A, x, y) triple of one trial, deterministically.

    The stream is keyed by (master_seed, m, snr bits, trial) only, so every
    algorithm sees the same instance for a given cell and trial.
    """
    rng = Rng(master_seed).child(_TRIAL_STREAM_TAG, m, _snr_key(snr_db), trial)
    a = gen_sensing_matrix(rng, m, n)
    x = gen_sparse_signal(rng, n, k)
    meas = gen_measurement(rng, a, x, snr_db)
    return a, x, meas


def _run_entry(entry: AlgorithmEntry, m: int, a, x, meas) -> TrialMetrics:
    threshold = entry.tau if entry.tau is not None else meas.epsilon
    stop = StoppingRule(residual_threshold=threshold, max_iterations=m)
    result = pursuit.recover(a, meas.y, stop, entry.spec)
    return analysis.trial_metrics(x, result)


def run_trial(config: ExperimentConfig, cell: tuple[int, float | None, AlgorithmEntry], trial_index: int) -> TrialMetrics:
    """Run one algorithm on the instance of one (m, snr, trial) slot."""
    m, snr, entry = cell
    a, x, meas = make_instance(config.master_seed, config.n, config.k, m, snr, trial_index)
    return _run_entry(entry, m, a, x, meas)


def _pack(tm: TrialMetrics) -> tuple:
    return (
        tm.nrmse,
        tm.support_size,
        tm.effective_support_size,
        tm.support_recovered,
        tm.exact_support,
        tm.residual_final,
        tm.iterations,
        _TERMINATION_CODE[tm.termination],
    )


def _unpack(row: tuple) -> TrialMetrics:
    return TrialMetrics(
        nrmse=row[0],
        support_size=row[1],
        effective_support_size=row[2],
        support_recovered=row[3],
        exact_support=row[4],
        residual_final=row[5],
        iterations=row[6],
        termination=_CODE_TERMINATION[row[7]],
    )


def _chunk_worker(args) -> list[tuple]:
    config, m, snr, start, count = args
    out = []
    for trial in range(start, start + count):
        a, x, meas = make_instance(config.master_seed, config.n, config.k, m, snr, trial)
        out.append(tuple(_pack(_run_entry(entry, m, a, x, meas)) for entry in config.algorithms))
    return out


def _aggregate(entry: AlgorithmEntry, m: int, snr: float | None, rows: list[tuple]) -> CellSummary:
    nrm = np.array([r[0] for r in rows], dtype=np.float64)
    sizes = np.array([r[1] for r in rows], dtype=np.float64)
    recovered = np.array([r[3] for r in rows], dtype=np.float64)
    exact = np.array([r[4] for r in rows], dtype=np.float64)
    iters = np.array([r[6] for r in rows], dtype=np.float64)
    stalled = sum(1 for r in rows if r[7] == _TERMINATION_CODE[STALLED])
    return CellSummary(
        algorithm=entry.algorithm,
        params=entry.params,
        m=m,
        snr_db=snr,
        trials=len(rows),
        nrmse_mean=float(nrm.mean()),
        nrmse_std=float(nrm.std()),  # population std; well defined for trials = 1
        support_size_mean=float(sizes.mean()),
        support_recovered_rate=float(recovered.mean()),
        exact_support_rate=float(exact.mean()),
        iterations_mean=float(iters.mean()),
        stalled_count=int(stalled),
    )


def run_experiment(
    config: ExperimentConfig,
    jobs: int = 1,
    retain_trials: bool = False,
    progress=None,
    collector: list | None = None,
) -> ExperimentResult:
    """Execute the full sweep and aggregate per-cell summaries.

    ``jobs > 1`` fans fixed-size trial chunks out to worker processes; the
    chunking is independent of ``jobs`` and results are reassembled in trial
    order, so output is identical to a serial run.  ``collector``, when
    given, receives each CellSummary as soon as its cell completes (useful
    for flushing partial results).  ``progress`` is called as
    ``progress(m, snr_db, n_algorithms)`` per completed instance cell.
    """
    cells = [(m, snr) for m in config.m_list for snr in config.snr_cells]
    units = []
    for m, snr in cells:
        start = 0
        while start < config.trials:
            count = min(CHUNK_TRIALS, config.trials - start)
            units.append((config, m, snr, start, count))
            start += count

    executor = None
    try:
        if jobs > 1:
            executor = ProcessPoolExecutor(max_workers=jobs)
            results_iter = executor.map(_chunk_worker, units, chunksize=1)
        else:
            results_iter = map(_chunk_worker, units)

        summaries: list[CellSummary] = []
        records: list[TrialRecord] = []
        for m, snr in cells:
            per_alg: list[list[tuple]] = [[] for _ in config.algorithms]
            trials_done = 0
            while trials_done < config.trials:
                chunk = next(results_iter)
                for row in chunk:
                    for ai, packed in enumerate(row):
                        per_alg[ai].append(packed)
                trials_done += len(chunk)
            for ai, entry in enumerate(config.algorithms):
                summary = _aggregate(entry, m, snr, per_alg[ai])
                summaries.append(summary)
                if collector is not None:
                    collector.append(summary)
                if retain_trials:
                    records.extend(
                        TrialRecord(entry.algorithm, entry.params, m, snr, t, _unpack(packed))
                        for t, packed in enumerate(per_alg[ai])
                    )
            if progress is not None:
                progress(m, snr, len(config.algorithms))
    finally:
        if executor is not None:
            executor.shutdown()

    return ExperimentResult(
        summaries=tuple(summaries),
        trial_records=tuple(records) if retain_trials else None,
    )


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def _fmt_snr(snr: float | None) -> str:
    return "inf" if snr is None else _fmt(snr)


def _fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def write_csv(summaries, path: str) -> None:
    """Summary CSV: fixed column set, 9 significant digits, LF line endings."""
    lines = [CSV_COLUMNS]
    for s in summaries:
        lines.append(
            ",".join(
                (
                    s.algorithm,
                    s.params,
                    str(s.m),
                    _fmt_snr(s.snr_db),
                    str(s.trials),
                    _fmt(s.nrmse_mean),
                    _fmt(s.nrmse_std),
                    _fmt(s.support_size_mean),
                    _fmt(s.support_recovered_rate),
                    _fmt(s.exact_support_rate),
                    _fmt(s.iterations_mean),
                    str(s.stalled_count),
                )
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_trials_csv(records, path: str) -> None:
    """Per-trial CSV for retained records."""
    lines = [TRIALS_CSV_COLUMNS]
    for r in records:
        tm = r.metrics
        lines.append(
            ",".join(
                (
                    r.algorithm,
                    r.params,
                    str(r.m),
                    _fmt_snr(r.snr_db),
                    str(r.trial),
                    _fmt(tm.nrmse),
                    str(tm.support_size),
                    str(tm.effective_support_size),
                    _fmt_bool(tm.support_recovered),
                    _fmt_bool(tm.exact_support),
                    _fmt(tm.residual_final),
                    str(tm.iterations),
                    tm.termination,
                )
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_manifest(config: ExperimentConfig, path: str, version: str) -> None:
    """Record artifact version, seed, and a hash of the resolved config."""
    digest = sha256(config.canonical_text().encode("utf-8")).hexdigest()
    lines = [
        f"artifact = pursuitlab {version}",
        f"master_seed = {config.master_seed}",
        f"config_sha256 = {digest}",
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def output_paths(config: ExperimentConfig, out_dir: str | None = None) -> dict:
    """Canonical output file locations for a run."""
    base = out_dir if out_dir is not None else config.output_dir
    return {
        "summary": os.path.join(base, "summary.csv"),
        "trials": os.path.join(base, "trials.csv"),
        "manifest": os.path.join(base, "manifest.txt"),
        "plot_prefix": os.path.join(base, "fig_"),
    }
