"""Monte-Carlo frame-error-rate estimation and distillation-table building.

Every cell of the table runs the same experiment: draw a random key of the
prefix width, send its syndrome, flip each bit of the key independently
with the cell's crossover probability, decode, and count a failure when
the decoder either gives up or silently converges to the wrong block.
Undetected wrong-block convergences are also tallied on their own since
the one-way protocol has no verification hash to catch them.

Cells are seeded independently from (master seed, width, rate index), so a
table is reproducible cell by cell and its cells can be computed in any
order or in parallel without changing the result.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .adapt import DistillationTable, distillation_efficiency, effective_rate
from .codec import DecoderConfig, _decode_batch, encode_syndrome_batch
from .tanner import MatrixPrefix, ParityMatrix

_Z95 = 1.959963984540054
# frames are drawn per fixed-size chunk, each chunk with its own derived
# RNG stream, so scheduling cannot change what any chunk sees
_CHUNK = 128


def wilson_interval(failures: int, frames: int, z: float = _Z95):
    """Wilson score interval for a binomial proportion."""
    if frames <= 0:
        raise ValueError("frames must be positive")
    phat = failures / frames
    z2 = z * z
    denom = 1.0 + z2 / frames
    center = (phat + z2 / (2 * frames)) / denom
    half = z * np.sqrt(phat * (1 - phat) / frames + z2 / (4 * frames * frames)) / denom
    lo = max(0.0, center - half)
    hi = min(1.0, center + half)
    # guarantee the interval brackets the point estimate despite rounding
    return min(lo, phat), max(hi, phat)


@dataclass
class FerEstimate:
    point_estimate: float
    frames_run: int
    failures: int
    ci_low: float
    ci_high: float
    undetected: int  # converged frames whose corrected key was wrong

    @property
    def interval(self):
        return self.ci_low, self.ci_high


def _run_cell(
    prefix: MatrixPrefix,
    p: float,
    num_frames: int,
    seed_entropy,
    config: DecoderConfig,
    abort_ci_low: float | None = None,
) -> FerEstimate:
    """Run up to num_frames frames; optionally stop once FER is decisively ~1."""
    cfg = replace(config, crossover_prior=p)
    width = prefix.width
    failures = 0
    undetected = 0
    done = 0
    chunk_idx = 0
    while done < num_frames:
        take = min(_CHUNK, num_frames - done)
        rng = np.random.default_rng(
            np.random.SeedSequence(tuple(seed_entropy) + (chunk_idx,))
        )
        keys = rng.integers(0, 2, size=(take, width), dtype=np.uint8)
        syndromes = encode_syndrome_batch(prefix, keys)
        flips = (rng.random((take, width)) < p).astype(np.uint8)
        noisy = keys ^ flips
        hard, ok, _, _ = _decode_batch(prefix, noisy, syndromes, cfg)
        wrong = np.any(hard != keys, axis=1)
        failures += int(np.sum(~ok | wrong))
        undetected += int(np.sum(ok & wrong))
        done += take
        chunk_idx += 1
        if abort_ci_low is not None and done < num_frames:
            lo, _ = wilson_interval(failures, done)
            if lo >= abort_ci_low:
                break
    lo, hi = wilson_interval(failures, done)
    return FerEstimate(
        point_estimate=failures / done,
        frames_run=done,
        failures=failures,
        ci_low=lo,
        ci_high=hi,
        undetected=undetected,
    )


def estimate_fer(
    prefix: MatrixPrefix,
    p: float,
    num_frames: int,
    seed: int,
    config: DecoderConfig | None = None,
) -> FerEstimate:
    """Monte-Carlo FER of a prefix over a BSC(p), deterministic given seed.

    A frame fails when decoding does not converge or converges to a block
    different from the one that was encoded.  The decoder prior is set to
    the true crossover probability p.
    """
    if not 0.0 < p < 0.5:
        raise ValueError("crossover probability must lie in (0, 0.5)")
    if num_frames < 1:
        raise ValueError("num_frames must be >= 1")
    cfg = config if config is not None else DecoderConfig(crossover_prior=p)
    return _run_cell(prefix, p, num_frames, (seed,), cfg)


# cells with Wilson ci_low at or above this are hopeless for the argmax:
# their efficiency upper bound (0.05 * rate) cannot beat any usable width
_ABORT_CI_LOW = 0.95
_ABSENT_FER = 0.99


def _cell_task(args):
    matrix, width, p, rate_idx, frames, seed, config, early_abort = args
    prefix = MatrixPrefix(matrix, width)
    est = _run_cell(
        prefix,
        p,
        frames,
        (seed, width, rate_idx),
        config,
        abort_ci_low=_ABORT_CI_LOW if early_abort else None,
    )
    return width, rate_idx, est


def build_table(
    matrix: ParityMatrix,
    widths,
    error_grid,
    frames_per_point: int,
    seed: int,
    config: DecoderConfig | None = None,
    early_abort: bool = True,
    threads: int = 1,
) -> DistillationTable:
    """Characterize the matrix into a DistillationTable.

    Cells whose FER point estimate reaches ``0.99`` are marked absent.  With
    ``early_abort`` a cell stops once its FER is decisively too high to ever
    win the per-row argmax, which saves most of the time spent beyond each
    width's error-correction capability.
    """
    widths = sorted({int(w) for w in widths}, reverse=True)
    grid = [float(e) for e in error_grid]
    if not widths or not grid:
        raise ValueError("widths and error grid must be nonempty")
    if any(not matrix.num_checks < w <= matrix.num_vars for w in widths):
        raise ValueError("widths must lie in (num_checks, num_vars]")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("error grid must be strictly increasing")
    if any(not 0.0 < e < 0.5 for e in grid):
        raise ValueError("error rates must lie in (0, 0.5)")
    cfg = config if config is not None else DecoderConfig(crossover_prior=grid[0])

    tasks = [
        (matrix, w, p, i, frames_per_point, seed, cfg, early_abort)
        for w in widths
        for i, p in enumerate(grid)
    ]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_cell_task, tasks))
    else:
        results = [_cell_task(t) for t in tasks]

    shape = (len(grid), len(widths))
    alpha = np.full(shape, np.nan)
    fer = np.full(shape, np.nan)
    lo = np.full(shape, np.nan)
    hi = np.full(shape, np.nan)
    undetected = np.zeros(shape, dtype=np.int64)
    widx = {w: j for j, w in enumerate(widths)}
    for width, i, est in results:
        j = widx[width]
        fer[i, j] = est.point_estimate
        lo[i, j] = est.ci_low
        hi[i, j] = est.ci_high
        undetected[i, j] = est.undetected
        if est.point_estimate < _ABSENT_FER:
            rate = effective_rate(matrix.num_checks, width).rate
            alpha[i, j] = distillation_efficiency(est.point_estimate, rate)

    table = DistillationTable(
        error_rates=np.asarray(grid),
        widths=np.asarray(widths),
        alpha=alpha,
        fer=fer,
        ci_low=lo,
        ci_high=hi,
        working=DistillationTable.compute_working(alpha, np.asarray(widths)),
    )
    table.undetected = undetected  # extra diagnostic, not serialized
    return table


def matrix_digest(matrix: ParityMatrix) -> str:
    """Stable content hash of a parity matrix."""
    h = hashlib.sha256()
    h.update(np.asarray([matrix.num_checks, matrix.num_vars], dtype=np.int64).tobytes())
    h.update(matrix.col_indptr.tobytes())
    h.update(matrix.col_indices.astype(np.int64).tobytes())
    return h.hexdigest()


def run_manifest(
    command: str,
    matrix: ParityMatrix,
    widths,
    error_grid,
    frames_per_point: int,
    seed: int,
    config: DecoderConfig,
    extra: dict | None = None,
) -> dict:
    """Everything needed to reproduce a characterization byte for byte."""
    man = {
        "command": command,
        "version": __version__,
        "matrix_sha256": matrix_digest(matrix),
        "matrix_shape": [matrix.num_checks, matrix.num_vars],
        "widths": [int(w) for w in widths],
        "error_grid": [float(e) for e in error_grid],
        "frames_per_point": int(frames_per_point),
        "seed": int(seed),
        "decoder": {
            "max_iterations": config.max_iterations,
            "llr_clamp": config.llr_clamp,
        },
    }
    if extra:
        man.update(extra)
    return man


def write_manifest(manifest: dict, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
