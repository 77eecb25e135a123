"""Command-line entry points for the reconciliation pipeline.

Five subcommands cover the whole workflow: gen-matrix builds the PEG
mother matrix, girth-profile inspects prefix quality, characterize builds
the distillation table, reconcile runs one syndrome round between key
files, and simulate-link sweeps the QKD link model against a table.

Exit codes: 0 success, 1 reconciliation failure, 2 bad arguments,
3 I/O or parse error.  Every file-producing command also writes
``<out>.manifest.json`` with the parameters needed to reproduce the file.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys

import numpy as np

from . import __version__
from .adapt import load_table_csv, save_table_csv
from .charact import build_table, matrix_digest, run_manifest, write_manifest
from .codec import (
    DecoderConfig,
    decode,
    encode_syndrome,
    read_key_blocks,
    write_key_blocks,
)
from .qkdsim import LinkParams, save_report_csv, simulate_link
from .tanner import (
    AlistParseError,
    DegreeProfile,
    MatrixPrefix,
    girth_profile,
    load_alist,
    peg_construct,
    save_alist,
)

USAGE_ERROR = 2
IO_ERROR = 3


class _ParseFailure(Exception):
    """Input file was readable but malformed (exit code 3)."""


def _parsing(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ValueError, TypeError) as exc:
        raise _ParseFailure(str(exc)) from None


def _file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _parse_range(spec: str, name: str) -> list[float]:
    try:
        lo, hi, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise ValueError(f"--{name} must look like from:to:step") from None
    if step <= 0 or hi < lo:
        raise ValueError(f"--{name}: need step > 0 and to >= from")
    n = int(round((hi - lo) / step))
    vals = [lo + k * step for k in range(n + 1)]
    return [v for v in vals if v <= hi + 1e-12]


def _parse_profile(spec: str, num_vars: int) -> DegreeProfile:
    if spec == "interleaved45":
        return DegreeProfile.interleaved_4_5(num_vars)
    if spec.startswith("uniform:"):
        return DegreeProfile.uniform(num_vars, int(spec.split(":", 1)[1]))
    raise ValueError("--profile must be 'interleaved45' or 'uniform:<degree>'")


def _cmd_gen_matrix(args) -> int:
    profile = _parse_profile(args.profile, args.vars)
    matrix = peg_construct(args.checks, args.vars, profile, args.seed)
    save_alist(matrix, args.out)
    write_manifest(
        {
            "command": "gen-matrix",
            "version": __version__,
            "checks": args.checks,
            "vars": args.vars,
            "profile": args.profile,
            "seed": args.seed,
            "matrix_sha256": matrix_digest(matrix),
            "out_sha256": _file_sha256(args.out),
        },
        args.out + ".manifest.json",
    )
    print(f"wrote {args.out}: {matrix.num_checks}x{matrix.num_vars}, "
          f"{matrix.num_edges} edges")
    return 0


def _cmd_girth_profile(args) -> int:
    matrix = _parsing(load_alist, args.matrix)
    widths = [int(w) for w in args.widths.split(",")]
    rows = girth_profile(matrix, widths)
    lines = ["width,girth"] + [
        f"{w},{'acyclic' if g == float('inf') else int(g)}" for w, g in rows
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_characterize(args) -> int:
    matrix = _parsing(load_alist, args.matrix)
    widths = [int(w) for w in args.widths.split(",")]
    grid = _parse_range(args.errors, "errors")
    config = DecoderConfig(
        crossover_prior=grid[0], max_iterations=args.max_iterations
    )
    table = build_table(
        matrix,
        widths,
        grid,
        frames_per_point=args.frames,
        seed=args.seed,
        config=config,
        threads=args.threads,
    )
    save_table_csv(table, args.out)
    man = run_manifest(
        "characterize",
        matrix,
        widths,
        grid,
        args.frames,
        args.seed,
        config,
        extra={
            "matrix_file": args.matrix,
            "matrix_file_sha256": _file_sha256(args.matrix),
            "out_sha256": _file_sha256(args.out),
            "undetected_total": int(table.undetected.sum()),
        },
    )
    write_manifest(man, args.out + ".manifest.json")
    print(f"wrote {args.out}: {len(grid)} error rates x {len(widths)} widths")
    return 0


def _cmd_reconcile(args) -> int:
    matrix = _parsing(load_alist, args.matrix)
    prefix = MatrixPrefix(matrix, args.width)
    alice = _parsing(read_key_blocks, args.alice, width=args.width)
    bob = _parsing(read_key_blocks, args.bob, width=args.width)
    if alice.shape[0] != bob.shape[0]:
        raise ValueError(
            f"block count mismatch: alice has {alice.shape[0]}, bob {bob.shape[0]}"
        )
    config = DecoderConfig(
        crossover_prior=args.p, max_iterations=args.max_iterations
    )
    corrected = np.empty_like(bob)
    all_ok = True
    for k in range(alice.shape[0]):
        syndrome = encode_syndrome(prefix, alice[k])
        res = decode(prefix, bob[k], syndrome, config)
        corrected[k] = res.corrected_key
        flips = int(np.sum(res.corrected_key != bob[k]))
        if res.success:
            print(f"block {k}: OK ({flips} flips, {res.iterations_used} iterations)")
        else:
            all_ok = False
            print(f"block {k}: FAIL ({res.unsatisfied_checks} unsatisfied checks)")
    write_key_blocks(args.out, corrected)
    return 0 if all_ok else 1


def _cmd_simulate_link(args) -> int:
    table = _parsing(load_table_csv, args.table)
    if args.params:
        with open(args.params, "r", encoding="ascii") as fh:
            params = _parsing(lambda f: LinkParams(**json.load(f)), fh)
    else:
        params = LinkParams()
    overrides = {
        name: getattr(args, name)
        for name in (
            "attenuation_db_per_km",
            "pulse_rate_hz",
            "detector_efficiency",
            "dark_count_prob",
            "visibility",
            "mean_photon_number",
            "sifting_factor",
        )
        if getattr(args, name) is not None
    }
    if overrides:
        params = dataclasses.replace(params, **overrides)
    distances = _parse_range(args.distances, "distances")
    report = simulate_link(params, table, distances)
    save_report_csv(report, args.out)
    write_manifest(
        {
            "command": "simulate-link",
            "version": __version__,
            "table_file": args.table,
            "table_sha256": _file_sha256(args.table),
            "params": dataclasses.asdict(params),
            "distances": args.distances,
            "out_sha256": _file_sha256(args.out),
        },
        args.out + ".manifest.json",
    )
    print(f"wrote {args.out}: {len(report.rows)} distances")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="raldpc",
        description="Rate-adaptive LDPC reconciliation toolkit",
    )
    ap.add_argument("--version", action="version", version=f"raldpc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-matrix", help="build a PEG mother matrix (alist)")
    g.add_argument("--checks", type=int, default=1024)
    g.add_argument("--vars", type=int, default=5120)
    g.add_argument("--profile", default="interleaved45")
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen_matrix)

    g = sub.add_parser("girth-profile", help="girth of prefix widths")
    g.add_argument("--matrix", required=True)
    g.add_argument("--widths", required=True, help="comma-separated widths")
    g.add_argument("--out")
    g.set_defaults(func=_cmd_girth_profile)

    g = sub.add_parser("characterize", help="Monte-Carlo distillation table")
    g.add_argument("--matrix", required=True)
    g.add_argument("--widths", default="5120,4096,3072,2048")
    g.add_argument("--errors", default="0.010:0.030:0.001", help="from:to:step")
    g.add_argument("--frames", type=int, default=1000)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--max-iterations", type=int, default=60)
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_characterize)

    g = sub.add_parser("reconcile", help="one-way syndrome reconciliation")
    g.add_argument("--matrix", required=True)
    g.add_argument("--width", type=int, required=True)
    g.add_argument("--alice", required=True, help="reference key file")
    g.add_argument("--bob", required=True, help="noisy key file")
    g.add_argument("--p", type=float, required=True, help="crossover prior")
    g.add_argument("--max-iterations", type=int, default=60)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_reconcile)

    g = sub.add_parser("simulate-link", help="sweep the QKD link model")
    g.add_argument("--table", required=True)
    g.add_argument("--params", help="JSON file of link parameters")
    g.add_argument("--attenuation-db-per-km", type=float, dest="attenuation_db_per_km")
    g.add_argument("--pulse-rate-hz", type=float, dest="pulse_rate_hz")
    g.add_argument("--detector-efficiency", type=float, dest="detector_efficiency")
    g.add_argument("--dark-count-prob", type=float, dest="dark_count_prob")
    g.add_argument("--visibility", type=float)
    g.add_argument("--mean-photon-number", type=float, dest="mean_photon_number")
    g.add_argument("--sifting-factor", type=float, dest="sifting_factor")
    g.add_argument("--distances", default="0:110:5", help="from:to:step in km")
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_simulate_link)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, AlistParseError, _ParseFailure, json.JSONDecodeError) as exc:
        print(f"raldpc: {exc}", file=sys.stderr)
        return IO_ERROR
    except (ValueError, KeyError) as exc:
        print(f"raldpc: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
