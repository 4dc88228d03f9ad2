"""File ingestion, JSON reports and the ``lambda-at`` command line."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .builders import (
    CubicalComplex,
    SimplicialComplex,
    cubical_chain_complex,
    cubical_from_voxels,
    simplicial_chain_complex,
    simplicial_from_facets,
)
from .core import Chain, ChainComplex
from .homology import HomologyConsistencyError, HomologyReport, compute_integer_homology
from .oracle import DEFAULT_CELL_CAP, OracleScopeError, homology_via_snf

log = logging.getLogger("lambda_at")

FORMATS = ("simplicial", "voxel3d")
EXIT_OK, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2


class InputFormatError(ValueError):
    """Malformed input file."""


@dataclass(frozen=True)
class RunConfig:
    input_path: str
    format: str
    preprocess: bool = True
    emit_cycles: bool = False
    cross_check: bool = False
    oracle_cell_cap: int = DEFAULT_CELL_CAP
    output_path: str | None = None

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}; expected one of {FORMATS}")
        if self.oracle_cell_cap <= 0:
            raise ValueError("oracle_cell_cap must be positive")


def _content_lines(path) -> list[tuple[int, list[str]]]:
    out = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


def _ints(tokens: list[str], path, lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InputFormatError(f"{path}:{lineno}: non-integer token in {' '.join(tokens)!r}") from None


def parse_simplicial(path) -> SimplicialComplex:
    """One simplex per line as vertex ids; '#' starts a comment."""
    facets = []
    for lineno, tokens in _content_lines(path):
        verts = _ints(tokens, path, lineno)
        if any(v < 0 for v in verts):
            raise InputFormatError(f"{path}:{lineno}: negative vertex id")
        if len(set(verts)) != len(verts):
            raise InputFormatError(f"{path}:{lineno}: duplicate vertex in {verts}")
        facets.append(verts)
    if not facets:
        raise InputFormatError(f"{path}: no simplices")
    return simplicial_from_facets(facets)


def parse_voxel3d(path) -> CubicalComplex:
    """Header ``dims X Y Z`` then one ``x y z`` line per black voxel.

    A file with no content at all (only blanks or comments) is the empty image.
    """
    lines = _content_lines(path)
    if not lines:
        return CubicalComplex(())
    lineno, head = lines[0]
    if head[0] != "dims" or len(head) != 4:
        raise InputFormatError(f"{path}:{lineno}: expected header 'dims X Y Z'")
    dims = _ints(head[1:], path, lineno)
    if any(d < 0 for d in dims):
        raise InputFormatError(f"{path}:{lineno}: negative image size")
    black = []
    for lineno, tokens in lines[1:]:
        if len(tokens) != 3:
            raise InputFormatError(f"{path}:{lineno}: expected 'x y z', got {' '.join(tokens)!r}")
        v = _ints(tokens, path, lineno)
        if not all(0 <= c < d for c, d in zip(v, dims)):
            raise InputFormatError(f"{path}:{lineno}: voxel {tuple(v)} outside image {tuple(dims)}")
        black.append(v)
    return cubical_from_voxels(dims, black)


def load_complex(path, fmt: str) -> ChainComplex:
    if fmt == "simplicial":
        return simplicial_chain_complex(parse_simplicial(path))
    if fmt == "voxel3d":
        return cubical_chain_complex(parse_voxel3d(path))
    raise ValueError(f"unknown format {fmt!r}")


def _cycle_json(cc: ChainComplex, chain: Chain) -> list[dict[str, str]]:
    return [{"label": cc.label(chain.dim, i), "coeff": str(c)} for i, c in chain.items()]


def cross_check(cc: ChainComplex, report: HomologyReport, cap: int | None) -> dict[str, Any]:
    """Compare ``report`` with the SNF oracle; raises OracleScopeError above ``cap``."""
    snf = homology_via_snf(cc, cap)
    match = snf.betti == report.betti
    # each oracle prime must divide lambda, and per-prime counts must agree
    for p in snf.torsion_primes():
        if p not in report.torsion:
            match = False
    for p, t in report.torsion.items():
        if t.T != [snf.torsion_count(q, p) for q in range(len(snf.betti))]:
            match = False
    return {
        "match": match,
        "oracle_betti": snf.betti,
        "oracle_factors": {str(q): fs for q, fs in enumerate(snf.factors) if fs},
    }


def report_json(cc: ChainComplex, report: HomologyReport, cycles: bool = False) -> dict[str, Any]:
    out: dict[str, Any] = {
        "betti": report.betti,
        "lambda": str(report.lam),
        "torsion": {str(p): {"beta_p": t.beta_p, "T": t.T} for p, t in sorted(report.torsion.items())},
        "euler": report.euler,
    }
    if cycles:
        out["cycles"] = {
            "Z": [_cycle_json(cc, z) for z in report.cycles_Z],
            "mod_p": {str(p): [_cycle_json(cc, z) for z in zs] for p, zs in sorted(report.cycles_mod_p.items())},
        }
    return out


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def run(config: RunConfig) -> tuple[int, dict[str, Any] | None]:
    """Run the pipeline; returns the exit code and the report (None on input errors).

    The report is also written to ``config.output_path`` or standard output.
    """
    try:
        cc = load_complex(config.input_path, config.format)
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT, None

    try:
        report = compute_integer_homology(cc, use_preprocess=config.preprocess)
    except HomologyConsistencyError as exc:
        log.error("internal consistency failure: %s", exc)
        return EXIT_MISMATCH, None
    payload = report_json(cc, report, cycles=config.emit_cycles)

    code = EXIT_OK
    if config.cross_check:
        try:
            payload["cross_check"] = cross_check(cc, report, config.oracle_cell_cap)
        except OracleScopeError as exc:
            log.warning("cross-check skipped: %s", exc)
            payload["cross_check"] = None
        else:
            if not payload["cross_check"]["match"]:
                code = EXIT_MISMATCH

    text = dumps(payload)
    if config.output_path:
        Path(config.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code, payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lambda-at", description="Integer homology via lambda-AT-models.")
    sub = parser.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", help="compute homology of a simplicial complex or voxel image")
    c.add_argument("--input", required=True, help="input file")
    c.add_argument("--format", required=True, choices=FORMATS)
    c.add_argument("--no-preprocess", action="store_true", help="skip the unit-pivot reduction")
    c.add_argument("--cycles", action="store_true", help="emit representative cycles")
    c.add_argument("--cross-check", action="store_true", help="compare against the SNF oracle")
    c.add_argument("--oracle-cap", type=int, default=DEFAULT_CELL_CAP, metavar="N",
                   help=f"skip the cross-check above N cells (default {DEFAULT_CELL_CAP})")
    c.add_argument("--output", help="write JSON here instead of stdout")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="lambda-at: %(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.oracle_cap <= 0:
        log.error("--oracle-cap must be positive")
        return EXIT_INPUT
    config = RunConfig(
        input_path=args.input,
        format=args.format,
        preprocess=not args.no_preprocess,
        emit_cycles=args.cycles,
        cross_check=args.cross_check,
        oracle_cell_cap=args.oracle_cap,
        output_path=args.output,
    )
    code, _ = run(config)
    return code


if __name__ == "__main__":
    sys.exit(main())
