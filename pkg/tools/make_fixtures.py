"""Regenerate the bundled input files under fixtures/."""

from __future__ import annotations

import sys
from pathlib import Path

from lambda_at.fixtures import (
    TWO_TRIANGLES_FACETS,
    PORES_SEED,
    circle_facets,
    klein_bottle_facets,
    porous_voxels,
    rp2_facets,
    torus_facets,
)


def write_simplicial(path: Path, title: str, facets) -> None:
    lines = [f"# {title}"] + [" ".join(map(str, f)) for f in facets]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_voxels(path: Path, title: str, dims, black) -> None:
    lines = [f"# {title}", "dims " + " ".join(map(str, dims))]
    lines += [" ".join(map(str, v)) for v in sorted(black)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def main(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    write_simplicial(out / "klein.txt", "Klein bottle, 9 vertices, 18 triangles", klein_bottle_facets())
    write_simplicial(out / "torus.txt", "torus, 7 vertices, 14 triangles", torus_facets())
    write_simplicial(out / "rp2.txt", "projective plane, 6 vertices, 10 triangles", rp2_facets())
    write_simplicial(out / "two_triangles.txt", "two triangles sharing an edge", TWO_TRIANGLES_FACETS)
    write_simplicial(out / "circle.txt", "hollow triangle", circle_facets())
    write_voxels(out / "single.vox", "one voxel", (1, 1, 1), [(0, 0, 0)])
    write_voxels(out / "block2.vox", "full 2x2x2 block", (2, 2, 2),
                 [(x, y, z) for x in range(2) for y in range(2) for z in range(2)])
    ring = [(x, y, 0) for x in range(3) for y in range(3) if (x, y) != (1, 1)]
    write_voxels(out / "ring.vox", "3x3 square ring", (3, 3, 1), ring)
    dims, black = porous_voxels()
    write_voxels(out / "porous.vox", f"synthetic porous block, seed {PORES_SEED}, fill 0.45", dims, black)
    (out / "empty.vox").write_text("", encoding="utf-8")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "fixtures")
