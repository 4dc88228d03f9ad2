"""Frozen expected values and seeded random inputs shared by the test modules."""

from __future__ import annotations

import random
from pathlib import Path

from lambda_at import complex_from_facets, complex_from_voxels
from lambda_at.fixtures import (
    TWO_TRIANGLES_FACETS,
    circle_facets,
    klein_bottle_facets,
    porous_voxels,
    rp2_facets,
    torus_facets,
)

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "fixtures"

# Pinned by the SNF oracle (and by hand where the topology is classical).
# name -> (betti, {dim: prime-power invariant factors})
EXPECTED = {
    "klein": ((1, 1, 0), {1: [2]}),
    "torus": ((1, 2, 1), {}),
    "rp2": ((1, 0, 0), {1: [2]}),
    "two_triangles": ((1, 0, 0), {}),
    "circle": ((1, 1), {}),
    "single": ((1, 0, 0, 0), {}),
    "block2": ((1, 0, 0, 0), {}),
    "ring": ((1, 1, 0, 0), {}),
    "porous": ((2, 39, 2, 0), {}),
}

SIMPLICIAL = {
    "klein": klein_bottle_facets,
    "torus": torus_facets,
    "rp2": rp2_facets,
    "two_triangles": lambda: TWO_TRIANGLES_FACETS,
    "circle": circle_facets,
}


def _block2():
    return (2, 2, 2), [(x, y, z) for x in range(2) for y in range(2) for z in range(2)]


VOXEL = {
    "single": lambda: ((1, 1, 1), [(0, 0, 0)]),
    "block2": _block2,
    "ring": lambda: ((3, 3, 1), [(x, y, 0) for x in range(3) for y in range(3) if (x, y) != (1, 1)]),
    "porous": porous_voxels,
}


def fixture_complex(name: str):
    if name in SIMPLICIAL:
        return complex_from_facets(SIMPLICIAL[name]())
    dims, black = VOXEL[name]()
    return complex_from_voxels(dims, black)


def fixture_file(name: str) -> tuple[Path, str]:
    if name in SIMPLICIAL:
        return FIXTURE_DIR / f"{name}.txt", "simplicial"
    return FIXTURE_DIR / f"{name}.vox", "voxel3d"


def random_facets(rng: random.Random, max_vertices: int = 8) -> list[list[int]]:
    """Random facet list on at most ``max_vertices`` vertices.

    Most draws with six or more vertices start from a relabelled copy of the
    six-vertex projective plane (sometimes with triangles removed) so that
    2-torsion actually shows up in sweeps.
    """
    nv = rng.randint(1, max_vertices)
    facets: list[list[int]] = []
    if nv >= 6 and rng.random() < 0.6:
        perm = rng.sample(range(nv), nv)
        tri = rp2_facets()
        keep = len(tri) if rng.random() < 0.75 else rng.randint(len(tri) - 2, len(tri) - 1)
        for f in rng.sample(tri, keep):
            facets.append([perm[v] for v in f])
        for _ in range(rng.randint(0, 2)):
            facets.append(rng.sample(range(nv), rng.randint(1, 2)))
        return facets
    for _ in range(rng.randint(1, 7)):
        k = rng.randint(1, min(4, nv))
        facets.append(rng.sample(range(nv), k))
    return facets


def random_voxels(rng: random.Random, max_side: int = 5):
    dims = tuple(rng.randint(1, max_side) for _ in range(3))
    fill = rng.uniform(0.2, 0.8)
    black = [(x, y, z) for x in range(dims[0]) for y in range(dims[1]) for z in range(dims[2])
             if rng.random() < fill]
    return dims, black


def random_simplicial_complexes(n: int, seed: int):
    rng = random.Random(seed)
    return [complex_from_facets(random_facets(rng)) for _ in range(n)]


def random_voxel_complexes(n: int, seed: int):
    rng = random.Random(seed)
    return [complex_from_voxels(*random_voxels(rng)) for _ in range(n)]
