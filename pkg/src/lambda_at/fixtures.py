"""Standard small triangulations and a seeded synthetic porous image."""

from __future__ import annotations

import random

TWO_TRIANGLES_FACETS = [[1, 2, 4], [2, 3, 4]]


def torus_facets() -> list[list[int]]:
    """Seven-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    out = []
    for i in range(7):
        out.append(sorted([i, (i + 1) % 7, (i + 3) % 7]))
        out.append(sorted([i, (i + 2) % 7, (i + 3) % 7]))
    return out


def _grid_surface(twist: bool) -> list[list[int]]:
    # 3x3 grid on the unit square; right edge glued straight to the left,
    # top edge glued to the bottom either straight (torus) or reversed (Klein).
    def vid(i: int, j: int) -> int:
        if j == 3:
            j = 0
            if twist:
                i = (3 - i) % 3
        return 3 * (i % 3) + j

    out = []
    for i in range(3):
        for j in range(3):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i, j + 1), vid(i + 1, j + 1)
            out.append(sorted([a, b, d]))
            out.append(sorted([a, c, d]))
    return out


def klein_bottle_facets() -> list[list[int]]:
    """Nine-vertex, 18-triangle Klein bottle on a twisted 3x3 grid."""
    return _grid_surface(twist=True)


def rp2_facets() -> list[list[int]]:
    """Six-vertex projective plane (hemi-icosahedron)."""
    return [
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
        [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
    ]


def circle_facets() -> list[list[int]]:
    return [[0, 1], [1, 2], [0, 2]]


PORES_SEED = 20080917


def porous_voxels(size: int = 8, seed: int = PORES_SEED, fill: float = 0.45) -> tuple[tuple[int, int, int], set]:
    """A block of ``size**3`` voxels, each kept with probability ``fill``."""
    rng = random.Random(seed)
    black = set()
    for x in range(size):
        for y in range(size):
            for z in range(size):
                if rng.random() < fill:
                    black.add((x, y, z))
    return (size, size, size), black
