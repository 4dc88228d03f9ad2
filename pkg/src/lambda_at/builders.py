"""Chain complexes of simplicial complexes and of binary voxel images."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

from .core import ChainComplex

Interval = tuple[int, int]
Cube = tuple[Interval, ...]


@dataclass(frozen=True)
class SimplicialComplex:
    """Face-closed simplicial complex; ``simplices[q]`` holds sorted vertex tuples."""

    simplices: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    @property
    def num_simplices(self) -> int:
        return sum(len(s) for s in self.simplices)

    def counts(self) -> list[int]:
        return [len(s) for s in self.simplices]


def simplicial_from_facets(facets: Iterable[Sequence[int]]) -> SimplicialComplex:
    """Face closure of ``facets``; every simplex stored as an ascending tuple."""
    layers: dict[int, set[tuple[int, ...]]] = {}
    for facet in facets:
        verts = [int(v) for v in facet]
        if not verts:
            continue
        if any(v < 0 for v in verts):
            raise ValueError(f"negative vertex id in facet {list(facet)}")
        if len(set(verts)) != len(verts):
            raise ValueError(f"duplicate vertex in facet {list(facet)}")
        verts.sort()
        for k in range(1, len(verts) + 1):
            layers.setdefault(k - 1, set()).update(combinations(verts, k))
    top = max(layers) if layers else -1
    return SimplicialComplex(tuple(tuple(sorted(layers[q])) for q in range(top + 1)))


def simplicial_chain_complex(sc: SimplicialComplex) -> ChainComplex:
    """Differential d(v0..vq) = sum_i (-1)^i v0..^vi..vq."""
    index = [{s: i for i, s in enumerate(layer)} for layer in sc.simplices]
    boundaries = []
    for q, layer in enumerate(sc.simplices):
        cols = []
        for s in layer:
            col = {}
            if q > 0:
                lower = index[q - 1]
                for i in range(q + 1):
                    col[lower[s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
            cols.append(col)
        boundaries.append(cols)
    labels = [[" ".join(map(str, s)) for s in layer] for layer in sc.simplices]
    return ChainComplex(boundaries, labels)


@dataclass(frozen=True)
class CubicalComplex:
    """Face-closed set of elementary cubes, grouped by dimension.

    A cube is a tuple of intervals ``(a, b)`` with ``b in (a, a + 1)``; its
    dimension is the number of nondegenerate intervals.
    """

    cells: tuple[tuple[Cube, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def counts(self) -> list[int]:
        return [len(c) for c in self.cells]


def cube_dim(cube: Cube) -> int:
    return sum(b - a for a, b in cube)


def cube_label(cube: Cube) -> str:
    return "x".join(f"[{a},{b}]" for a, b in cube)


def cubical_from_voxels(dims: Sequence[int], black: Iterable[Sequence[int]]) -> CubicalComplex:
    """Closed unit cubes of the black voxels of a 3D (or 2D, as Z=1) image."""
    dims = tuple(int(d) for d in dims)
    if len(dims) == 2:
        dims = dims + (1,)
    if len(dims) != 3 or any(d < 0 for d in dims):
        raise ValueError(f"expected three non-negative image dimensions, got {dims}")
    cells: set[Cube] = set()
    for vox in black:
        v = tuple(int(c) for c in vox)
        if len(v) == 2:
            v = v + (0,)
        if len(v) != 3 or not all(0 <= c < d for c, d in zip(v, dims)):
            raise ValueError(f"voxel {tuple(vox)} outside image of size {dims}")
        choices = [((c, c), (c + 1, c + 1), (c, c + 1)) for c in v]
        cells.update(product(*choices))
    return _group_cubes(cells)


def _group_cubes(cells: set[Cube]) -> CubicalComplex:
    if not cells:
        return CubicalComplex(())
    layers: dict[int, list[Cube]] = {}
    for c in cells:
        layers.setdefault(cube_dim(c), []).append(c)
    top = max(layers)
    return CubicalComplex(tuple(tuple(sorted(layers.get(q, []))) for q in range(top + 1)))


def cube_facets(cube: Cube) -> list[tuple[int, Cube]]:
    """Signed facets: collapsing the i-th nondegenerate interval (1-based)
    gives ``(-1)^(i-1) * (upper face - lower face)``."""
    out = []
    i = 0
    for axis, (a, b) in enumerate(cube):
        if a == b:
            continue
        sign = -1 if i % 2 else 1
        i += 1
        upper = cube[:axis] + ((b, b),) + cube[axis + 1:]
        lower = cube[:axis] + ((a, a),) + cube[axis + 1:]
        out.append((sign, upper))
        out.append((-sign, lower))
    return out


def cubical_chain_complex(cx: CubicalComplex) -> ChainComplex:
    index = [{c: i for i, c in enumerate(layer)} for layer in cx.cells]
    boundaries = []
    for q, layer in enumerate(cx.cells):
        cols = []
        for cube in layer:
            col = {}
            if q > 0:
                lower = index[q - 1]
                for sign, face in cube_facets(cube):
                    if face not in lower:
                        raise ValueError(f"cubical complex not closed: {cube_label(face)} missing")
                    col[lower[face]] = sign
            cols.append(col)
        boundaries.append(cols)
    labels = [[cube_label(c) for c in layer] for layer in cx.cells]
    return ChainComplex(boundaries, labels)


def complex_from_facets(facets: Iterable[Sequence[int]]) -> ChainComplex:
    return simplicial_chain_complex(simplicial_from_facets(facets))


def complex_from_voxels(dims: Sequence[int], black: Iterable[Sequence[int]]) -> ChainComplex:
    return cubical_chain_complex(cubical_from_voxels(dims, black))
