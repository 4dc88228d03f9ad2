import pytest

from lambda_at import (
    Chain,
    complex_from_facets,
    cubical_chain_complex,
    cubical_from_voxels,
    homology_via_snf,
    simplicial_chain_complex,
    simplicial_from_facets,
    verify_complex,
)
from lambda_at.builders import cube_facets, cube_label
from lambda_at.fixtures import TWO_TRIANGLES_FACETS, torus_facets


class TestSimplicial:
    def test_two_triangles_complex(self):
        extra = [[1, 2], [2, 3], [3, 4], [2, 4], [1, 4], [1], [2], [3], [4]]
        sc = simplicial_from_facets(TWO_TRIANGLES_FACETS + extra)
        assert sc.counts() == [4, 5, 2]
        assert sc.num_simplices == 11
        assert sc == simplicial_from_facets(TWO_TRIANGLES_FACETS)

    def test_single_vertex(self):
        sc = simplicial_from_facets([[7]])
        assert sc.simplices == (((7,),),)

    def test_triangle_closure(self):
        sc = simplicial_from_facets([[2, 0, 1]])
        assert sc.counts() == [3, 3, 1]
        assert sc.simplices[2] == ((0, 1, 2),)

    def test_duplicate_vertex(self):
        with pytest.raises(ValueError, match="duplicate"):
            simplicial_from_facets([[1, 1, 2]])

    def test_negative_vertex(self):
        with pytest.raises(ValueError):
            simplicial_from_facets([[-1, 2]])

    def test_empty(self):
        cc = simplicial_chain_complex(simplicial_from_facets([]))
        assert cc.dimension == -1


class TestSimplicialBoundary:
    def test_triangle(self):
        cc = complex_from_facets([[0, 1, 2]])
        labels = {cc.label(1, i): c for i, c in cc.boundary_raw(2)[0].items()}
        assert labels == {"1 2": 1, "0 2": -1, "0 1": 1}

    def test_vertex(self):
        cc = complex_from_facets([[0, 1]])
        assert cc.boundary_raw(0) == [{}, {}]

    def test_torus_fundamental_cycle(self):
        cc = complex_from_facets(torus_facets())
        # orient every triangle so that the alternating sum closes up
        sc = simplicial_from_facets(torus_facets())
        assert sc.counts() == [7, 21, 14]
        d2 = cc.boundary_raw(2)
        # signs from a coherent orientation; solve by propagation
        signs = {0: 1}
        edge_to_tris: dict[int, list[int]] = {}
        for t, col in enumerate(d2):
            for e in col:
                edge_to_tris.setdefault(e, []).append(t)
        stack = [0]
        while stack:
            t = stack.pop()
            for e, c in d2[t].items():
                for u in edge_to_tris[e]:
                    if u not in signs:
                        signs[u] = -signs[t] * c * d2[u][e]
                        stack.append(u)
        tau = Chain(2, signs)
        assert len(signs) == 14
        assert cc.d(tau) == 0


class TestCubical:
    def test_one_voxel_counts(self):
        assert cubical_from_voxels((1, 1, 1), [(0, 0, 0)]).counts() == [8, 12, 6, 1]

    def test_two_voxels_counts(self):
        assert cubical_from_voxels((2, 1, 1), [(0, 0, 0), (1, 0, 0)]).counts() == [12, 20, 11, 2]

    def test_empty(self):
        assert cubical_from_voxels((3, 3, 3), []).counts() == []

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            cubical_from_voxels((2, 2, 2), [(2, 0, 0)])

    def test_2d_image(self):
        # read as a one-voxel-thick slab; the diagonal pair shares one edge
        cx = cubical_from_voxels((2, 2), [(0, 0), (1, 1)])
        assert cx.counts() == [14, 23, 12, 2]
        assert homology_via_snf(cubical_chain_complex(cx)).betti == [1, 0, 0, 0]

    def test_edge_boundary(self):
        edge = ((0, 1), (0, 0))
        assert cube_facets(edge) == [(1, ((1, 1), (0, 0))), (-1, ((0, 0), (0, 0)))]

    def test_square_dd(self):
        sq = ((0, 1), (0, 1), (0, 0))
        total: dict = {}
        for s, face in cube_facets(sq):
            for t, v in cube_facets(face):
                total[v] = total.get(v, 0) + s * t
        assert all(c == 0 for c in total.values())

    def test_single_voxel_homology(self):
        cc = cubical_chain_complex(cubical_from_voxels((1, 1, 1), [(0, 0, 0)]))
        assert cc.num_cells == 27 and verify_complex(cc)
        assert homology_via_snf(cc).betti == [1, 0, 0, 0]

    def test_labels(self):
        assert cube_label(((0, 1), (2, 2), (3, 4))) == "[0,1]x[2,2]x[3,4]"
