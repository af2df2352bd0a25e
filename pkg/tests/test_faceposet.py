from fractions import Fraction

import pytest

from conftest import octahedron_cycle, octahedron_embedding
from bellows.faceposet import (
    Face,
    FacePlanarityError,
    FacePoset,
    PosetError,
    build_generalized_triangulation,
    cube_poset,
    flip_face,
    load_poset,
    poset_from_json,
    poset_to_json,
    save_poset,
    simplicial_solid_poset,
    validate_incidence,
    volume_ns,
    triangulation_invariance,
)
from bellows.geometry import Embedding, Polyhedron, normalized_volume
from bellows.simplicial import Chain, boundary

F = Fraction


def octa_poset():
    return simplicial_solid_poset(octahedron_cycle())


class TestPosetValidation:
    def test_cube_and_octahedron_valid(self):
        poset, signs, _ = cube_poset()
        assert validate_incidence(poset, signs).ok
        oposet, osigns = octa_poset()
        assert validate_incidence(oposet, osigns).ok

    def test_face_flip_is_an_equivalence_move(self):
        poset, signs, _ = cube_poset()
        for face_id in ("0**", "*1*", "00*"):
            signs = flip_face(signs, poset, face_id)
            assert validate_incidence(poset, signs).ok

    def test_single_flipped_entry_reports_pairs(self):
        poset, signs, _ = cube_poset()
        bad = dict(signs)
        bad[("***", "0**")] = -bad[("***", "0**")]
        rep = validate_incidence(poset, bad)
        assert not rep.ok
        assert all(f == "***" for f, _ in rep.composition)

    def test_missing_sign_detected(self):
        poset, signs, _ = cube_poset()
        bad = dict(signs)
        del bad[("***", "0**")]
        rep = validate_incidence(poset, bad)
        assert rep.missing == [("***", "0**")]

    def test_triangular_gate(self):
        poset, _, _ = cube_poset()
        assert not poset.has_triangular_two_faces()
        oposet, _ = octa_poset()
        assert oposet.has_triangular_two_faces()

    def test_poset_structural_errors(self):
        with pytest.raises(PosetError):
            FacePoset([Face("v", 0, ("v",), ()), Face("e", 2, ("v", "w"), ("v",))])


class TestGeneralizedTriangulation:
    def test_defining_relations_hold_everywhere(self):
        for poset, signs in (octa_poset(), cube_poset()[:2]):
            for strategy in ("cone_min", "cone_max", "snf"):
                tri = build_generalized_triangulation(poset, signs, strategy)
                for k in range(1, poset.dim + 1):
                    for face in poset.by_dim(k):
                        rhs = Chain(k - 1, {})
                        for g in face.covers:
                            rhs = rhs + tri.chains[g].scale(signs[(face.id, g)])
                        assert boundary(tri.chains[face.id]) == rhs

    def test_simplex_poset_top_chain(self):
        from conftest import tetra_boundary

        poset, signs = simplicial_solid_poset(tetra_boundary())
        tri = build_generalized_triangulation(poset, signs)
        top = tri.top_chain(poset)
        assert top.dim == 3
        assert boundary(top) == tetra_boundary()

    def test_cube_faces_carried_by_two_triangles(self):
        poset, signs, _ = cube_poset()
        tri = build_generalized_triangulation(poset, signs)
        for face in poset.by_dim(2):
            assert len(tri.chains[face.id].terms) == 2

    def test_invalid_signs_rejected(self):
        poset, signs, _ = cube_poset()
        bad = dict(signs)
        bad[("***", "0**")] = -bad[("***", "0**")]
        with pytest.raises(PosetError):
            build_generalized_triangulation(poset, bad)


class TestVolume:
    def test_unit_cube_is_twelve(self):
        poset, signs, emb = cube_poset()
        tri = build_generalized_triangulation(poset, signs)
        assert volume_ns(poset, signs, tri, emb) == 12

    def test_octahedron_is_sixteen(self):
        poset, signs = octa_poset()
        tri = build_generalized_triangulation(poset, signs)
        assert volume_ns(poset, signs, tri, octahedron_embedding()) == 16

    def test_matches_simplicial_normalized_volume(self):
        poset, signs = octa_poset()
        tri = build_generalized_triangulation(poset, signs)
        w_poset = volume_ns(poset, signs, tri, octahedron_embedding())
        w_direct = normalized_volume(Polyhedron(octahedron_cycle(), octahedron_embedding()))
        assert w_poset == w_direct

    def test_bent_square_face_rejected(self):
        poset, signs, emb = cube_poset()
        tri = build_generalized_triangulation(poset, signs)
        coords = dict(emb.coords)
        coords["111"] = (F(1), F(1), F(3, 2))
        with pytest.raises(FacePlanarityError) as err:
            volume_ns(poset, signs, tri, Embedding(3, "rational", coords))
        assert "1" in err.value.face_id

    def test_invariance_cube(self):
        poset, signs, emb = cube_poset()
        t1 = build_generalized_triangulation(poset, signs, "cone_min")
        t2 = build_generalized_triangulation(poset, signs, "cone_max")
        t3 = build_generalized_triangulation(poset, signs, "snf")
        assert triangulation_invariance(poset, signs, t1, t2, emb) == 0
        assert triangulation_invariance(poset, signs, t1, t3, emb) == 0

    def test_invariance_octahedron_two_cones(self):
        poset, signs = octa_poset()
        t1 = build_generalized_triangulation(poset, signs, "cone_min")
        t2 = build_generalized_triangulation(poset, signs, "cone_max")
        emb = octahedron_embedding()
        assert triangulation_invariance(poset, signs, t1, t2, emb) == 0

    def test_identical_triangulations(self):
        poset, signs, emb = cube_poset()
        t1 = build_generalized_triangulation(poset, signs)
        assert triangulation_invariance(poset, signs, t1, t1, emb) == 0

    def test_volume_constant_under_rigid_face_deformation(self):
        # a flex keeps every triangular face congruent; the poset volume
        # must stay constant along it
        from bellows.flex import bricard_type1, trace_flex

        start = bricard_type1(seed=3)
        poset, signs = simplicial_solid_poset(start.cycle)
        tri = build_generalized_triangulation(poset, signs)
        fam = trace_flex(start, steps=30, step_size=0.01)
        values = [
            float(volume_ns(poset, signs, tri, fam.embedding(i))) for i in range(0, 31, 5)
        ]
        assert max(values) - min(values) <= 1e-9


class TestJson:
    def test_round_trip(self, tmp_path):
        poset, signs, _ = cube_poset()
        path = tmp_path / "poset.json"
        save_poset(poset, signs, str(path))
        poset2, signs2 = load_poset(str(path))
        assert set(poset2.faces) == set(poset.faces)
        assert signs2 == signs

    def test_octahedron_round_trip(self):
        poset, signs = octa_poset()
        data = poset_to_json(poset, signs)
        poset2, signs2 = poset_from_json(data)
        assert set(poset2.faces) == set(poset.faces)
        assert signs2 == signs
