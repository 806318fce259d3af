import pytest
from hypothesis import given
from hypothesis import strategies as st

from geoagent.errors import MissingDataError, ValidationError
from geoagent.soil import (
    Foundation,
    SoilLayer,
    SoilProfile,
    SoilSample,
    a_line,
    derive_index_properties,
    load_profile,
    parse_profile_text,
    parse_samples_text,
    sample_from_dict,
)


class TestSoilSample:
    def test_valid(self):
        s = SoilSample(pass_sieve4=80, pass_sieve200=20, d10=0.1, d30=0.3, d60=0.6)
        assert s.gravel_fraction == 20
        assert s.sand_fraction == 60

    def test_sieve_ordering_rejected(self):
        with pytest.raises(ValidationError):
            SoilSample(pass_sieve4=30, pass_sieve200=40)

    def test_d_size_ordering_rejected(self):
        with pytest.raises(ValidationError):
            SoilSample(pass_sieve4=80, pass_sieve200=20, d10=0.5, d30=0.3, d60=0.6)

    def test_pl_above_ll_rejected(self):
        with pytest.raises(ValidationError):
            SoilSample(pass_sieve4=100, pass_sieve200=60, liquid_limit=30, plastic_limit=40)


class TestDeriveIndexProperties:
    def test_paper_pi(self):
        props = derive_index_properties(
            SoilSample(pass_sieve4=100, pass_sieve200=60, liquid_limit=30, plastic_limit=10)
        )
        assert props.plasticity_index == 20

    def test_equal_limits_zero_pi(self):
        props = derive_index_properties(
            SoilSample(pass_sieve4=100, pass_sieve200=60, liquid_limit=40, plastic_limit=40)
        )
        assert props.plasticity_index == 0

    def test_cu_cc(self):
        props = derive_index_properties(
            SoilSample(pass_sieve4=80, pass_sieve200=3, d10=0.1, d30=0.3, d60=0.6)
        )
        assert props.cu == pytest.approx(6.0)
        assert props.cc == pytest.approx(1.5)

    def test_absent_inputs_yield_absent_outputs(self):
        props = derive_index_properties(SoilSample(pass_sieve4=80, pass_sieve200=3))
        assert props.plasticity_index is None
        assert props.cu is None
        assert props.cc is None

    @given(
        d10=st.floats(0.001, 10),
        r30=st.floats(1, 5),
        r60=st.floats(1, 5),
        k=st.floats(0.01, 100),
    )
    def test_scale_invariance(self, d10, r30, r60, k):
        d30 = d10 * r30
        d60 = d30 * r60
        base = derive_index_properties(
            SoilSample(pass_sieve4=80, pass_sieve200=3, d10=d10, d30=d30, d60=d60)
        )
        scaled = derive_index_properties(
            SoilSample(pass_sieve4=80, pass_sieve200=3, d10=d10 * k, d30=d30 * k, d60=d60 * k)
        )
        assert scaled.cu == pytest.approx(base.cu, rel=1e-9)
        assert scaled.cc == pytest.approx(base.cc, rel=1e-9)


class TestALine:
    def test_values(self):
        assert a_line(60) == pytest.approx(29.2)
        assert a_line(20) == 0
        assert a_line(30) == pytest.approx(7.3)

    def test_negative_below_20_not_clamped(self):
        assert a_line(10) < 0

    @given(ll1=st.floats(0, 200), ll2=st.floats(0, 200))
    def test_affine(self, ll1, ll2):
        assert a_line(ll1) + a_line(ll2) == pytest.approx(
            2 * a_line((ll1 + ll2) / 2), abs=1e-9
        )


class TestProfile:
    def test_gap_rejected(self):
        with pytest.raises(ValidationError):
            SoilProfile((SoilLayer("a", 0, -5), SoilLayer("b", -6, -10)))

    def test_overlap_rejected(self):
        with pytest.raises(ValidationError):
            SoilProfile((SoilLayer("a", 0, -5), SoilLayer("b", -4, -10)))

    def test_unsorted_rejected(self):
        with pytest.raises(ValidationError):
            SoilProfile((SoilLayer("b", -5, -10), SoilLayer("a", 0, -5)))

    def test_layer_at(self):
        profile = SoilProfile((SoilLayer("a", 0, -5), SoilLayer("b", -5, -10, su=50)))
        assert profile.layer_at(-7).material == "b"
        with pytest.raises(MissingDataError):
            profile.layer_at(5)

    def test_inverted_layer_rejected(self):
        with pytest.raises(ValidationError):
            SoilLayer("a", -5, 0)


class TestFoundation:
    def test_circular(self):
        f = Foundation("circular", diameter=20)
        assert f.diameter == 20

    def test_circular_rejects_width(self):
        with pytest.raises(ValidationError):
            Foundation("circular", diameter=20, width=2)

    def test_rectangular_requires_b_le_l(self):
        with pytest.raises(ValidationError):
            Foundation("rectangular", width=4, length=2)

    def test_unknown_shape(self):
        with pytest.raises(ValidationError):
            Foundation("octagonal", diameter=1)


class TestFileFormats:
    def test_pisa_fixture(self, pisa_profile_path):
        profile = load_profile(pisa_profile_path)
        assert [l.material for l in profile.layers] == ["Sand", "Clay"]
        assert profile.layers[1].su == 35.0

    def test_text_roundtrip_fields(self):
        profile = parse_profile_text("Clay 0 -10 su=35 unit_weight=16.5 friction_angle=0\n")
        layer = profile.layers[0]
        assert (layer.su, layer.unit_weight, layer.friction_angle) == (35, 16.5, 0)

    def test_su_points(self):
        profile = parse_profile_text("Clay 0 -20 su_points=-5:30;-15:50\n")
        assert profile.layers[0].su_points == ((-5, 30), (-15, 50))

    def test_json_profile(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(
            '[{"material": "Clay", "top_elevation": 0, "bottom_elevation": -5, "su": 20}]'
        )
        assert load_profile(path).layers[0].su == 20

    def test_samples_text(self):
        samples = parse_samples_text(
            "pass_sieve4=100 pass_sieve200=60 liquid_limit=30 plastic_limit=10\n"
        )
        assert samples[0].liquid_limit == 30

    def test_unknown_sample_field_rejected(self):
        with pytest.raises(ValidationError):
            sample_from_dict({"pass_sieve4": 100, "pass_sieve200": 60, "bogus": 1})
