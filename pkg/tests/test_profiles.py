"""Preset catalog, fragment grammar, and profile config text."""

import numpy as np
import pytest

from tracegen.distributions import empirical_ird, fgen
from tracegen.generator import DEFAULT_SEED, SizeDist, TraceProfile, gen_from_2d
from tracegen.profiles import (
    PRESETS,
    get_preset,
    parse_f_fragment,
    parse_g_fragment,
    parse_profile,
    parse_size_dist,
    render_f_fragment,
    render_g_fragment,
    render_profile,
    render_size_dist,
)

# name -> (p_irm, g family, g params, f args or None)
GOLDEN = {
    "a": (1.0, "zipf", {"alpha": 3.0}, None),
    "b": (0.0, None, None, (20, (0, 3), 5e-3)),
    "c": (0.0, None, None, (20, (2, 9), 5e-3)),
    "d": (0.0, None, None, (5, (0, 4), 1e-2)),
    "e": (0.0, None, None, (20, (1,), 5e-3)),
    "f": (0.0, None, None, (5, (2,), 5e-3)),
    "g": (0.0, None, None, (54, (5, 11, 12, 13, 14, 17, 30, 50), 1e-2)),
    "w11": (1.0, "zipf", {"alpha": 1.3}, None),
    "w24": (0.45, "zipf", {"alpha": 1.2}, (30, (1, 2), 5e-3)),
    "w44": (0.0, None, None, (30, (9, 13, 17, 19), 2.5e-2)),
    "w82": (0.2, "zipf", {"alpha": 1.2}, (100, (12, 13, 19), 1e-3)),
    "v521": (0.0, None, None, (100, (2,), 2e-3)),
    "v538": (0.1, "zipf", {"alpha": 1.2}, (40, (3, 4), 5e-3)),
    "v766": (0.0, None, None, (40, (0, 5), 5.7e-3)),
    "v827": (0.2, "zipf", {"alpha": 1.2}, (60, (0, 13), 5e-3)),
}


class TestPresetCatalog:
    def test_exactly_the_known_presets_ship(self):
        assert set(PRESETS) == set(GOLDEN)
        assert len(PRESETS) == 15

    def test_golden_values(self):
        for name, (p_irm, g_family, g_params, f_args) in GOLDEN.items():
            preset = PRESETS[name]
            assert preset.p_irm == p_irm, name
            if g_family is None:
                assert preset.g_family is None, name
            else:
                assert preset.g_family[0] == g_family, name
                assert preset.g_family[1] == g_params, name
            assert preset.f_args == f_args, name

    def test_spec_construction_matches_fgen(self):
        assert PRESETS["b"].f_spec() == fgen(20, {0, 3}, 5e-3)
        assert PRESETS["a"].f_spec() is None
        g = PRESETS["a"].g_spec(100)
        assert g.family == "zipf" and dict(g.params)["alpha"] == 3.0
        assert PRESETS["b"].g_spec(100) is None

    def test_scale_recommendation_noted_where_needed(self):
        assert PRESETS["w44"].recommended_min_m == 10_000
        assert PRESETS["w44"].recommended_min_n == 1_000_000
        assert PRESETS["b"].recommended_min_m is None

    def test_unknown_preset_lists_known_names(self):
        with pytest.raises(KeyError, match="v827"):
            get_preset("nope")

    def test_every_preset_generates_at_small_scale(self):
        for name, preset in PRESETS.items():
            profile = preset.instantiate(m=100, n=10_000, seed=11)
            trace = gen_from_2d(profile)
            assert len(trace) == 10_000, name

    def test_instantiate_carries_scale_and_decoration(self):
        profile = PRESETS["w24"].instantiate(
            m=640, n=5000, seed=3, read_fraction=0.9,
            size_dist=SizeDist(weights=(1.0,), values=(2,)),
        )
        assert profile.m == 640 and profile.n == 5000 and profile.seed == 3
        assert profile.g.universe_size == 640
        assert profile.read_fraction == 0.9
        trace = gen_from_2d(profile)
        assert np.all(trace.sizes == 2)


class TestFragments:
    def test_fgen_fragment(self):
        spec = parse_f_fragment("fgen:15:0.01:1,3,5,9")
        assert spec == fgen(15, {1, 3, 5, 9}, 0.01)

    def test_none_fragment(self):
        assert parse_f_fragment("none") is None
        assert parse_f_fragment("") is None
        assert parse_g_fragment("none", 10) is None

    def test_preset_name_as_fragment(self):
        assert parse_f_fragment("b") == PRESETS["b"].f_spec()
        with pytest.raises(ValueError):
            parse_f_fragment("a")  # popularity-only preset has no f
        with pytest.raises(ValueError):
            parse_f_fragment("b", allow_preset=False)

    def test_empirical_fragment(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text("2,3\n7,1\ninf,4\n")
        spec = parse_f_fragment(f"empirical:{path}")
        assert spec.source == "empirical"
        assert spec.p_infinite == pytest.approx(0.5)

    def test_bad_f_fragments(self):
        for text in ("fgen:5:0.1", "fgen:5:x:1", "wavelet:3", "fgen:5:0.1:9"):
            with pytest.raises(ValueError):
                parse_f_fragment(text)

    def test_g_families(self, tmp_path):
        g = parse_g_fragment("zipf", 50)
        assert dict(g.params)["alpha"] == 1.2  # default exponent
        assert dict(parse_g_fragment("zipf:0.8", 50).params)["alpha"] == 0.8
        p = parse_g_fragment("pareto:2.5,1", 50)
        assert dict(p.params) == {"alpha": 2.5, "x_m": 1.0}
        defaults = dict(parse_g_fragment("pareto", 50).params)
        assert defaults == {"alpha": 2.5, "x_m": 1.0}
        nrm = parse_g_fragment("normal:25,5", 50)
        assert dict(nrm.params) == {"mu": 25.0, "sigma": 5.0}
        uni = parse_g_fragment("uniform", 4)
        np.testing.assert_allclose(uni.pmf, [0.25] * 4)
        path = tmp_path / "g.csv"
        path.write_text("0,1\n1,3\n")
        emp = parse_g_fragment(f"empirical:{path}", 2)
        np.testing.assert_allclose(emp.pmf, [0.25, 0.75])

    def test_bad_g_fragments(self):
        for text in ("zipf:1,2", "pareto:1,2,3", "normal:5", "uniform:1", "zoned"):
            with pytest.raises(ValueError):
                parse_g_fragment(text, 10)

    def test_universe_size_flows_through(self):
        assert parse_g_fragment("zipf", 123).universe_size == 123

    def test_fragment_rendering_round_trips(self):
        spec = fgen(5, {2}, 5e-3)
        assert parse_f_fragment(render_f_fragment(spec)) == spec
        assert render_f_fragment(None) == "none"
        g = parse_g_fragment("pareto:2.5,1", 9)
        assert parse_g_fragment(render_g_fragment(g), 9) == g

    def test_empirical_specs_render_by_file_only(self):
        with pytest.raises(ValueError):
            render_f_fragment(empirical_ird([1], [1.0]))


class TestSizeDistText:
    def test_parse_weights_and_values(self):
        dist = parse_size_dist("1,3:1,8")
        assert dist.weights == (1.0, 3.0)
        assert dist.values == (1, 8)

    def test_round_trip(self):
        dist = SizeDist(weights=(1.0, 2.5), values=(4, 64))
        assert parse_size_dist(render_size_dist(dist)) == dist

    def test_bad_text(self):
        for text in ("1,2", "1:x", "a:1", "1,2:3"):
            with pytest.raises(ValueError):
                parse_size_dist(text)


class TestProfileText:
    def test_defaults(self):
        profile = parse_profile("f = fgen:5:0.005:2\n")
        assert profile.m == 100
        assert profile.n == 10_000
        assert profile.p_irm == 0.0
        assert profile.seed == DEFAULT_SEED
        assert profile.g is None
        assert profile.read_fraction is None

    def test_full_round_trip(self):
        profile = TraceProfile(
            p_irm=0.2,
            g=parse_g_fragment("zipf:1.2", 640),
            f=fgen(60, {0, 13}, 5e-3),
            m=640,
            n=44_000,
            seed=987,
            read_fraction=0.5,
            size_dist=SizeDist(weights=(3.0, 1.0), values=(1, 8)),
            overlap_irm=True,
        )
        assert parse_profile(render_profile(profile)) == profile

    def test_render_is_a_fixpoint(self):
        text = render_profile(parse_profile("f = f\nm = 137\nn = 999\n"))
        assert render_profile(parse_profile(text)) == text

    def test_comments_and_blank_lines_ignored(self):
        profile = parse_profile("# config\n\nf = fgen:5:0.005:2\n# done\n")
        assert profile.f == fgen(5, {2}, 5e-3)

    def test_errors_carry_line_numbers(self):
        cases = [
            ("f = b\nzap\n", "line 2"),
            ("f = b\nm = x\n", "line 2: bad m"),
            ("f = b\nwhat = 3\n", "unknown key"),
            ("f = b\nf = b\n", "duplicate"),
            ("p_irm = 0\nf = wavelet:1\n", "line 2"),
            ("f = b\noverlap_irm = maybe\n", "true or false"),
        ]
        for text, fragment in cases:
            with pytest.raises(ValueError, match=fragment):
                parse_profile(text)

    def test_triplet_requirements_enforced_after_parse(self):
        with pytest.raises(ValueError):
            parse_profile("p_irm = 0.5\nf = b\n")  # missing g
        with pytest.raises(ValueError):
            parse_profile("p_irm = 1\n")  # missing g
        with pytest.raises(ValueError):
            parse_profile("p_irm = 0\ng = zipf\n")  # missing f
