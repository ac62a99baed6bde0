"""Table, correlation CSV and SVG renderers."""
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from roarband import (
    CampaignRow,
    Mode,
    PlotSpec,
    SyntheticSpec,
    campaign_to_csv,
    campaign_trajectory,
    generate_synthetic,
    parse_campaign_csv,
    render_campaign_table,
    render_corr_csv,
    render_trajectory_svg,
    run_campaign,
)


ROWS = [
    CampaignRow(1, "alcohol", 0.2921, 0.2243, 0.3600, None),
    CampaignRow(2, "density", 0.2643, 0.1831, 0.3456, True),
    CampaignRow(3, "total_sulfur_dioxide", 0.1453, 0.105, 0.1855, False),
    CampaignRow(4, "sulphates", 0.0016, None, None, True),
]


class TestCampaignTable:
    def test_golden_render(self):
        expected = (
            "Iteration | MSF                  | Accuracy |     LI |     UI | flag\n"
            "        1 | alcohol              |   0.2921 | 0.2243 | 0.3600 |\n"
            "        2 | density              |   0.2643 | 0.1831 | 0.3456 |\n"
            "        3 | total_sulfur_dioxide |   0.1453 | 0.1050 | 0.1855 | *\n"
            "        4 | sulphates            |   0.0016 |        |        |\n"
        )
        assert render_campaign_table(ROWS) == expected

    def test_single_record_empty_interval_cells(self):
        text = render_campaign_table([CampaignRow(1, "only", 0.5, None, None, None)])
        lines = text.splitlines()
        assert len(lines) == 2
        assert "0.5000" in lines[1]
        assert lines[1].count("|") == 5

    def test_out_of_band_star(self):
        text = render_campaign_table(ROWS)
        starred = [ln for ln in text.splitlines() if ln.rstrip().endswith("*")]
        assert len(starred) == 1 and "total_sulfur_dioxide" in starred[0]

    def test_clamp_is_display_only(self):
        rows = [CampaignRow(1, "a", 0.9, -0.05, 1.35, None),
                CampaignRow(2, "b", 0.8, None, None, True)]
        text = render_campaign_table(rows, clamp=True)
        assert "0.0000" in text and "1.0000" in text
        assert "-0.05" not in text

    def test_round_trips_through_csv(self):
        d = generate_synthetic(SyntheticSpec(60, 3, 1, 0, seed=50))
        report = run_campaign(d, Mode.ROAR, seed=17)
        direct = render_campaign_table(report)
        reparsed = render_campaign_table(parse_campaign_csv(campaign_to_csv(report)))
        assert direct == reparsed


class TestCorrCsv:
    def test_one_by_one(self):
        text = render_corr_csv(np.array([[1.0]]), ["x"])
        assert text == ",x\nx,1.0000\n"

    def test_transpose_parses_identically(self):
        rng = np.random.default_rng(51)
        raw = rng.standard_normal((30, 3))
        corr = np.corrcoef(raw, rowvar=False)
        names = ["a", "b", "c"]
        text = render_corr_csv(corr, names)
        lines = [ln.split(",") for ln in text.strip().splitlines()]
        values = np.array([[float(v) for v in row[1:]] for row in lines[1:]])
        assert np.array_equal(values, values.T)

    def test_anti_correlated_pair(self):
        corr = np.array([[1.0, -1.0], [-1.0, 1.0]])
        text = render_corr_csv(corr, ["u", "v"])
        assert "-1.0000" in text

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="2 names"):
            render_corr_csv(np.eye(3), ["a", "b"])
        with pytest.raises(ValueError, match="square"):
            render_corr_csv(np.zeros((2, 3)), ["a", "b"])


def _two_point_spec(band=None):
    return PlotSpec("demo", "step", "metric",
                    (("metric", ((1.0, 0.5), (2.0, 0.7))),), band=band)


class TestTrajectorySvg:
    def test_well_formed_xml(self):
        svg = render_trajectory_svg(_two_point_spec())
        root = ET.fromstring(svg)
        assert root.tag.endswith("svg")

    def test_exactly_one_polyline_for_one_series(self):
        svg = render_trajectory_svg(_two_point_spec())
        assert svg.count("<polyline") == 1
        assert svg.count("<polygon") == 0

    def test_band_polygon_present(self):
        svg = render_trajectory_svg(_two_point_spec(
            band=((1.0, 0.4, 0.6), (2.0, 0.5, 0.9))))
        assert svg.count("<polygon") == 1

    def test_empty_band_no_polygon(self):
        spec = PlotSpec("demo", "x", "y", (("s", ((0.0, 0.0), (1.0, 1.0))),),
                        band=None)
        assert "<polygon" not in render_trajectory_svg(spec)

    def test_axes_labeled_and_escaped(self):
        spec = PlotSpec("a<b", "x & y", "q>p", (("s", ((0.0, 0.0), (1.0, 1.0))),))
        svg = render_trajectory_svg(spec)
        ET.fromstring(svg)
        assert "a&lt;b" in svg and "x &amp; y" in svg and "q&gt;p" in svg

    def test_multiple_series_multiple_polylines(self):
        spec = PlotSpec("two", "x", "y",
                        (("s1", ((0.0, 0.0), (1.0, 1.0))),
                         ("s2", ((0.0, 1.0), (1.0, 0.0)))))
        assert render_trajectory_svg(spec).count("<polyline") == 2

    def test_invariants(self):
        with pytest.raises(ValueError, match="at least one series"):
            PlotSpec("t", "x", "y", ())
        with pytest.raises(ValueError, match="strictly increase"):
            PlotSpec("t", "x", "y", (("s", ((1.0, 0.0), (1.0, 1.0))),))

    def test_campaign_trajectory_band_positions(self):
        d = generate_synthetic(SyntheticSpec(60, 3, 0, 0, seed=52))
        report = run_campaign(d, Mode.ROAR, seed=18)
        spec = campaign_trajectory(report)
        assert [x for x, *_ in spec.band] == [2, 3]
        svg = render_trajectory_svg(spec)
        ET.fromstring(svg)
        assert svg.count("<polyline") == 1
        assert svg.count("<polygon") == 1
