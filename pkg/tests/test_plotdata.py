import statistics

import pytest

from softhappy import (
    ConfigError,
    RunRecord,
    aggregate,
    alpha_histograms,
    binned_series,
    emit_plot_data,
)
from softhappy.plotdata import write_aggregate_csv, write_histogram_csv, write_series_csv


def record(algo="ga-rnd", alpha=0.5, acd=0.5, rho=0.5, n=100, k=4,
           regime="mu-to-xitilde", regime_xi="below-xi", complete=False):
    return RunRecord(
        instance_id="i",
        algo=algo,
        seed=0,
        n=n,
        k=k,
        p=0.5,
        q=0.1,
        pcc=1,
        rho=rho,
        mu=0.125,
        xi=0.6,
        xi_tilde=0.625,
        regime_mu_xitilde=regime,
        regime_xi=regime_xi,
        alpha=alpha,
        acd=acd,
        complete=complete,
        acd_exact=acd == 1.0,
        generations=3,
        wall_ms=0,
    )


class TestAggregate:
    def test_single_record(self):
        rows = aggregate([record(alpha=0.75)], grouping="overall")
        assert len(rows) == 1
        row = rows[0]
        assert row.alpha_mean == 0.75
        assert row.alpha_sd == 0.0
        assert row.sd_degenerate

    def test_all_complete(self):
        rows = aggregate([record(complete=True)] * 4, grouping="overall")
        assert rows[0].complete_count == 4
        assert rows[0].incomplete_count == 0

    def test_matches_independent_recomputation(self):
        alphas = [0.2, 0.35, 0.8, 0.95, 0.5]
        acds = [0.1, 0.3, 0.9, 1.0, 0.4]
        records = [record(alpha=a, acd=c) for a, c in zip(alphas, acds)]
        row = aggregate(records, grouping="overall")[0]
        assert row.alpha_mean == pytest.approx(statistics.mean(alphas))
        assert row.alpha_sd == pytest.approx(statistics.stdev(alphas))
        assert row.acd_mean == pytest.approx(statistics.mean(acds))
        assert row.acd_exact_count == 1
        assert not row.sd_degenerate

    def test_regime_totals(self):
        records = (
            [record(regime="below-mu")] * 3
            + [record(regime="mu-to-xitilde", complete=True)] * 5
            + [record(regime="above-xitilde")] * 2
        )
        rows = aggregate(records, grouping="mu-xitilde")
        by_regime = {r.regime: r for r in rows}
        assert by_regime["below-mu"].count == 3
        assert by_regime["mu-to-xitilde"].count == 5
        assert by_regime["above-xitilde"].count == 2
        for row in rows:
            assert row.complete_count + row.incomplete_count == row.count
            assert row.acd_exact_count + row.acd_not_exact_count == row.count

    def test_xi_grouping(self):
        records = [record(regime_xi="below-xi")] * 2 + [record(regime_xi="above-xi")]
        rows = aggregate(records, grouping="xi")
        assert {r.regime for r in rows} == {"below-xi", "above-xi"}

    def test_empty_rejected(self):
        with pytest.raises(ConfigError):
            aggregate([], grouping="overall")
        with pytest.raises(ConfigError):
            aggregate([record()], grouping="percentile")


class TestBinnedSeries:
    def test_constant_alpha_flat_series(self):
        records = [record(alpha=1.0, n=n) for n in (100, 200, 300, 400)]
        points = binned_series(records, axis="n", bins=2)
        filled = [p for p in points if p.count > 0]
        assert all(p.alpha_mean == 1.0 for p in filled)

    def test_empty_bins_are_missing_not_zero(self):
        records = [record(n=100), record(n=400)]
        points = binned_series(records, axis="n", bins=3)
        middle = [p for p in points if p.bin_index == 1]
        assert all(p.count == 0 and p.alpha_mean is None for p in middle)

    def test_matches_reference_recomputation(self):
        # 50-record fixture across two algorithms and a rho axis
        records = []
        for i in range(50):
            rho = i / 49
            algo = "ga-rnd" if i % 2 == 0 else "ma-lmc"
            records.append(record(algo=algo, rho=rho, alpha=rho / 2, acd=rho / 4))
        points = binned_series(records, axis="rho", bins=5)
        for point in points:
            if point.count == 0:
                continue
            members = [
                r for r in records
                if r.algo == point.algo
                and point.bin_left <= r.rho < point.bin_right
                or (point.bin_index == 4 and r.algo == point.algo and r.rho == 1.0)
            ]
            assert point.count == len(members)
            assert point.alpha_mean == pytest.approx(
                statistics.mean(r.alpha for r in members)
            )

    def test_unknown_axis(self):
        with pytest.raises(ConfigError):
            binned_series([record()], axis="pcc", bins=3)


class TestHistograms:
    def test_two_bin_example(self):
        records = [record(alpha=a) for a in (0.0, 0.0, 1.0, 1.0)]
        rows = alpha_histograms(records, bins=2)
        assert [r.count for r in rows] == [2, 2]
        assert rows[0].alpha_mean == 0.5

    def test_hundred_bins_default(self):
        rows = alpha_histograms([record(alpha=0.123)] * 7)
        assert len(rows) == 100
        assert sum(r.count for r in rows) == 7
        hit = [r for r in rows if r.count][0]
        assert hit.bin_left <= 0.123 < hit.bin_right

    def test_per_algo_mean_markers(self):
        records = [record(algo="a", alpha=0.2), record(algo="a", alpha=0.4),
                   record(algo="b", alpha=1.0)]
        rows = alpha_histograms(records, bins=4)
        means = {r.algo: r.alpha_mean for r in rows}
        assert means["a"] == pytest.approx(0.3)
        assert means["b"] == 1.0


def test_emit_plot_data_bundles_series_and_histograms():
    records = [record(alpha=0.3, n=100), record(algo="ma-lmc", alpha=0.9, n=300)]
    series, hist = emit_plot_data(records, axis="n", bins=4)
    assert {p.algo for p in series} == {"ga-rnd", "ma-lmc"}
    assert len(series) == 2 * 4
    assert len(hist) == 2 * 100


def test_csv_writers(tmp_path):
    records = [record(alpha=0.5), record(algo="ma-lmc", alpha=0.9, acd=None)]
    write_aggregate_csv(aggregate(records, "overall"), tmp_path / "agg.csv")
    write_series_csv(binned_series(records, "n", 2), tmp_path / "series.csv")
    write_histogram_csv(alpha_histograms(records, 10), tmp_path / "hist.csv")
    agg_text = (tmp_path / "agg.csv").read_text()
    assert agg_text.startswith("algo,regime,count,alpha_mean")
    # a missing acd renders as an empty cell, not 0
    series_lines = (tmp_path / "series.csv").read_text().splitlines()
    ma_row = next(l for l in series_lines if l.startswith("ma-lmc") and ",1," in l)
    assert ma_row.endswith(",")
