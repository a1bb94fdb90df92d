import json
import math

import numpy as np
import pytest

from specoord.channel import (ChannelMatrixSet, NoiseProfile,
                              make_uniform_grid, write_channel_csv)
from specoord.game import PowerAllocation, sinr_per_tone
from specoord.scenario import (ConfigError, build_channel, emit_region_map,
                               load_config, run_scenario)
from specoord.symmetric import h_lim1, h_lim2


def base_config(tmp_path, **overrides):
    cfg = {
        "name": "unit",
        "grid": {"f_start_hz": 0.0, "f_end_hz": 1.2e6, "num_tones": 12},
        "channel": {"kind": "synthetic", "lengths_km": [2.0, 0.6],
                    "group_sizes": [4, 4]},
        "noise_psd_dbm_hz": -140.0,
        "budgets_mw": [30.0, 30.0],
        "methods": ["fm-iwf", "dfdm", "ra-iwf"],
        "sweep": {"count": 3, "min_fraction": 0.2, "max_fraction": 0.8},
        "near_user": 1,
        "output_dir": str(tmp_path / "out"),
    }
    cfg.update(overrides)
    return cfg


class TestLoadConfig:
    def test_parses_dict(self, tmp_path):
        config = load_config(base_config(tmp_path, gap_db=3.0))
        assert config.name == "unit"
        assert config.budgets_mw == (30.0, 30.0)
        assert config.methods == ("fm-iwf", "dfdm", "ra-iwf")
        assert config.gap == pytest.approx(10 ** 0.3, rel=1e-12)

    def test_parses_json_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(base_config(tmp_path)))
        assert load_config(path).name == "unit"

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError) as exc:
            load_config(path)
        assert exc.value.path == "<file>"

    @pytest.mark.parametrize("mutate,path", [
        (lambda c: c.pop("grid"), "grid"),
        (lambda c: c["grid"].pop("num_tones"), "grid.num_tones"),
        (lambda c: c["grid"].update(num_tones=0), "grid.num_tones"),
        (lambda c: c["grid"].update(f_end_hz=-1.0), "grid.f_end_hz"),
        (lambda c: c["channel"].update(kind="magic"), "channel.kind"),
        (lambda c: c["channel"].update(lengths_km=[1.0]), "channel.lengths_km"),
        (lambda c: c["channel"].update(group_sizes=[0, 1]), "channel.group_sizes"),
        (lambda c: c.update(budgets_mw=[30.0]), "budgets_mw"),
        (lambda c: c.update(budgets_mw=[30.0, -1.0]), "budgets_mw"),
        (lambda c: c.update(methods=["fm-iwf", "magic"]), "methods"),
        (lambda c: c.update(methods=[]), "methods"),
        (lambda c: c.update(sweep={}), "sweep.count"),
        (lambda c: c.update(sweep={"count": 3, "min_fraction": 0.9,
                                   "max_fraction": 0.5}), "sweep.min_fraction"),
        (lambda c: c.update(sweep={"rd_bps": []}), "sweep.rd_bps"),
        (lambda c: c.update(near_user=2), "near_user"),
        (lambda c: c.update(gap_db=-1.0), "gap_db"),
        (lambda c: c.update(band_plan_hz=[[[0.0, 2.0e6]], None]),
         "band_plan_hz[0][0]"),
        (lambda c: c.update(band_plan_hz=[[[0.5e6, 0.1e6]], None]),
         "band_plan_hz[0][0]"),
    ])
    def test_field_errors_carry_paths(self, tmp_path, mutate, path):
        cfg = base_config(tmp_path)
        mutate(cfg)
        with pytest.raises(ConfigError) as exc:
            load_config(cfg)
        assert exc.value.path == path

    def test_csv_channel_requires_path(self, tmp_path):
        cfg = base_config(tmp_path, channel={"kind": "csv"})
        with pytest.raises(ConfigError) as exc:
            load_config(cfg)
        assert exc.value.path == "channel.path"


class TestBuildChannel:
    def test_group_sizes_scale_crosstalk_only(self, tmp_path):
        ones = load_config(base_config(
            tmp_path, channel={"kind": "synthetic", "lengths_km": [2.0, 0.6],
                               "group_sizes": [1, 1]}))
        fours = load_config(base_config(tmp_path))
        small, big = build_channel(ones), build_channel(fours)
        assert np.allclose(big.gains[:, 0, 0], small.gains[:, 0, 0])
        assert np.allclose(big.gains[:, 1, 1], small.gains[:, 1, 1])
        assert np.allclose(big.gains[:, 0, 1], 4 * small.gains[:, 0, 1])
        assert np.allclose(big.gains[:, 1, 0], 4 * small.gains[:, 1, 0])

    def test_band_plan_masks_direct_gains(self, tmp_path):
        cfg = base_config(tmp_path,
                          band_plan_hz=[None, [[0.2e6, 0.7e6]]])
        masked = build_channel(load_config(cfg))
        plain = build_channel(load_config(base_config(tmp_path)))
        centers = masked.grid.centers
        inside = (centers >= 0.2e6) & (centers <= 0.7e6)
        assert np.all(masked.gains[~inside, 1, 1] == 0.0)
        assert np.allclose(masked.gains[inside, 1, 1],
                           plain.gains[inside, 1, 1])
        assert np.allclose(masked.gains[:, 0, 0], plain.gains[:, 0, 0])
        assert np.allclose(masked.gains[:, 0, 1], plain.gains[:, 0, 1])

    def test_csv_channel_must_have_two_users(self, tmp_path):
        grid = make_uniform_grid(0, 4, 4)
        solo = ChannelMatrixSet(np.ones((4, 1, 1)), grid)
        path = tmp_path / "solo.csv"
        write_channel_csv(solo, path)
        cfg = base_config(tmp_path, channel={"kind": "csv", "path": str(path)})
        with pytest.raises(ConfigError):
            build_channel(load_config(cfg))


class TestRunScenario:
    def test_emits_expected_files_and_rows(self, tmp_path):
        config = load_config(base_config(tmp_path))
        report = run_scenario(config)
        region = tmp_path / "out" / "rate_region.csv"
        assert region.exists()
        lines = region.read_text().splitlines()
        assert lines[0] == "method,target_bps,near_bps,far_bps"
        assert len(lines) == 1 + 3 + 3 + 1  # two swept methods + one ra row
        for method in ("fm-iwf", "dfdm", "ra-iwf"):
            tag = method.replace("-", "_")
            assert (tmp_path / "out" / f"psd_{tag}.csv").exists()
            assert (tmp_path / "out" / f"sinr_{tag}.csv").exists()
        assert report["near_max_bps"] > 0
        assert report["far_free_bps"] > 0
        assert report["near_user"] == 1

    def test_fm_rows_hit_their_targets(self, tmp_path):
        config = load_config(base_config(tmp_path))
        report = run_scenario(config)
        for method, target, near_bps, far_bps in report["rows"]:
            if method != "fm-iwf":
                continue
            assert float(near_bps) == pytest.approx(float(target), rel=1e-6)
            assert float(far_bps) > 0

    def test_reruns_are_byte_identical(self, tmp_path):
        cfg_a = base_config(tmp_path, output_dir=str(tmp_path / "a"))
        cfg_b = base_config(tmp_path, output_dir=str(tmp_path / "b"))
        run_scenario(load_config(cfg_a))
        run_scenario(load_config(cfg_b))
        for name in ("rate_region.csv", "psd_fm_iwf.csv", "sinr_dfdm.csv"):
            assert ((tmp_path / "a" / name).read_bytes()
                    == (tmp_path / "b" / name).read_bytes())

    def test_sinr_reproducible_from_emitted_psd(self, tmp_path):
        config = load_config(base_config(tmp_path))
        run_scenario(config)
        channel = build_channel(config)
        grid = channel.grid
        noise = NoiseProfile.from_psd_dbm_hz(config.noise_psd_dbm_hz, grid, 2)

        psd_rows = np.loadtxt(tmp_path / "out" / "psd_fm_iwf.csv",
                              delimiter=",", skiprows=1)
        allocs = [PowerAllocation(u, psd_rows[:, 1 + u] * grid.widths,
                                  config.budgets_mw[u], "at-most-power")
                  for u in (0, 1)]
        sinr_rows = np.loadtxt(tmp_path / "out" / "sinr_fm_iwf.csv",
                               delimiter=",", skiprows=1)
        for u in (0, 1):
            recomputed = sinr_per_tone(u, allocs, channel, noise)
            assert np.allclose(recomputed, sinr_rows[:, 1 + u], rtol=1e-9)

    def test_explicit_targets_and_detail(self, tmp_path):
        cfg = base_config(tmp_path, sweep={"rd_bps": [3e5, 6e5]},
                          detail_rd_bps=6e5)
        report = run_scenario(load_config(cfg))
        assert report["detail_rd_bps"] == 6e5
        swept = [float(r[1]) for r in report["rows"] if r[0] == "fm-iwf"]
        assert swept == [3e5, 6e5]

    def test_oracle_method_appends_frontier(self, tmp_path):
        cfg = base_config(tmp_path,
                          grid={"f_start_hz": 0.0, "f_end_hz": 2e5,
                                "num_tones": 2},
                          methods=["oracle"], oracle_levels=5)
        report = run_scenario(load_config(cfg))
        oracle_rows = [r for r in report["rows"] if r[0] == "oracle"]
        assert oracle_rows and all(r[1] == "" for r in oracle_rows)


class TestRegionMap:
    def test_single_cell_values(self, tmp_path):
        path = tmp_path / "map.csv"
        count = emit_region_map((10.0, 10.0), (0.3, 0.3), 1, str(path))
        assert count == 1
        header, row = path.read_text().splitlines()
        assert header == "h,snr,region,h_lim1,h_lim2"
        h, snr, region, l1, l2 = row.split(",")
        assert float(h) == 0.3 and float(snr) == 10.0
        assert region == "B"
        assert float(l1) == pytest.approx(h_lim1(10.0), rel=1e-12)
        assert float(l2) == pytest.approx(h_lim2(10.0), rel=1e-12)

    def test_grid_rows_ordered_and_consistent(self, tmp_path):
        path = tmp_path / "map.csv"
        count = emit_region_map((1.0, 100.0), (0.05, 0.9), 5, str(path))
        assert count == 25
        lines = path.read_text().splitlines()[1:]
        assert len(lines) == 25
        lims1 = []
        for line in lines:
            h, snr, region, l1, l2 = line.split(",")
            assert region in ("A", "B", "C")
            assert float(l1) < float(l2)
            lims1.append((float(snr), float(l1)))
        # one h_lim1 per snr level, decreasing in snr
        per_snr = sorted(set(lims1))
        assert all(b[1] < a[1] for a, b in zip(per_snr, per_snr[1:]))

    def test_validation(self, tmp_path):
        path = str(tmp_path / "m.csv")
        with pytest.raises(ConfigError):
            emit_region_map((10.0, 10.0), (0.2, 0.2), 0, path)
        with pytest.raises(ConfigError):
            emit_region_map((0.0, 10.0), (0.2, 0.2), 2, path)
        with pytest.raises(ConfigError):
            emit_region_map((1.0, 10.0), (0.2, 1.0), 2, path)
