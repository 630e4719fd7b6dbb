import math

import numpy as np
import pytest

import cellfree

TINY = """
[network]
num_aps = 9
antennas_per_ap = 2
num_ues = 4
area_side_km = 0.3

[frame]
coherence_len = 200
pilot_len = 3
ul_data_len = 100
dl_data_len = 90

[cluster]
neighbor_radius_km = 0.1

[campaign]
seed = 5
schemes = LP-MMSE, MR
mode = distributed
genie = true
num_setups = 2
num_realizations = 10
"""


@pytest.fixture
def cfg():
    return cellfree.parse_config_text(TINY)


def test_config_round_trip(cfg):
    assert cfg.num_aps == 9
    assert cfg.schemes == ["LP-MMSE", "MR"]
    assert cfg.mode == "distributed"
    again = cellfree.parse_config_text(cfg.to_text())
    assert again == cfg
    assert again.hash() == cfg.hash()


def test_config_errors():
    with pytest.raises(cellfree.ConfigError, match="campaign.seed"):
        cellfree.parse_config_text(TINY.replace("seed = 5", ""))
    with pytest.raises(ValueError):
        cellfree.parse_config_text(TINY + "\n[network]\nbogus = 1\n")


def test_setup_structure(cfg):
    s = cellfree.build_setup(cfg, 0)
    assert s.beta.shape == (4, 9)
    assert s.check_invariants() == []
    for k, aps in enumerate(s.serving_aps):
        assert s.master_of[k] in aps
    for ues in s.served_by_ap:
        assert len(ues) <= cfg.pilot_len
    loads = s.fronthaul("distributed", cfg)
    assert all(f["pilot"] == 0 for f in loads)
    assert all(f["total"] <= 190 * cfg.pilot_len for f in loads)
    est, comb = s.multiplications("MR", 0)
    assert est == (2 * 3 + 4) * len(s.serving_aps[0])
    assert comb == 0


def test_closed_forms_and_duality(cfg):
    s = cellfree.build_setup(cfg, 1)
    ul = s.ul_se_mr_closed_form(0.5)
    dl = s.dl_se_mr_closed_form(cfg.ap_power_w, 0.45)
    assert len(ul) == len(dl) == 4
    assert all(x > 0 and math.isfinite(x) for x in ul + dl)
    rho = s.mr_duality_power(cfg.noise_ul_w, cfg.noise_dl_w)
    assert sum(rho) == pytest.approx(4 * cfg.ue_power_w, rel=1e-9)


def test_campaign(cfg, tmp_path):
    a = cellfree.run_campaign(cfg, threads=1, out=tmp_path)
    b = cellfree.run_campaign(cfg, threads=2)
    assert np.array_equal(a["se"], b["se"])
    assert len(a["se"]) == 2 * 3 * 8
    assert set(a["mean_se"]) == {"lp-mmse_ul", "lp-mmse_dl", "lp-mmse_dl-genie", "mr_ul", "mr_dl", "mr_dl-genie"}
    assert (tmp_path / "se.csv").exists()
    assert (tmp_path / "metadata.json").exists()


def test_scenarios():
    assert "smoke" in cellfree.scenario_names()
    assert cellfree.sign_test_threshold(20) == 15
    r = cellfree.run_scenario("smoke", setups=1, realizations=4)
    labels = {c["label"] for c in r["columns"]}
    assert {"MMSE (All)", "P-MMSE", "LP-MMSE", "MR", "MR (All)", "L-MMSE (All)"} <= labels
    with pytest.raises(ValueError):
        cellfree.run_scenario("missing")
