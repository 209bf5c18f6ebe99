# Copyright 2026 The relaysim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import csv
import json
import math
import os
import subprocess

import pytest

import relaysim

CLI = os.environ.get("RELAYSIM_CLI")

SMALL = {
    "relays": 2,
    "antennas": 2,
    "snr_db": 10,
    "schemes": ["mmse", "hd_brs"],
    "slots": 50,
    "pretraining_slots": 20,
    "repetitions": 2,
}


def test_schemes():
    names = relaysim.schemes()
    assert "optimal" in names and "sfd_mmrs_iri" in names
    assert len(names) == 11


def test_beamform_zf_nulls_interference():
    h_s = [1 + 0.5j, -0.3j]
    h_d = [0.2, 1 - 1j]
    h_rr = [[1, 0.5j], [0.3, -1]]
    r = relaysim.beamform("zf", h_s, h_d, h_rr, 100.0, 100.0)
    u, w = r["u"], r["w"]
    leak = sum(u[a].conjugate() * h_rr[a][b] * w[b] for a in range(2) for b in range(2))
    assert abs(leak) < 1e-10
    assert r["gamma_s"] == pytest.approx(100.0 * sum(abs(x) ** 2 for x in h_s))

    opt = relaysim.beamform("optimal", h_s, h_d, h_rr, 100.0, 100.0, alpha=0.5)
    def obj(x):
        return 0.5 * math.log2(1 + x["gamma_s"]) + 0.5 * math.log2(1 + x["gamma_d"])
    assert obj(opt) >= obj(r) - 1e-9
    assert 0.0 <= opt["beta"] <= 1.0

    with pytest.raises(ValueError):
        relaysim.beamform("nope", h_s, h_d, h_rr, 1.0, 1.0)


def test_episode_conservation():
    cfg = relaysim.NetworkConfig.iid(3, 2, 20.0)
    alpha = relaysim.run_pretraining("sinr", cfg, slots=100)
    assert len(alpha) == 3 and all(0.0 <= a <= 1.0 for a in alpha)
    m = relaysim.run_episode("sinr", cfg, alpha, slots=200)
    assert m["slots"] == 200
    assert abs((m["avg_rate_s"] - m["avg_rate_d"]) * 200 - m["residual_bits"]) < 1e-6
    assert m["delay_applicable"]


def test_channel_shapes():
    cfg = relaysim.NetworkConfig.iid(2, 3, 0.0)
    ch = relaysim.draw_channel(cfg, 5)
    assert len(ch["h_s"]) == 2 and len(ch["h_s"][0]) == 3
    assert set(ch["h_rr"]) == {(0, 1), (1, 0)}
    assert relaysim.draw_channel(cfg, 5)["h_s"] == ch["h_s"]


def test_config_round_trip_and_errors():
    resolved = json.loads(relaysim.parse_config(json.dumps(SMALL)))
    assert resolved["buffer_max"] == "inf"
    assert resolved["sweep"] == {"axis": "snr", "points": [10.0]}
    assert relaysim.parse_config(json.dumps(resolved)) == relaysim.parse_config(json.dumps(SMALL))
    with pytest.raises(relaysim.ConfigError, match="colour"):
        relaysim.parse_config(json.dumps({**SMALL, "colour": 3}))

    text = relaysim.run_config(json.dumps(SMALL))
    assert text == relaysim.run_config(json.dumps(SMALL))
    rows = list(csv.DictReader(text.splitlines()))
    assert len(rows) == 4
    assert {r["scheme"] for r in rows} == {"mmse", "hd_brs"}


@pytest.mark.skipif(not CLI, reason="RELAYSIM_CLI not set")
def test_cli(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(SMALL))
    out = tmp_path / "out"
    r = subprocess.run([CLI, "run", "--config", str(cfg), "--out", str(out)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert "wrote 4 rows" in r.stdout
    manifest = json.loads((out / "run-manifest.json").read_text())
    assert manifest["rows"] == 4
    first = (out / "results.csv").read_bytes()

    r = subprocess.run([CLI, "run", "--config", str(cfg), "--out", str(out), "--threads", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert (out / "results.csv").read_bytes() == first

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({**SMALL, "schemes": ["zzz"]}))
    r = subprocess.run([CLI, "run", "--config", str(bad)], capture_output=True, text=True)
    assert r.returncode == 2
    assert "zzz" in r.stderr

    r = subprocess.run([CLI, "run"], capture_output=True, text=True)
    assert r.returncode == 2

    blocker = tmp_path / "file"
    blocker.write_text("")
    r = subprocess.run([CLI, "run", "--config", str(cfg), "--out", str(blocker / "x")],
                       capture_output=True, text=True)
    assert r.returncode == 1

    r = subprocess.run([CLI, "schemes"], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.split() == relaysim.schemes()
