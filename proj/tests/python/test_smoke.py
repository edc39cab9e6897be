import json
import math
import os
import subprocess
import sys

import pytest

import r2a


def test_softmax_distribution():
    p = r2a.softmax([0.0, math.log(3.0)])
    assert p[0] == pytest.approx(0.25, abs=1e-12)
    assert p[1] == pytest.approx(0.75, abs=1e-12)

    masked = r2a.softmax([0.0, 0.0, 0.0], [True, False, True])
    assert masked == [0.5, 0.0, 0.5]


def test_soft_margin_cosine_distance():
    assert r2a.soft_margin_cosine_distance([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert r2a.soft_margin_cosine_distance([1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.9)
    with pytest.raises(Exception):
        r2a.soft_margin_cosine_distance([0.0, 0.0], [1.0, 0.0])


def test_rationale_frequency_counts():
    freq = r2a.rationale_frequency(
        tokens=[[2, 2, 3], [2, 2]],
        rationales=[[1, 0, 1], [1, 0]],
        vocab_size=4,
    )
    assert freq[2] == pytest.approx(0.5)
    assert freq[3] == pytest.approx(1.0)
    assert freq[0] == 0.0


def test_assign_bins_balanced():
    bins = r2a.assign_bins([f"t{i}" for i in range(248)], 100, seed=3)
    counts = [0] * 100
    for b in bins:
        counts[b] += 1
    assert min(counts) >= 2 and max(counts) <= 3


def test_normalize_and_distance():
    assert r2a.normalize_mask([1, 0, 1, 0]) == [0.5, 0.0, 0.5, 0.0]
    d = r2a.attention_distance([[0.5, 0.5]], [[1.0, 0.0]])
    assert d == pytest.approx(1 - 1 / math.sqrt(2) - 0.1, abs=1e-9)


def test_pipeline_synth_roundtrip(tmp_path):
    cfg = tmp_path / "run.conf"
    cfg.write_text("")
    overrides = {
        "output_dir": str(tmp_path / "out"),
        "seed": "5",
        "synth.vocab_size": "80",
        "synth.num_aspects": "3",
        "synth.keywords_per_aspect": "2",
        "synth.sentiment_per_polarity": "3",
        "synth.source_train": "12",
        "synth.source_dev": "4",
        "synth.target_train": "8",
        "synth.target_dev": "4",
        "synth.target_test": "4",
        "synth.target_unlabeled": "8",
        "synth.oracle_pool": "6",
    }
    assert r2a.run_with_overrides("synth", str(cfg), overrides) == 0
    train = (tmp_path / "out" / "synth" / "target_train.jsonl").read_text().splitlines()
    assert len(train) == 8
    row = json.loads(train[0])
    assert set(row) == {"tokens", "label", "rationale"}
    assert len(row["rationale"]) == len(row["tokens"])

    # unknown commands are validation failures, not crashes
    assert r2a.run("frobnicate", str(cfg)) == 1


def test_cli_binary_available():
    exe = os.environ.get("R2A_CLI")
    if not exe or not os.path.exists(exe):
        pytest.skip("R2A_CLI not set")
    out = subprocess.run([exe, "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "synth" in out.stdout
