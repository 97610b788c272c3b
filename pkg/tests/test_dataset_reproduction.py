"""Dataset-reproduction suite (optional).

These checks need the released post-editing dataset, converted to this
package's segments.tsv / sessions.tsv layout, with the directory passed via
the PE_RANK_DATASET_DIR environment variable. Tolerances are deliberately
loose: the upstream scores were computed with a different toolkit, so exact
parity is not claimed, and the METEOR tolerance is the loosest because this
package's METEOR uses exact matching only.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import pytest

from pe_rank.cli import main

DATASET_DIR = os.environ.get("PE_RANK_DATASET_DIR")

pytestmark = pytest.mark.skipif(
    not DATASET_DIR,
    reason="set PE_RANK_DATASET_DIR to a directory holding segments.tsv and sessions.tsv",
)


@pytest.fixture(scope="module")
def report(tmp_path_factory) -> dict:
    out_dir = tmp_path_factory.mktemp("dataset-report")
    dataset = Path(DATASET_DIR)
    code = main(
        [
            "report",
            "--segments",
            str(dataset / "segments.tsv"),
            "--sessions",
            str(dataset / "sessions.tsv"),
            "--out-dir",
            str(out_dir),
        ]
    )
    assert code == 0
    return json.loads((out_dir / "report.json").read_text(encoding="utf-8"))


def _stat(report: dict, annotator: str, metric: str) -> float:
    row = next(
        r
        for r in report["stats_tables"]
        if r["annotator"] == annotator and r["metric"] == metric
    )
    return row["mean"]


def _rank(report: dict, annotator: str, metric: str) -> dict:
    return next(
        r for r in report["ranking_table"][annotator]["rows"] if r["metric"] == metric
    )


def test_criterion_8_pe_based_means(report):
    assert _stat(report, "ALL", "HTER") == pytest.approx(0.29, abs=0.02)
    assert _stat(report, "ALL", "HBLEU") == pytest.approx(0.54, abs=0.03)
    assert _stat(report, "ALL", "KEYS_PER_CHAR") == pytest.approx(0.46, abs=0.02)
    assert _stat(report, "ALL", "HMETEOR") == pytest.approx(0.69, abs=0.08)
    print("ACCEPTANCE PASS: 8 PE-based weighted means within tolerance")


def test_criterion_9_reference_based_means(report):
    assert _stat(report, "ALL", "TER") == pytest.approx(0.57, abs=0.02)
    assert _stat(report, "ALL", "BLEU") == pytest.approx(0.24, abs=0.02)
    assert _stat(report, "ALL", "DA") == pytest.approx(-0.02, abs=0.01)
    assert _stat(report, "ALL", "METEOR") == pytest.approx(0.42, abs=0.08)
    print("ACCEPTANCE PASS: 9 reference-based weighted means within tolerance")


def test_criterion_10_ranking_scores(report):
    assert _rank(report, "ALL", "HTER")["rho"] == pytest.approx(0.69, abs=0.03)
    assert _rank(report, "ALL", "KEYS_PER_CHAR")["rho"] == pytest.approx(0.76, abs=0.02)
    assert _rank(report, "ALL", "DA")["rho"] == pytest.approx(0.52, abs=0.02)
    assert _rank(report, "ALL", "BLEU")["rho"] == pytest.approx(0.33, abs=0.03)
    assert _rank(report, "ALL", "PETPW")["satra"] == pytest.approx(0.39, abs=0.03)
    print("ACCEPTANCE PASS: 10 ALL-column rho/SATRA values within tolerance")


def test_criterion_11_tail_group_ordering(report):
    at_500 = {
        r["metric"]: r["overlap"] for r in report["tails"]["best"] if r["cut"] == 500
    }
    assert at_500["KEYS_PER_CHAR"] >= at_500["HTER"]
    assert at_500["HTER"] > at_500["DA"]
    assert at_500["DA"] > at_500["BLEU"]
    print("ACCEPTANCE PASS: 11 tail overlap group ordering reproduced at cut 500")


def test_criterion_12_annotator_clusters_informational(report):
    expected = [["ANN0", "ANN2", "ANN4"], ["ANN1"], ["ANN3"]]
    clusters = report["clusters"]
    status = "matches" if clusters == expected else "differs from"
    # informational only: the clustering rule is a recorded open choice
    print(
        f"ACCEPTANCE INFO: 12 KS clustering {status} the published grouping: {clusters}"
    )
