"""End-to-end acceptance checks.

Each test covers one headline requirement at its stated tolerance and (where
applicable) runtime bound, so a verbose run reads as a pass/fail checklist.
The quantitative recognition checks run on the frozen synthetic benchmark
(seed 1, 20 subjects, 14 images each; 15 subjects enrolled with 13 gallery
images, leaving one genuine probe per enrolled subject and 5 impostors).
"""

import time

import numpy as np
import pytest

from dbcfr.cli import main, threshold_grid
from dbcfr.dataset import make_split, synth_dataset
from dbcfr.dbc import DIRECTIONS, Cell, FeatureVector, cell_code, extract_features
from dbcfr.dwt import haar_dwt2, haar_idwt2
from dbcfr.evaluation import (
    ProbeSet,
    SweepRow,
    interpolate_eer,
    run_impostor_pass,
    sweep,
)
from dbcfr.matcher import Gallery, euclidean, identify
from dbcfr.pipeline import enroll_gallery, extract_image_features

SEED = 1
SUBJECTS = 20
IMAGES = 14
ENROLLED = 15
GALLERY_PER_SUBJECT = 13


def _benchmark_probes(manifest):
    split = make_split(manifest, enrolled_count=ENROLLED,
                       gallery_per_subject=GALLERY_PER_SUBJECT)
    gallery, skipped = enroll_gallery(split.gallery)
    assert skipped == []
    genuine = [(sid, extract_image_features(p)) for sid, p in split.genuine_probes]
    impostor = [(sid, extract_image_features(p)) for sid, p in split.impostor_probes]
    return gallery, ProbeSet(genuine=genuine, impostor=impostor)


@pytest.fixture(scope="module")
def quiet_benchmark(tmp_path_factory):
    """The benchmark dataset at noise 0.05."""
    root = tmp_path_factory.mktemp("accept05")
    manifest = synth_dataset(root, seed=SEED, n_subjects=SUBJECTS,
                             images_per_subject=IMAGES, noise_level=0.05)
    return manifest


def test_dwt_roundtrip_and_energy_on_100_random_grids():
    rng = np.random.default_rng(71)
    start = time.perf_counter()
    for _ in range(100):
        x = rng.uniform(0.0, 255.0, (100, 100))
        sb = haar_dwt2(x)
        assert np.max(np.abs(haar_idwt2(sb) - x)) <= 1e-9
        e_in = np.sum(x * x)
        e_out = sum(np.sum(b * b) for b in (sb.ll, sb.lh, sb.hl, sb.hh))
        assert abs(e_out - e_in) <= 1e-6 * e_in
    assert time.perf_counter() - start < 5.0


def test_dwt_hand_case_is_exact():
    sb = haar_dwt2(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert sb.ll[0, 0] == 5.0
    assert sb.hl[0, 0] == -1.0
    assert sb.lh[0, 0] == -2.0
    assert sb.hh[0, 0] == 0.0


def test_dbc_codes_match_brute_force_on_1000_cells():
    step = {0: (0, -1), 45: (-1, 1), 90: (-1, 0), 135: (-1, -1)}
    ring = [(0, 0), (0, -1), (-1, -1), (-1, 0), (-1, 1),
            (0, 1), (1, 1), (1, 0), (1, -1)]

    def brute_force(values, direction):
        dr, dc = step[direction]
        bits = ""
        for pr, pc in ring:
            i, j = 2 + pr, 2 + pc
            bits += "1" if values[i, j] - values[i + dr, j + dc] > 0.0 else "0"
        return int(bits, 2)

    rng = np.random.default_rng(72)
    start = time.perf_counter()
    for _ in range(1000):
        values = rng.uniform(0.0, 255.0, (5, 5))
        cell = Cell(values=values, row_index=0, col_index=0)
        for direction in DIRECTIONS:
            assert cell_code(cell, direction).decimal == brute_force(values, direction)
    assert time.perf_counter() - start < 5.0


def test_dbc_invariances_hold_over_200_trials():
    rng = np.random.default_rng(73)
    i, j = np.mgrid[0:5, 0:5]
    rising = (10.0 * i + j).astype(np.float64)
    for _ in range(200):
        constant = extract_features(np.full((50, 50), rng.uniform(1.0, 250.0)))
        assert not constant.coeffs.any()

        ll = rng.uniform(0.0, 255.0, (50, 50))
        base = extract_features(ll).coeffs
        scaled = extract_features(rng.uniform(0.5, 3.0) * ll
                                  + rng.uniform(-50.0, 50.0)).coeffs
        np.testing.assert_array_equal(scaled, base)

        r, c = (int(v) for v in rng.integers(0, 10, size=2))
        k = 10 * r + c
        edited = ll.copy()
        edited[5 * r:5 * r + 5, 5 * c:5 * c + 5] = rising if base[k] != 1.0 else 0.0
        after = extract_features(edited).coeffs
        assert after[k] != base[k]
        unchanged = np.ones(100, dtype=bool)
        unchanged[k] = False
        np.testing.assert_array_equal(after[unchanged], base[unchanged])


def test_identify_matches_exhaustive_argmin_on_100_galleries():
    rng = np.random.default_rng(74)
    for _ in range(100):
        entries = [
            (f"s{k // 5:02d}", f"i{k % 5}",
             FeatureVector(coeffs=rng.uniform(0.0, 1.0, 100)))
            for k in range(50)
        ]
        gallery = Gallery(entries)
        probe = FeatureVector(coeffs=rng.uniform(0.0, 1.0, 100))
        dists = [euclidean(probe, fv) for _, _, fv in entries]
        best = int(np.argmin(dists))
        result = identify(probe, gallery, threshold=0.6)
        assert (result.best_subject, result.best_image) == entries[best][:2]

        decisions = [identify(probe, gallery, threshold=t).accepted
                     for t in sorted(rng.uniform(0.0, 3.0, 7))]
        assert decisions == sorted(decisions)


def test_metrics_match_hand_enumeration_at_three_thresholds():
    def fv(first=0.0, second=0.0):
        coeffs = np.zeros(100)
        coeffs[0], coeffs[1] = first, second
        return FeatureVector(coeffs=coeffs)

    gallery = Gallery([("a", "0", fv(0.0)), ("b", "0", fv(0.5))])
    probes = ProbeSet(
        genuine=[("a", fv(0.1)), ("b", fv(0.55)), ("b", fv(0.2))],
        impostor=[("x", fv(0.0, 0.1)), ("y", fv(0.0, 1.0))],
    )
    report = sweep(probes, gallery, [0.07, 0.15, 0.5])
    by_threshold = {row.threshold: row for row in report.rows}
    assert by_threshold[0.07] == SweepRow(0.07, 2 / 3, 0.0, 100.0 / 3)
    assert by_threshold[0.15] == SweepRow(0.15, 1 / 3, 0.5, 200.0 / 3)
    assert by_threshold[0.5] == SweepRow(0.5, 0.0, 0.5, 200.0 / 3)


def test_sweep_curves_have_the_expected_shape_at_noise_015(tmp_path):
    start = time.perf_counter()
    manifest = synth_dataset(tmp_path / "noisy", seed=SEED, n_subjects=SUBJECTS,
                             images_per_subject=IMAGES, noise_level=0.15)
    gallery, probes = _benchmark_probes(manifest)
    report = sweep(probes, gallery, threshold_grid(0.0, 1.2, 0.05))

    frr = [row.frr for row in report.rows]
    far = [row.far for row in report.rows]
    assert all(b <= a for a, b in zip(frr, frr[1:]))  # FRR non-increasing
    assert all(b >= a for a, b in zip(far, far[1:]))  # FAR non-decreasing
    assert report.rows[0].frr == 1.0
    assert report.rows[0].far == 0.0
    assert report.rows[0].rr_percent == 0.0

    if report.rows[-1].far < 1.0:
        worst = max(identify(fvec, gallery, 0.0).distance
                    for _, fvec in probes.impostor)
        assert run_impostor_pass(probes, gallery, worst) == 1.0
    assert time.perf_counter() - start < 60.0


def test_best_threshold_recognition_rate_is_at_least_95(quiet_benchmark):
    gallery, probes = _benchmark_probes(quiet_benchmark)
    report = sweep(probes, gallery, threshold_grid(0.0, 1.2, 0.05))
    assert max(row.rr_percent for row in report.rows) >= 95.0


def test_eer_interpolation_matches_hand_solution_within_1e9():
    rows = [
        SweepRow(threshold=0.0, frr=1.0, far=0.0, rr_percent=0.0),
        SweepRow(threshold=0.4, frr=0.7, far=0.1, rr_percent=30.0),
        SweepRow(threshold=0.8, frr=0.2, far=0.65, rr_percent=80.0),
        SweepRow(threshold=1.2, frr=0.05, far=0.9, rr_percent=95.0),
    ]
    eer, threshold = interpolate_eer(rows)
    # the segments cross at s = 4/7 of the way from 0.4 to 0.8
    assert abs(eer - 2.9 / 7) <= 1e-9
    assert abs(threshold - 4.4 / 7) <= 1e-9


def test_enroll_and_evaluate_are_byte_deterministic(quiet_benchmark, tmp_path,
                                                    capsys):
    root = str(quiet_benchmark.source_root)
    outputs = []
    for tag in ("one", "two"):
        gallery_path = tmp_path / f"gallery_{tag}.txt"
        report_path = tmp_path / f"report_{tag}.csv"
        assert main(["enroll", root, "--out", str(gallery_path),
                     "--enrolled", str(ENROLLED),
                     "--gallery-per-subject", str(GALLERY_PER_SUBJECT)]) == 0
        assert main(["evaluate", root, "--out", str(report_path),
                     "--enrolled", str(ENROLLED),
                     "--gallery-per-subject", str(GALLERY_PER_SUBJECT)]) == 0
        outputs.append((gallery_path.read_bytes(), report_path.read_bytes()))
    capsys.readouterr()
    assert outputs[0] == outputs[1]
