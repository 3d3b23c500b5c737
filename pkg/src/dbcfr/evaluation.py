"""Identification experiment: threshold sweep, FRR/FAR/RR, and the EER point.

Genuine probes have three outcomes at a threshold t: rejected (best distance
> t, counted toward FRR), matched (accepted with the correct identity,
counted toward RR), or mismatched (accepted with the wrong identity).  The
false acceptance rate is the fraction of impostor probes whose best distance
is <= t.  The EER is located by linearly interpolating the FRR and FAR
curves between the two sweep samples that bracket their crossing.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import EvalError, IoError
from .matcher import Gallery, identify


class GenuineCounts(NamedTuple):
    matches: int
    mismatches: int
    rejections: int

    @property
    def total(self) -> int:
        return self.matches + self.mismatches + self.rejections

    @property
    def frr(self) -> float:
        return self.rejections / self.total

    @property
    def rr_percent(self) -> float:
        return 100.0 * self.matches / self.total


@dataclass(frozen=True)
class ProbeSet:
    """Feature-level probes: (subject_id, FeatureVector) pairs.

    Genuine probes belong to enrolled subjects; impostor probes belong to
    subjects with no gallery entry.
    """

    genuine: list
    impostor: list


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    frr: float
    far: float
    rr_percent: float


@dataclass(frozen=True)
class EvalReport:
    rows: list
    eer: float | None
    eer_threshold: float | None
    counts: tuple  # (genuine_probes, impostor_probes, gallery_size)


class _Scores(NamedTuple):
    genuine_dist: np.ndarray
    genuine_correct: np.ndarray
    impostor_dist: np.ndarray


def _score(probes: ProbeSet, gallery: Gallery) -> _Scores:
    """Best distances (and identity correctness) for every probe, computed once."""
    gd, gc = [], []
    for subject_id, fv in probes.genuine:
        res = identify(fv, gallery, threshold=0.0)
        gd.append(res.distance)
        gc.append(res.best_subject == subject_id)
    idist = [identify(fv, gallery, threshold=0.0).distance for _, fv in probes.impostor]
    return _Scores(
        genuine_dist=np.array(gd, dtype=np.float64),
        genuine_correct=np.array(gc, dtype=bool),
        impostor_dist=np.array(idist, dtype=np.float64),
    )


def _genuine_counts(scores: _Scores, threshold: float) -> GenuineCounts:
    accepted = scores.genuine_dist <= threshold
    matches = int(np.count_nonzero(accepted & scores.genuine_correct))
    mismatches = int(np.count_nonzero(accepted & ~scores.genuine_correct))
    rejections = int(np.count_nonzero(~accepted))
    return GenuineCounts(matches=matches, mismatches=mismatches, rejections=rejections)


def run_genuine_pass(probes: ProbeSet, gallery: Gallery, threshold: float) -> GenuineCounts:
    """Match/mismatch/rejection counts over the genuine probes at one threshold."""
    if not probes.genuine:
        raise EvalError("no genuine probes")
    return _genuine_counts(_score(ProbeSet(probes.genuine, []), gallery), threshold)


def run_impostor_pass(probes: ProbeSet, gallery: Gallery, threshold: float) -> float:
    """False acceptance rate over the impostor probes at one threshold."""
    if not probes.impostor:
        raise EvalError("no impostor probes")
    scores = _score(ProbeSet([], probes.impostor), gallery)
    return float(np.count_nonzero(scores.impostor_dist <= threshold)) / len(probes.impostor)


def sweep(probes: ProbeSet, gallery: Gallery, thresholds) -> EvalReport:
    """One SweepRow per threshold plus the interpolated EER point.

    Thresholds must be strictly increasing.  Distances are computed once and
    reused across thresholds, so a singleton sweep reproduces the single
    pass results exactly.
    """
    thresholds = [float(t) for t in thresholds]
    if not thresholds:
        raise EvalError("empty threshold grid")
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise EvalError("thresholds must be strictly increasing")
    if not probes.genuine:
        raise EvalError("no genuine probes")
    if not probes.impostor:
        raise EvalError("no impostor probes")

    scores = _score(probes, gallery)
    n_imp = len(probes.impostor)
    rows = []
    for t in thresholds:
        counts = _genuine_counts(scores, t)
        far = float(np.count_nonzero(scores.impostor_dist <= t)) / n_imp
        rows.append(SweepRow(threshold=t, frr=counts.frr, far=far, rr_percent=counts.rr_percent))

    eer, eer_threshold = interpolate_eer(rows)
    return EvalReport(
        rows=rows,
        eer=eer,
        eer_threshold=eer_threshold,
        counts=(len(probes.genuine), n_imp, len(gallery)),
    )


def interpolate_eer(rows):
    """EER from sweep rows by linear interpolation at the first FRR/FAR crossing.

    Returns ``(eer, threshold)`` or ``(None, None)`` when the curves never
    cross inside the sweep range.
    """
    diffs = [row.frr - row.far for row in rows]
    if diffs[0] == 0.0:
        return rows[0].frr, rows[0].threshold
    sign = diffs[0] > 0.0
    for i in range(1, len(rows)):
        if (diffs[i] > 0.0) == sign and diffs[i] != 0.0:
            continue
        a, b = rows[i - 1], rows[i]
        denom = (b.frr - a.frr) - (b.far - a.far)
        s = (a.far - a.frr) / denom if denom != 0.0 else 0.0
        return a.frr + (b.frr - a.frr) * s, a.threshold + (b.threshold - a.threshold) * s
    return None, None


def write_report_csv(report: EvalReport, path) -> None:
    """CSV report: header, one row per threshold, trailing EER comment."""
    lines = ["threshold,frr,far,rr_percent"]
    for row in report.rows:
        lines.append(f"{row.threshold!r},{row.frr!r},{row.far!r},{row.rr_percent!r}")
    if report.eer is None:
        lines.append("# warning: FRR and FAR curves do not cross within the sweep range")
        lines.append("# eer=nan at threshold=nan")
    else:
        lines.append(f"# eer={report.eer!r} at threshold={report.eer_threshold!r}")
    try:
        Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
    except OSError as exc:
        raise IoError(f"cannot write report {path}: {exc}") from exc


def write_plot_data(report: EvalReport, out_dir) -> None:
    """Gnuplot-ready two-column (threshold, value) files, one per curve."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, getter in (("frr", lambda r: r.frr),
                             ("far", lambda r: r.far),
                             ("rr_percent", lambda r: r.rr_percent)):
            lines = [f"{row.threshold!r} {getter(row)!r}" for row in report.rows]
            (out_dir / f"{name}.dat").write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
    except OSError as exc:
        raise IoError(f"cannot write plot data under {out_dir}: {exc}") from exc
