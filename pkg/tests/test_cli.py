"""Command-line interface: subcommands, config files, exit codes."""

import pytest

from dbcfr.cli import main, threshold_grid
from dbcfr.errors import ConfigError
from dbcfr.matcher import GALLERY_HEADER


def test_threshold_grid_covers_default_range():
    grid = threshold_grid(0.0, 1.2, 0.05)
    assert len(grid) == 25
    assert grid[0] == 0.0
    assert grid[-1] == 1.2
    assert grid[3] == 0.15  # accumulated float error is rounded away
    assert threshold_grid(0.5, 0.5, 0.1) == [0.5]
    assert threshold_grid(0.0, 0.55, 0.2) == [0.0, 0.2, 0.4]


def test_threshold_grid_contracts():
    with pytest.raises(ConfigError):
        threshold_grid(0.0, 1.0, 0.0)
    with pytest.raises(ConfigError):
        threshold_grid(1.0, 0.5, 0.1)
    with pytest.raises(ConfigError):
        threshold_grid(0.0, 1e-12, 1e-13)  # unresolvable at 12 decimals


def test_synth_writes_dataset(tmp_path, capsys):
    out = tmp_path / "data"
    rc = main(["synth", "--out", str(out), "--seed", "4", "--subjects", "2",
               "--images", "3", "--noise", "0.1"])
    assert rc == 0
    assert "wrote 6 images for 2 subjects" in capsys.readouterr().out
    assert sorted(p.name for p in out.iterdir()) == ["manifest.json", "s000", "s001"]
    assert len(list((out / "s000").glob("*.png"))) == 3


def test_synth_validates_arguments(tmp_path, capsys):
    assert main(["synth", "--out", str(tmp_path / "x"), "--subjects", "0"]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["synth", "--subjects", "2"]) == 2  # --out is required
    assert "requires --out" in capsys.readouterr().err


def test_enroll_identify_roundtrip(small_dataset, tmp_path, capsys):
    root = str(small_dataset.source_root)
    gallery_path = tmp_path / "gallery.txt"
    rc = main(["enroll", root, "--out", str(gallery_path),
               "--gallery-per-subject", "2"])
    assert rc == 0
    assert "enrolled 8 images from 4 subjects" in capsys.readouterr().out
    assert gallery_path.read_text().splitlines()[0] == GALLERY_HEADER

    enrolled_image = small_dataset.subjects[0].image_paths[0]
    rc = main(["identify", str(gallery_path), str(enrolled_image),
               "--threshold", "0.05"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "best match: s000" in out
    assert "decision: accept" in out

    probe = small_dataset.subjects[0].image_paths[3]  # not enrolled
    rc = main(["identify", str(gallery_path), str(probe), "--threshold", "0.0"])
    assert rc == 1
    assert "decision: reject" in capsys.readouterr().out


def test_enroll_is_deterministic(small_dataset, tmp_path):
    root = str(small_dataset.source_root)
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["enroll", root, "--out", str(a), "--gallery-per-subject", "3"]) == 0
    assert main(["enroll", root, "--out", str(b), "--gallery-per-subject", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_enroll_skips_or_fails_on_bad_images(tmp_path, capsys):
    assert main(["synth", "--out", str(tmp_path / "d"), "--seed", "8",
                 "--subjects", "2", "--images", "3", "--noise", "0.05"]) == 0
    capsys.readouterr()
    bad = tmp_path / "d" / "s000" / "i00.png"
    bad.write_bytes(b"\x89PNG\r\n\x1a\ngarbage")
    (tmp_path / "d" / "manifest.json").unlink()  # rescan the tree

    rc = main(["enroll", str(tmp_path / "d"), "--out", str(tmp_path / "g.txt"),
               "--gallery-per-subject", "2"])
    captured = capsys.readouterr()
    assert rc == 0
    assert "skipped" in captured.err
    assert "enrolled 3 images" in captured.out

    rc = main(["enroll", str(tmp_path / "d"), "--out", str(tmp_path / "h.txt"),
               "--gallery-per-subject", "2", "--strict"])
    assert rc == 2
    assert "--strict" in capsys.readouterr().err
    assert not (tmp_path / "h.txt").exists()


def test_identify_error_exit_codes(small_dataset, tmp_path, capsys):
    img = str(small_dataset.subjects[0].image_paths[0])
    assert main(["identify", str(tmp_path / "absent.txt"), img]) == 2
    assert "error:" in capsys.readouterr().err


def test_identify_dump_subbands(small_dataset, tmp_path, capsys):
    root = str(small_dataset.source_root)
    gallery_path = tmp_path / "g.txt"
    main(["enroll", root, "--out", str(gallery_path), "--gallery-per-subject", "2"])
    dump = tmp_path / "bands"
    main(["identify", str(gallery_path),
          str(small_dataset.subjects[1].image_paths[0]),
          "--dump-subbands", str(dump)])
    capsys.readouterr()
    assert sorted(p.name for p in dump.iterdir()) == [
        "hh.pgm", "hl.pgm", "lh.pgm", "ll.pgm"
    ]


def test_evaluate_report(small_dataset, tmp_path, capsys):
    root = str(small_dataset.source_root)
    report = tmp_path / "report.csv"
    plots = tmp_path / "plots"
    rc = main(["evaluate", root, "--out", str(report), "--enrolled", "3",
               "--gallery-per-subject", "2", "--grid-start", "0", "--grid-stop",
               "1.2", "--grid-step", "0.2", "--plot-data", str(plots)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "gallery: 6 entries; probes: 3 genuine, 1 impostor" in out
    assert "eer:" in out
    lines = report.read_text().splitlines()
    assert lines[0] == "threshold,frr,far,rr_percent"
    assert sum(not l.startswith("#") for l in lines) == 1 + 7
    assert (plots / "far.dat").read_text().count("\n") == 7

    again = tmp_path / "again.csv"
    main(["evaluate", root, "--out", str(again), "--enrolled", "3",
          "--gallery-per-subject", "2", "--grid-start", "0", "--grid-stop",
          "1.2", "--grid-step", "0.2"])
    capsys.readouterr()
    assert again.read_bytes() == report.read_bytes()


def test_evaluate_rejects_degenerate_split(small_dataset, tmp_path, capsys):
    root = str(small_dataset.source_root)
    # all four subjects enrolled leaves no impostors
    rc = main(["evaluate", root, "--out", str(tmp_path / "r.csv"),
               "--gallery-per-subject", "2"])
    assert rc == 2
    assert "degenerate split" in capsys.readouterr().err


def test_config_file_supplies_and_flags_override(tmp_path, capsys):
    cfg = tmp_path / "synth.cfg"
    cfg.write_text(
        "# synthetic dataset settings\n"
        f"out = {tmp_path / 'made'}\n"
        "subjects = 3\n"
        "images = 2\n"
        "noise = 0.05\n"
    )
    rc = main(["synth", "--config", str(cfg), "--subjects", "2"])
    assert rc == 0
    assert "wrote 4 images for 2 subjects" in capsys.readouterr().out
    assert sorted(p.name for p in (tmp_path / "made").iterdir()) == [
        "manifest.json", "s000", "s001"
    ]


def test_config_file_validation(tmp_path, capsys):
    bad_key = tmp_path / "bad.cfg"
    bad_key.write_text("volume = 11\n")
    assert main(["synth", "--config", str(bad_key), "--out",
                 str(tmp_path / "x")]) == 2
    assert "unknown setting" in capsys.readouterr().err

    bad_value = tmp_path / "badval.cfg"
    bad_value.write_text("subjects = many\n")
    assert main(["synth", "--config", str(bad_value), "--out",
                 str(tmp_path / "y")]) == 2
    assert "bad value" in capsys.readouterr().err

    no_eq = tmp_path / "noeq.cfg"
    no_eq.write_text("subjects\n")
    assert main(["synth", "--config", str(no_eq), "--out",
                 str(tmp_path / "z")]) == 2
    assert "key=value" in capsys.readouterr().err
