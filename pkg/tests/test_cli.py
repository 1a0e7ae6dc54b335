import json

import numpy as np
import pytest
from PIL import Image

from entroscale.cli import ingest_images, main
from entroscale.geometry import cloud_from_csv, cloud_from_json
from entroscale.graph import DuplicatePoints


def run(args):
    return main([str(a) for a in args])


class TestGenerate:
    def test_swiss_roll_row_count(self, tmp_path):
        out = tmp_path / "roll.csv"
        assert run(["generate", "--shape", "swiss_roll", "--n", 800,
                    "--seed", 1, "--out", out]) == 0
        cloud = cloud_from_csv(out)
        assert cloud.n == 800 and cloud.dim == 3

    def test_determinism_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        flags = ["generate", "--shape", "circles", "--n", 500, "--sd", 0.01,
                 "--seed", 7]
        run(flags + ["--out", a])
        run(flags + ["--out", b])
        assert a.read_bytes() == b.read_bytes()

    def test_even_label_allocation(self, tmp_path):
        out = tmp_path / "c.csv"
        run(["generate", "--shape", "circles", "--n", 1000, "--sd", 0,
             "--seed", 3, "--out", out])
        cloud = cloud_from_csv(out)
        assert np.bincount(cloud.labels).tolist() == [334, 333, 333]

    def test_json_format(self, tmp_path):
        out = tmp_path / "c.json"
        run(["generate", "--shape", "trefoil", "--n", 50, "--seed", 2,
             "--out", out, "--format", "json"])
        cloud = cloud_from_json(out)
        assert cloud.n == 50 and cloud.seed == 2


class TestCluster:
    def test_outputs_and_determinism(self, tmp_path, capsys):
        gen = tmp_path / "cloud.csv"
        run(["generate", "--shape", "circles", "--n", 90, "--sd", 0.01,
             "--seed", 5, "--out", gen])
        stem_a, stem_b = tmp_path / "runa", tmp_path / "runb"
        flags = ["cluster", "--input", gen, "--grid-size", 60]
        assert run(flags + ["--out", stem_a]) == 0
        assert run(flags + ["--out", stem_b]) == 0

        profile = (tmp_path / "runa_profile.csv").read_text().splitlines()
        assert profile[1] == "r,entropy"
        assert len(profile) == 62  # comment + header + 60 rows

        doc = json.loads((tmp_path / "runa_assignment.json").read_text())
        assert doc["k"] >= 1
        assert len(doc["labels"]) == 90
        assert doc["entropy_profile_ref"].endswith("runa_profile.csv")
        assert "smallest_positive_eigenvalue" in doc["diagnostics"]
        assert (tmp_path / "runa_confusion.csv").exists()

        for suffix in ("_profile.csv", "_confusion.csv"):
            assert (tmp_path / f"runa{suffix}").read_bytes() == \
                (tmp_path / f"runb{suffix}").read_bytes()
        a = json.loads((tmp_path / "runa_assignment.json").read_text())
        b = json.loads((tmp_path / "runb_assignment.json").read_text())
        a.pop("entropy_profile_ref"), b.pop("entropy_profile_ref")
        assert a == b

    def test_single_circle_reports_one_cluster(self, tmp_path):
        out = tmp_path / "corona.csv"
        run(["generate", "--shape", "corona", "--n", 150, "--sd", 0,
             "--seed", 4, "--out", out])
        stem = tmp_path / "run"
        assert run(["cluster", "--input", out, "--grid-size", 80,
                    "--out", stem]) == 0
        doc = json.loads((tmp_path / "run_assignment.json").read_text())
        assert doc["k"] == 1

    def test_duplicate_points_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("x0,x1\n0.0,0.0\n0.0,0.0\n1.0,1.0\n")
        code = run(["cluster", "--input", bad, "--out", tmp_path / "x"])
        assert code == 2
        err = capsys.readouterr().err
        assert "duplicate points" in err and "(0,1)" in err

    def test_large_n_guard(self, tmp_path, capsys):
        with pytest.raises(SystemExit):
            run(["cluster", "--shape", "circles", "--n", 3500,
                 "--out", tmp_path / "x"])


class TestTrials:
    def test_single_trial_single_column(self, tmp_path):
        out = tmp_path / "trials.csv"
        assert run(["trials", "--shape", "circles", "--n", 60, "--sd", 0.01,
                    "--trials", 1, "--seed", 2, "--grid-size", 40,
                    "--out", out]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "sd,k1,k2,k3,k4plus"
        pcts = [float(v) for v in lines[1].split(",")[1:]]
        assert sum(pcts) == pytest.approx(100.0)
        assert 100.0 in pcts

    def test_multiple_sds_and_determinism(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        flags = ["trials", "--shape", "circles", "--n", 60, "--trials", 3,
                 "--seed", 0, "--grid-size", 40, "--sd-list", 0.01, 0.05]
        run(flags + ["--out", a])
        run(flags + ["--out", b])
        assert a.read_bytes() == b.read_bytes()
        assert len(a.read_text().splitlines()) == 3


class TestReduce:
    def test_trefoil_embedding_csv(self, tmp_path, capsys):
        stem = tmp_path / "tref"
        assert run(["reduce", "--shape", "trefoil", "--n", 200, "--sd", 0,
                    "--seed", 1, "--k", 2, "--grid-size", 80,
                    "--out", stem]) == 0
        lines = (tmp_path / "tref_embedding.csv").read_text().splitlines()
        assert lines[0] == "e0,e1"
        assert len(lines) == 201
        out = capsys.readouterr().out
        assert "neighbor_overlap_10nn=" in out

    def test_k_too_large_names_available(self, tmp_path, capsys):
        code = run(["reduce", "--shape", "corona", "--n", 30, "--sd", 0,
                    "--seed", 1, "--k", 40, "--grid-size", 30,
                    "--out", tmp_path / "x"])
        assert code == 1
        assert "only" in capsys.readouterr().err


class TestKmeans:
    def test_blobs(self, tmp_path, capsys):
        # two separated blobs written by hand
        rng = np.random.default_rng(0)
        pts = np.vstack([rng.normal(0, 0.3, (20, 2)), rng.normal(8, 0.3, (20, 2))])
        cloud_path = tmp_path / "blobs.csv"
        with open(cloud_path, "w") as f:
            f.write("x0,x1,label\n")
            for i, p in enumerate(pts):
                f.write(f"{p[0]!r},{p[1]!r},{0 if i < 20 else 1}\n")
        assert run(["kmeans", "--input", cloud_path, "--k", 2, "--seed", 3,
                    "--out", tmp_path / "km"]) == 0
        doc = json.loads((tmp_path / "km_assignment.json").read_text())
        assert doc["k"] == 2 and doc["r_hat"] is None
        assert doc["diagnostics"]["mistakes"] == 0
        assert (tmp_path / "km_confusion.csv").exists()


def write_gray(path, arr):
    Image.fromarray(arr.astype(np.uint8), mode="L").save(path)


class TestIngestImages:
    def test_ingest_directory(self, tmp_path):
        img_dir = tmp_path / "imgs"
        img_dir.mkdir()
        rng = np.random.default_rng(1)
        for obj in (1, 2):
            for shot in range(3):
                base = np.full((8, 6), 40 * obj)
                base += rng.integers(0, 20, size=(8, 6))
                write_gray(img_dir / f"obj{obj}__{shot}.png", base)
        out = tmp_path / "cloud.csv"
        assert run(["ingest-images", "--input", img_dir, "--out", out]) == 0
        cloud = cloud_from_csv(out)
        assert cloud.n == 6 and cloud.dim == 48
        assert sorted(np.unique(cloud.labels).tolist()) == [1, 2]
        # raw 0..255 intensities, row-major flattening
        first = sorted(img_dir.iterdir())[0]
        arr = np.asarray(Image.open(first), dtype=float).reshape(-1)
        assert np.array_equal(cloud.points[0], arr)

    def test_mixed_dimensions_rejected(self, tmp_path):
        img_dir = tmp_path / "imgs"
        img_dir.mkdir()
        write_gray(img_dir / "obj1_a.png", np.zeros((4, 4)))
        write_gray(img_dir / "obj1_b.png", np.ones((5, 4)))
        with pytest.raises(ValueError, match="mixed image dimensions"):
            ingest_images(img_dir)

    def test_duplicate_images_rejected(self, tmp_path, capsys):
        img_dir = tmp_path / "imgs"
        img_dir.mkdir()
        uniform = np.full((4, 4), 128)
        write_gray(img_dir / "obj1_a.png", uniform)
        write_gray(img_dir / "obj1_b.png", uniform)
        code = run(["ingest-images", "--input", img_dir, "--out", tmp_path / "c.csv"])
        assert code == 2
        assert "duplicate points" in capsys.readouterr().err

    def test_csv_roundtrip_through_cli(self, tmp_path):
        img_dir = tmp_path / "imgs"
        img_dir.mkdir()
        rng = np.random.default_rng(2)
        for i in range(4):
            write_gray(img_dir / f"obj{i}_0.png", rng.integers(0, 255, (3, 3)))
        out = tmp_path / "cloud.csv"
        run(["ingest-images", "--input", img_dir, "--out", out])
        again = tmp_path / "cloud2.csv"
        run(["ingest-images", "--input", img_dir, "--out", again])
        assert out.read_bytes() == again.read_bytes()
