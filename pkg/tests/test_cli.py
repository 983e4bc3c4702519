"""End-to-end command-line behavior: formats, artifacts, exit codes."""

import json

import numpy as np
import pytest

from tangleclust import io, models
from tangleclust.cli import main


def run_cli(*argv):
    return main(list(argv))


class TestGenerateAndRoundTrip:
    def test_sbm_files(self, tmp_path):
        out = tmp_path / "sbm"
        assert run_cli("generate", "sbm", "--n", "40", "--blocks", "2",
                       "--p", "0.4", "--q", "0.05", "--seed", "7",
                       "--output-dir", str(out)) == 0
        graph = io.read_edge_list(out / "graph.edges")
        labels = io.read_labels(out / "labels.csv")
        assert graph.n == 40 and labels.size == 40
        inst = models.gen_sbm(40, 2, 0.4, 0.05, seed=7)
        assert np.array_equal(graph.adjacency(), inst.graph.adjacency())

    def test_mindsets_round_trip(self, tmp_path):
        out = tmp_path / "mind"
        run_cli("generate", "mindsets", "--n", "30", "--m", "8", "--k", "2",
                "--noise", "0.1", "--seed", "3", "--output-dir", str(out))
        answers = io.read_binary_matrix(out / "answers.csv")
        inst = models.gen_mindsets(30, 8, 2, 0.1, seed=3)
        assert np.array_equal(answers, inst.answers)

    def test_gmm_round_trip(self, tmp_path):
        out = tmp_path / "gmm"
        run_cli("generate", "gmm", "--n", "50", "--sigma", "0.5",
                "--centers=-4,0;4,0", "--seed", "2",
                "--output-dir", str(out))
        pts = io.read_points(out / "points.csv")
        inst = models.gen_gmm([[-4.0, 0.0], [4.0, 0.0]], 0.5, 50, seed=2)
        assert np.allclose(pts, inst.points.coords)

    def test_generate_output_feeds_cluster(self, tmp_path):
        data = tmp_path / "data"
        run_cli("generate", "sbm", "--n", "40", "--blocks", "2",
                "--p", "0.6", "--q", "0.05", "--seed", "1",
                "--output-dir", str(data))
        out = tmp_path / "run"
        code = run_cli("cluster", "--input", str(data / "graph.edges"),
                       "--format", "edge-list", "--agreement", "6",
                       "--num-cuts", "10", "--seed", "0",
                       "--output-dir", str(out))
        assert code == 0
        for name in ("labels.csv", "soft.csv", "tree.json", "condensed.json",
                     "dendrogram.json", "run_config.json"):
            assert (out / name).exists()


class TestClusterArtifacts:
    @pytest.fixture
    def questionnaire_run(self, tmp_path):
        data = tmp_path / "data"
        run_cli("generate", "mindsets", "--n", "60", "--m", "12", "--k", "2",
                "--noise", "0.0", "--seed", "5", "--output-dir", str(data))
        out = tmp_path / "run"
        code = run_cli("cluster", "--input", str(data / "answers.csv"),
                       "--format", "binary-matrix", "--agreement", "10",
                       "--prune", "1", "--output-dir", str(out))
        assert code == 0
        return data, out

    def test_labels_match_ground_truth(self, questionnaire_run):
        from tangleclust.evaluation import nmi
        data, out = questionnaire_run
        labels = np.loadtxt(out / "labels.csv", dtype=int)
        truth = io.read_labels(data / "labels.csv")
        assert nmi(labels, truth) == 1.0

    def test_soft_rows_sum_to_one(self, questionnaire_run):
        _, out = questionnaire_run
        soft = np.loadtxt(out / "soft.csv", delimiter=",", skiprows=2)
        assert np.allclose(soft.sum(axis=1), 1.0, atol=1e-9)

    def test_config_echoed_in_artifacts(self, questionnaire_run):
        _, out = questionnaire_run
        tree = json.loads((out / "tree.json").read_text())
        condensed = json.loads((out / "condensed.json").read_text())
        config = json.loads((out / "run_config.json").read_text())
        assert tree["config"] == config
        assert condensed["config"] == config
        first = (out / "labels.csv").read_text().splitlines()[0]
        assert first.startswith("#") and json.loads(first[1:]) == config

    def test_schema_versions_present(self, questionnaire_run):
        _, out = questionnaire_run
        for name in ("tree.json", "condensed.json", "dendrogram.json"):
            doc = json.loads((out / name).read_text())
            assert doc["schema_version"] == 1

    def test_byte_identical_reruns(self, tmp_path, questionnaire_run):
        data, out = questionnaire_run
        out2 = tmp_path / "run2"
        run_cli("cluster", "--input", str(data / "answers.csv"),
                "--format", "binary-matrix", "--agreement", "10",
                "--prune", "1", "--output-dir", str(out2))
        for name in ("labels.csv", "soft.csv", "tree.json", "condensed.json",
                     "dendrogram.json"):
            assert (out / name).read_bytes() == (out2 / name).read_bytes()


class TestBounds:
    def test_thm2_matches_models(self, capsys):
        assert run_cli("bounds", "thm2", "--n", "100", "--p", "0.3",
                       "--q", "0.05", "--a", "16") == 0
        out = json.loads(capsys.readouterr().out)
        expected = models.thm2_psi_range(100, 0.3, 0.05, 16).as_dict()
        assert out == pytest.approx(expected)

    def test_thm1_and_gauss(self, capsys):
        assert run_cli("bounds", "thm1", "--n", "999", "--m", "40", "--k", "3",
                       "--p", "0.1", "--a", "111") == 0
        thm1 = json.loads(capsys.readouterr().out)
        assert thm1["valid"] is True
        assert run_cli("bounds", "gauss", "--mu", "0,0", "--nu", "6,0",
                       "--sigma", "1.0", "--n", "120") == 0
        gauss = json.loads(capsys.readouterr().out)
        assert gauss["no_separation"] is False


class TestOracle:
    def test_small_graph_match(self, tmp_path, capsys):
        data = tmp_path / "data"
        run_cli("generate", "sbm", "--n", "16", "--blocks", "2",
                "--p", "0.8", "--q", "0.05", "--seed", "4",
                "--output-dir", str(data))
        capsys.readouterr()  # discard the generate message
        assert run_cli("oracle", "--input", str(data / "graph.edges"),
                       "--format", "edge-list", "--agreement", "2",
                       "--num-cuts", "6", "--seed", "1") == 0
        out = json.loads(capsys.readouterr().out)
        assert out["match"] is True
        assert out["brute_force_tangles"] == out["tree_full_depth_tangles"]


class TestBench:
    def test_report_artifacts(self, tmp_path):
        config = {
            "scenario": "questionnaire",
            "params": {"n": 40, "m": 8, "k": 2, "noise": 0.0},
            "seeds": [0, 1],
            "sweep": {"param": "noise", "values": [0.0, 0.2]},
        }
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(config))
        out = tmp_path / "bench"
        assert run_cli("bench", "--config", str(cfg_path),
                       "--output-dir", str(out)) == 0
        assert (out / "report.json").exists()
        assert (out / "report.png").exists()
        rows = np.loadtxt(out / "plot_data.csv", delimiter=",", skiprows=2)
        assert rows.shape == (2, 4)
        report = json.loads((out / "report.json").read_text())
        assert [pt["x"] for pt in report["points"]] == [0.0, 0.2]


class TestExitCodes:
    def test_usage_error_is_one(self):
        with pytest.raises(SystemExit) as err:
            run_cli("cluster", "--format", "no-such-format")
        assert err.value.code == 1

    def test_missing_subcommand_is_one(self):
        with pytest.raises(SystemExit) as err:
            run_cli()
        assert err.value.code == 1

    def test_data_error_is_two(self, tmp_path):
        missing = tmp_path / "nope.csv"
        assert run_cli("cluster", "--input", str(missing),
                       "--format", "binary-matrix", "--agreement", "2",
                       "--output-dir", str(tmp_path / "out")) == 2

    def test_malformed_edge_list_is_two(self, tmp_path):
        bad = tmp_path / "bad.edges"
        bad.write_text("0 1 2 3 4\n")
        assert run_cli("cluster", "--input", str(bad), "--format", "edge-list",
                       "--agreement", "2", "--output-dir", str(tmp_path / "o")) == 2
