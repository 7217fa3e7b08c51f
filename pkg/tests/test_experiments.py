import hashlib
import json
import math

import pytest

import treefire.cayley as cy
import treefire.experiments as ex
from oracles import canonical_edges


def _sha(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


class TestConfigValidation:
    def test_fire_kinds_need_exactly_one_rate(self):
        with pytest.raises(ValueError):
            ex.ExperimentConfig(kind="density", n_list=(10,))
        with pytest.raises(ValueError):
            ex.ExperimentConfig(kind="density", n_list=(10,), alpha=0.5, a=1.0)
        ex.ExperimentConfig(kind="density", n_list=(10,), alpha=0.5)
        ex.ExperimentConfig(kind="giant", n_list=(10,), a=2.0)

    def test_basic_field_checks(self):
        with pytest.raises(ValueError):
            ex.ExperimentConfig(kind="nope", n_list=(10,))
        with pytest.raises(ValueError):
            ex.ExperimentConfig(kind="spine", n_list=(0,))
        with pytest.raises(ValueError):
            ex.ExperimentConfig(kind="spine", n_list=(10,), trials=0)
        with pytest.raises(ValueError):
            ex.ExperimentConfig(kind="lemma6", n_list=(10,), eps=1.5)

    def test_dinf_target(self):
        assert ex.ExperimentConfig(kind="density", n_list=(5,), alpha=0.5).dinf_target_a == 1.0
        assert ex.ExperimentConfig(kind="density", n_list=(5,), alpha=0.7).dinf_target_a is None
        assert ex.ExperimentConfig(kind="density", n_list=(5,), a=2.5).dinf_target_a == 2.5


class TestDeterminism:
    def test_csv_identical_across_thread_counts(self, tmp_path):
        digests = []
        for threads in (1, 2, 4):
            path = tmp_path / f"out{threads}.csv"
            cfg = ex.ExperimentConfig(
                kind="cuts",
                n_list=(30, 64),
                trials=150,
                seed=99,
                threads=threads,
                out_path=str(path),
            )
            ex.run_experiment(cfg)
            digests.append(_sha(path))
        assert len(set(digests)) == 1

    def test_same_seed_same_rows(self):
        cfg = ex.ExperimentConfig(kind="spine", n_list=(12,), trials=50, seed=7)
        a = ex.run_trials(cfg)
        b = ex.run_trials(cfg)
        assert a == b

    def test_different_seeds_differ(self):
        a = ex.run_trials(ex.ExperimentConfig(kind="spine", n_list=(12,), trials=50, seed=7))
        b = ex.run_trials(ex.ExperimentConfig(kind="spine", n_list=(12,), trials=50, seed=8))
        assert a != b

    def test_trial_streams_are_stable(self):
        # the (seed, kind, n, trial) -> stream map must never change silently
        rng = ex.trial_rng(42, "density", 100, 0)
        assert rng.random() == pytest.approx(0.277959736595931, abs=1e-15)


class TestCsvFormat:
    def test_header_rows_and_summary(self, tmp_path):
        path = tmp_path / "spine.csv"
        cfg = ex.ExperimentConfig(
            kind="spine", n_list=(15,), trials=40, seed=3, out_path=str(path)
        )
        run = ex.run_experiment(cfg)
        lines = path.read_text().splitlines()
        assert lines[0] == "experiment,n,trial,spine_length"
        assert lines[1].startswith("spine-s3,15,0,")
        assert len([l for l in lines if not l.startswith("#")]) == 41
        summary = [l for l in lines if l.startswith("#SUMMARY")]
        assert summary == run.summary_lines
        assert any("threshold=" in l for l in summary)
        assert any("significance=0.01" in l for l in summary)

    def test_rows_in_trial_order(self, tmp_path):
        cfg = ex.ExperimentConfig(kind="split", n_list=(8,), trials=25, seed=1)
        rows = ex.run_trials(cfg)[8]
        assert [r["trial"] for r in rows] == list(range(25))

    def test_giant_schema_columns(self):
        cfg = ex.ExperimentConfig(kind="giant", n_list=(20,), trials=5, seed=1, alpha=0.6)
        row = ex.run_trials(cfg)[20][0]
        assert set(ex.SCHEMAS["giant"]) == set(row)

    def test_lemma4_reports_tail_mass(self):
        cfg = ex.ExperimentConfig(
            kind="lemma4", trials=200, seed=5, borel_support_max=50_000, q_grid=(0.1,)
        )
        run = ex.run_experiment(cfg)
        line = run.summary_lines[0]
        assert line.startswith("#SUMMARY,lemma4,q=0.1")
        assert "tail_mass=" in line and "support_max=50000" in line


class TestLemma6Kind:
    def test_columns_and_window(self):
        cfg = ex.ExperimentConfig(kind="lemma6", n_list=(400,), trials=30, seed=2, eps=0.25)
        rows = ex.run_trials(cfg)[400]
        k_expected = int(math.floor(400 ** ((1 - 0.25) / 2)))
        for r in rows:
            assert r["k"] == k_expected
            assert 0 <= r["second_largest"] <= 400
            assert r["in_window"] in (0, 1)


class TestOracleKind:
    def test_fixture_values(self):
        cfg = ex.ExperimentConfig(kind="oracle", n_list=(2, 3, 4), trials=1, seed=0)
        rows = ex.run_trials(cfg)[0]
        by = {(r["record"], r["n"], r.get("k", ""), r.get("m", ""), r.get("alpha", "")): r["value"] for r in rows}
        assert by[("isolation_mean", 2, 1, "", "")] == pytest.approx(1.0)
        assert by[("isolation_mean", 3, 1, "", "")] == pytest.approx(5 / 3)
        assert by[("first_cut", 4, "", 3, "")] == pytest.approx(0.75)
        assert by[("first_cut", 3, "", 2, "")] == pytest.approx(1.0)
        # alpha=1 at n=3 gives p=3/4 and E[D_3] = p^2 + p(1-p)/3 = 0.625
        assert by[("fire_density_mean", 3, "", "", 1.0)] == pytest.approx(0.625)

    def test_first_cut_fixture_matches_formula(self):
        import treefire.distributions as dist

        cfg = ex.ExperimentConfig(kind="oracle", n_list=(4,), trials=1, seed=0)
        rows = ex.run_trials(cfg)[0]
        for r in rows:
            if r["record"] == "first_cut":
                assert r["value"] == pytest.approx(dist.first_cut_pmf(4, r["m"]), abs=1e-12)

    def test_oracle_refuses_large_n(self):
        with pytest.raises(ValueError):
            ex.run_trials(ex.ExperimentConfig(kind="oracle", n_list=(6,), trials=1, seed=0))


class TestCli:
    def test_exit_zero_on_pass(self, tmp_path, capsys):
        out = tmp_path / "spine.csv"
        code = ex.main(
            ["spine", "--n", "25", "--trials", "2000", "--seed", "11", "--out", str(out)]
        )
        assert code == 0
        assert out.exists()
        captured = capsys.readouterr()
        assert "#SUMMARY" in captured.out

    def test_exit_one_on_gof_failure(self, tmp_path):
        # tiny-n density against the limit law fails KS decisively
        out = tmp_path / "density.csv"
        code = ex.main(
            [
                "density",
                "--n",
                "12",
                "--alpha",
                "0.5",
                "--trials",
                "800",
                "--seed",
                "123",
                "--out",
                str(out),
            ]
        )
        assert code == 1

    def test_exit_two_on_bad_config(self, tmp_path, capsys):
        code = ex.main(["density", "--n", "10", "--trials", "5", "--out", str(tmp_path / "x.csv")])
        assert code == 2

    def test_config_file_with_overrides(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(
            json.dumps({"n_list": [9], "trials": 30, "seed": 4, "alpha": 0.5})
        )
        out = tmp_path / "d.csv"
        code = ex.main(
            ["density", "--config", str(cfg_path), "--trials", "10", "--out", str(out)]
        )
        assert code in (0, 1)
        rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert len(rows) == 11  # header + overridden trial count

    def test_config_file_rejects_unknown_fields(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"n_list": [9], "bogus": 1}))
        assert ex.main(["spine", "--config", str(cfg_path)]) == 2

    def test_unwritable_path(self):
        code = ex.main(
            ["spine", "--n", "12", "--trials", "400", "--out", "/nonexistent-dir/x.csv"]
        )
        assert code == 2

    def test_q_grid_flag(self, tmp_path):
        out = tmp_path / "l4.csv"
        code = ex.main(
            [
                "lemma4",
                "--trials",
                "300",
                "--q-grid",
                "0.2,0.05",
                "--support-max",
                "20000",
                "--seed",
                "6",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        text = out.read_text()
        assert "q=0.2," in text and "q=0.05," in text

    def test_degenerate_gof_is_a_usage_error(self, tmp_path):
        # far too few trials to form a valid chi-square: surfaced, not hidden
        out = tmp_path / "tiny.csv"
        code = ex.main(["spine", "--n", "14", "--trials", "5", "--out", str(out)])
        assert code == 2

    def test_dump_tree_flag(self, tmp_path):
        out = tmp_path / "s.csv"
        code = ex.main(
            ["spine", "--n", "14", "--trials", "400", "--seed", "21", "--out", str(out), "--dump-tree"]
        )
        assert code == 0
        dumped = cy.load_tree(f"{out}.n14.tree")
        dumped.validate()
        # must be exactly the tree used by trial 0
        want = cy.sample_uniform_tree(14, ex.trial_rng(21, "spine", 14, 0))
        assert canonical_edges(dumped) == canonical_edges(want)
