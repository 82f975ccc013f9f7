"""
Management command tests: run each pipeline command end to end on temp files.
"""

import io
import json

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from core.exceptions import EXIT_DATA, EXIT_USAGE

from .conftest import make_raw, read_jsonl, write_jsonl


def run(*args) -> str:
    out = io.StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


def rollout(prompt_id: str, steps: int, answer: str, gold: str = "321") -> dict:
    return {
        "prompt_id": prompt_id,
        "prompt_text": "Find the number.",
        "gold_answer": gold,
        "response_text": make_raw(steps, answer),
    }


@pytest.fixture
def rollouts(workdir):
    rows = [
        rollout("q1", 5, "321"),
        rollout("q1", 7, "321"),
        rollout("q1", 9, "999"),
        rollout("q1", 3, "999"),
        rollout("q2", 4, "1"),
        rollout("q2", 2, "2"),
        rollout("q3", 6, "321"),
    ]
    return write_jsonl(workdir / "rollouts.jsonl", rows)


class TestSegmentCommand:
    """Test the segment command."""

    def test_single_line(self, workdir):
        """Test one rollout is split into paragraph steps with its answer."""
        path = write_jsonl(
            workdir / "in.jsonl",
            [{"prompt_id": "p", "gold_answer": "4", "response_text": "<think>A\n\nB</think> \\boxed{4}"}],
        )
        output = run("segment", str(path), "--output", str(workdir / "out.jsonl"))
        (row,) = read_jsonl(workdir / "out.jsonl")
        assert row["step_count"] == 2
        assert [s["text"] for s in row["steps"]] == ["A", "B"]
        assert row["extracted_answer"] == "4"
        assert "Segmented 1 records" in output

    def test_empty_file(self, workdir):
        """Test an empty input file gives an empty output file."""
        path = workdir / "empty.jsonl"
        path.write_text("", encoding="utf-8")
        run("segment", str(path), "--output", str(workdir / "out.jsonl"))
        assert (workdir / "out.jsonl").read_text(encoding="utf-8") == ""

    def test_malformed_line(self, workdir):
        """Test a malformed line is reported by number and nothing is written."""
        path = workdir / "bad.jsonl"
        good = json.dumps(rollout("q1", 2, "1"))
        path.write_text(f"{good}\n{good}\n{{not json\n", encoding="utf-8")
        with pytest.raises(CommandError) as excinfo:
            run("segment", str(path), "--output", str(workdir / "out.jsonl"))
        assert excinfo.value.returncode == EXIT_DATA
        assert "line 3" in str(excinfo.value)
        assert not (workdir / "out.jsonl").exists()

    def test_missing_prompt_id(self, workdir):
        """Test a record without prompt_id is a data error."""
        path = write_jsonl(workdir / "in.jsonl", [{"response_text": "x"}])
        with pytest.raises(CommandError) as excinfo:
            run("segment", str(path), "--output", str(workdir / "out.jsonl"))
        assert excinfo.value.returncode == EXIT_DATA
        assert "line 1" in str(excinfo.value)

    def test_sentence_strategy(self, workdir):
        """Test the sentence strategy from the command line."""
        path = write_jsonl(
            workdir / "in.jsonl",
            [{"prompt_id": "p", "response_text": "<think>One. Two. Three.</think> \\boxed{1}"}],
        )
        run("segment", str(path), "--output", str(workdir / "out.jsonl"), "--strategy", "sentence")
        (row,) = read_jsonl(workdir / "out.jsonl")
        assert row["step_count"] == 3

    def test_sidecar(self, workdir, rollouts):
        """Test the run sidecar records command, count and config."""
        run("segment", str(rollouts), "--output", str(workdir / "out.jsonl"), "--seed", "9")
        sidecar = json.loads((workdir / "out.jsonl.run.json").read_text(encoding="utf-8"))
        assert sidecar["command"] == "segment"
        assert sidecar["records"] == 7
        assert sidecar["config"]["seed"] == 9

    def test_missing_input(self, workdir):
        """Test a missing input file is a data error."""
        with pytest.raises(CommandError) as excinfo:
            run("segment", str(workdir / "nope.jsonl"), "--output", str(workdir / "out.jsonl"))
        assert excinfo.value.returncode == EXIT_DATA


class TestScoreCommand:
    """Test the score command."""

    def test_groups(self, workdir, rollouts):
        """Test rewards, advantages and skipped groups in the scored output."""
        output = run("score", str(rollouts), "--output", str(workdir / "scored.jsonl"), "--beta", "0.01")
        q1, q2, q3 = read_jsonl(workdir / "scored.jsonl")
        assert "Scored 3 groups (1 skipped)" in output

        assert q1["s_star"] == 5
        assert [r["reward"]["total"] for r in q1["responses"]] == pytest.approx([1.0, 0.98, -0.04, 0.0])
        assert [r["line"] for r in q1["responses"]] == [1, 2, 3, 4]
        assert sum(r["advantage"] for r in q1["responses"]) == pytest.approx(0.0, abs=1e-9)

        assert q2["skipped"] is True
        assert q2["s_star"] is None
        assert all(r["advantage"] is None for r in q2["responses"])
        assert all(r["reward"]["case_label"] == "group_skipped" for r in q2["responses"])

        assert q3["responses"][0]["reward"]["total"] == 1.0
        assert q3["responses"][0]["advantage"] == 0.0

    def test_segmented_input(self, workdir, rollouts):
        """Test scoring segmented records matches scoring raw rollouts."""
        run("segment", str(rollouts), "--output", str(workdir / "seg.jsonl"))
        run("score", str(workdir / "seg.jsonl"), "--output", str(workdir / "a.jsonl"))
        run("score", str(rollouts), "--output", str(workdir / "b.jsonl"))
        assert read_jsonl(workdir / "a.jsonl") == read_jsonl(workdir / "b.jsonl")

    def test_ablation_alias(self, workdir, rollouts):
        """Test the short ablation name disables skipping all-wrong groups."""
        run("score", str(rollouts), "--output", str(workdir / "scored.jsonl"), "--ablation", "SAW")
        q2 = read_jsonl(workdir / "scored.jsonl")[1]
        assert q2["skipped"] is False
        assert q2["s_star"] == 2

    def test_unknown_ablation(self, workdir, rollouts):
        """Test an unknown ablation is a usage error."""
        with pytest.raises(CommandError) as excinfo:
            run("score", str(rollouts), "--output", str(workdir / "s.jsonl"), "--ablation", "XYZ")
        assert excinfo.value.returncode == EXIT_USAGE

    def test_conflicting_gold(self, workdir):
        """Test one prompt with two gold answers is a data error."""
        path = write_jsonl(workdir / "in.jsonl", [rollout("q1", 2, "1", gold="1"), rollout("q1", 2, "1", gold="2")])
        with pytest.raises(CommandError) as excinfo:
            run("score", str(path), "--output", str(workdir / "s.jsonl"))
        assert excinfo.value.returncode == EXIT_DATA

    def test_negative_beta(self, workdir, rollouts):
        """Test a negative beta is a usage error."""
        with pytest.raises(CommandError) as excinfo:
            run("score", str(rollouts), "--output", str(workdir / "s.jsonl"), "--beta", "-1")
        assert excinfo.value.returncode == EXIT_USAGE


class TestTrainToyCommand:
    """Test the train_toy command."""

    def test_reproducible_records(self, workdir):
        """Test two runs with one seed write identical records."""
        for name in ("a", "b"):
            run("train_toy", "--output", str(workdir / name), "--max-updates", "3", "--seed", "0")
        a = (workdir / "a" / "records.jsonl").read_bytes()
        b = (workdir / "b" / "records.jsonl").read_bytes()
        assert a == b
        assert len(a.splitlines()) == 3
        assert (workdir / "a" / "policy.json").exists()
        config = json.loads((workdir / "a" / "run_config.json").read_text(encoding="utf-8"))
        assert config["train"]["max_updates"] == 3

    def test_merge_hack_halts(self, workdir):
        """Test the merge-heavy config halts on the step-length limit."""
        output = run("train_toy", "--config", "toy_merge_hack", "--output", str(workdir / "run"))
        records = read_jsonl(workdir / "run" / "records.jsonl")
        assert records[-1]["halted"] is True
        assert records[-1]["skipped_reason"] == "step_length_exceeded"
        assert "halted=True" in output

    def test_group_size_one(self, workdir):
        """Test a group size of one is a usage error."""
        path = workdir / "bad.yaml"
        path.write_text("train:\n  group_size: 1\n", encoding="utf-8")
        with pytest.raises(CommandError) as excinfo:
            run("train_toy", "--config", str(path), "--output", str(workdir / "run"))
        assert excinfo.value.returncode == EXIT_USAGE


class TestAesCommand:
    """Test the aes command."""

    @pytest.fixture
    def baseline(self, workdir):
        path = workdir / "baseline.json"
        path.write_text(json.dumps({"accuracy": 91.8, "mean_length": 4053}), encoding="utf-8")
        return path

    def summary(self, workdir, accuracy, length):
        path = workdir / "model.json"
        path.write_text(json.dumps({"accuracy": accuracy, "mean_length": length}), encoding="utf-8")
        return path

    def test_step_pruned_model(self, workdir, baseline):
        """Test a shorter, equally accurate model scores 0.67."""
        output = run("aes", str(self.summary(workdir, 92.0, 1353)), str(baseline), "--output", str(workdir / "aes.json"))
        assert output.startswith("AES 0.67")
        report = json.loads((workdir / "aes.json").read_text(encoding="utf-8"))
        assert report["display_score"] == 0.67
        assert (workdir / "aes.json.run.json").exists()

    def test_small_accuracy_loss(self, workdir, baseline):
        """Test a small accuracy loss with a large length cut."""
        output = run("aes", str(self.summary(workdir, 91.6, 2403)), str(baseline))
        assert output.startswith("AES 0.40")

    def test_identical(self, workdir, baseline):
        """Test a model against itself scores zero."""
        assert run("aes", str(baseline), str(baseline)).startswith("AES 0.00")

    def test_degenerate_baseline(self, workdir):
        """Test a zero-accuracy baseline is a data error."""
        path = workdir / "zero.json"
        path.write_text(json.dumps({"accuracy": 0.0, "mean_length": 100}), encoding="utf-8")
        with pytest.raises(CommandError) as excinfo:
            run("aes", str(path), str(path))
        assert excinfo.value.returncode == EXIT_DATA


class TestProfileCommand:
    """Test the profile command."""

    def test_keyword_judge(self, workdir):
        """Test the offline keyword judge end to end."""
        path = write_jsonl(
            workdir / "in.jsonl",
            [{"prompt_id": "p", "response_text": "<think>We factor it. Wait, check 2 + 2.</think> \\boxed{4}"}],
        )
        output = run("profile", str(path), "--judge", "keyword", "--output", str(workdir / "profile.json"))
        report = json.loads((workdir / "profile.json").read_text(encoding="utf-8"))
        assert report["sentence_count"] == 2
        assert report["fractions"]["PivotalReasoning"] == 0.5
        assert report["fractions"]["VerificationSelfCorrection"] == 0.5
        assert "Pivotal Reasoning" in output

    def test_no_reasoning(self, workdir):
        """Test a response without reasoning is a data error."""
        path = write_jsonl(workdir / "in.jsonl", [{"prompt_id": "p", "response_text": "<think></think> 4"}])
        with pytest.raises(CommandError) as excinfo:
            run("profile", str(path), "--judge", "keyword")
        assert excinfo.value.returncode == EXIT_DATA


class TestUsageErrors:
    """Test argument errors."""

    def test_missing_output(self, rollouts):
        """Test --output is required."""
        with pytest.raises(CommandError) as excinfo:
            run("segment", str(rollouts))
        assert excinfo.value.returncode == EXIT_USAGE

    def test_unknown_strategy(self, workdir, rollouts):
        """Test an unknown strategy is a usage error."""
        with pytest.raises(CommandError) as excinfo:
            run("segment", str(rollouts), "--output", str(workdir / "o.jsonl"), "--strategy", "words")
        assert excinfo.value.returncode == EXIT_USAGE

    def test_missing_config(self, workdir, rollouts):
        """Test an unknown config name is a usage error."""
        with pytest.raises(CommandError) as excinfo:
            run("segment", str(rollouts), "--output", str(workdir / "o.jsonl"), "--config", "no_such_config")
        assert excinfo.value.returncode == EXIT_USAGE
