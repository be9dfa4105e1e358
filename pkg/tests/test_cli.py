"""The stats command line over a persisted reference dataset."""

import json

import pytest

from crowdkiosk.cli import main
from crowdkiosk.fixture import SCENE_PLAN, build_reference_dataset
from crowdkiosk.store import EpisodeStore


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    # persist a small slice: scene A episodes only, for CLI speed
    root = tmp_path_factory.mktemp("cli-data")
    ds = build_reference_dataset()
    store = EpisodeStore(root)
    for e in ds.episodes:
        if e.scene_id != "A":
            continue
        store.write_episode(e)
        store.attach_annotation(e.episode_id, list(ds.annotations[e.episode_id]))
        if e.episode_id in ds.surveys:
            store.write_survey(ds.surveys[e.episode_id])
    for u in ds.users.values():
        store.upsert_user(u)
    for uid in sorted(ds.leaderboard_visits):
        store.record_visit(uid)
    store.write_scene_calendar({"A": SCENE_PLAN["A"]["days"]})
    return root


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_compose_json(capsys, data_dir):
    code, out = run(capsys, "compose", "--data-dir", str(data_dir))
    assert code == 0
    payload = json.loads(out)
    assert payload["total_steps"] == 20000
    assert payload["percent"]["play"] == pytest.approx(50.7, abs=0.01)


def test_ratio_table(capsys, data_dir):
    code, out = run(
        capsys, "ratio", "--data-dir", str(data_dir),
        "--task-a", "hi_chew", "--task-b", "tootsie_roll", "--format", "table",
    )
    assert code == 0
    assert "2.0000" in out


def test_cohort_csv(capsys, data_dir):
    code, out = run(capsys, "cohort", "--data-dir", str(data_dir), "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "metric,U,p_two_sided,method"


def test_usage_json(capsys, data_dir):
    code, out = run(capsys, "usage", "--data-dir", str(data_dir))
    payload = json.loads(out)
    assert payload["total_episodes"] == 129
    assert payload["episodes_by_scene"] == {"A": 129}


def test_likert_and_tutorial(capsys, data_dir):
    code, out = run(capsys, "likert", "--data-dir", str(data_dir))
    assert code == 0 and json.loads(out)["histograms"]["intuitive"]
    code, out = run(capsys, "tutorial", "--data-dir", str(data_dir))
    assert code == 0 and len(json.loads(out)["users"]) == 40


def test_return_single_and_trials(capsys, data_dir, tmp_path):
    code, out = run(capsys, "return", "--task", "jelly_bean", "--completed", "1,1,1,0,0,0,0")
    assert code == 0
    assert json.loads(out)["normalized_return"] == pytest.approx(42.857, abs=1e-3)
    trials = tmp_path / "trials.json"
    trials.write_text(json.dumps([[True] * 7, [False] * 7]))
    code, out = run(capsys, "return", "--task", "jelly_bean", "--trials", str(trials))
    assert json.loads(out)["mean"] == pytest.approx(50.0)


def test_ratio_error_exit_code(capsys, data_dir):
    code, _ = run(capsys, "ratio", "--data-dir", str(data_dir),
                  "--task-a", "hi_chew", "--task-b", "jelly_bean")
    assert code == 1
