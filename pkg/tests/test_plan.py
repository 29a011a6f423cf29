import json

import pytest

from orbitsched.plan import load_plan, plan_from_dict, plan_to_dict, replay, save_plan
from orbitsched.scenario import ScenarioError, random_instance
from orbitsched.smdp import SmdpConfig
from orbitsched.solvers import run_solver


@pytest.fixture
def sc():
    return random_instance(9, seed=12, n_contacts=2)


def test_round_trip_keeps_steps_and_totals(sc, tmp_path):
    plan = run_solver("forward", sc, {"d_solve": 3}, resources=True)
    save_plan(plan, tmp_path / "p.json")
    back = load_plan(tmp_path / "p.json")
    assert back.action_ids == plan.action_ids
    assert [s.reward for s in back.steps] == [s.reward for s in plan.steps]
    assert back.total_reward == plan.total_reward
    assert back.smdp_config() == plan.smdp_config()
    assert back.discounted_return() == plan.discounted_return()
    save_plan(back, tmp_path / "q.json")
    assert (tmp_path / "q.json").read_text() == (tmp_path / "p.json").read_text()


def test_rerun_is_byte_identical(sc, tmp_path):
    for k in range(2):
        save_plan(run_solver("mcts", sc, {"n_sim_max": 20, "seed": 5}, resources=True), tmp_path / f"{k}.json")
    assert (tmp_path / "0.json").read_bytes() == (tmp_path / "1.json").read_bytes()
    assert "wall_time" not in (tmp_path / "0.json").read_text()


def test_replay_reproduces_solver_rewards(sc):
    cfg = SmdpConfig(resources_enabled=True)
    plan = run_solver("rule", sc, resources=True)
    rec = replay(sc, cfg, plan.action_ids)
    assert rec.total == plan.total_reward
    assert [s.state for s in rec.steps] == [s.state for s in plan.steps]


def test_discounted_return_weights_steps_by_previous_decision_time(sc):
    plan = run_solver("rule", sc)
    gamma = plan.smdp_config().gamma
    expected, t = 0.0, 0.0
    for s in plan.steps:
        expected += gamma**t * s.reward
        t = s.t_s
    assert plan.discounted_return() == pytest.approx(expected, rel=1e-12)
    assert plan.discounted_return(1.0) == pytest.approx(plan.total_reward, rel=1e-12)


def test_bad_plan_documents(tmp_path):
    with pytest.raises(ScenarioError, match="schema_version"):
        plan_from_dict({"schema_version": 7})
    with pytest.raises(ScenarioError, match="malformed"):
        plan_from_dict({"schema_version": 1, "steps": [{"mode": "collect"}]})
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  nope")
    with pytest.raises(ScenarioError, match=r"bad.json:2:"):
        load_plan(bad)


def test_plan_document_is_self_describing(sc):
    doc = plan_to_dict(run_solver("rule", sc))
    assert doc["schema_version"] == 1 and doc["solver"] == "rule"
    assert set(doc["config"]) == {"smdp", "solver"}
    assert set(doc["totals"]) == {"total_reward", "images_collected", "collect_reward"}
    json.dumps(doc)
