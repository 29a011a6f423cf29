import pytest

from orbitsched.scenario import Mode, SpacecraftConfig, random_instance
from orbitsched.smdp import (
    SmdpConfig,
    SmdpState,
    action_space,
    initial_state,
    reward,
    step,
    sunpoint_twin,
    transition,
)

from synthetic import C, NADIR, build, tilted


def test_truncation_to_earliest_actions_with_twins_counted():
    sc = build([C(10, "a"), C(50, "b"), C(90, "c"), C(130, "d")])
    acts = action_space(initial_state(sc, SmdpConfig(n_a_max=3)), sc, SmdpConfig(n_a_max=3))
    assert [a.opportunity_id for a in acts] == ["000000", "000000s", "000001"]
    full = action_space(initial_state(sc, SmdpConfig(n_a_max=None)), sc, SmdpConfig(n_a_max=None))
    assert len(full) == 8


def test_empty_action_space_past_last_opportunity():
    sc = build([C(10, "a")])
    s = SmdpState(t=10.0, t_s_p=10.0, collected=frozenset({"a"}), d=0.0, p=1.0, prev_id="000000", t_free=40.0)
    assert action_space(s, sc, SmdpConfig()) == []


def test_slew_too_slow_removes_collect_but_not_its_twin():
    # 40 deg slew in a 10 s gap at 1 deg/s
    sc = build([C(0.5, "a", length=20.0), C(30.5, "b", d0=tilted(40.0))])
    cfg = SmdpConfig(n_a_max=None)
    s0 = initial_state(sc, cfg)
    first = [a for a in action_space(s0, sc, cfg) if a.opportunity_id == "000000"][0]
    s1, _ = step(s0, first, sc, cfg)
    assert first.opportunity.busy_end == 20.5
    ids = [a.opportunity_id for a in action_space(s1, sc, cfg)]
    assert "000001" not in ids and "000001s" in ids
    # with 40 s of gap the same slew fits
    sc2 = build([C(0.5, "a", length=20.0), C(60.5, "b", d0=tilted(40.0))])
    s1, _ = step(s0, [a for a in action_space(s0, sc2, cfg) if a.opportunity_id == "000000"][0], sc2, cfg)
    assert "000001" in [a.opportunity_id for a in action_space(s1, sc2, cfg)]


def test_busy_action_blocks_overlapping_starts():
    sc = build([C(10, "a", length=60.0), C(20, "b"), C(45, "c")])
    cfg = SmdpConfig(n_a_max=None)
    s0 = initial_state(sc, cfg)
    s1, _ = step(s0, action_space(s0, sc, cfg)[0], sc, cfg)  # busy until 40
    assert [a.opportunity_id for a in action_space(s1, sc, cfg)] == ["000002", "000002s"]


def test_resources_off_hides_contacts_and_collected_images():
    sc = build([C(10, "a"), (50, 100, Mode.CONTACT, "gs", 0.0, NADIR, NADIR), C(200, "a")])
    off = SmdpConfig(n_a_max=None)
    on = SmdpConfig(n_a_max=None, resources_enabled=True)
    assert "000001" not in [a.opportunity_id for a in action_space(initial_state(sc, off), sc, off)]
    assert "000001" in [a.opportunity_id for a in action_space(initial_state(sc, on), sc, on)]
    s1, _ = step(initial_state(sc, off), action_space(initial_state(sc, off), sc, off)[0], sc, off)
    ids = [a.opportunity_id for a in action_space(s1, sc, off)]
    assert "000002" not in ids and "000002s" in ids


def test_linear_power_update():
    sc = build([C(100, "a")])
    cfg = SmdpConfig(resources_enabled=True)
    s = SmdpState(t=0.0, t_s_p=0.0, collected=frozenset(), d=0.0, p=0.5)
    nxt = transition(s, action_space(s, sc, cfg)[0], sc, cfg)
    assert nxt.p == pytest.approx(0.45, abs=1e-15)
    assert nxt.d == pytest.approx(100 * (0.01 / 30 + 1e-6))
    assert nxt.t == 100.0 and nxt.t_s_p == 100.0 and nxt.collected == {"a"}


def test_sunpoint_keeps_last_collect_start_and_slew_origin():
    sc = build([C(10, "a"), C(100, "b")])
    cfg = SmdpConfig(resources_enabled=True, n_a_max=None)
    s0 = SmdpState(t=0.0, t_s_p=0.0, collected=frozenset(), d=0.0, p=0.5)
    s1, _ = step(s0, action_space(s0, sc, cfg)[0], sc, cfg)
    twin = sunpoint_twin(action_space(s1, sc, cfg)[0], sc)
    s2 = transition(s1, twin, sc, cfg)
    assert (s2.t, s2.t_s_p, s2.prev_id) == (100.0, 10.0, "000000")
    assert s2.p == pytest.approx(s1.p + 90 * 0.0002)


def test_literal_resource_interval_uses_last_collect_start():
    sc = build([C(10, "a"), C(100, "b"), C(300, "c")])
    lit = SmdpConfig(resources_enabled=True, n_a_max=None, literal_resource_interval=True)
    s = SmdpState(t=100.0, t_s_p=10.0, collected=frozenset({"a"}), d=0.0, p=0.9, prev_id="000000", t_free=130.0)
    a = [x for x in action_space(s, sc, lit) if x.opportunity_id == "000002"][0]
    assert transition(s, a, sc, lit).p == pytest.approx(0.9 - 290 * 0.0005)
    amended = SmdpConfig(resources_enabled=True, n_a_max=None)
    assert transition(s, a, sc, amended).p == pytest.approx(0.9 - 200 * 0.0005)


def test_repeat_collect_changes_nothing_but_resources():
    sc = build([C(10, "a"), C(100, "a")])
    cfg = SmdpConfig(resources_enabled=True, n_a_max=None)
    s = SmdpState(t=10.0, t_s_p=10.0, collected=frozenset({"a"}), d=0.1, p=0.8, prev_id="000000", t_free=40.0)
    a = type(action_space(s, sc, cfg)[0])(sc.opportunity_index["000001"])
    nxt, r = step(s, a, sc, cfg)
    assert nxt.collected == {"a"} and r == 0.0
    assert nxt.p == pytest.approx(0.8 - 90 * 0.0005)


def test_collect_blocked_at_data_limit_but_data_still_integrates():
    sc = build([C(100, "a")])
    cfg = SmdpConfig(resources_enabled=True)
    s = SmdpState(t=0.0, t_s_p=0.0, collected=frozenset(), d=0.75, p=1.0)
    nxt, r = step(s, action_space(s, sc, cfg)[0], sc, cfg)
    assert nxt.collected == frozenset()
    assert nxt.d > 0.75
    assert r == -1e4


def test_discounted_collect_reward():
    sc = build([C(100, "a")])
    cfg = SmdpConfig(gamma=0.999)
    r = reward(initial_state(sc, cfg), action_space(initial_state(sc, cfg), sc, cfg)[0], sc, cfg)
    assert r == pytest.approx(0.999**100, rel=1e-15)
    assert r == pytest.approx(0.904792, abs=1e-6)


def test_contact_reward_is_proportional_to_duration():
    sc = build([(50, 650, Mode.CONTACT, "gs", 0.0, NADIR, NADIR)])
    cfg = SmdpConfig(resources_enabled=True, n_a_max=None)
    s0 = initial_state(sc, cfg)
    contact = action_space(s0, sc, cfg)[0]
    assert contact.mode is Mode.CONTACT
    assert reward(s0, contact, sc, cfg) == pytest.approx(60.0)
    literal = SmdpConfig(resources_enabled=True, n_a_max=None, literal_duration_reward=True)
    assert reward(s0, contact, sc, literal) == pytest.approx(0.1 * 50)
    twin = sunpoint_twin(contact, sc)
    assert reward(s0, twin, sc, cfg) == pytest.approx(1e-4 * 600)


def test_double_violation_penalty():
    craft = SpacecraftConfig(
        power_rates={"collect": -0.01, "contact": -0.01, "sunpoint": 0.0},
        data_rates={"collect": 0.01, "contact": -0.01, "sunpoint": 1e-6},
    )
    sc = build([C(100, "a")], spacecraft=craft)
    cfg = SmdpConfig(resources_enabled=True)
    s = SmdpState(t=0.0, t_s_p=0.0, collected=frozenset(), d=0.5, p=0.9)
    nxt, r = step(s, action_space(s, sc, cfg)[0], sc, cfg)
    assert nxt.p <= craft.p_min and nxt.d >= craft.d_max
    assert r == pytest.approx(-2e4 + 0.999**100)


def test_resources_clamped_to_unit_interval():
    craft = SpacecraftConfig(
        power_rates={"collect": -0.01, "contact": -0.01, "sunpoint": 0.05},
        data_rates={"collect": 0.05, "contact": -0.05, "sunpoint": 1e-6},
    )
    sc = build([C(100, "a"), C(300, "b")], spacecraft=craft)
    cfg = SmdpConfig(resources_enabled=True, n_a_max=None)
    s0 = initial_state(sc, cfg)
    s1 = transition(s0, action_space(s0, sc, cfg)[0], sc, cfg)
    assert s1.p == 0.0 and s1.d == 1.0
    twin = [a for a in action_space(s1, sc, cfg) if a.mode is Mode.SUNPOINT][0]
    assert transition(s1, twin, sc, cfg).p == 1.0


def test_resource_parameters_do_not_matter_when_disabled():
    a = random_instance(10, seed=5)
    craft = SpacecraftConfig(
        power_rates={"collect": -0.5, "contact": -0.5, "sunpoint": 0.0},
        data_rates={"collect": 0.5, "contact": -0.5, "sunpoint": 0.5},
    )
    b = random_instance(10, seed=5, spacecraft=craft)
    cfg = SmdpConfig(n_a_max=None)
    sa, sb = initial_state(a, cfg), initial_state(b, cfg)
    while True:
        xa, xb = action_space(sa, a, cfg), action_space(sb, b, cfg)
        assert [x.opportunity_id for x in xa] == [x.opportunity_id for x in xb]
        if not xa:
            break
        (sa, ra), (sb, rb) = step(sa, xa[-1], a, cfg), step(sb, xb[-1], b, cfg)
        assert ra == rb and sa.collected == sb.collected


def test_transition_is_pure_and_progresses():
    sc = random_instance(8, seed=2, n_contacts=2)
    cfg = SmdpConfig(resources_enabled=True, n_a_max=None)
    s = initial_state(sc, cfg)
    while True:
        acts = action_space(s, sc, cfg)
        if not acts:
            break
        a = acts[len(acts) // 2]
        n1, r1 = step(s, a, sc, cfg)
        n2, r2 = step(s, a, sc, cfg)
        assert n1 == n2 and r1 == r2
        assert n1.t > s.t
        assert n1.collected >= s.collected and len(n1.collected - s.collected) <= 1
        s = n1


def test_transition_asserts_on_backwards_action():
    sc = build([C(10, "a"), C(100, "b")])
    cfg = SmdpConfig()
    s = SmdpState(t=50.0, t_s_p=10.0, collected=frozenset({"a"}), d=0.0, p=1.0)
    a = type(action_space(s, sc, cfg)[0])(sc.opportunity_index["000000"])
    with pytest.raises(AssertionError):
        transition(s, a, sc, cfg)


def test_config_validation_and_round_trip():
    with pytest.raises(ValueError):
        SmdpConfig(gamma=0.0)
    with pytest.raises(ValueError):
        SmdpConfig(n_a_max=0)
    cfg = SmdpConfig(gamma=0.99, n_a_max=None, resources_enabled=True)
    assert SmdpConfig.from_dict(cfg.to_dict()) == cfg
