"""Acceptance suite: one test per criterion, each printing a PASS line with
its measured numbers (run with -s or -v to see them).  Bounds and tolerances
are pinned here; every comparison is exact (tolerance zero) unless a runtime
budget is stated.
"""

import random
import time

from netsup.channels import ChannelEntry, ChannelState, deliver, lose, max_delay, push, time_step
from netsup.comm import check_projection_equivalence
from netsup.network import ChannelLink, NetworkConfig
from netsup.oracle import brute_check, brute_closed_loop, enumerate_language
from netsup.randgen import random_instance
from netsup.simulation import Termination, simulate
from netsup.synthesis import (
    check_admissibility,
    closed_loop,
    language_equal,
    solve_control_problem,
    synthesize_supervisor,
)
from netsup.verification import (
    Condition,
    check_lm_closure,
    check_network_controllability,
    check_network_joint_observability,
)


def report_line(name, detail):
    print(f"ACCEPTANCE {name}: PASS ({detail})")


def test_c1_fixture_reproduction(line_model):
    """The production-line model: all three conditions hold, the problem is
    solvable, the closed loop equals the specification exactly, and the
    synthesized first supervisor disables a1 exactly in the plant-state-4
    belief states.  Budget: 5 s."""
    start = time.monotonic()
    report = solve_control_problem(line_model.plant, line_model.spec, line_model.network)
    elapsed = time.monotonic() - start
    assert report.controllability.holds
    assert report.observability.holds
    assert report.closure.holds
    assert report.solvable
    assert report.admissibility.holds
    assert report.language.generated_equal and report.language.marked_equal
    assert report.nonblocking

    labels = set(report.comm.state_labels())
    for wanted in ["(4,ε,ε)", "(4,(b1,1),ε)", "(0,ε,ε)", "(0,ε,(b2,1))"]:
        assert wanted in labels

    sup1 = report.supervisors[0]
    comm = report.comm
    disabled_at_4 = enabled_at_0 = 0
    for t, elements in enumerate(sup1.observer.elements):
        plants = {comm.plant_of(s) for s, flag in elements if flag}
        if "4" in plants:
            assert "a1" not in sup1.enable[t]
            disabled_at_4 += 1
        if plants == {"0"}:
            assert "a1" in sup1.enable[t]
            enabled_at_0 += 1
    assert disabled_at_4 >= 1 and enabled_at_0 >= 1
    assert elapsed < 5.0
    report_line(
        "1 fixture reproduction",
        f"{elapsed:.2f}s, comm={comm.num_states} states,"
        f" {disabled_at_4} disabling / {enabled_at_0} enabling belief states",
    )


def test_c2_projection_property_100_instances():
    """Projecting away deliveries and losses recovers the plant language on
    100 seeded instances; exact automaton equivalence.  Budget: 60 s."""
    start = time.monotonic()
    for seed in range(100):
        inst = random_instance(seed)
        verdict = check_projection_equivalence(inst.plant, inst.comm)
        assert verdict.equal, f"seed {seed}: differs at {verdict.distinguishing}"
    elapsed = time.monotonic() - start
    assert elapsed < 60.0
    report_line("2 projection equivalence", f"100 instances in {elapsed:.2f}s")


def _three_checks(comm):
    return (
        check_network_controllability(comm),
        check_network_joint_observability(comm),
        check_lm_closure(comm),
    )


def test_c3_conditions_sufficient():
    """On every seeded instance where the three checks hold (>= 50 by
    rejection sampling), the synthesized supervisors are admissible and both
    closed-loop equalities hold exactly.  Tolerance zero."""
    passing = 0
    seed = 0
    while passing < 50:
        assert seed < 400, "seed budget exhausted before 50 passing instances"
        inst = random_instance(seed)
        seed += 1
        comm = inst.comm
        if not all(v.holds for v in _three_checks(comm)):
            continue
        passing += 1
        sups = [synthesize_supervisor(comm, i) for i in range(inst.net.n)]
        assert check_admissibility(sups, comm).holds
        lang = language_equal(closed_loop(comm, sups), comm.spec_view())
        assert lang.generated_equal and lang.marked_equal
    report_line("3 conditions sufficient", f"{passing} instances, seeds 0..{seed - 1}")


def test_c4_conditions_necessary():
    """On every seeded instance where some check fails (>= 50), the
    synthesized supervisors are inadmissible or an equality fails; failures
    visible within 8 events are cross-confirmed by the bounded oracle."""
    failing = 0
    cross_confirmed = 0
    seed = 0
    while failing < 50:
        assert seed < 400, "seed budget exhausted before 50 failing instances"
        inst = random_instance(seed)
        seed += 1
        comm = inst.comm
        if all(v.holds for v in _three_checks(comm)):
            continue
        failing += 1
        sups = [synthesize_supervisor(comm, i) for i in range(inst.net.n)]
        adm = check_admissibility(sups, comm)
        lang = language_equal(closed_loop(comm, sups), comm.spec_view())
        assert not (adm.holds and lang.generated_equal and lang.marked_equal)
        diffs = [d for d in (lang.diff_generated, lang.diff_marked) if d is not None]
        if diffs and min(len(d) for d in diffs) <= 8:
            bounded = brute_closed_loop(comm, sups, 8)
            spec_bounded = enumerate_language(comm.spec_view(), 8)
            assert (
                bounded.strings != spec_bounded.strings
                or bounded.marked != spec_bounded.marked
            )
            cross_confirmed += 1
    report_line(
        "4 conditions necessary",
        f"{failing} instances, {cross_confirmed} cross-confirmed at bound 8",
    )


def test_c5_oracle_agreement_200_instances():
    """Engine verdicts and closed-loop language agree with the brute oracle
    at bound 8 on 200 seeded instances, zero disagreements.  Budget: 300 s."""
    start = time.monotonic()
    disagreements = []
    for seed in range(200):
        inst = random_instance(seed)
        comm = inst.comm
        ctrl, obs, clos = _three_checks(comm)
        oracle_ctrl = (
            brute_check(Condition.NET_CTRL_1, comm, 8).holds
            and brute_check(Condition.NET_CTRL_2, comm, 8).holds
        )
        if ctrl.holds != oracle_ctrl:
            disagreements.append((seed, "controllability"))
        if obs.holds != brute_check(Condition.NET_JOINT_OBS, comm, 8).holds:
            disagreements.append((seed, "joint observability"))
        if clos.holds != brute_check(Condition.LM_CLOSURE, comm, 8).holds:
            disagreements.append((seed, "closure"))
        sups = [synthesize_supervisor(comm, i) for i in range(inst.net.n)]
        loop_lang = enumerate_language(closed_loop(comm, sups), 8)
        brute_lang = brute_closed_loop(comm, sups, 8)
        if loop_lang.strings != brute_lang.strings or loop_lang.marked != brute_lang.marked:
            disagreements.append((seed, "closed-loop language"))
    elapsed = time.monotonic() - start
    assert disagreements == []
    assert elapsed < 300.0
    report_line("5 oracle agreement", f"200 instances in {elapsed:.1f}s, 0 disagreements")


def test_c6_channel_calculus():
    """Exact example rows, then FIFO age monotonicity and the age bound over
    10,000 random operator sequences."""
    net = NetworkConfig.build(
        2,
        [["a1", "b1", "tick"], ["a2", "b2", "tick"]],
        [["a1", "b1", "tick"], ["a2", "b2", "tick"]],
        [["a1", "b1", "tick"], ["a2", "b2", "tick"]],
        [],
        [[0, 1], [1, 0]],
        {
            (0, 1): ChannelLink(frozenset(["a1", "b1"]), frozenset(["a1"]), 1),
            (1, 0): ChannelLink(frozenset(["a2", "b2"]), frozenset(["b2"]), 1),
        },
    )

    def state(q12=(), q21=()):
        s = ChannelState.empty(net)
        s = s.replace(0, 1, tuple(ChannelEntry(*e) for e in q12))
        return s.replace(1, 0, tuple(ChannelEntry(*e) for e in q21))

    # example rows, bit-exact
    assert max_delay(()) == 0
    assert max_delay((ChannelEntry("b1", 1),)) == 1
    assert max_delay((ChannelEntry("a", 2), ChannelEntry("b", 0))) == 2
    assert time_step(state(), net) == state()
    assert time_step(state(q12=[("b1", 0)]), net).get(0, 1) == (ChannelEntry("b1", 1),)
    assert time_step(state(q12=[("b1", 1)]), net) is None
    assert push(state(), "a1", net).get(0, 1) == (ChannelEntry("a1", 0),)
    assert push(state(q12=[("b1", 1)]), "a1", net).get(0, 1) == (
        ChannelEntry("b1", 1), ChannelEntry("a1", 0),
    )
    assert deliver(state(q12=[("b1", 1)]), 0, 1, "b1").get(0, 1) == ()
    assert deliver(state(), 0, 1, "b1") is None
    assert deliver(state(q12=[("a1", 1), ("b1", 0)]), 0, 1, "b1") is None
    assert lose(state(q12=[("a1", 0)]), 0, 1, 1, net).get(0, 1) == ()
    assert lose(state(q12=[("a1", 0)]), 0, 1, 2, net) is None
    assert lose(state(q12=[("a1", 1), ("b1", 0)]), 0, 1, 2, net) is None

    # randomized invariants
    rng = random.Random(20260810)
    events = ["a1", "b1", "a2", "b2"]
    checked_states = 0
    for _ in range(10_000):
        s = ChannelState.empty(net)
        for _ in range(rng.randint(1, 25)):
            kind = rng.randrange(4)
            if kind == 0:
                nxt = time_step(s, net)
            elif kind == 1:
                nxt = push(s, rng.choice(events), net)
            elif kind == 2:
                i, j = rng.choice([(0, 1), (1, 0)])
                queue = s.get(i, j)
                nxt = deliver(s, i, j, queue[0].event) if queue else None
            else:
                i, j = rng.choice([(0, 1), (1, 0)])
                nxt = lose(s, i, j, rng.randint(1, max(1, len(s.get(i, j)))), net)
            if nxt is None:
                continue
            s = nxt
            checked_states += 1
            for key, queue in s.queues:
                ages = [e.age for e in queue]
                assert ages == sorted(ages, reverse=True)
                assert all(a <= net.channels[key].delay_bound for a in ages)
    report_line("6 channel calculus", f"rows exact, {checked_states} states checked")


def test_c7_simulation_safety(line_report):
    """1000 seeded runs of 1000 steps each under the synthesized supervisors
    never visit an out-of-spec state."""
    comm = line_report.comm
    out_of_spec = 0
    for seed in range(1000):
        trace = simulate(
            comm, line_report.supervisors, seed, 1000, loop=line_report.loop
        )
        assert trace.terminated is Termination.STEP_LIMIT
        out_of_spec += sum(1 for s in trace.steps if not comm.in_spec[s.comm_state])
    assert out_of_spec == 0
    report_line("7 simulation safety", "1000 runs x 1000 steps, 0 out-of-spec visits")
