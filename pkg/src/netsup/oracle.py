"""Naive, definition-level implementations of every checked property.

These evaluate the quantified definitions literally over all strings up to a
length bound instead of walking product constructions, and serve as ground
truth for the engine at small scale.  They are sound for violation finding
and complete only up to the bound (a violation whose shortest quantified
string is longer than the bound goes unseen).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .automata import TICK
from .comm import CommAutomaton, CommEvent, Plant, project_observation
from .synthesis import SupervisorMap
from .verification import Condition, Verdict, Witness


@dataclass(frozen=True)
class BoundedLanguage:
    """All strings of length <= bound generated by an automaton, with the
    marked subset."""

    strings: frozenset[tuple]
    marked: frozenset[tuple]
    bound: int


def enumerate_language(machine, bound: int) -> BoundedLanguage:
    """Breadth-first enumeration of every generated string up to ``bound``."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    strings = set()
    marked = set()
    frontier: list[tuple[tuple, object]] = [((), machine.initial_state)]
    for length in range(bound + 1):
        nxt = []
        for string, state in frontier:
            strings.add(string)
            if machine.is_marked(state):
                marked.add(string)
            if length < bound:
                for event in machine.events_at(state):
                    nxt.append((string + (event,), machine.target(state, event)))
        frontier = nxt
    return BoundedLanguage(frozenset(strings), frozenset(marked), bound)


def _spec_strings(comm: CommAutomaton, bound: int) -> list[tuple[tuple[CommEvent, ...], int]]:
    """All in-spec strings up to ``bound`` with their end states, in
    breadth-first order."""
    out: list[tuple[tuple[CommEvent, ...], int]] = []
    if not comm.in_spec[comm.initial]:
        return out
    frontier = [((), comm.initial)]
    for length in range(bound + 1):
        nxt = []
        for string, sid in frontier:
            out.append((string, sid))
            if length < bound:
                for event, dst in comm.transitions[sid].items():
                    if comm.in_spec[dst]:
                        nxt.append((string + (event,), dst))
        frontier = nxt
    return out


def brute_check(condition: Condition, comm: CommAutomaton, bound: int) -> Verdict:
    """Evaluate one existence condition by literal quantification over all
    strings (pairs of strings for joint observability) whose total length,
    including the extending event, stays within ``bound``."""
    if condition is Condition.NET_CTRL_1:
        return _brute_controllability_1(comm, bound)
    if condition is Condition.NET_CTRL_2:
        return _brute_controllability_2(comm, bound)
    if condition is Condition.NET_JOINT_OBS:
        return _brute_joint_observability(comm, bound)
    if condition is Condition.LM_CLOSURE:
        return _brute_lm_closure(comm, bound)
    raise ValueError(f"no brute-force check for {condition}")


def _brute_controllability_1(comm: CommAutomaton, bound: int) -> Verdict:
    net = comm.net
    uncontrollable = sorted(net.uncontrollable, key=lambda e: (e != TICK, e))
    for mu, sid in _spec_strings(comm, bound - 1):
        for event in uncontrollable:
            dst = comm.target(sid, Plant(event))
            if dst is not None and not comm.in_spec[dst]:
                return Verdict(
                    Condition.NET_CTRL_1, False, Witness(mu=mu, sigma=event)
                )
    return Verdict(Condition.NET_CTRL_1, True)


def _brute_controllability_2(comm: CommAutomaton, bound: int) -> Verdict:
    net = comm.net
    for mu, sid in _spec_strings(comm, bound - 1):
        dst = comm.target(sid, Plant(TICK))
        if dst is None or comm.in_spec[dst]:
            continue
        preemptable = any(
            isinstance(ev, Plant) and ev.event in net.enforceable and comm.in_spec[t]
            for ev, t in comm.transitions[sid].items()
        )
        if not preemptable:
            return Verdict(Condition.NET_CTRL_2, False, Witness(mu=mu, sigma=TICK))
    return Verdict(Condition.NET_CTRL_2, True)


def _brute_joint_observability(comm: CommAutomaton, bound: int) -> Verdict:
    """For every controllable event and controlling supervisor, compare the
    observations of every run that must disable the event with those of every
    run that must keep it enabled; equal observations are a violation.

    Runs are bucketed by observation string, which decides exactly the same
    pair predicate as comparing all pairs one by one.
    """
    net = comm.net
    controllable = sorted(net.globally_controllable, key=lambda e: (e != TICK, e))
    spec_strings = _spec_strings(comm, bound - 1)
    for event in controllable:
        plant_event = Plant(event)
        must_disable: list[tuple[CommEvent, ...]] = []
        must_enable: list[tuple[CommEvent, ...]] = []
        for mu, sid in spec_strings:
            dst = comm.target(sid, plant_event)
            if dst is None:
                continue
            if comm.in_spec[dst]:
                must_enable.append(mu)
            else:
                must_disable.append(mu)
        if not must_disable or not must_enable:
            continue
        for supervisor in net.controllers(event):
            enabled_obs: dict[tuple[str, ...], tuple[CommEvent, ...]] = {}
            for nu in must_enable:
                obs = project_observation(nu, supervisor, net)
                enabled_obs.setdefault(obs, nu)
            for mu in must_disable:
                obs = project_observation(mu, supervisor, net)
                if obs in enabled_obs:
                    return Verdict(
                        Condition.NET_JOINT_OBS,
                        False,
                        Witness(mu=mu, sigma=event, nu=enabled_obs[obs], supervisor=supervisor),
                    )
    return Verdict(Condition.NET_JOINT_OBS, True)


def _brute_lm_closure(comm: CommAutomaton, bound: int) -> Verdict:
    for mu, sid in _spec_strings(comm, bound):
        if comm.marked[sid] and not comm.spec_marked[sid]:
            return Verdict(Condition.LM_CLOSURE, False, Witness(mu=mu))
    return Verdict(Condition.LM_CLOSURE, True)


def brute_closed_loop(
    comm: CommAutomaton, supervisors: Sequence[SupervisorMap], bound: int
) -> BoundedLanguage:
    """The controlled language by its recursive definition: grow strings one
    event at a time, admitting a controllable event only when every
    controlling supervisor's command after its own observation enables it.

    Commands are recomputed per string by projecting the observation and
    running the observer on it, independently of the closed-loop product.
    """
    net = comm.net
    controllable = net.globally_controllable
    strings = set()
    marked = set()
    frontier: list[tuple[tuple[CommEvent, ...], int]] = [((), comm.initial)]
    for length in range(bound + 1):
        nxt = []
        for mu, sid in frontier:
            strings.add(mu)
            if comm.marked[sid]:
                marked.add(mu)
            if length == bound:
                continue
            for event, dst in comm.transitions[sid].items():
                if isinstance(event, Plant) and event.event in controllable:
                    allowed = all(
                        event.event
                        in supervisors[i].command(project_observation(mu, i, net))
                        for i in net.controllers(event.event)
                    )
                    if not allowed:
                        continue
                nxt.append((mu + (event,), dst))
        frontier = nxt
    return BoundedLanguage(frozenset(strings), frozenset(marked), bound)
