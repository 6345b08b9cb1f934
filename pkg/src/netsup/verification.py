"""Decide the three supervisor-existence conditions on the channel-augmented
automaton, with replayable shortest counterexamples.

All checks quantify over runs of the specification restriction, i.e. over
states reachable through in_spec states only (``spec_reachable``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .automata import TICK
from .comm import CommAutomaton, CommEvent, Plant, observation_of


class Condition(Enum):
    NET_CTRL_1 = "NetCtrl1"
    NET_CTRL_2 = "NetCtrl2"
    NET_JOINT_OBS = "NetJointObs"
    LM_CLOSURE = "LmClosure"
    ADM_UNCONTROLLABLE = "AdmUncontrollable"
    ADM_TICK = "AdmTick"


@dataclass(frozen=True)
class Witness:
    """Counterexample data.  ``mu`` leads to the violating state; ``sigma``
    is the offending plant-level event where one applies; ``nu`` and
    ``supervisor`` are set for observability violations only."""

    mu: tuple[CommEvent, ...]
    sigma: Optional[str] = None
    nu: Optional[tuple[CommEvent, ...]] = None
    supervisor: Optional[int] = None


@dataclass(frozen=True)
class Verdict:
    condition: Condition
    holds: bool
    witness: Optional[Witness] = None
    detail: str = ""


def check_network_controllability(comm: CommAutomaton) -> Verdict:
    """Two statewise conditions over the specification restriction:

    1. no uncontrollable event leads from a specification state out of the
       specification;
    2. wherever tick is possible in the full automaton but leaves the
       specification, some enforceable event must be active inside the
       specification (so the supervisors can preempt the tick).

    Returns the first violation with a shortest in-spec string witness.
    """
    net = comm.net
    uncontrollable = sorted(net.uncontrollable, key=lambda e: (e != TICK, e))
    strings = comm.shortest_strings(within_spec=True)
    for sid in range(comm.num_states):
        if not comm.spec_reachable[sid]:
            continue
        for event in uncontrollable:
            dst = comm.target(sid, Plant(event))
            if dst is not None and not comm.in_spec[dst]:
                return Verdict(
                    Condition.NET_CTRL_1,
                    False,
                    Witness(mu=strings[sid], sigma=event),
                    detail=f"uncontrollable {event!r} exits the specification at {comm.render_state(sid)}",
                )
    for sid in range(comm.num_states):
        if not comm.spec_reachable[sid]:
            continue
        dst = comm.target(sid, Plant(TICK))
        if dst is None or comm.in_spec[dst]:
            continue
        preemptable = any(
            isinstance(ev, Plant) and ev.event in net.enforceable and comm.in_spec[t]
            for ev, t in comm.transitions[sid].items()
        )
        if not preemptable:
            return Verdict(
                Condition.NET_CTRL_2,
                False,
                Witness(mu=strings[sid], sigma=TICK),
                detail=f"tick exits the specification at {comm.render_state(sid)}"
                " and no enforceable event can preempt it",
            )
    return Verdict(Condition.NET_CTRL_1, True)


@dataclass(frozen=True)
class TwinState:
    """A pair of states reached by two runs with identical observations for
    one supervisor, each tagged with whether its run stayed in the
    specification."""

    x: int
    y: int
    x_in_spec: bool
    y_in_spec: bool


@dataclass
class TwinProduct:
    """Reachable observation-synchronized state pairs for one supervisor.

    Unobserved moves interleave (left copy first, then right); observed
    symbols advance both copies together.  Parent links reconstruct the two
    generating runs of any reachable pair.
    """

    supervisor: int
    states: list[TwinState]
    parents: list[Optional[tuple[int, Optional[CommEvent], Optional[CommEvent]]]]

    def strings_to(self, tid: int) -> tuple[tuple[CommEvent, ...], tuple[CommEvent, ...]]:
        left: list[CommEvent] = []
        right: list[CommEvent] = []
        while self.parents[tid] is not None:
            prev, ev_left, ev_right = self.parents[tid]
            if ev_left is not None:
                left.append(ev_left)
            if ev_right is not None:
                right.append(ev_right)
            tid = prev
        return tuple(reversed(left)), tuple(reversed(right))


def build_twin_product(comm: CommAutomaton, supervisor: int) -> TwinProduct:
    net = comm.net
    init = TwinState(comm.initial, comm.initial, comm.in_spec[comm.initial], comm.in_spec[comm.initial])
    index: dict[TwinState, int] = {init: 0}
    states = [init]
    parents: list[Optional[tuple[int, Optional[CommEvent], Optional[CommEvent]]]] = [None]
    queue = deque([0])
    obs_alphabet = net.observation_alphabet(supervisor)

    def intern(ts: TwinState, src: int, ev_left: Optional[CommEvent], ev_right: Optional[CommEvent]) -> None:
        if ts not in index:
            index[ts] = len(states)
            states.append(ts)
            parents.append((src, ev_left, ev_right))
            queue.append(index[ts])

    while queue:
        tid = queue.popleft()
        ts = states[tid]
        # left copy moves silently
        for event, dst in comm.transitions[ts.x].items():
            if observation_of(event, supervisor, net) is None:
                intern(
                    TwinState(dst, ts.y, ts.x_in_spec and comm.in_spec[dst], ts.y_in_spec),
                    tid, event, None,
                )
        # right copy moves silently
        for event, dst in comm.transitions[ts.y].items():
            if observation_of(event, supervisor, net) is None:
                intern(
                    TwinState(ts.x, dst, ts.x_in_spec, ts.y_in_spec and comm.in_spec[dst]),
                    tid, None, event,
                )
        # both copies move on the same observed symbol
        for symbol in obs_alphabet:
            moves_x = [
                (e, t) for e, t in comm.transitions[ts.x].items()
                if observation_of(e, supervisor, net) == symbol
            ]
            moves_y = [
                (e, t) for e, t in comm.transitions[ts.y].items()
                if observation_of(e, supervisor, net) == symbol
            ]
            for ev_x, dst_x in moves_x:
                for ev_y, dst_y in moves_y:
                    intern(
                        TwinState(
                            dst_x, dst_y,
                            ts.x_in_spec and comm.in_spec[dst_x],
                            ts.y_in_spec and comm.in_spec[dst_y],
                        ),
                        tid, ev_x, ev_y,
                    )
    return TwinProduct(supervisor, states, parents)


def check_network_joint_observability(comm: CommAutomaton) -> Verdict:
    """Every controllable event that must be disabled after some in-spec run
    must be observationally distinguishable, by each supervisor controlling
    it, from every in-spec run after which that event must stay enabled.

    A violation is a twin-product state whose two runs both stayed in the
    specification, where the event exits the specification on one side and
    stays inside on the other.  Verdicts aggregate deterministically in
    (event, supervisor) order; per pair the witness is BFS-shortest.
    """
    net = comm.net
    controllable = sorted(net.globally_controllable, key=lambda e: (e != TICK, e))
    twins: dict[int, TwinProduct] = {}
    for event in controllable:
        for supervisor in net.controllers(event):
            if supervisor not in twins:
                twins[supervisor] = build_twin_product(comm, supervisor)
            twin = twins[supervisor]
            for tid, ts in enumerate(twin.states):
                if not (ts.x_in_spec and ts.y_in_spec):
                    continue
                dst_x = comm.target(ts.x, Plant(event))
                dst_y = comm.target(ts.y, Plant(event))
                if dst_x is None or dst_y is None:
                    continue
                if not comm.in_spec[dst_x] and comm.in_spec[dst_y]:
                    mu, nu = twin.strings_to(tid)
                    return Verdict(
                        Condition.NET_JOINT_OBS,
                        False,
                        Witness(mu=mu, sigma=event, nu=nu, supervisor=supervisor),
                        detail=(
                            f"supervisor {supervisor + 1} cannot distinguish a run where"
                            f" {event!r} must be disabled from one where it must stay enabled"
                        ),
                    )
    return Verdict(Condition.NET_JOINT_OBS, True)


def check_lm_closure(comm: CommAutomaton) -> Verdict:
    """The specification's marked language must equal its language intersected
    with the full marked language.  With inherited marking this holds by
    construction; an explicit marking override can break it."""
    strings = None
    for sid in range(comm.num_states):
        if not comm.spec_reachable[sid]:
            continue
        if comm.marked[sid] and not comm.spec_marked[sid]:
            if strings is None:
                strings = comm.shortest_strings(within_spec=True)
            return Verdict(
                Condition.LM_CLOSURE,
                False,
                Witness(mu=strings[sid]),
                detail=f"state {comm.render_state(sid)} is marked in the full automaton"
                " but not in the specification",
            )
        # the file format forbids marking beyond the inherited set
        assert not (comm.spec_marked[sid] and not comm.marked[sid])
    return Verdict(Condition.LM_CLOSURE, True)
