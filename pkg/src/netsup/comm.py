"""The channel-augmented automaton: plant states paired with channel queues.

States are pairs (plant state, channel state).  Besides the plant's own
events, the automaton moves on delivery events (the receiving supervisor sees
a queued event) and loss events (a lossy queued entry silently disappears).
Both leave the plant component untouched.

Exploration order is fixed -- tick, plant events lexicographically, deliveries
by channel, losses by (channel, position) -- so state numbering is
reproducible across runs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from . import channels as ch
from .automata import TICK, TimedAutomaton, is_structural_subautomaton
from .channels import ChannelState
from .errors import ChannelOverflowError, ModelError, ResourceLimitError
from .network import NetworkConfig


@dataclass(frozen=True)
class Plant:
    """A plant event occurring in the system (tick included)."""

    event: str


@dataclass(frozen=True)
class Deliver:
    """Channel (sender, receiver) hands its front event to the receiver."""

    sender: int
    receiver: int
    event: str


@dataclass(frozen=True)
class Lose:
    """The ``position``-th entry (1-based) of channel (sender, receiver) is lost."""

    sender: int
    receiver: int
    position: int


CommEvent = Union[Plant, Deliver, Lose]

PLANT_TICK = Plant(TICK)


def event_key(event) -> tuple:
    """Total order over channel-automaton events; matches exploration order.

    Plain strings (plant-level labels) order like their Plant counterparts,
    so the same helper sorts both label universes.
    """
    if isinstance(event, str):
        return (0, "") if event == TICK else (1, event)
    if isinstance(event, Plant):
        return (0, "") if event.event == TICK else (1, event.event)
    if isinstance(event, Deliver):
        return (2, event.sender, event.receiver, event.event)
    return (3, event.sender, event.receiver, event.position)


def render_event(event: CommEvent) -> str:
    """Human-readable event names; channel indices are 1-based as in files."""
    if isinstance(event, Plant):
        return event.event
    if isinstance(event, Deliver):
        return f"f{event.sender + 1}{event.receiver + 1}({event.event})"
    return f"g{event.sender + 1}{event.receiver + 1}({event.position})"


@dataclass
class CommAutomaton:
    """Deterministic, accessible automaton over plant/delivery/loss events.

    Parallel arrays indexed by dense state id (discovery order):
    ``keys`` holds the (plant state, channel state) pair, ``in_spec`` whether
    the plant component survives in the specification subautomaton,
    ``marked`` / ``spec_marked`` the plant-level markings, and
    ``spec_reachable`` whether the state is reachable through in_spec states
    only (i.e. belongs to the specification's channel-augmented automaton).
    """

    net: NetworkConfig
    keys: list[tuple[str, ChannelState]]
    transitions: list[dict[CommEvent, int]]
    in_spec: list[bool]
    marked: list[bool]
    spec_marked: list[bool]
    spec_reachable: list[bool]
    initial: int = 0

    # -- basic accessors -------------------------------------------------
    @property
    def num_states(self) -> int:
        return len(self.keys)

    def plant_of(self, sid: int) -> str:
        return self.keys[sid][0]

    def channels_of(self, sid: int) -> ChannelState:
        return self.keys[sid][1]

    def events_at(self, sid: int) -> tuple[CommEvent, ...]:
        return tuple(self.transitions[sid])

    def target(self, sid: int, event: CommEvent) -> Optional[int]:
        return self.transitions[sid].get(event)

    def is_marked(self, sid: int) -> bool:
        return self.marked[sid]

    @property
    def initial_state(self) -> int:
        return self.initial

    def render_state(self, sid: int) -> str:
        plant, chans = self.keys[sid]
        suffix = ch.render_state(chans)
        return f"({plant},{suffix})" if suffix else f"({plant})"

    def state_labels(self) -> list[str]:
        return [self.render_state(s) for s in range(self.num_states)]

    def spec_view(self) -> "SpecView":
        return SpecView(self)

    def run(self, string: Iterable[CommEvent], start: Optional[int] = None) -> Optional[int]:
        sid = self.initial if start is None else start
        for event in string:
            nxt = self.transitions[sid].get(event)
            if nxt is None:
                return None
            sid = nxt
        return sid

    def string_in_spec(self, string: Iterable[CommEvent]) -> bool:
        """True iff the string stays within in_spec states throughout."""
        sid = self.initial
        if not self.in_spec[sid]:
            return False
        for event in string:
            nxt = self.transitions[sid].get(event)
            if nxt is None or not self.in_spec[nxt]:
                return False
            sid = nxt
        return True

    def shortest_strings(self, within_spec: bool = False) -> list[Optional[tuple[CommEvent, ...]]]:
        """BFS-shortest string to every state; restricted to in_spec paths if asked.

        Ties break by exploration order, so witnesses are stable.
        """
        parent: list[Optional[tuple[int, CommEvent]]] = [None] * self.num_states
        seen = [False] * self.num_states
        out: list[Optional[tuple[CommEvent, ...]]] = [None] * self.num_states
        if within_spec and not self.in_spec[self.initial]:
            return out
        seen[self.initial] = True
        out[self.initial] = ()
        queue = deque([self.initial])
        while queue:
            sid = queue.popleft()
            for event, dst in self.transitions[sid].items():
                if within_spec and not self.in_spec[dst]:
                    continue
                if not seen[dst]:
                    seen[dst] = True
                    parent[dst] = (sid, event)
                    out[dst] = out[sid] + (event,)
                    queue.append(dst)
        return out


@dataclass
class SpecView:
    """The specification's channel-augmented automaton, as a read-only
    restriction of the full one (in_spec states, induced transitions,
    specification marking)."""

    comm: CommAutomaton

    @property
    def initial_state(self) -> int:
        return self.comm.initial

    def events_at(self, sid: int) -> tuple[CommEvent, ...]:
        return tuple(
            e for e, t in self.comm.transitions[sid].items() if self.comm.in_spec[t]
        )

    def target(self, sid: int, event: CommEvent) -> Optional[int]:
        dst = self.comm.transitions[sid].get(event)
        if dst is None or not self.comm.in_spec[dst]:
            return None
        return dst

    def is_marked(self, sid: int) -> bool:
        return self.comm.spec_marked[sid]


def build_comm_automaton(
    plant: TimedAutomaton,
    spec: TimedAutomaton,
    net: NetworkConfig,
    *,
    max_states: int = 500_000,
    queue_cap_factor: int = 10,
) -> CommAutomaton:
    """Breadth-first construction of the channel-augmented automaton.

    ``spec`` must be a subautomaton of ``plant`` (same initial state; marking
    may be an explicit subset of the inherited one).  Queue lengths are capped
    at queue_cap_factor * (delay_bound + 1) * |plant states| per channel; a
    well-formed timed plant never gets near the cap, so exceeding it reports a
    model error with the offending trace.
    """
    if not is_structural_subautomaton(spec, plant):
        raise ModelError(
            f"{spec.name!r} is not a subautomaton of {plant.name!r} (induced transitions,"
            " same initial state, marking within the inherited set)"
        )
    spec_states = set(spec.states)
    spec_marked_states = set(spec.marked)
    caps = {
        key: queue_cap_factor * (link.delay_bound + 1) * len(plant.states)
        for key, link in net.channels.items()
    }

    initial_key = (plant.initial, ChannelState.empty(net))
    index: dict[tuple[str, ChannelState], int] = {initial_key: 0}
    keys = [initial_key]
    transitions: list[dict[CommEvent, int]] = [{}]
    parent: list[Optional[tuple[int, CommEvent]]] = [None]

    def trace_to(sid: int) -> list[str]:
        events: list[str] = []
        while parent[sid] is not None:
            prev, event = parent[sid]
            events.append(render_event(event))
            sid = prev
        return list(reversed(events))

    def intern(key: tuple[str, ChannelState], src: int, event: CommEvent) -> int:
        sid = index.get(key)
        if sid is None:
            sid = len(keys)
            if sid >= max_states:
                raise ResourceLimitError(
                    f"channel-augmented automaton exceeds {max_states} states"
                )
            index[key] = sid
            keys.append(key)
            transitions.append({})
            parent.append((src, event))
            for (i, j), queue in key[1].queues:
                if len(queue) > caps[(i, j)]:
                    raise ChannelOverflowError(
                        f"channel ({i + 1},{j + 1}) exceeded its queue cap {caps[(i, j)]}",
                        trace=trace_to(sid),
                    )
            queue_bfs.append(sid)
        return sid

    queue_bfs: deque[int] = deque([0])
    while queue_bfs:
        sid = queue_bfs.popleft()
        q, theta = keys[sid]
        here = transitions[sid]
        # tick: plant and every channel must both allow it
        tick_target = plant.target(q, TICK)
        if tick_target is not None:
            aged = ch.time_step(theta, net)
            if aged is not None:
                here[PLANT_TICK] = intern((tick_target, aged), sid, PLANT_TICK)
        # plant events, lexicographic
        for event in plant.active(q):
            if event == TICK:
                continue
            dst = plant.transitions[q][event]
            here[Plant(event)] = intern(
                (dst, ch.push(theta, event, net)), sid, Plant(event)
            )
        # deliveries: at most the front entry of each channel
        for i, j in net.channel_keys:
            queue = theta.get(i, j)
            if queue:
                event = Deliver(i, j, queue[0].event)
                delivered = ch.deliver(theta, i, j, queue[0].event)
                here[event] = intern((q, delivered), sid, event)
        # losses: every lossy position of each channel
        for i, j in net.channel_keys:
            queue = theta.get(i, j)
            for d in range(1, len(queue) + 1):
                lost = ch.lose(theta, i, j, d, net)
                if lost is not None:
                    event = Lose(i, j, d)
                    here[event] = intern((q, lost), sid, event)

    in_spec = [k[0] in spec_states for k in keys]
    marked = [k[0] in plant.marked for k in keys]
    spec_marked = [k[0] in spec_marked_states for k in keys]

    spec_reachable = [False] * len(keys)
    if in_spec[0]:
        spec_reachable[0] = True
        walk = deque([0])
        while walk:
            sid = walk.popleft()
            for dst in transitions[sid].values():
                if in_spec[dst] and not spec_reachable[dst]:
                    spec_reachable[dst] = True
                    walk.append(dst)

    return CommAutomaton(
        net=net,
        keys=keys,
        transitions=transitions,
        in_spec=in_spec,
        marked=marked,
        spec_marked=spec_marked,
        spec_reachable=spec_reachable,
    )


def project_plant(string: Iterable[CommEvent]) -> tuple[str, ...]:
    """Keep plant events in order, drop deliveries and losses."""
    return tuple(e.event for e in string if isinstance(e, Plant))


def project_observation(string: Iterable[CommEvent], i: int, net: NetworkConfig) -> tuple[str, ...]:
    """What supervisor ``i`` observes of a run: its own observable plant
    events as they happen, plus each event delivered to it over a channel."""
    out: list[str] = []
    for e in string:
        if isinstance(e, Plant):
            if e.event in net.observable[i]:
                out.append(e.event)
        elif isinstance(e, Deliver) and e.receiver == i:
            out.append(e.event)
    return tuple(out)


def observation_of(event: CommEvent, i: int, net: NetworkConfig) -> Optional[str]:
    """Per-event form of project_observation; None for unobserved events."""
    if isinstance(event, Plant):
        return event.event if event.event in net.observable[i] else None
    if isinstance(event, Deliver) and event.receiver == i:
        return event.event
    return None


@dataclass(frozen=True)
class ProjectionVerdict:
    equal: bool
    distinguishing: Optional[tuple[str, ...]] = None
    only_in: Optional[str] = None  # "projection" or "plant"


def check_projection_equivalence(plant: TimedAutomaton, comm: CommAutomaton) -> ProjectionVerdict:
    """Check that projecting away deliveries and losses recovers exactly the
    plant's language.

    Determinizes the channel-augmented automaton with deliveries/losses as
    silent moves and walks it against the plant; a mismatch yields a shortest
    distinguishing plant string.
    """

    def closure(states: frozenset[int]) -> frozenset[int]:
        out = set(states)
        queue = deque(states)
        while queue:
            sid = queue.popleft()
            for event, dst in comm.transitions[sid].items():
                if not isinstance(event, Plant) and dst not in out:
                    out.add(dst)
                    queue.append(dst)
        return frozenset(out)

    alphabet = sorted(plant.alphabet)
    start = (closure(frozenset([comm.initial])), plant.initial)
    seen = {start}
    queue: deque[tuple[tuple[frozenset[int], str], tuple[str, ...]]] = deque([(start, ())])
    while queue:
        (subset, q), string = queue.popleft()
        for event in alphabet:
            move = {
                comm.transitions[sid][Plant(event)]
                for sid in subset
                if Plant(event) in comm.transitions[sid]
            }
            plant_next = plant.target(q, event)
            if move and plant_next is None:
                return ProjectionVerdict(False, string + (event,), only_in="projection")
            if not move and plant_next is not None:
                return ProjectionVerdict(False, string + (event,), only_in="plant")
            if move:
                nxt = (closure(frozenset(move)), plant_next)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, string + (event,)))
    return ProjectionVerdict(True)
