"""Deterministic timed automata and the operations the rest of the package builds on.

A timed automaton is an ordinary finite automaton whose alphabet contains the
reserved clock event ``tick``; every other event is instantaneous and time
advances only on ticks.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import CompositionError, DeterminismError, SchemaError, UnknownNameError

TICK = "tick"


def event_order(event: str) -> tuple[int, str]:
    """Canonical event ordering: tick first, then lexicographic."""
    return (0 if event == TICK else 1, event)


@dataclass(frozen=True)
class TimedAutomaton:
    """Deterministic automaton over an alphabet containing ``tick``.

    ``states`` keeps declaration order so that derived artifacts (DOT output,
    dense numbering) are reproducible.  ``transitions`` maps each state to an
    event->target mapping whose iteration order is canonical (tick first).
    Instances are immutable after construction; all operations return new
    automata.
    """

    name: str
    states: tuple[str, ...]
    alphabet: frozenset[str]
    transitions: Mapping[str, Mapping[str, str]]
    initial: str
    marked: frozenset[str]

    @classmethod
    def build(
        cls,
        name: str,
        states: Iterable[str],
        alphabet: Iterable[str],
        transitions: Iterable[tuple[str, str, str]],
        initial: str,
        marked: Iterable[str],
    ) -> "TimedAutomaton":
        """Validate and normalize raw automaton data.

        Raises DeterminismError on duplicate (state, event) pairs,
        UnknownNameError on undeclared states/events, SchemaError on a
        missing tick event or duplicate state names.
        """
        state_list = list(states)
        if len(set(state_list)) != len(state_list):
            raise SchemaError(f"{name}: duplicate state names")
        state_set = set(state_list)
        alpha = frozenset(alphabet)
        if TICK not in alpha:
            raise SchemaError(f"{name}: alphabet must contain {TICK!r}")
        if initial not in state_set:
            raise UnknownNameError(f"{name}: initial state {initial!r} not declared")
        marked_set = frozenset(marked)
        for m in marked_set:
            if m not in state_set:
                raise UnknownNameError(f"{name}: marked state {m!r} not declared")
        raw: dict[str, dict[str, str]] = {q: {} for q in state_list}
        for src, event, dst in transitions:
            if src not in state_set:
                raise UnknownNameError(f"{name}: transition from unknown state {src!r}")
            if dst not in state_set:
                raise UnknownNameError(f"{name}: transition to unknown state {dst!r}")
            if event not in alpha:
                raise UnknownNameError(f"{name}: transition on unknown event {event!r}")
            if event in raw[src]:
                raise DeterminismError(f"{name}: duplicate transition ({src!r}, {event!r})")
            raw[src][event] = dst
        normalized = {
            q: {e: raw[q][e] for e in sorted(raw[q], key=event_order)} for q in state_list
        }
        return cls(name, tuple(state_list), alpha, normalized, initial, marked_set)

    def active(self, state: str) -> tuple[str, ...]:
        """Events with a transition at ``state``, in canonical order."""
        return tuple(self.transitions[state])

    def target(self, state: str, event: str) -> Optional[str]:
        return self.transitions[state].get(event)

    def run(self, string: Iterable[str], start: Optional[str] = None) -> Optional[str]:
        """State reached from ``start`` (default initial) on ``string``, or None."""
        state = self.initial if start is None else start
        for event in string:
            nxt = self.transitions[state].get(event)
            if nxt is None:
                return None
            state = nxt
        return state

    def accepts(self, string: Iterable[str]) -> bool:
        state = self.run(string)
        return state is not None and state in self.marked

    # duck interface shared with the channel-level structures
    @property
    def initial_state(self) -> str:
        return self.initial

    def events_at(self, state: str) -> tuple[str, ...]:
        return self.active(state)

    def is_marked(self, state: str) -> bool:
        return state in self.marked


def accessible(auto: TimedAutomaton) -> TimedAutomaton:
    """Restriction to states reachable from the initial state.

    Declaration order of surviving states is preserved, so an already
    accessible automaton comes back unchanged.
    """
    reached = {auto.initial}
    queue = deque([auto.initial])
    while queue:
        q = queue.popleft()
        for event in auto.transitions[q]:
            dst = auto.transitions[q][event]
            if dst not in reached:
                reached.add(dst)
                queue.append(dst)
    if len(reached) == len(auto.states):
        return auto
    states = tuple(q for q in auto.states if q in reached)
    transitions = {q: dict(auto.transitions[q]) for q in states}
    return TimedAutomaton(
        auto.name,
        states,
        auto.alphabet,
        transitions,
        auto.initial,
        frozenset(m for m in auto.marked if m in reached),
    )


def remove_states(auto: TimedAutomaton, removed: Iterable[str], name: Optional[str] = None) -> TimedAutomaton:
    """Induced automaton on the complement of ``removed`` (marking inherited)."""
    gone = set(removed)
    for q in gone:
        if q not in set(auto.states):
            raise UnknownNameError(f"cannot remove unknown state {q!r}")
    if auto.initial in gone:
        raise SchemaError("cannot remove the initial state")
    states = tuple(q for q in auto.states if q not in gone)
    keep = set(states)
    transitions = {
        q: {e: t for e, t in auto.transitions[q].items() if t in keep} for q in states
    }
    return TimedAutomaton(
        name or auto.name,
        states,
        auto.alphabet,
        transitions,
        auto.initial,
        frozenset(m for m in auto.marked if m in keep),
    )


def parallel_compose(a: TimedAutomaton, b: TimedAutomaton) -> TimedAutomaton:
    """Synchronous product: tick synchronizes, private events interleave.

    The component alphabets must intersect exactly in {tick}.  The result is
    accessible by construction; a pair is marked iff both components are.
    """
    shared = a.alphabet & b.alphabet
    if shared != {TICK}:
        extra = sorted(shared - {TICK})
        raise CompositionError(
            f"alphabets of {a.name!r} and {b.name!r} overlap beyond {TICK!r}: {extra}"
        )
    alphabet = a.alphabet | b.alphabet
    initial = (a.initial, b.initial)
    index: dict[tuple[str, str], str] = {initial: f"({a.initial},{b.initial})"}
    order = [initial]
    transitions: dict[str, dict[str, str]] = {}
    queue = deque([initial])
    while queue:
        pa, pb = queue.popleft()
        here: dict[str, str] = {}
        moves: list[tuple[str, tuple[str, str]]] = []
        ta = a.transitions[pa].get(TICK)
        tb = b.transitions[pb].get(TICK)
        if ta is not None and tb is not None:
            moves.append((TICK, (ta, tb)))
        private = []
        for e, t in a.transitions[pa].items():
            if e != TICK:
                private.append((e, (t, pb)))
        for e, t in b.transitions[pb].items():
            if e != TICK:
                private.append((e, (pa, t)))
        moves.extend(sorted(private, key=lambda m: m[0]))
        for event, dst in moves:
            if dst not in index:
                index[dst] = f"({dst[0]},{dst[1]})"
                order.append(dst)
                queue.append(dst)
            here[event] = index[dst]
        transitions[index[(pa, pb)]] = here
    marked = frozenset(
        index[p] for p in order if p[0] in a.marked and p[1] in b.marked
    )
    return TimedAutomaton(
        f"({a.name}||{b.name})",
        tuple(index[p] for p in order),
        alphabet,
        transitions,
        index[initial],
        marked,
    )


def is_subautomaton(sub: TimedAutomaton, auto: TimedAutomaton) -> bool:
    """True iff ``sub`` is ``auto`` with some states (and incident transitions) removed.

    Requires the same alphabet and initial state, transitions exactly induced
    by the retained states, and marking inherited (marked = parent marked
    restricted to retained states).
    """
    keep = set(sub.states)
    if not keep <= set(auto.states):
        return False
    if sub.initial != auto.initial or sub.alphabet != auto.alphabet:
        return False
    if sub.marked != auto.marked & keep:
        return False
    for q in sub.states:
        induced = {e: t for e, t in auto.transitions[q].items() if t in keep}
        if dict(sub.transitions[q]) != induced:
            return False
    return True


def is_structural_subautomaton(sub: TimedAutomaton, auto: TimedAutomaton) -> bool:
    """Like is_subautomaton but allowing the marking to be a subset of the inherited one."""
    keep = set(sub.states)
    if not keep <= set(auto.states):
        return False
    if sub.initial != auto.initial or sub.alphabet != auto.alphabet:
        return False
    if not sub.marked <= auto.marked & keep:
        return False
    for q in sub.states:
        induced = {e: t for e, t in auto.transitions[q].items() if t in keep}
        if dict(sub.transitions[q]) != induced:
            return False
    return True


def is_nonblocking(auto: TimedAutomaton) -> bool:
    """True iff every reachable state can reach a marked state."""
    reach = accessible(auto)
    co = set(reach.marked)
    grew = True
    while grew:
        grew = False
        for q in reach.states:
            if q in co:
                continue
            if any(t in co for t in reach.transitions[q].values()):
                co.add(q)
                grew = True
    return all(q in co for q in reach.states)


@dataclass(frozen=True)
class AssumptionVerdict:
    """Outcome of the three timed-model well-formedness checks.

    ``condition`` is 1, 2 or 3 for the first violated check (None when all
    hold); the witness is a cycle of (state, event) pairs for condition 1 and
    a single state name for the others.
    """

    ok: bool
    condition: Optional[int] = None
    witness_cycle: tuple[tuple[str, str], ...] = field(default=())
    witness_state: Optional[str] = None
    message: str = ""


def _find_nontick_cycle(auto: TimedAutomaton) -> Optional[list[tuple[str, str]]]:
    """A cycle using only non-tick events, or None. Iterative DFS, deterministic order."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {q: WHITE for q in auto.states}
    for root in auto.states:
        if color[root] != WHITE:
            continue
        # stack holds (state, iterator over (event, target)); path tracks the grey chain
        stack = [(root, iter([(e, t) for e, t in auto.transitions[root].items() if e != TICK]))]
        path: list[tuple[str, str]] = []  # (state, event taken from it)
        color[root] = GREY
        while stack:
            state, edges = stack[-1]
            advanced = False
            for event, target in edges:
                if color[target] == GREY:
                    # close the cycle: suffix of path from target, plus this edge
                    cycle = []
                    seen = False
                    for q, e in path:
                        if q == target:
                            seen = True
                        if seen:
                            cycle.append((q, e))
                    cycle.append((state, event))
                    if not seen:  # self-loop: path does not contain target yet
                        cycle = [(state, event)]
                    return cycle
                if color[target] == WHITE:
                    color[target] = GREY
                    path.append((state, event))
                    stack.append(
                        (target, iter([(e, t) for e, t in auto.transitions[target].items() if e != TICK]))
                    )
                    advanced = True
                    break
            if not advanced:
                color[state] = BLACK
                stack.pop()
                if path:
                    path.pop()
    return None


def validate_timed_assumptions(auto: TimedAutomaton, net) -> AssumptionVerdict:
    """Check the three structural assumptions a timed plant must satisfy.

    1. no cycle of non-tick events (only finitely many events per time unit);
    2. every state has at least one active event (time never stops);
    3. a state with no active tick has an active enforceable event.

    ``net`` is a NetworkConfig or a bare set of enforceable events.  Returns
    the first violated condition with a witness.
    """
    enforceable = getattr(net, "enforceable", net)
    cycle = _find_nontick_cycle(auto)
    if cycle is not None:
        return AssumptionVerdict(
            False,
            1,
            witness_cycle=tuple(cycle),
            message="cycle of non-tick events: " + " ".join(f"{q} -{e}->" for q, e in cycle),
        )
    for q in auto.states:
        if not auto.transitions[q]:
            return AssumptionVerdict(
                False, 2, witness_state=q, message=f"state {q!r} has no active event"
            )
    for q in auto.states:
        if TICK in auto.transitions[q]:
            continue
        if not any(e in enforceable for e in auto.transitions[q]):
            return AssumptionVerdict(
                False,
                3,
                witness_state=q,
                message=f"state {q!r} disables tick but activates no enforceable event",
            )
    return AssumptionVerdict(True)
