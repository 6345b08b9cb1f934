"""FIFO channel queues and their four update operators.

Each directed channel holds a queue of (event, age) entries; ages count ticks
since the event entered the channel and may never exceed the channel's delay
bound at a reachable state.  The operators return ``None`` where the update is
undefined -- definedness acts as a transition guard, never as an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .network import NetworkConfig


class ChannelEntry(NamedTuple):
    event: str
    age: int


# One queue, front (oldest entry, next to deliver) first.
ChannelQueue = tuple[ChannelEntry, ...]

EMPTY_SYMBOL = "ε"  # rendering of an empty queue


@dataclass(frozen=True)
class ChannelState:
    """All channel queues, keyed by (sender, receiver) in sorted order.

    The sorted canonical form makes equality and hashing well defined, so
    channel states deduplicate correctly when used as automaton state parts.
    """

    queues: tuple[tuple[tuple[int, int], ChannelQueue], ...]

    @classmethod
    def empty(cls, net: NetworkConfig) -> "ChannelState":
        return cls(tuple((key, ()) for key in net.channel_keys))

    def get(self, sender: int, receiver: int) -> ChannelQueue:
        for key, queue in self.queues:
            if key == (sender, receiver):
                return queue
        raise KeyError((sender, receiver))

    def replace(self, sender: int, receiver: int, queue: ChannelQueue) -> "ChannelState":
        return ChannelState(
            tuple((key, queue if key == (sender, receiver) else q) for key, q in self.queues)
        )


def max_delay(queue: ChannelQueue) -> int:
    """Age of the front entry; 0 for an empty queue."""
    return queue[0].age if queue else 0


def time_step(state: ChannelState, net: NetworkConfig) -> Optional[ChannelState]:
    """Advance every entry's age by one tick.

    Undefined (None) when any aged front entry would exceed its channel's
    delay bound: the channel then blocks the tick until a delivery or loss
    clears the overdue entry.
    """
    aged = []
    for key, queue in state.queues:
        bumped = tuple(ChannelEntry(e.event, e.age + 1) for e in queue)
        if max_delay(bumped) > net.channels[key].delay_bound:
            return None
        aged.append((key, bumped))
    return ChannelState(tuple(aged))


def push(state: ChannelState, event: str, net: NetworkConfig) -> ChannelState:
    """Append ``event`` with age 0 to every channel that carries it."""
    out = []
    for key, queue in state.queues:
        if event in net.channels[key].events:
            out.append((key, queue + (ChannelEntry(event, 0),)))
        else:
            out.append((key, queue))
    return ChannelState(tuple(out))


def deliver(state: ChannelState, sender: int, receiver: int, event: str) -> Optional[ChannelState]:
    """Remove the front entry of channel (sender, receiver).

    Defined only when the queue is nonempty and its front event is ``event``
    (FIFO: only the oldest entry can be delivered).
    """
    queue = state.get(sender, receiver)
    if not queue or queue[0].event != event:
        return None
    return state.replace(sender, receiver, queue[1:])


def lose(
    state: ChannelState, sender: int, receiver: int, position: int, net: NetworkConfig
) -> Optional[ChannelState]:
    """Drop the ``position``-th entry (1-based) of channel (sender, receiver).

    Defined only when the queue is at least that long and the entry's event
    is declared lossy for the channel.
    """
    queue = state.get(sender, receiver)
    if position < 1 or position > len(queue):
        return None
    if queue[position - 1].event not in net.channels[(sender, receiver)].lossy:
        return None
    return state.replace(sender, receiver, queue[: position - 1] + queue[position:])


def render_queue(queue: ChannelQueue) -> str:
    """Exact textual form used in state labels and counterexamples."""
    if not queue:
        return EMPTY_SYMBOL
    return "".join(f"({e.event},{e.age})" for e in queue)


def render_state(state: ChannelState) -> str:
    return ",".join(render_queue(queue) for _, queue in state.queues)
