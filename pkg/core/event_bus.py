# core/event_bus.py
from collections import defaultdict
from typing import Type, Callable, Dict, List, Any
import asyncio
import logging

logger = logging.getLogger(__name__)


class Event:
    """Base class for all events."""
    pass


class EventBus:
    """
    Publish/subscribe hub used by the long-running drivers (Schur solver,
    recursion, decomposition, lemma suite) to report progress.
    """

    def __init__(self):
        self._subs: Dict[Type[Event], List[Callable[[Event], Any]]] = defaultdict(list)

    def subscribe(self, event_type: Type[Event], handler: Callable[[Event], Any]):
        """Register a handler for a specific event type."""
        self._subs[event_type].append(handler)

    def emit(self, event: Event):
        """Publish an event to all subscribers (sync or async)."""
        for handler in self._subs[type(event)]:
            result = handler(event)
            # If handler returns a coroutine, schedule it on the running loop
            if asyncio.iscoroutine(result):
                try:
                    asyncio.get_running_loop().create_task(result)
                except RuntimeError:
                    logger.debug("no running loop for %s, running handler inline", type(event).__name__)
                    asyncio.run(result)


def emit_to(bus, event: Event):
    """Emit on an optional bus; drivers accept ``bus=None``."""
    if bus is not None:
        bus.emit(event)
