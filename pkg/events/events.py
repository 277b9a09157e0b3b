# events/events.py
from dataclasses import dataclass, field
from core.event_bus import Event
from typing import Any, Dict, Optional


@dataclass
class CheckCompleted(Event):
    check_id: str
    passed: bool
    instances: int
    witness: Optional[str] = None


@dataclass
class SchurComponentSolved(Event):
    order: int               # -t
    sdeg_a: float            # Sdeg_A of the solved component, -inf when zero


@dataclass
class RecursionStepRecorded(Event):
    index: int
    order: int               # ord Q_i
    n: int
    m: int
    epsilon: Any


@dataclass
class ReductionMoveApplied(Event):
    generator: str           # text form of the generator removed on the right
    degree: int              # (1,1)-degree of the pair after the move
    params: Dict[str, Any] = field(default_factory=dict)
