from core.event_bus import EventBus, emit_to
from events.events import CheckCompleted, ReductionMoveApplied


def test_handlers_see_only_their_event_type():
    bus = EventBus()
    seen = []
    bus.subscribe(CheckCompleted, seen.append)
    bus.emit(CheckCompleted(check_id="identities", passed=True, instances=3))
    bus.emit(ReductionMoveApplied(generator="Phi(2,1)", degree=3))
    assert [e.check_id for e in seen] == ["identities"]


def test_coroutine_handler_runs_without_a_loop():
    bus = EventBus()
    seen = []

    async def handler(event):
        seen.append(event.degree)

    bus.subscribe(ReductionMoveApplied, handler)
    bus.emit(ReductionMoveApplied(generator="PhiP(3,1)", degree=2, params={"k": 3}))
    assert seen == [2]


def test_emit_to_optional_bus():
    emit_to(None, CheckCompleted(check_id="twist", passed=False, instances=0, witness="w"))
    bus = EventBus()
    seen = []
    bus.subscribe(CheckCompleted, seen.append)
    emit_to(bus, CheckCompleted(check_id="twist", passed=False, instances=0, witness="w"))
    assert seen[0].witness == "w"
