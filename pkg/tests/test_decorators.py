from dataclasses import dataclass

from strichartzlab.timing_decorator import timed


@dataclass
class Result:
    value: int
    wall_time_seconds: float = -1.0


@timed
def make_result(value):
    return Result(value)


@timed(label="plain")
def make_plain(value):
    return value * 2


def test_timed_records_wall_time():
    result = make_result(3)
    assert result.value == 3
    assert result.wall_time_seconds >= 0.0


def test_timed_passes_through_plain_values():
    assert make_plain(4) == 8
    assert make_plain.__name__ == "make_plain"
