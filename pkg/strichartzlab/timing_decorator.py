# strichartzlab/timing_decorator.py

import time
import logging
from functools import wraps

logger = logging.getLogger(__name__)


def timed(func=None, *, label: str = None):
    """
    실행 시간을 측정해 반환값의 wall_time_seconds 에 기록하는 데코레이터.

    Args:
        label: 로그에 표시할 이름 (기본: 함수 이름)

    반환값에 wall_time_seconds 속성이 없으면 로그만 남긴다.
    """
    def decorator(f):
        name = label or f.__name__

        @wraps(f)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            result = f(*args, **kwargs)
            elapsed = time.perf_counter() - start
            if hasattr(result, 'wall_time_seconds'):
                result.wall_time_seconds = elapsed
            logger.debug(f"⏱️ {name} 실행 시간: {elapsed:.3f}s")
            return result
        return wrapper

    if func is not None:
        return decorator(func)
    return decorator
