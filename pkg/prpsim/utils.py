import math
import time
from contextlib import contextmanager


def format_float(value):
    """Shortest string that parses back to the same double."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"refusing to export non-finite value {value!r}")
    if value == 0.0:
        # -0.0 and 0.0 print alike
        return "0.0"
    return repr(value)


@contextmanager
def stopwatch():
    elapsed = {"seconds": 0.0}
    start = time.perf_counter()
    try:
        yield elapsed
    finally:
        elapsed["seconds"] = time.perf_counter() - start
