"""Shared record of acceptance outcomes, printed in the pytest terminal summary."""

from contextlib import contextmanager

RESULTS: dict[int, tuple[str, str]] = {}


@contextmanager
def criterion(number: int, label: str):
    try:
        yield
    except BaseException:
        RESULTS[number] = ("FAIL", label)
        print(f"criterion {number}: FAIL  {label}")
        raise
    RESULTS[number] = ("PASS", label)
    print(f"criterion {number}: PASS  {label}")
