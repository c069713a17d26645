import json
import logging
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from sympy import isprime

from .abelian_group import FiniteAbelianGroup, GroupElement
from .config import THREADS
from .errors import CommandError, CoverMonoidError, InvariantViolation
from .graded_algebra import MultiplicationTable, ScalarField

logger = logging.getLogger(__name__)


@contextmanager
def get_executor() -> Iterator[ThreadPoolExecutor]:
    executor = ThreadPoolExecutor(max_workers=THREADS)
    try:
        yield executor
    finally:
        executor.shutdown()


@contextmanager
def engine_errors(action: str):
    """Turn input errors raised by the engine into a CommandError with exit status 2."""
    try:
        yield
    except (CommandError, InvariantViolation):
        raise
    except CoverMonoidError as e:
        logger.error(f"{action} failed: {e}")
        raise CommandError(status_code=2, detail=str(e))


def parse_group(spec: str) -> FiniteAbelianGroup:
    with engine_errors("group parsing"):
        M = FiniteAbelianGroup.parse(spec)
    if M.size < 2:
        raise CommandError(status_code=2, detail=f"{spec!r} is the trivial group")
    return M


def parse_element(M: FiniteAbelianGroup, text: str) -> GroupElement:
    with engine_errors("element parsing"):
        return M.parse_element(text)


def parse_field(text: str) -> ScalarField:
    with engine_errors("field parsing"):
        return ScalarField.parse(text)


def parse_scalar(scalars: ScalarField, text: str):
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise CommandError(status_code=2, detail=f"cannot parse {text!r} as a rational number")
    with engine_errors("scalar parsing"):
        return scalars(value)


def parse_prime(value: int) -> int:
    if not isprime(value):
        raise CommandError(status_code=2, detail=f"{value} is not a prime")
    return value


def parse_ints(text: str, count: int) -> list[int]:
    try:
        values = [int(part) for part in text.split(",")]
    except ValueError:
        raise CommandError(status_code=2, detail=f"cannot parse {text!r} as integers")
    if len(values) != count:
        raise CommandError(status_code=2, detail=f"expected {count} comma-separated integers, got {text!r}")
    return values


def load_table(path: str) -> MultiplicationTable:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise CommandError(status_code=2, detail=f"cannot read table {path}: {e}")
    with engine_errors("table parsing"):
        return MultiplicationTable.from_json(data)
