import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from baire.stream import Stream  # noqa: E402
from vm.oracle import WhitelistOracle  # noqa: E402

SEED = 20240611


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def universe() -> WhitelistOracle:
    return WhitelistOracle.load("universe.json")


def random_word(rng: np.random.Generator, length: int, alphabet: int = 4) -> tuple[int, ...]:
    return tuple(int(v) for v in rng.integers(0, alphabet, size=length))


def random_stream(rng: np.random.Generator, head: int = 8, alphabet: int = 4) -> Stream:
    """유한 기술을 가진 임의의 스트림 (head 뒤 상수)"""
    word = random_word(rng, head, alphabet)
    return Stream.eventually(word, (int(rng.integers(0, alphabet)),))
