import numpy as np

from baire.stream import (
    ZERO,
    Description,
    Stream,
    const,
    constant_sequence,
    interleave2,
    interleave_omega,
    parse_stream,
    prepend,
    split2,
    tail,
)
from baire.words import (
    decode_sequence,
    encode_sequence,
    format_word,
    length_lex,
    pair,
    pair_all,
    parse_word,
    unpair,
    unpair_all,
)
from tests.conftest import random_stream, random_word


def test_pair_examples() -> None:
    assert pair(0, 0) == 0
    assert pair(1, 0) == 1
    assert pair(0, 1) == 2


def test_unpair_inverts_pair_below_10000() -> None:
    assert unpair(0) == (0, 0)
    assert unpair(2) == (0, 1)
    for m in range(10000):
        assert pair(*unpair(m)) == m


def test_pair_is_bijection_onto_initial_segments() -> None:
    for n in range(200):
        for k in range(200):
            assert unpair(pair(n, k)) == (n, k)
    for m in range(30):
        image = {pair(n, s - n) for s in range(m + 1) for n in range(s + 1)}
        assert image == set(range((m + 1) * (m + 2) // 2))


def test_pair_all_round_trip() -> None:
    assert unpair_all(pair_all([3, 1, 4, 1]), 4) == (3, 1, 4, 1)
    assert pair_all([7]) == 7


def test_sequence_codec_is_bijective_on_small_codes() -> None:
    seen = set()
    for n in range(3000):
        seq = decode_sequence(n)
        assert encode_sequence(seq) == n
        seen.add(seq)
    assert len(seen) == 3000
    assert encode_sequence(()) == 0
    assert decode_sequence(encode_sequence((0, 12, 0, 5))) == (0, 12, 0, 5)


def test_interleave2_examples(rng: np.random.Generator) -> None:
    assert interleave2(const(0), const(1)).prefix(6) == (0, 1, 0, 1, 0, 1)
    for _ in range(10):
        p, q = random_stream(rng), random_stream(rng)
        left, right = split2(interleave2(p, q))
        assert left.prefix(64) == p.prefix(64)
        assert right.prefix(64) == q.prefix(64)
    p = random_stream(rng)
    both = interleave2(p, p)
    assert [both.at(2 * i) for i in range(20)] == [both.at(2 * i + 1) for i in range(20)]


def test_split2_without_parts_projects_cells() -> None:
    r = Stream(lambda i: i)
    even, odd = split2(r)
    assert even.prefix(4) == (0, 2, 4, 6)
    assert odd.prefix(4) == (1, 3, 5, 7)


def test_interleave_omega_component_extraction(rng: np.random.Generator) -> None:
    parts = [random_stream(rng) for _ in range(16)]
    x = interleave_omega(parts)
    for n in range(16):
        for k in range(16):
            assert x.at(pair(n, k)) == parts[n].at(k)
    assert interleave_omega([ZERO] * 3).prefix(40) == (0,) * 40
    constants = interleave_omega(lambda n: const(n))
    assert all(constants.at(pair(n, k)) == n for n in range(8) for k in range(8))


def test_interleave_is_injective_on_prefixes(rng: np.random.Generator) -> None:
    u = random_word(rng, 6)
    v = list(u)
    v[3] = (v[3] + 1) % 4
    tail_stream = const(0)
    a = interleave2(Stream.from_word(u, tail_stream), ZERO)
    b = interleave2(Stream.from_word(tuple(v), tail_stream), ZERO)
    assert a.prefix(12) != b.prefix(12)


def test_prepend_and_tail() -> None:
    assert prepend(5, ZERO).prefix(4) == (5, 0, 0, 0)
    assert prepend(0, const(1)).prefix(4) == (0, 1, 1, 1)
    p = Stream(lambda i: i * i)
    assert tail(prepend(9, p)).prefix(32) == p.prefix(32)


def test_stream_values_are_deterministic() -> None:
    calls = []

    def producer(i: int) -> int:
        calls.append(i)
        return (i * 7) % 5

    s = Stream(producer)
    first = [s.at(i) for i in (3, 9, 3, 0, 9)]
    assert first == [1, 3, 1, 0, 3]
    assert calls.count(3) == 1


def test_descriptions_decide_equality() -> None:
    a = Stream.eventually((1, 2), (0, 1))
    b = Stream.eventually((1, 2, 0, 1, 0), (1, 0))
    assert a.same_as(b)
    assert a.description == b.description
    assert Description((), (3,)).first_nonzero() == 0
    assert Stream.eventually((0, 0, 4), (2,)).maximum() == (4, 2)
    assert Stream.eventually((0, 0), (0,)).first_nonzero() is None


def test_constant_sequence_settles_immediately() -> None:
    x = constant_sequence(Stream.eventually((3,), (1,)))
    assert x.settle_index(7) == 0
    assert x.limit_stream().prefix(3) == (3, 1, 1)


def test_parse_stream_literals() -> None:
    assert parse_stream("const:4").prefix(3) == (4, 4, 4)
    assert parse_stream("periodic:1,2").prefix(5) == (1, 2, 1, 2, 1)
    assert parse_stream("word:001 then const:7").prefix(5) == (0, 0, 1, 7, 7)
    assert parse_stream("word:1,12 then periodic:0,3").prefix(5) == (1, 12, 0, 3, 0)


def test_word_text_and_enumeration() -> None:
    assert parse_word("0,10,2") == (0, 10, 2)
    assert parse_word("ε") == ()
    assert format_word((1, 0, 1)) == "101"
    assert format_word((1, 12)) == "1,12"
    words = list(length_lex(2, 2))
    assert words == [(), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]
