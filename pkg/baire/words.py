"""
Baire-space plumbing on finite data: the Cantor pairing, the sequence codec and
word helpers shared by every other package.
"""
import math
from typing import Iterable, Sequence

Word = tuple[int, ...]

EMPTY: Word = ()

# 순서쌍 부호화
# ──────────────────────────────────────────


def pair(n: int, k: int) -> int:
    """⟨n,k⟩ = (n+k)(n+k+1)/2 + k"""
    s = n + k
    return s * (s + 1) // 2 + k


def unpair(m: int) -> tuple[int, int]:
    w = (math.isqrt(8 * m + 1) - 1) // 2
    k = m - w * (w + 1) // 2
    return w - k, k


def pair_all(values: Sequence[int]) -> int:
    """⟨a, ⟨b, ⟨c, ...⟩⟩⟩ (오른쪽 결합). 원소가 하나면 그 값 자체."""
    if not values:
        raise ValueError("pair_all needs at least one value")
    acc = values[-1]
    for v in reversed(values[:-1]):
        acc = pair(v, acc)
    return acc


def unpair_all(m: int, arity: int) -> tuple[int, ...]:
    out: list[int] = []
    for _ in range(arity - 1):
        head, m = unpair(m)
        out.append(head)
    out.append(m)
    return tuple(out)


# 유한 수열 ↔ 자연수 (전단사)
# ──────────────────────────────────────────

_SEPARATOR = 3


def _bijective_digits(n: int, base: int) -> list[int]:
    digits: list[int] = []
    while n > 0:
        d = n % base or base
        digits.append(d)
        n = (n - d) // base
    digits.reverse()
    return digits


def _bijective_value(digits: Iterable[int], base: int) -> int:
    value = 0
    for d in digits:
        value = value * base + d
    return value


def encode_sequence(values: Sequence[int]) -> int:
    """
    Codes a finite sequence of naturals as a natural, bijectively.

    The empty sequence is 0. Otherwise each entry is written as a bijective binary
    numeral (digits 1, 2), entries are joined by the digit 3, and the resulting
    bijective ternary numeral plus one is the code. Code size stays linear in the
    total bit length of the entries.
    """
    if not values:
        return 0
    symbols: list[int] = []
    for i, v in enumerate(values):
        if v < 0:
            raise ValueError(f"negative entry {v} in sequence")
        if i:
            symbols.append(_SEPARATOR)
        symbols.extend(_bijective_digits(v, 2))
    return _bijective_value(symbols, 3) + 1


def decode_sequence(n: int) -> Word:
    if n < 0:
        raise ValueError(f"negative code {n}")
    if n == 0:
        return EMPTY
    components: list[list[int]] = [[]]
    for d in _bijective_digits(n - 1, 3):
        if d == _SEPARATOR:
            components.append([])
        else:
            components[-1].append(d)
    return tuple(_bijective_value(c, 2) for c in components)


# 단어 연산
# ──────────────────────────────────────────


def is_prefix(u: Sequence[int], w: Sequence[int]) -> bool:
    """u ⊑ w"""
    return len(u) <= len(w) and tuple(w[: len(u)]) == tuple(u)


def comparable(u: Sequence[int], w: Sequence[int]) -> bool:
    return is_prefix(u, w) or is_prefix(w, u)


def common_prefix(u: Sequence[int], w: Sequence[int]) -> Word:
    n = 0
    for a, b in zip(u, w):
        if a != b:
            break
        n += 1
    return tuple(u[:n])


def concat(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        out.extend(w)
    return tuple(out)


def parse_word(text: str) -> Word:
    """'0,0,1' 또는 '001' 형식 (쉼표가 없으면 한 글자씩)."""
    text = text.strip()
    if not text or text in ("ε", "eps"):
        return EMPTY
    if "," in text:
        return tuple(int(t) for t in text.split(",") if t.strip())
    return tuple(int(ch) for ch in text)


def encode_text(text: str) -> int:
    """UTF-8 바이트 앞에 0x01을 붙여 읽은 big-endian 자연수"""
    return int.from_bytes(b"\x01" + text.encode("utf-8"), "big")


def decode_text(n: int) -> str:
    raw = n.to_bytes(max(1, (n.bit_length() + 7) // 8), "big")
    if raw[0] != 1:
        raise ValueError(f"{n} does not encode a text")
    return raw[1:].decode("utf-8")


def format_word(word: Sequence[int]) -> str:
    if all(0 <= v < 10 for v in word):
        return "".join(str(v) for v in word)
    return ",".join(str(v) for v in word)


def length_lex(max_length: int, alphabet: int) -> Iterable[Word]:
    """길이 우선, 같은 길이는 사전순으로 단어를 나열합니다."""
    frontier: list[Word] = [EMPTY]
    yield EMPTY
    for _ in range(max_length):
        nxt: list[Word] = []
        for w in frontier:
            for a in range(alphabet):
                nxt.append(w + (a,))
        yield from nxt
        frontier = nxt
