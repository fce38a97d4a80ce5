from baire.words import (
    EMPTY,
    Word,
    comparable,
    common_prefix,
    concat,
    decode_sequence,
    encode_sequence,
    format_word,
    is_prefix,
    pair,
    parse_word,
    unpair,
)
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

__all__ = [
    "EMPTY",
    "Word",
    "comparable",
    "common_prefix",
    "concat",
    "decode_sequence",
    "encode_sequence",
    "format_word",
    "is_prefix",
    "pair",
    "parse_word",
    "unpair",
    "ZERO",
    "Description",
    "Stream",
    "const",
    "constant_sequence",
    "interleave2",
    "interleave_omega",
    "parse_stream",
    "prepend",
    "split2",
    "tail",
]
