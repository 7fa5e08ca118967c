"""Shared helpers for randomized dataset/term fixtures."""

import random

from groverwild.boolexpr import truth_table
from groverwild.encoding import (
    TermKind,
    WildcardTerm,
    build_codec,
    classical_match,
    compile_oracle,
    encode_string,
)

ALPHABET_POOL = "abcd"


def explicit_codec(alphabet):
    """Codec covering the whole candidate alphabet, not just loaded characters."""
    width = max(1, (len(alphabet) - 1).bit_length())
    explicit = {ch: format(i, f"0{width}b") for i, ch in enumerate(alphabet)}
    return build_codec(["".join(alphabet)], explicit)


def random_instance(rng: random.Random, max_chars: int = 5):
    """Random (dataset, terms, codec) with 2-4 letters and 2-max_chars columns.

    Terms may use alphabet characters absent from the dataset, so no-match
    scenarios occur naturally.
    """
    alphabet = list(ALPHABET_POOL[: rng.randint(2, 4)])
    length = rng.randint(2, max_chars)
    universe = len(alphabet) ** length
    count = rng.randint(1, min(6, universe))
    dataset = [
        "".join(rng.choice(alphabet) for _ in range(length)) for _ in range(count)
    ]
    terms = []
    for _ in range(rng.randint(1, 3)):
        kind = rng.choice(list(TermKind))
        if kind is TermKind.EXACT and rng.random() < 0.8:
            tlen = length
        else:
            tlen = rng.randint(1, length)
        terms.append(
            WildcardTerm(kind, "".join(rng.choice(alphabet) for _ in range(tlen)))
        )
    return dataset, terms, explicit_codec(alphabet)


def oracle_marked_bits(dataset, terms, codec):
    """Satisfying assignments of the compiled oracle expression, as bit strings."""
    build = compile_oracle(dataset, terms, codec)
    table = truth_table(build.expression, build.var_count)
    n = build.var_count
    return {format(i, f"0{n}b") for i in table.marked_states()}


def classical_marked_bits(dataset, terms, codec):
    """Encoded classical matcher results: the independent ground truth."""
    return {encode_string(codec, s).bits for s in classical_match(dataset, terms)}
