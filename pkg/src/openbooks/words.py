"""Letter encoding and free reduction for crossing words.

A crossing word records how a path meets the co-cores of the bands
(the cut system).  Letters are encoded as small ints: cell index ``c``
crossed positively is ``2*c``, negatively ``2*c + 1``.  Words are
tuples of letters; reduced words never contain a letter followed by
its inverse.
"""

from __future__ import annotations

from typing import Iterable, Tuple

Word = Tuple[int, ...]


def enc(cell: int, sign: int) -> int:
    return 2 * cell + (0 if sign > 0 else 1)


def cell_of(letter: int) -> int:
    return letter >> 1


def sign_of(letter: int) -> int:
    return -1 if letter & 1 else 1


def inv_letter(letter: int) -> int:
    return letter ^ 1


def reduce_word(letters: Iterable[int]) -> Word:
    """Free reduction: cancel adjacent inverse pairs."""
    stack: list[int] = []
    for ltr in letters:
        if stack and stack[-1] == inv_letter(ltr):
            stack.pop()
        else:
            stack.append(ltr)
    return tuple(stack)


def invert_word(word: Iterable[int]) -> Word:
    return tuple(inv_letter(ltr) for ltr in reversed(tuple(word)))


def mul(*parts: Iterable[int]) -> Word:
    out: list[int] = []
    for part in parts:
        for ltr in part:
            if out and out[-1] == inv_letter(ltr):
                out.pop()
            else:
                out.append(ltr)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> Word:
    w = reduce_word(word)
    while len(w) >= 2 and w[0] == inv_letter(w[-1]):
        w = w[1:-1]
    return w


def min_rotation(word: Word) -> Word:
    """Lexicographically minimal rotation; canonical form of a cyclic word."""
    if not word:
        return word
    best = word
    for i in range(1, len(word)):
        rot = word[i:] + word[:i]
        if rot < best:
            best = rot
    return best


def rotations(word: Word):
    for i in range(len(word)):
        yield word[i:] + word[:i]


def is_cyclically_reduced(word: Word) -> bool:
    if not word:
        return True
    return reduce_word(word) == word and word[0] != inv_letter(word[-1])


def is_proper_power(word: Word) -> bool:
    """True if the cyclic word is a strict power u^k, k >= 2.

    For cyclically reduced words this coincides with being a proper
    power in the free group.
    """
    n = len(word)
    if n == 0:
        return False
    for d in range(1, n):
        if n % d == 0 and word == word[:d] * (n // d):
            return True
    return False
