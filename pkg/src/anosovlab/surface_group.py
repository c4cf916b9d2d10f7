"""Genus-g surface group presentations and freely reduced words.

Letters are encoded as integers: letter 2*j is the j-th generator, letter
2*j + 1 its inverse, so the inverse of any letter is `letter ^ 1`.  The
generators are ordered a1, b1, a2, b2, ...; the string form uses one
lowercase character per generator ("a", "b", "c", "d" at genus 2) with the
uppercase character for its inverse, so the genus-2 relator reads "abABcdCD".
"""

from dataclasses import dataclass, field

from .errors import WordError

__all__ = ["Word", "Presentation", "presentation", "word_value"]

_CHARS = "abcdefghijklmnopqrstuvwxyz"


def letter_char(letter: int) -> str:
    ch = _CHARS[letter >> 1]
    return ch.upper() if letter & 1 else ch


@dataclass(frozen=True)
class Word:
    """A freely reduced word; construction rejects adjacent inverse pairs."""

    letters: tuple[int, ...]

    def __post_init__(self):
        letters = tuple(int(l) for l in self.letters)
        object.__setattr__(self, "letters", letters)
        for l in letters:
            if l < 0:
                raise WordError(f"letters must be nonnegative integers, got {l}")
        for prev, cur in zip(letters, letters[1:]):
            if prev == cur ^ 1:
                raise WordError(
                    f"word is not freely reduced: {letter_char(prev)}{letter_char(cur)}"
                )

    @property
    def length(self) -> int:
        return len(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    @classmethod
    def from_string(cls, text: str) -> "Word":
        letters = []
        for ch in text:
            if ch.lower() not in _CHARS:
                raise WordError(f"unknown letter {ch!r}")
            letters.append(2 * _CHARS.index(ch.lower()) + (1 if ch.isupper() else 0))
        return cls(tuple(letters))

    def to_string(self) -> str:
        return "".join(letter_char(l) for l in self.letters)

    def inverse(self) -> "Word":
        return Word(tuple(l ^ 1 for l in reversed(self.letters)))

    def concat(self, other: "Word") -> "Word":
        """Free-group product: concatenate and cancel at the seam."""
        left = list(self.letters)
        right = list(other.letters)
        while left and right and left[-1] == right[0] ^ 1:
            left.pop()
            right.pop(0)
        return Word(tuple(left + right))

    def __repr__(self) -> str:
        return f"Word({self.to_string()!r})"


def commutator(a: Word, b: Word) -> Word:
    return a.concat(b).concat(a.inverse()).concat(b.inverse())


@dataclass(frozen=True)
class Presentation:
    """The standard one-relator presentation of the genus-g surface group."""

    genus: int
    relator: Word = field(init=False)

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError(f"genus must be >= 2, got {self.genus}")
        letters = []
        for i in range(self.genus):
            a, b = 2 * (2 * i), 2 * (2 * i + 1)
            letters += [a, b, a ^ 1, b ^ 1]
        object.__setattr__(self, "relator", Word(tuple(letters)))

    @property
    def n_generators(self) -> int:
        return 2 * self.genus

    @property
    def alphabet_size(self) -> int:
        return 4 * self.genus

    @property
    def generator_names(self) -> tuple[str, ...]:
        return tuple(letter_char(2 * j) for j in range(self.n_generators))

    def generator_word(self, index: int) -> Word:
        if not 0 <= index < self.n_generators:
            raise WordError(f"generator index {index} out of range")
        return Word((2 * index,))

    def check_letters(self, word: Word) -> None:
        for l in word.letters:
            if l >= self.alphabet_size:
                raise WordError(
                    f"letter {l} outside the genus-{self.genus} alphabet "
                    f"(size {self.alphabet_size})"
                )


def presentation(genus: int) -> Presentation:
    """Standard presentation <a1,b1,...,ag,bg | [a1,b1]...[ag,bg]>, genus >= 2."""
    return Presentation(genus=genus)


def word_value(rep, word: Word):
    """Ordered product of generator images; empty word gives the identity."""
    return rep.image(word)
