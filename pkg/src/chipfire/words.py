"""Digit words and exact base-b/a numeration.

A DigitWord is a finite block of non-negative digits where position p carries
weight (b/a)^p.  The same type serves as a base-b/a numeral, a full state
string, or the left/right part of a state.  Values are always evaluated with
exact rational arithmetic; (b/a)^k is never approximated.

Words are immutable and freely shareable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .engine import GameParams
from .errors import InvalidBase, ParseError

__all__ = [
    "DigitWord",
    "EMPTY_WORD",
    "to_base",
    "eval_base",
    "explode_once",
    "explode_normalize",
    "word_to_string",
    "string_to_word",
]


@dataclass(frozen=True)
class DigitWord:
    """digits[0] is the most significant digit; digits[-1] sits at ``radix``.

    So the word spans positions radix+len(digits)-1 down to radix.  A radix
    below zero means fractional digits are present.  The empty word is the
    canonical form of "no digits at all" (a right part printed as bare ".").
    """

    digits: tuple[int, ...]
    radix: int = 0

    def __post_init__(self) -> None:
        if any(d < 0 for d in self.digits):
            raise ValueError("digits must be non-negative")

    @classmethod
    def integer(cls, digits) -> "DigitWord":
        """Integer word anchored at position 0, leading zeros trimmed."""
        ds = tuple(digits)
        while len(ds) > 1 and ds[0] == 0:
            ds = ds[1:]
        return cls(ds if ds else (0,), 0)

    @classmethod
    def fraction(cls, digits) -> "DigitWord":
        """Pure right part: digits at positions -1, -2, ..., -len."""
        ds = tuple(digits)
        return cls(ds, -len(ds)) if ds else EMPTY_WORD

    @property
    def hi(self) -> int:
        return self.radix + len(self.digits) - 1

    def digit_at(self, p: int) -> int:
        if not self.digits or not self.radix <= p <= self.hi:
            return 0
        return self.digits[self.hi - p]

    def integer_digits(self) -> tuple[int, ...]:
        """Digits at positions hi..0, zero-padded down to position 0.

        Empty if the word is purely fractional.
        """
        if not self.digits or self.hi < 0:
            return ()
        if self.radix > 0:
            return self.digits + (0,) * self.radix
        return self.digits[: self.hi + 1]

    def fraction_digits(self) -> tuple[int, ...]:
        """Digits at positions -1, -2, ..., zero-padded from -1 if needed."""
        if not self.digits or self.radix >= 0:
            return ()
        if self.hi < -1:
            return (0,) * (-1 - self.hi) + self.digits
        return self.digits[self.hi + 1 :]

    def digit_sum(self) -> int:
        return sum(self.digits)

    def is_empty(self) -> bool:
        return not self.digits

    def __str__(self) -> str:
        return word_to_string(self)


EMPTY_WORD = DigitWord((), 0)


def _require_base(params: GameParams) -> None:
    if not params.is_structured():
        raise InvalidBase(
            f"base {params.b}/{params.a} needs coprime a < b"
        )


def to_base(n: int, params: GameParams) -> DigitWord:
    """Base-b/a representation of a non-negative integer.

    The last digit is n mod b; the remaining digits represent a*(n-d0)/b in
    the same base.  All output digits lie in [0, b-1].
    """
    _require_base(params)
    if n < 0:
        raise InvalidBase("only non-negative integers have finite words")
    a, b = params.a, params.b
    low_first = []
    while n:
        d = n % b
        low_first.append(d)
        n = a * (n - d) // b
    return DigitWord.integer(reversed(low_first)) if low_first else DigitWord((0,), 0)


def eval_base(w: DigitWord, params: GameParams) -> Fraction:
    """Exact value sum(d_p * (b/a)^p) over every position of the word."""
    if w.is_empty():
        return Fraction(0)
    a, b = params.a, params.b
    # num = sum over positions of d_p * b^(p-radix) * a^(hi-p), an integer;
    # the true value is then num * b^radix / a^hi.
    num = 0
    k = len(w.digits)
    for i, d in enumerate(w.digits):
        num += d * b ** (k - 1 - i) * a**i
    val = Fraction(num)
    if w.radix >= 0:
        val *= b**w.radix
    else:
        val /= b ** (-w.radix)
    if w.hi >= 0:
        val /= a**w.hi
    else:
        val *= a ** (-w.hi)
    return val


def explode_once(w: DigitWord, p: int, params: GameParams) -> DigitWord:
    """One exploding-dots step: b dots at position p become a dots at p+1."""
    _require_base(params)
    if w.digit_at(p) < params.b:
        raise InvalidBase(f"position {p} holds {w.digit_at(p)} < b={params.b}")
    lo = min(w.radix, p)
    hi = max(w.hi, p + 1)
    ds = [w.digit_at(q) for q in range(hi, lo - 1, -1)]
    ds[hi - p] -= params.b
    ds[hi - (p + 1)] += params.a
    while len(ds) > 1 and ds[0] == 0 and hi > max(0, lo):
        ds.pop(0)
        hi -= 1
    return DigitWord(tuple(ds), lo)


def explode_normalize(w: DigitWord, params: GameParams) -> DigitWord:
    """Explode until every digit is below b.  Exact-value preserving.

    Expects an integer word (radix >= 0); the result is the canonical
    base-b/a numeral of the same value.
    """
    _require_base(params)
    if w.radix < 0:
        raise InvalidBase("explode_normalize expects an integer word")
    a, b = params.a, params.b
    low_first = list(reversed(w.digits)) or [0]
    i = 0
    while i < len(low_first):
        d = low_first[i]
        if d >= b:
            carries = d // b
            low_first[i] = d % b
            if i + 1 == len(low_first):
                low_first.append(0)
            low_first[i + 1] += a * carries
        i += 1
    word = DigitWord.integer(reversed(low_first))
    if w.radix > 0:
        word = DigitWord(word.digits, word.radix + w.radix)
    return word


# ---------------------------------------------------------------------------
# Text formats.  Compact form concatenates single digits with '.' as the
# radix mark ("442.2243"); list form separates digits with commas and keeps
# '.' between the adjacent digits ("14,3.10,2").  Compact is only legal when
# every digit is at most 9.
# ---------------------------------------------------------------------------


def word_to_string(
    w: DigitWord,
    *,
    list_form: bool | None = None,
    radix_mark: str = "auto",
) -> str:
    """Render a word.

    radix_mark: "auto" prints the dot only when fractional digits exist
    (numeral style); "always" prints it after the position-0 digit even for
    integer words (state style, as in "24.").
    """
    if list_form is None:
        list_form = any(d > 9 for d in w.digits)
    elif not list_form and any(d > 9 for d in w.digits):
        raise ParseError("compact form cannot express digits above 9")
    int_part = list(w.integer_digits()) if not w.is_empty() else []
    frac_part = list(w.fraction_digits())
    want_dot = bool(frac_part) or radix_mark == "always" or not int_part
    if not list_form:
        head = "".join(str(d) for d in int_part)
        tail = "".join(str(d) for d in frac_part)
        return head + "." + tail if want_dot else head
    head = ",".join(str(d) for d in int_part)
    tail = ",".join(str(d) for d in frac_part)
    out = head + "." + tail if want_dot else head
    if "," not in out:
        # A comma-less rendering would read back as compact digits; emit the
        # radix dot as its own comma-separated token instead ("14,.", ".,10").
        tokens = [str(d) for d in int_part] + ["."] + [str(d) for d in frac_part]
        out = ",".join(tokens)
    return out


def string_to_word(text: str) -> DigitWord:
    """Parse either text form back into a DigitWord.

    Accepts "442.2243", "2100", "0.", ".43", ".", and the list forms
    "4,4,2.2,2,4,3" / "14,3.10,2" / "4,4,2.".
    """
    s = text.strip()
    if not s:
        raise ParseError("empty word text")
    if s.count(".") > 1:
        raise ParseError(f"more than one radix mark in {text!r}")
    if "," in s:
        int_part, frac_part = _parse_list(s, text)
    else:
        if "." in s:
            head, tail = s.split(".")
        else:
            head, tail = s, ""
        int_part = [int(ch) for ch in head if _digit_or_raise(ch, text)]
        frac_part = [int(ch) for ch in tail if _digit_or_raise(ch, text)]
    if not int_part and not frac_part:
        return EMPTY_WORD
    if not int_part:
        return DigitWord.fraction(frac_part)
    return DigitWord(tuple(int_part) + tuple(frac_part), -len(frac_part))


def _digit_or_raise(ch: str, text: str) -> bool:
    if not ch.isdigit():
        raise ParseError(f"bad character {ch!r} in {text!r}")
    return True


def _parse_list(s: str, text: str) -> tuple[list[int], list[int]]:
    """List form: comma-separated digit tokens; the radix dot either glues two
    adjacent digits ("3.10"), hangs off one ("2.", ".5"), or stands alone."""
    before: list[int] = []
    after: list[int] = []
    current = before
    for tok in s.split(","):
        tok = tok.strip()
        if tok == ".":
            current = after
            continue
        if "." in tok:
            head, tail = tok.split(".")
            if head:
                if not head.isdigit():
                    raise ParseError(f"bad digit token {tok!r} in {text!r}")
                before.append(int(head))
            current = after
            if tail:
                if not tail.isdigit():
                    raise ParseError(f"bad digit token {tok!r} in {text!r}")
                after.append(int(tail))
            continue
        if not tok.isdigit():
            raise ParseError(f"bad digit token {tok!r} in {text!r}")
        current.append(int(tok))
    return before, after
