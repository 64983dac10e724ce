"""State-polynomial evaluation and firing accounting.

The state polynomial of a configuration s is S(t) = sum(s_m * t^(-m)) over
occupied vertices m; right-of-origin vertices contribute negative powers so
that S(t) equals the base-t evaluation of the state string.  S(1) and S(b/a)
both equal the starting chip count n at every moment of every game, and the
left/right pieces of those two values pin down the origin and origout firing
counts exactly.

Everything here is a pure function over immutable snapshots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .engine import ChipState, FiringLog, GameParams
from .errors import DivisionByZero, EqualRates, InconsistentLog, NotDivisible
from .words import DigitWord, EMPTY_WORD

__all__ = [
    "InvariantReport",
    "state_poly_eval",
    "split",
    "combine",
    "state_word",
    "side_values",
    "recover_counts",
    "weighted_sum",
    "firings_from_M",
]


@dataclass(frozen=True)
class InvariantReport:
    """Exact side values of a state plus the firing counts they encode."""

    s_at_1: int
    s_at_boa: Fraction
    left_at_1: int
    right_at_1: int
    left_at_boa: Fraction
    right_at_boa: Fraction
    m_weighted: int
    f0: int
    f1: int


def state_poly_eval(state: ChipState, t: Fraction | int) -> Fraction:
    """S(t) = sum(s_m * t^(-m)) evaluated exactly."""
    t = Fraction(t)
    if t == 0 and any(v > 0 for v in state.chips):
        raise DivisionByZero("t=0 with chips right of the origin")
    total = Fraction(0)
    for v, c in state.chips.items():
        total += c * t ** (-v)
    return total


def state_word(state: ChipState) -> DigitWord:
    """Canonical full state string: vertex m holds the digit at position -m."""
    if not state.chips:
        return DigitWord((0,), 0)
    lo = min(min(state.chips), 0)
    hi = max(max(state.chips), 0)
    digits = tuple(state.count(v) for v in range(lo, hi + 1))
    return DigitWord(digits, -hi)


def split(state: ChipState) -> tuple[DigitWord, DigitWord]:
    """Left part (vertices <= 0) and right part (vertices >= 1) as words."""
    lo = min(min(state.chips), 0) if state.chips else 0
    left = DigitWord(tuple(state.count(v) for v in range(lo, 1)), 0)
    hi = max(state.chips, default=0)
    if hi < 1:
        right = EMPTY_WORD
    else:
        right = DigitWord.fraction(tuple(state.count(v) for v in range(1, hi + 1)))
    return left, right


def combine(left: DigitWord, right: DigitWord, params: GameParams) -> ChipState:
    """Rebuild a state from its two parts (inverse of split)."""
    chips: dict[int, int] = {}
    for p in range(left.radix, left.hi + 1):
        d = left.digit_at(p)
        if d:
            chips[-p] = d
    for p in range(right.radix, min(right.hi, -1) + 1):
        d = right.digit_at(p)
        if d:
            chips[-p] = d
    return ChipState(params, chips)


def side_values(state: ChipState, log: FiringLog) -> InvariantReport:
    """Side values of a state reached from n chips at the origin under ``log``.

    Verifies the four exact identities
        left(1)  = n - b*f0 + a*f1      right(1)  = b*f0 - a*f1
        left(b/a) = n - a*(f0 - f1)     right(b/a) = a*(f0 - f1)
    and that both b/a side values are integers; raises InconsistentLog on any
    failure, which would mean the engine and its log disagree.
    """
    p = state.params
    boa = p.boa
    f0 = log.fires.get(0, 0)
    f1 = log.fires.get(1, 0)
    left_1 = right_1 = 0
    left_b = Fraction(0)
    right_b = Fraction(0)
    for v, c in state.chips.items():
        if v <= 0:
            left_1 += c
            left_b += c * boa ** (-v)
        else:
            right_1 += c
            right_b += c * boa ** (-v)
    n = left_1 + right_1
    checks = [
        ("left(1)", left_1, n - p.b * f0 + p.a * f1),
        ("right(1)", right_1, p.b * f0 - p.a * f1),
        ("left(b/a)", left_b, n - p.a * (f0 - f1)),
        ("right(b/a)", right_b, Fraction(p.a * (f0 - f1))),
    ]
    for name, got, expected in checks:
        if got != expected:
            raise InconsistentLog(
                f"{name} = {got} but the log implies {expected} "
                f"(n={n}, f0={f0}, f1={f1})"
            )
    if left_b.denominator != 1 or right_b.denominator != 1:
        raise InconsistentLog(f"side values at b/a not integral: {left_b}, {right_b}")
    return InvariantReport(
        s_at_1=n,
        s_at_boa=left_b + right_b,
        left_at_1=left_1,
        right_at_1=right_1,
        left_at_boa=left_b,
        right_at_boa=right_b,
        m_weighted=weighted_sum(state),
        f0=f0,
        f1=f1,
    )


def recover_counts(state: ChipState) -> tuple[int, int]:
    """(f0, f1) from the state alone, for a != b.

    The two right-side identities are linearly independent, so the origin
    and origout firing counts are determined by the final state itself:
    f0 = (right(1) - right(b/a)) / (b-a) and f1 = f0 - right(b/a)/a.
    """
    p = state.params
    if p.a == p.b:
        raise EqualRates("firing counts are not state-determined when a == b")
    boa = p.boa
    right_1 = 0
    right_b = Fraction(0)
    for v, c in state.chips.items():
        if v > 0:
            right_1 += c
            right_b += c * boa ** (-v)
    diff = right_1 - right_b
    surplus = right_b / p.a
    if diff.denominator != 1 or surplus.denominator != 1:
        raise InconsistentLog(
            f"right side values {right_1}, {right_b} are not reachable"
        )
    f0, r = divmod(int(diff), p.b - p.a)
    if r:
        raise InconsistentLog(
            f"right side values {right_1}, {right_b} are not reachable"
        )
    return f0, f0 - int(surplus)


def weighted_sum(state: ChipState) -> int:
    """sum(m * s_m) over the support.  Zero initially; +(b-a) per firing."""
    return sum(v * c for v, c in state.chips.items())


def firings_from_M(state: ChipState) -> int:
    """Total firings that led from {0: n} to this state, via the weighted sum.

    With M = sum(m * s_m) over vertex indices m, each firing adds exactly
    b - a, so the count is M / (b - a).  (Stated the other way around in
    exponent space, where each firing adds a - b; the logged-oracle tests pin
    this sign down.)
    """
    p = state.params
    if p.a == p.b:
        raise EqualRates("firing count from M is undefined for a == b")
    m = weighted_sum(state)
    q, r = divmod(m, p.b - p.a)
    if r:
        raise NotDivisible(f"M={m} is not a multiple of b-a={p.b - p.a}")
    return q
