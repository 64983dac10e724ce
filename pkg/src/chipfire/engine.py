"""Core chip-firing engine on the integer line.

A vertex holding at least a+b chips may fire, sending a chips to its left
neighbor and b chips to its right neighbor.  This module is the ground-truth
oracle: it represents states sparsely, fires them to completion under
pluggable schedules, and logs per-vertex firing counts.

States are plain values: no operation here shares mutable data, so
independent game instances can run concurrently without coordination.
"""

from __future__ import annotations

import random as _random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    FireBelowThreshold,
    InvalidParams,
    InvariantViolation,
)

__all__ = [
    "GameParams",
    "ChipState",
    "FiringLog",
    "FiringStrategy",
    "LEFTMOST",
    "RIGHTMOST",
    "PARALLEL_ROUNDS",
    "new_state",
    "fire",
    "stabilize",
    "settle_right",
    "increment_origin",
    "oracle_states",
    "stabilize_line",
]


@dataclass(frozen=True)
class GameParams:
    """The pair (a, b): a chips go left and b chips go right per firing."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a < 1 or self.b < 1:
            raise InvalidParams(f"need a >= 1 and b >= 1, got ({self.a}, {self.b})")

    @property
    def threshold(self) -> int:
        return self.a + self.b

    @property
    def d(self) -> int:
        return gcd(self.a, self.b)

    @property
    def boa(self) -> Fraction:
        return Fraction(self.b, self.a)

    def is_structured(self) -> bool:
        """True when the structure theory applies: gcd(a,b)=1 and a<b."""
        return self.d == 1 and self.a < self.b

    def require_structured(self) -> None:
        if not self.is_structured():
            raise InvalidParams(
                f"({self.a}, {self.b}) must be coprime with a < b for this operation"
            )

    @property
    def c(self) -> int:
        """ceil(a / (b-a)); defined only for coprime a < b."""
        self.require_structured()
        return -(-self.a // (self.b - self.a))


@dataclass(frozen=True)
class FiringStrategy:
    """A firing schedule.

    kind is one of "leftmost", "rightmost", "parallel", "random".  The random
    schedule draws from Python's Mersenne Twister seeded with ``seed``, so a
    given (seed, state) pair always replays the same firing sequence.
    """

    kind: str
    seed: int | None = None

    _KINDS = ("leftmost", "rightmost", "parallel", "random")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise InvalidParams(f"unknown strategy kind {self.kind!r}")
        if self.kind == "random":
            if self.seed is None or not 0 <= self.seed < 2**64:
                raise InvalidParams("random strategy needs a 64-bit unsigned seed")
        elif self.seed is not None:
            raise InvalidParams(f"{self.kind} strategy takes no seed")

    @classmethod
    def random(cls, seed: int) -> "FiringStrategy":
        return cls("random", seed)


LEFTMOST = FiringStrategy("leftmost")
RIGHTMOST = FiringStrategy("rightmost")
PARALLEL_ROUNDS = FiringStrategy("parallel")


@dataclass(frozen=True)
class FiringLog:
    """Per-vertex firing counters for one run."""

    fires: dict[int, int]
    total: int

    @classmethod
    def of(cls, fires: dict[int, int]) -> "FiringLog":
        return cls(dict(fires), sum(fires.values()))


class ChipState:
    """Sparse chip configuration: vertex index -> positive count.

    Zero entries are never stored.  ``n`` is the conserved total.
    """

    __slots__ = ("params", "chips", "n")

    def __init__(self, params: GameParams, chips: dict[int, int]):
        self.params = params
        self.chips = {v: c for v, c in chips.items() if c != 0}
        if any(c < 0 for c in self.chips.values()):
            raise InvalidParams("negative chip count")
        self.n = sum(self.chips.values())

    def count(self, v: int) -> int:
        return self.chips.get(v, 0)

    def support(self) -> list[int]:
        return sorted(self.chips)

    def is_final(self) -> bool:
        return all(c < self.params.threshold for c in self.chips.values())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ChipState)
            and self.params == other.params
            and self.chips == other.chips
        )

    def __hash__(self) -> int:
        return hash((self.params, tuple(sorted(self.chips.items()))))

    def __repr__(self) -> str:
        return f"ChipState({self.params.a}-{self.params.b}, {dict(sorted(self.chips.items()))})"


def new_state(n: int, params: GameParams) -> ChipState:
    """n chips piled on the origin."""
    if n < 0:
        raise InvalidParams("chip count must be non-negative")
    return ChipState(params, {0: n} if n > 0 else {})


def fire(state: ChipState, v: int) -> ChipState:
    """Fire vertex v once: v loses a+b, v-1 gains a, v+1 gains b."""
    p = state.params
    if state.count(v) < p.threshold:
        raise FireBelowThreshold(f"vertex {v} holds {state.count(v)} < {p.threshold}")
    chips = dict(state.chips)
    chips[v] -= p.threshold
    chips[v - 1] = chips.get(v - 1, 0) + p.a
    chips[v + 1] = chips.get(v + 1, 0) + p.b
    return ChipState(p, chips)


# ---------------------------------------------------------------------------
# Stabilization.  The hot loops work on a flat list indexed by vertex+offset;
# strategies differ only in how the next vertex to fire is chosen.
# ---------------------------------------------------------------------------


class _Buffer:
    """Flat chip array over a window no reachable state can escape."""

    __slots__ = ("off", "buf", "fcount", "lo", "hi", "n", "total")

    def __init__(self, state: ChipState):
        support = state.support()
        lo0 = min(support, default=0)
        hi0 = max(support, default=0)
        n = state.n
        # Any state reachable from here keeps its support within
        # [lo0 - n, hi0 + n]: extending the support by one vertex consumes
        # at least one chip permanently parked there.
        self.off = n + 1 - lo0
        size = (hi0 + n + 1) + self.off + 1
        self.buf = [0] * size
        self.fcount = [0] * size
        for v, c in state.chips.items():
            self.buf[v + self.off] = c
        self.lo = lo0 + self.off
        self.hi = hi0 + self.off
        self.n = n
        self.total = 0

    def bounds_ok(self) -> bool:
        return 1 <= self.lo and self.hi <= len(self.buf) - 2

    def to_state(self, params: GameParams) -> ChipState:
        assert self.bounds_ok(), "support escaped the [lo-n, hi+n] bound"
        chips = {}
        for i in range(self.lo, self.hi + 1):
            if self.buf[i]:
                chips[i - self.off] = self.buf[i]
        return ChipState(params, chips)

    def log(self) -> FiringLog:
        fires = {}
        for i in range(self.lo, self.hi + 1):
            if self.fcount[i]:
                fires[i - self.off] = self.fcount[i]
        return FiringLog(fires, self.total)


class _Checker:
    """Exact conservation checks on the raw buffer.

    Verifies sum(s) == n together with the scaled identity
    sum(s_m * a^(m-lo) * b^(hi-m)) == n * a^(-lo) * b^(hi), which is the
    state polynomial at t=b/a cleared of denominators.  Integer-only, so
    the check is exact at any size.
    """

    __slots__ = ("a", "b", "n", "apow", "bpow", "every", "countdown", "checks")

    def __init__(self, params: GameParams, n: int, every: int):
        self.a = params.a
        self.b = params.b
        self.n = n
        self.apow = [1]
        self.bpow = [1]
        self.every = every
        self.countdown = every
        self.checks = 0

    def _grow(self, table: list[int], base: int, k: int) -> None:
        while len(table) <= k:
            table.append(table[-1] * base)

    def check(self, bb: _Buffer) -> None:
        lo = min(bb.lo, bb.off)
        hi = max(bb.hi, bb.off)
        span = hi - lo
        self._grow(self.apow, self.a, span)
        self._grow(self.bpow, self.b, span)
        buf, apow, bpow = bb.buf, self.apow, self.bpow
        total = 0
        scaled = 0
        for i in range(lo, hi + 1):
            c = buf[i]
            if c:
                total += c
                scaled += c * apow[i - lo] * bpow[hi - i]
        self.checks += 1
        if total != self.n:
            raise InvariantViolation(
                f"chip total {total} != n {self.n} after {bb.total} firings"
            )
        if scaled != self.n * apow[bb.off - lo] * bpow[hi - bb.off]:
            raise InvariantViolation(
                f"state polynomial at b/a deviates from n={self.n} "
                f"after {bb.total} firings"
            )

    def tick(self, bb: _Buffer) -> None:
        self.countdown -= 1
        if self.countdown == 0:
            self.countdown = self.every
            self.check(bb)


def _run_scan(bb: _Buffer, T: int, a: int, b: int, checker: _Checker | None,
              rightmost: bool) -> None:
    """Leftmost (or rightmost) schedule: always fire the extreme firable vertex."""
    buf = bb.buf
    fcount = bb.fcount
    lo, hi = bb.lo, bb.hi
    total = bb.total
    step = -1 if rightmost else 1
    v = hi if rightmost else lo
    # Invariant: every vertex strictly behind the cursor holds < T chips.
    # Firing v can only push v-step back over the threshold, so the cursor
    # retreats at most one cell per firing.
    while lo <= v <= hi:
        if buf[v] >= T:
            buf[v] -= T
            buf[v - 1] += a
            buf[v + 1] += b
            fcount[v] += 1
            total += 1
            if v - 1 < lo:
                lo = v - 1
            if v + 1 > hi:
                hi = v + 1
            if checker is not None:
                bb.lo, bb.hi, bb.total = lo, hi, total
                checker.tick(bb)
            back = v - step
            if buf[back] >= T:
                v = back
        else:
            v += step
    bb.lo, bb.hi, bb.total = lo, hi, total


def _run_parallel(bb: _Buffer, T: int, a: int, b: int, checker: _Checker | None) -> None:
    """Each round fires every vertex firable at the round start exactly once."""
    buf = bb.buf
    fcount = bb.fcount
    lo, hi = bb.lo, bb.hi
    total = bb.total
    while True:
        firable = [i for i in range(lo, hi + 1) if buf[i] >= T]
        if not firable:
            break
        for i in firable:
            buf[i] -= T
            buf[i - 1] += a
            buf[i + 1] += b
            fcount[i] += 1
            total += 1
            if checker is not None:
                bb.lo = min(lo, firable[0] - 1)
                bb.hi = max(hi, firable[-1] + 1)
                bb.total = total
                checker.tick(bb)
        if firable[0] - 1 < lo:
            lo = firable[0] - 1
        if firable[-1] + 1 > hi:
            hi = firable[-1] + 1
    bb.lo, bb.hi, bb.total = lo, hi, total


def _run_random(bb: _Buffer, T: int, a: int, b: int, seed: int,
                checker: _Checker | None) -> None:
    """Fire a uniformly chosen member of the firable set, one at a time.

    The set is kept as a swap-pop list with a membership flag per cell, and
    the pick uses Random(seed).random(), so the whole firing sequence is a
    pure function of (seed, initial state).
    """
    rand = _random.Random(seed).random
    buf = bb.buf
    fcount = bb.fcount
    lo, hi = bb.lo, bb.hi
    total = bb.total
    candidates = [i for i in range(lo, hi + 1) if buf[i] >= T]
    queued = bytearray(len(buf))
    for i in candidates:
        queued[i] = 1
    while candidates:
        j = int(rand() * len(candidates))
        v = candidates[j]
        last = candidates.pop()
        if last is not v:
            candidates[j] = last
        queued[v] = 0
        buf[v] -= T
        vm = v - 1
        vp = v + 1
        buf[vm] += a
        buf[vp] += b
        fcount[v] += 1
        total += 1
        if vm < lo:
            lo = vm
        if vp > hi:
            hi = vp
        # Only the three touched cells can have crossed the threshold.
        if buf[v] >= T and not queued[v]:
            queued[v] = 1
            candidates.append(v)
        if buf[vm] >= T and not queued[vm]:
            queued[vm] = 1
            candidates.append(vm)
        if buf[vp] >= T and not queued[vp]:
            queued[vp] = 1
            candidates.append(vp)
        if checker is not None:
            bb.lo, bb.hi, bb.total = lo, hi, total
            checker.tick(bb)
    bb.lo, bb.hi, bb.total = lo, hi, total


def stabilize(
    state: ChipState,
    strategy: FiringStrategy = LEFTMOST,
    *,
    check_every: int = 0,
) -> tuple[ChipState, FiringLog]:
    """Fire until every vertex holds fewer than a+b chips.

    Termination is guaranteed for any finite state, and the final state and
    per-vertex firing counts are independent of the strategy (the game is
    abelian); the strategies exist so tests can exercise that fact.

    With ``check_every=k > 0`` the conserved quantities (chip total and the
    exact state-polynomial value at b/a) are re-verified from scratch on the
    initial state, after every k-th firing, and on the final state;
    InvariantViolation is raised on any deviation.
    """
    p = state.params
    bb = _Buffer(state)
    checker = _Checker(p, state.n, check_every) if check_every > 0 else None
    if checker is not None:
        checker.check(bb)
    T, a, b = p.threshold, p.a, p.b
    if strategy.kind == "leftmost":
        _run_scan(bb, T, a, b, checker, rightmost=False)
    elif strategy.kind == "rightmost":
        _run_scan(bb, T, a, b, checker, rightmost=True)
    elif strategy.kind == "parallel":
        _run_parallel(bb, T, a, b, checker)
    else:
        _run_random(bb, T, a, b, strategy.seed, checker)
    if checker is not None:
        checker.check(bb)
    final = bb.to_state(p)
    assert final.is_final()
    return final, bb.log()


def settle_right(state: ChipState) -> ChipState:
    """Fire vertices with index >= 1 until none of them can fire.

    The origin and everything left of it never fire here; vertex 0 only
    receives whatever vertex 1 sends it.
    """
    p = state.params
    T, a, b = p.threshold, p.a, p.b
    chips = dict(state.chips)
    work = [v for v, c in chips.items() if v >= 1 and c >= T]
    while work:
        v = work.pop()
        c = chips.get(v, 0)
        if c < T:
            continue
        fired = c // T
        chips[v] = c - fired * T
        chips[v - 1] = chips.get(v - 1, 0) + a * fired
        chips[v + 1] = chips.get(v + 1, 0) + b * fired
        for u in (v - 1, v + 1):
            if u >= 1 and chips.get(u, 0) >= T:
                work.append(u)
    return ChipState(p, chips)


def increment_origin(state: ChipState) -> ChipState:
    """Add one chip at the origin and re-stabilize.

    Intended for already-final states: the result equals the final state of
    the game started with one more chip.
    """
    chips = dict(state.chips)
    chips[0] = chips.get(0, 0) + 1
    out, _ = stabilize(ChipState(state.params, chips))
    return out


def oracle_states(params: GameParams, n_max: int):
    """Yield (n, ChipState, FiringLog) for n = 0..n_max.

    States are produced incrementally (each from the previous by one added
    chip plus re-stabilization), so a whole table costs about as much as the
    single largest game.  The log is exact for each n-chip game started from
    scratch: firing counts are schedule-independent, and stabilizing after
    each added chip is one particular schedule for the n-chip game.
    """
    T, a, b = params.threshold, params.a, params.b
    size = 2 * n_max + 5
    off = n_max + 2
    buf = [0] * size
    fcount = [0] * size
    lo = hi = off
    total = 0
    for n in range(n_max + 1):
        # Only the origin can cross the threshold on an increment, so the
        # scan is skipped when it stays below.
        if n > 0:
            buf[off] += 1
            v = off if buf[off] >= T else hi + 1
            while lo <= v <= hi:
                if buf[v] >= T:
                    buf[v] -= T
                    buf[v - 1] += a
                    buf[v + 1] += b
                    fcount[v] += 1
                    total += 1
                    if v - 1 < lo:
                        lo = v - 1
                    if v + 1 > hi:
                        hi = v + 1
                    if buf[v - 1] >= T:
                        v -= 1
                else:
                    v += 1
        assert 1 <= lo and hi <= size - 2
        chips = {i - off: buf[i] for i in range(lo, hi + 1) if buf[i]}
        fires = {i - off: fcount[i] for i in range(lo, hi + 1) if fcount[i]}
        yield n, ChipState(params, chips), FiringLog(fires, total)


def stabilize_line(n: int, params: GameParams) -> tuple[ChipState, FiringLog]:
    """Vectorized stabilization of n chips at the origin.

    Fires every currently-firable vertex with full multiplicity, round after
    round, over a numpy buffer.  This is just another legal schedule, so by
    confluence it produces the same final state and firing counts as
    ``stabilize``; it exists because the bench needs the oracle at n ~ 1e5.
    """
    import numpy as np

    if n < 0:
        raise InvalidParams("chip count must be non-negative")
    if n >= 2**62:
        raise InvalidParams("line stabilizer supports n < 2**62")
    T, a, b = params.threshold, params.a, params.b
    if n < T:
        return new_state(n, params), FiringLog({}, 0)
    N = n + 2
    chips = np.zeros(2 * N + 1, dtype=np.int64)
    fires = np.zeros(2 * N + 1, dtype=np.int64)
    chips[N] = n
    lo = hi = N
    total = 0
    while True:
        counts = chips[lo : hi + 1] // T
        nz = np.nonzero(counts)[0]
        if nz.size == 0:
            break
        chips[lo : hi + 1] -= counts * T
        chips[lo - 1 : hi] += a * counts
        chips[lo + 1 : hi + 2] += b * counts
        fires[lo : hi + 1] += counts
        total += int(counts.sum())
        first = lo + int(nz[0])
        last = lo + int(nz[-1])
        lo = first - 1
        hi = last + 1
        assert lo >= 1 and hi <= 2 * N - 1
    support = np.nonzero(chips)[0]
    state = ChipState(params, {int(i) - N: int(chips[i]) for i in support})
    fired = np.nonzero(fires)[0]
    log = FiringLog({int(i) - N: int(fires[i]) for i in fired}, total)
    assert state.n == n and state.is_final()
    return state, log
