"""Right-part theory: the settlement sequence, dormancy, and closed forms.

A settlement is the stabilized right part after the origin has fired some
number of times, the right side being settled in between.  Settlements evolve
by one simple move per origin firing; eventually they cycle through c tail
patterns (the delta strings) behind a growing run of the digit c*(b-a), where
c = ceil(a/(b-a)).

Indexing note: enumeration shows the periodic regime starts at index
c*(c+3)/2 (= T_{c+1} - 1 in triangular numbers) and the highest dormant
settlement sits at (c-1)*(c+2)/2.  A tetrahedral-number indexing of the same
milestones (Te_c + 1 and Te_{c-1} + 1) is sometimes quoted; it coincides with
the true indices for small c only (c <= 2 for the anchor, 2 <= c <= 3 for the
last dormant) and drifts above that.  The verify suites surface the
difference with concrete counterexamples; everything here is validated
against the iterated sequence.
"""

from __future__ import annotations

import threading

from .engine import GameParams, oracle_states
from .errors import CensusMismatch, InvalidParams, ScanExhausted
from .words import DigitWord

__all__ = [
    "c_value",
    "triangular",
    "tetrahedral",
    "periodic_start",
    "tetrahedral_periodic_start",
    "highest_dormant_index",
    "tetrahedral_highest_dormant_index",
    "settlement_next",
    "is_dormant",
    "settlement",
    "delta_strings",
    "dormant_census",
    "balanced_B",
    "lemma8_inequalities",
    "SettlementSeq",
    "seq_for",
]


def triangular(i: int) -> int:
    return i * (i + 1) // 2


def tetrahedral(i: int) -> int:
    return i * (i + 1) * (i + 2) // 6


def c_value(params: GameParams) -> int:
    """ceil(a/(b-a)): the eventual origin-minus-origout firing surplus."""
    return params.c


def periodic_start(params: GameParams) -> int:
    """First index k at which xi_k = .(cb-ca) delta_0 and the cycle begins.

    Equals c*(c+3)/2: the run from one leading-digit milestone to the next
    takes k+2 moves (one threshold bump, one append, k defect shifts), so the
    milestones sit at triangular numbers minus one rather than tetrahedral
    ones.
    """
    c = params.c
    return c * (c + 3) // 2


def tetrahedral_periodic_start(params: GameParams) -> int:
    """Te_c + 1: the tetrahedral variant of the anchor (exact only for c <= 2)."""
    return tetrahedral(params.c) + 1


def highest_dormant_index(params: GameParams) -> int:
    """(c-1)*(c+2)/2: index of the last dormant settlement."""
    c = params.c
    return (c - 1) * (c + 2) // 2


def tetrahedral_highest_dormant_index(params: GameParams) -> int:
    """Te_{c-1} + 1: tetrahedral variant (exact only for 2 <= c <= 3)."""
    return tetrahedral(params.c - 1) + 1


def _next_tuple(word: tuple[int, ...], a: int, b: int) -> tuple[int, ...]:
    """One settlement move: find the first digit below a (j = len+1 if none);
    bump position 1 by b if j == 1, else shift a from j-1 onto j."""
    j = len(word) + 1
    for i, d in enumerate(word, start=1):
        if d < a:
            j = i
            break
    out = list(word)
    if j == 1:
        if not out:
            out = [b]
        else:
            out[0] += b
    else:
        out[j - 2] -= a
        if j <= len(out):
            out[j - 1] += b
        else:
            out.append(b)
    assert all(0 <= d < a + b for d in out), "settlement move left a firable digit"
    return tuple(out)


def settlement_next(w: DigitWord, params: GameParams) -> DigitWord:
    """The settlement following w (one more origin firing, right side settled)."""
    params.require_structured()
    word = w.fraction_digits() if not w.is_empty() else ()
    if any(d >= params.threshold for d in word):
        raise InvalidParams("input is not settled: digit >= a+b")
    return DigitWord.fraction(_next_tuple(tuple(word), params.a, params.b))


def is_dormant(w: DigitWord, params: GameParams) -> bool:
    """Dormant: origout digit below a, so an origin firing triggers no fire-back."""
    params.require_structured()
    return w.digit_at(-1) < params.a


def _delta_tuples(a: int, b: int, c: int) -> list[tuple[int, ...]]:
    """delta_0 .. delta_{c-1}: the cyclic tail patterns of late settlements."""
    base = [i * b - (i - 1) * a for i in range(c, 0, -1)]  # ends ... (2b-a) b
    deltas = [tuple(base)]
    for m in range(1, c):
        with_insert = list(base)
        with_insert.insert(c - m, m * (b - a))  # right after ((m+1)b - ma)
        deltas.append(tuple(with_insert))
    return deltas


class SettlementSeq:
    """Memoized settlement sequence for one structured parameter pair.

    The iterated prefix is cached; indices past the periodic start are served
    by the closed form .(cb-ca)_{p+1} delta_q with k = start + p*c + q.
    Cache extension is serialized so concurrent readers always see a
    consistent prefix.
    """

    def __init__(self, params: GameParams):
        params.require_structured()
        self.params = params
        self.c = params.c
        self.deltas = _delta_tuples(params.a, params.b, self.c)
        self.start = periodic_start(params)
        self._words: list[tuple[int, ...]] = [()]
        self._lock = threading.Lock()

    def _extend_to(self, k: int) -> None:
        with self._lock:
            a, b = self.params.a, self.params.b
            while len(self._words) <= k:
                self._words.append(_next_tuple(self._words[-1], a, b))

    def word(self, k: int) -> tuple[int, ...]:
        if k < 0:
            raise InvalidParams("settlement index must be non-negative")
        if k <= self.start:
            if len(self._words) <= k:
                self._extend_to(k)
            return self._words[k]
        p, q = divmod(k - self.start, self.c)
        lead = self.c * (self.params.b - self.params.a)
        return (lead,) * (p + 1) + self.deltas[q]

    def settlement(self, k: int) -> DigitWord:
        return DigitWord.fraction(self.word(k))

    def index_of(self, word: tuple[int, ...], *, hint: int | None = None) -> int | None:
        """Index k with xi_k == word, or None.  hint checks that index first."""
        if hint is not None and self.word(hint) == word:
            return hint
        # Words of length L cannot appear past the cycle that reaches
        # length L, so the scan is bounded.
        limit = self.start + self.c * (len(word) + 2) + 1
        for k in range(limit):
            if self.word(k) == word:
                return k
        return None


_SEQS: dict[tuple[int, int], SettlementSeq] = {}
_SEQS_LOCK = threading.Lock()


def seq_for(params: GameParams) -> SettlementSeq:
    key = (params.a, params.b)
    with _SEQS_LOCK:
        seq = _SEQS.get(key)
        if seq is None:
            seq = _SEQS[key] = SettlementSeq(params)
        return seq


def settlement(k: int, params: GameParams) -> DigitWord:
    """xi_k: iterated below the periodic start, closed form above it."""
    return seq_for(params).settlement(k)


def delta_strings(params: GameParams) -> list[DigitWord]:
    return [DigitWord.fraction(t) for t in seq_for(params).deltas]


def dormant_census(params: GameParams) -> tuple[int, int]:
    """(count, highest index) of dormant settlements, by enumeration.

    Enumerates the full pre-periodic prefix plus a margin of two cycles and
    checks the enumerated truth against the closed formulas count == c and
    highest == (c-1)(c+2)/2; any disagreement is an engine bug and raises
    CensusMismatch.
    """
    seq = seq_for(params)
    a = params.a
    upper = seq.start + 2 * seq.c
    dormant = [k for k in range(upper + 1)
               if (seq.word(k)[0] if seq.word(k) else 0) < a]
    count = len(dormant)
    highest = dormant[-1]
    if count != seq.c or highest != highest_dormant_index(params):
        raise CensusMismatch(
            f"enumerated dormant settlements {dormant} for ({params.a},{params.b}) "
            f"disagree with count=c={seq.c}, highest={highest_dormant_index(params)}"
        )
    return count, highest


def balanced_B(params: GameParams, scan_limit: int = 10000) -> int:
    """Smallest n whose final right part sits beyond the last dormant index.

    From B on, every origin firing is answered by an origout firing, the
    surplus f0 - f1 equals c, and the right part evaluates to a*c in base
    b/a.  Found by simulation: the settlement index of the final right part
    is exactly the origin's firing count, checked against the cached
    sequence as we go.
    """
    params.require_structured()
    seq = seq_for(params)
    last_dormant = highest_dormant_index(params)
    for n, state, log in oracle_states(params, scan_limit):
        f0 = log.fires.get(0, 0)
        hi = max(state.chips, default=0)
        right = tuple(state.count(v) for v in range(1, hi + 1)) if hi >= 1 else ()
        if seq.word(f0) != right:
            raise CensusMismatch(
                f"final right part of n={n} is not xi_{f0} for ({params.a},{params.b})"
            )
        if f0 > last_dormant:
            return n
    raise ScanExhausted(
        f"no balanced n below {scan_limit} for ({params.a},{params.b})"
    )


def lemma8_inequalities(params: GameParams) -> bool:
    """Digit-range inequalities behind the delta strings.

    For every 1 <= m <= c:  m*b - (m-1)*a < a+b <= (m+1)*b - (m-1)*a,
    and c*(b-a) < a+b.
    """
    params.require_structured()
    a, b, c = params.a, params.b, params.c
    for m in range(1, c + 1):
        if not (m * b - (m - 1) * a < a + b <= (m + 1) * b - (m - 1) * a):
            return False
    return c * (b - a) < a + b
