"""Verification suites: every structural claim, exercised at desk scale.

Each suite returns a SuiteReport with hard failures (claims this package is
built on) separated from notes (documented discrepancies in circulated
formulas, reported with concrete counterexamples but never failed on).
Suites only read immutable snapshots and per-run state, so a driver may fan
independent (a, b, n) cases out across workers; reports are aggregated
order-independently and printed sorted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import analysis
from .engine import (
    LEFTMOST,
    PARALLEL_ROUNDS,
    RIGHTMOST,
    ChipState,
    FiringStrategy,
    GameParams,
    new_state,
    oracle_states,
    settle_right,
    stabilize,
)
from .errors import ChipFiringError
from .predictor import (
    binary_trick_left,
    elevated_increment,
    final_state,
    mirror_word,
    one_b_right_length,
    one_b_settlement,
    profile_for,
    r_sequence,
)
from .settlements import (
    dormant_census,
    highest_dormant_index,
    lemma8_inequalities,
    periodic_start,
    seq_for,
    settlement_next,
    tetrahedral_highest_dormant_index,
    tetrahedral_periodic_start,
)
from .words import DigitWord, eval_base, word_to_string

__all__ = [
    "SuiteReport",
    "SIX_PAIRS",
    "coprime_pairs",
    "confluence_suite",
    "invariants_suite",
    "settlements_suite",
    "predictor_suite",
    "one_b_suite",
    "run_suite",
    "SUITES",
]

SIX_PAIRS = [(1, 2), (2, 3), (3, 4), (2, 5), (3, 5), (4, 5)]


def coprime_pairs(b_max: int) -> list[tuple[int, int]]:
    from math import gcd

    return [
        (a, b)
        for b in range(2, b_max + 1)
        for a in range(1, b)
        if gcd(a, b) == 1
    ]


@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, condition: bool, message: str) -> None:
        self.checks += 1
        if not condition:
            self.failures.append(message)

    def lines(self) -> list[str]:
        out = [
            f"suite {self.name}: {self.checks} checks, "
            f"{len(self.failures)} failures"
        ]
        out.extend(f"  FAIL {m}" for m in sorted(self.failures))
        out.extend(f"  NOTE {m}" for m in self.notes)
        return out


def _chips_of_right(word: tuple[int, ...], params: GameParams, extra_b: bool) -> ChipState:
    chips = {v: d for v, d in enumerate(word, start=1) if d}
    if extra_b:
        chips[1] = chips.get(1, 0) + params.b
    return ChipState(params, chips)


# ---------------------------------------------------------------------------


def _confluence_pair(args) -> tuple[int, list[str]]:
    """One parameter pair of the confluence battery (multiprocessing unit)."""
    a, b, max_n, seeds, full_check_below, check_every = args
    p = GameParams(a, b)
    strategies: list[FiringStrategy] = [
        LEFTMOST,
        RIGHTMOST,
        PARALLEL_ROUNDS,
        *(FiringStrategy.random(s) for s in seeds),
    ]
    checks = 0
    failures: list[str] = []
    for n in range(max_n + 1):
        cadence = 1 if n < full_check_below else check_every
        results = []
        for strat in strategies:
            checks += 1
            try:
                final, log = stabilize(new_state(n, p), strat, check_every=cadence)
            except ChipFiringError as exc:
                failures.append(f"a={a} b={b} n={n} {strat.kind}: {exc}")
                continue
            results.append((strat, final, log))
        if not results:
            continue
        _, final0, log0 = results[0]
        for strat, final, log in results[1:]:
            checks += 2
            if final != final0:
                failures.append(
                    f"a={a} b={b} n={n}: {strat.kind} final state differs "
                    f"from leftmost"
                )
            if log != log0:
                failures.append(
                    f"a={a} b={b} n={n}: {strat.kind} firing counts differ "
                    f"from leftmost"
                )
        checks += 1
        try:
            m_count = analysis.firings_from_M(final0)
            if m_count != log0.total:
                failures.append(
                    f"a={a} b={b} n={n}: M/(b-a)={m_count} != logged "
                    f"total {log0.total}"
                )
        except ChipFiringError as exc:
            failures.append(f"a={a} b={b} n={n}: weighted-sum count: {exc}")
    return checks, failures


def confluence_suite(
    max_n: int = 300,
    pairs: list[tuple[int, int]] | None = None,
    seeds: tuple[int, ...] = (1, 2, 3),
    full_check_below: int = 48,
    check_every: int = 256,
    workers: int | None = None,
) -> SuiteReport:
    """All schedules agree state-for-state and count-for-count; conserved
    quantities hold exactly along the runs; total firings equal M/(b-a).

    States are re-verified exactly on every single firing for n below
    ``full_check_below`` and at every ``check_every``-th firing (plus first
    and last) beyond that.  Parameter pairs are independent, so they fan out
    across processes; the aggregated report does not depend on worker order.
    """
    rep = SuiteReport("confluence")
    if pairs is None:
        pairs = coprime_pairs(6)
    jobs = [
        (a, b, max_n, tuple(seeds), full_check_below, check_every)
        for a, b in pairs
    ]
    if workers is None:
        import os

        workers = min(len(jobs), os.cpu_count() or 1)
    if workers > 1:
        import multiprocessing

        with multiprocessing.Pool(workers) as pool:
            results = pool.map(_confluence_pair, jobs)
    else:
        results = [_confluence_pair(j) for j in jobs]
    for checks, failures in results:
        rep.checks += checks
        rep.failures.extend(failures)
    rep.failures.sort()
    return rep


def invariants_suite(
    pairs: list[tuple[int, int]] | None = None,
    max_n: int = 100,
    strategies: tuple[FiringStrategy, ...] = (LEFTMOST, PARALLEL_ROUNDS),
) -> SuiteReport:
    """Exact S(1) = S(b/a) = n on every intermediate state of every run,
    cross-checked on final states through the independent rational evaluator,
    plus the side-value equations against the incremental oracle's logs."""
    rep = SuiteReport("invariants")
    pairs = pairs if pairs is not None else [(1, 2), (2, 3)]
    for a, b in pairs:
        p = GameParams(a, b)
        boa = Fraction(b, a)
        for n in range(max_n + 1):
            for strat in strategies:
                try:
                    final, _ = stabilize(new_state(n, p), strat, check_every=1)
                except ChipFiringError as exc:
                    rep.check(False, f"a={a} b={b} n={n} {strat.kind}: {exc}")
                    continue
                rep.check(
                    analysis.state_poly_eval(final, 1) == n
                    and analysis.state_poly_eval(final, boa) == n,
                    f"a={a} b={b} n={n}: rational evaluator disagrees",
                )
        for n, state, log in oracle_states(p, max_n):
            try:
                report = analysis.side_values(state, log)
            except ChipFiringError as exc:
                rep.check(False, f"a={a} b={b} n={n}: side values: {exc}")
                continue
            rep.check(
                report.s_at_1 == n and report.s_at_boa == n,
                f"a={a} b={b} n={n}: side values do not sum to n",
            )
    return rep


def settlements_suite(
    pairs: list[tuple[int, int]] | None = None,
    k_iter: int = 60,
) -> SuiteReport:
    """Transition soundness against the engine, closed-form agreement,
    dormancy census, digit-range inequalities, and index-formula notes."""
    rep = SuiteReport("settlements")
    if pairs is None:
        pairs = coprime_pairs(7)
    drift_anchor: list[str] = []
    drift_dormant: list[str] = []
    for a, b in pairs:
        p = GameParams(a, b)
        seq = seq_for(p)
        # transition soundness vs. settle_right
        cur: tuple[int, ...] = ()
        for k in range(k_iter):
            settled = settle_right(_chips_of_right(cur, p, extra_b=True))
            hi = max((v for v in settled.chips if v >= 1), default=0)
            engine_word = tuple(settled.count(v) for v in range(1, hi + 1))
            lemma_word = settlement_next(DigitWord.fraction(cur), p).fraction_digits()
            rep.check(
                lemma_word == engine_word and seq.word(k + 1) == engine_word,
                f"a={a} b={b}: transition diverges from engine at k={k}",
            )
            cur = engine_word
        # closed form vs. iteration across both anchor conventions
        start = periodic_start(p)
        top = max(start, tetrahedral_periodic_start(p)) + 4 * p.c
        words = [seq.word(k) for k in range(top + 1)]
        it = ()
        for k in range(1, top + 1):
            it = settlement_next(DigitWord.fraction(it), p).fraction_digits()
            rep.check(
                words[k] == it,
                f"a={a} b={b}: closed form != iteration at k={k}",
            )
        # census
        try:
            count, highest = dormant_census(p)
            rep.check(
                count == p.c and highest == highest_dormant_index(p),
                f"a={a} b={b}: census ({count},{highest}) off formulas",
            )
        except ChipFiringError as exc:
            rep.check(False, f"a={a} b={b}: census: {exc}")
        rep.check(lemma8_inequalities(p), f"a={a} b={b}: digit-range inequalities")
        # where the tetrahedral index formulas drift, record the evidence
        if tetrahedral_periodic_start(p) != start:
            k_t = tetrahedral_periodic_start(p)
            drift_anchor.append(
                f"a={a} b={b} c={p.c}: anchor word .{_w(words[start])} first at "
                f"k={start}, not Te_c+1={k_t} (xi_{k_t} = .{_w(words[k_t])})"
            )
        if tetrahedral_highest_dormant_index(p) != highest_dormant_index(p):
            k_t = tetrahedral_highest_dormant_index(p)
            drift_dormant.append(
                f"a={a} b={b} c={p.c}: last dormant index is "
                f"{highest_dormant_index(p)}, not Te_(c-1)+1={k_t}"
            )
    if drift_anchor:
        rep.notes.append(
            "tetrahedral settlement anchor Te_c+1 overshoots for c >= 3; "
            "true anchor is c(c+3)/2: " + "; ".join(drift_anchor)
        )
    if drift_dormant:
        rep.notes.append(
            "tetrahedral last-dormant index Te_(c-1)+1 is off for c = 1 and "
            "c >= 4; true index is (c-1)(c+2)/2: " + "; ".join(drift_dormant)
        )
    return rep


def _w(word: tuple[int, ...]) -> str:
    return word_to_string(DigitWord.fraction(word))[1:] or "0"


def predictor_suite(
    pairs: list[tuple[int, int]] | None = None,
    max_n: int = 2000,
    value_window: int = 200,
) -> SuiteReport:
    """Fast path == oracle digit for digit; stabilized side values; firing
    surplus plateau; mirror symmetry; plus the two documented erratum notes
    (stabilized right value, and the suffix phrasing of the index advance)."""
    rep = SuiteReport("predictor")
    pairs = pairs if pairs is not None else list(SIX_PAIRS)
    for a, b in pairs:
        p = GameParams(a, b)
        prof = profile_for(p)
        ac = a * p.c
        prev_diff = 0
        prev_f0 = -1
        for n, state, log in oracle_states(p, max_n):
            rep.check(
                final_state(n, p) == analysis.state_word(state),
                f"a={a} b={b} n={n}: fast path differs from oracle",
            )
            f0 = log.fires.get(0, 0)
            f1 = log.fires.get(1, 0)
            diff = f0 - f1
            rep.check(
                diff >= prev_diff and f0 >= prev_f0,
                f"a={a} b={b} n={n}: firing counts not monotone",
            )
            prev_diff, prev_f0 = diff, f0
            if prof.B <= n <= prof.B + value_window:
                left, right = analysis.split(state)
                rep.check(
                    eval_base(right, p) == ac and eval_base(left, p) == n - ac,
                    f"a={a} b={b} n={n}: stabilized side values off (a*c={ac})",
                )
            if n >= prof.B:
                rep.check(
                    diff == p.c,
                    f"a={a} b={b} n={n}: f0-f1={diff} != c={p.c}",
                )
        for n in (0, 7, prof.H + 3, prof.H + 29):
            mirrored = final_state(n, GameParams(b, a))
            rep.check(
                mirrored == mirror_word(final_state(n, p)),
                f"a={a} b={b} n={n}: mirror symmetry broken",
            )
    rep.notes.extend(_erratum_notes())
    return rep


def _erratum_notes() -> list[str]:
    """The two documented discrepancies, each re-derived from a real run."""
    notes = []
    p = GameParams(2, 3)
    values = {}
    for n, state, _ in oracle_states(p, 16):
        _, right = analysis.split(state)
        values[n] = eval_base(right, p)
    if all(values[n] == 2 for n in range(5, 13)) and values[13] == 4:
        notes.append(
            "2-3 worked example: the right-part value at t=3/2 is 2 only for "
            "5 <= n <= 12; from n=13 on it is a*c = 4 "
            f"(counterexample n=13: right part .43 evaluates to {values[13]})"
        )
    # suffix phrasing: left word 233 (n=16) has a >=b suffix of length 2 yet
    # the origin does not fire on the next increment
    left16 = DigitWord((2, 3, 3), 0)
    _, explosions = elevated_increment(left16, p)
    suffix_len = 0
    for d in reversed(left16.digits):
        if d >= p.b:
            suffix_len += 1
        else:
            break
    if explosions == 0 and suffix_len == 2:
        notes.append(
            "index-advance rule: counting the >=b suffix of the left part "
            "overshoots when the last digit is below a+b-1; left word 233 in "
            "the 2-3 game (n=16) has suffix length 2 but 0 origin firings on "
            "the next increment; the explosion count of the elevated "
            "increment is the sound rule"
        )
    # the right-part triplet grouping for 2-3 holds from n=15 but not at 12..14
    rights = {}
    for n, state, _ in oracle_states(p, 15):
        _, right = analysis.split(state)
        rights[n] = right
    if rights[12] != rights[13]:
        notes.append(
            "2-3 right parts group into triplets phi(3k)^R = phi(3k+1)^R = "
            "phi(3k+2)^R only from n=15 on; the triplet 12..14 mixes .13, "
            ".43, .43"
        )
    return notes


def one_b_suite(
    max_n: int = 500,
    bs: tuple[int, ...] = (2, 3, 5),
    count_bs: tuple[int, ...] = (2, 3),
    trick_max: int = 1000,
) -> SuiteReport:
    """1-b laws: settlement formula, digit-(b-1) count, binary left-part trick,
    and the R(b) left-part law with its index offset pinned by simulation."""
    rep = SuiteReport("one-b")
    for b in bs:
        p = GameParams(1, b)
        seq = seq_for(p)
        for k in range(31):
            rep.check(
                one_b_settlement(k, b).fraction_digits() == seq.word(k),
                f"b={b}: (b-1)_(k-1) b formula breaks at k={k}",
            )
    for b in count_bs:
        p = GameParams(1, b)
        for n, state, _ in oracle_states(p, max_n):
            if n <= b:
                continue
            true_count = sum(
                1 for v, cnt in state.chips.items() if v >= 1 and cnt == b - 1
            )
            stated = one_b_right_length(n, b)
            rep.check(
                true_count == stated,
                f"b={b} n={n}: digit-(b-1) count is {true_count}, "
                f"valuation sum gives {stated}",
            )
    first_bad = next(
        (m for m in rep.failures if "valuation sum" in m), None
    )
    if first_bad:
        rep.notes.append(
            "the valuation-sum formula for the digit-(b-1) count does not "
            "match simulation everywhere; the true count is f0(n) - 1 "
            f"(first mismatch: {first_bad.strip()})"
        )
    p12 = GameParams(1, 2)
    for n, state, _ in oracle_states(p12, trick_max):
        if n < 4:
            continue
        left, _ = analysis.split(state)
        rep.check(
            left == binary_trick_left(n),
            f"b=2 n={n}: binary left-part trick differs from simulation",
        )
    # R(b) law: phi(n)^L is the (n-1)-th entry (the n-2 indexing in
    # circulation is off by one; pinned at n = b+2 and asserted after)
    for b in (2, 3):
        p = GameParams(1, b)
        offset_checked = False
        for n, state, _ in oracle_states(p, 220):
            if n < b + 2:
                continue
            left, _ = analysis.split(state)
            if not offset_checked:
                rep.check(
                    left == r_sequence(b, n - 1) and left != r_sequence(b, n - 2),
                    f"b={b}: R-sequence offset is not n-1 at n={n}",
                )
                offset_checked = True
            else:
                rep.check(
                    left == r_sequence(b, n - 1),
                    f"b={b} n={n}: left part is not R(b)_(n-1)",
                )
    rep.notes.append(
        "the 1-b left part follows the R(b) sequence at index n-1 "
        "(phi(b+2)^L = 11 = R(b)_(b+1)); an n-2 indexing is off by one"
    )
    return rep


SUITES = {
    "confluence": confluence_suite,
    "invariants": invariants_suite,
    "settlements": settlements_suite,
    "predictor": predictor_suite,
    "one-b": one_b_suite,
}


def run_suite(name: str, **kwargs) -> list[SuiteReport]:
    """Run one suite (or "all"); returns reports in declaration order."""
    if name == "all":
        return [fn() for fn in SUITES.values()]
    if name not in SUITES:
        raise KeyError(name)
    return [SUITES[name](**kwargs)]
