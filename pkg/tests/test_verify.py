"""Suite-level behavior of the verification harness."""

from chipfire import verify


def test_coprime_pairs():
    assert verify.coprime_pairs(3) == [(1, 2), (1, 3), (2, 3)]
    assert (2, 4) not in verify.coprime_pairs(6)
    assert len(verify.coprime_pairs(6)) == 11


def test_confluence_small_grid_single_worker():
    rep = verify.confluence_suite(
        max_n=60, pairs=[(1, 2), (2, 3)], seeds=(5,), workers=1,
        full_check_below=20, check_every=64,
    )
    assert rep.ok and rep.checks > 0
    assert rep.lines()[0].startswith("suite confluence:")


def test_invariants_suite_clean():
    rep = verify.invariants_suite(pairs=[(2, 3)], max_n=40)
    assert rep.ok


def test_settlements_suite_notes_but_no_failures():
    rep = verify.settlements_suite()
    assert rep.ok
    assert len(rep.notes) == 2
    assert any("c(c+3)/2" in n for n in rep.notes)
    assert any("(c-1)(c+2)/2" in n for n in rep.notes)


def test_predictor_suite_scoped():
    rep = verify.predictor_suite(pairs=[(2, 3), (1, 2)], max_n=200, value_window=50)
    assert rep.ok
    joined = "\n".join(rep.notes)
    assert "n=13" in joined          # stabilized right value counterexample
    assert "233" in joined           # suffix-rule counterexample
    assert "triplets" in joined      # grouping boundary


def test_one_b_suite_documents_count_mismatch():
    rep = verify.one_b_suite(max_n=40, trick_max=60)
    assert not rep.ok
    assert any("b=2 n=12" in f for f in rep.failures)
    assert any("f0(n) - 1" in n for n in rep.notes)
    # everything else in the suite is sound
    assert all("valuation sum" in f for f in rep.failures)


def test_run_suite_dispatch():
    import pytest

    (rep,) = verify.run_suite("invariants", pairs=[(1, 2)], max_n=20)
    assert rep.name == "invariants" and rep.ok
    assert sorted(verify.SUITES) == [
        "confluence", "invariants", "one-b", "predictor", "settlements",
    ]
    with pytest.raises(KeyError):
        verify.run_suite("nonexistent")
