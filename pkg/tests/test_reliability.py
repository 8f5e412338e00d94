"""
Tests for decoding error under bit-flipping adversaries and the
sampled-code secrecy/reliability experiment.
"""
import numpy as np
import pytest

from awtc.channel import FlipSet
from awtc.codes import (
    Codebook,
    linear_codebook,
    pseudolinear_codebook,
    sample_pseudolinear,
)
from awtc.config import settings
from awtc.errors import DomainError
from awtc.models import AdversaryKind
from awtc.reliability import decode_error_under, error_prob, theorem2_experiment
from awtc.schema import AdversaryStrategy
from awtc.tasks import derive_seed


def _strategy(kind: AdversaryKind, pn: int, rn: int = 0) -> AdversaryStrategy:
    return AdversaryStrategy(kind=kind, pn=pn, rn=rn)


@pytest.fixture
def duplicated() -> Codebook:
    # 00 is a codeword of both messages
    return Codebook.from_words(2, [["00", "11"], ["00", "01"]])


# ---------------------------------------------------------------------------
# Single-word decoding
# ---------------------------------------------------------------------------


def test_hamming_corrects_any_single_flip(hamming_codebook):
    for m in range(16):
        for j in range(1, 8):
            flips = FlipSet.from_indices(7, [j], budget=1)
            assert not decode_error_under(hamming_codebook, m, 0, flips)


def test_tie_counts_as_error(duplicated):
    assert decode_error_under(duplicated, 0, 0, FlipSet.from_indices(2, [], budget=0))
    none = FlipSet.from_indices(2, [], budget=0)
    assert not decode_error_under(duplicated, 0, 1, none)


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------


def test_hamming_oblivious_exhaustive_is_error_free(hamming_codebook):
    report = error_prob(
        hamming_codebook, _strategy(AdversaryKind.OBLIVIOUS_EXHAUSTIVE, 1), 4, seed=0
    )
    assert report.exact
    assert report.max_error == 0.0
    assert len(report.per_message) == 16
    assert report.strategy.startswith("oblivious-exhaustive(pn=1")


def test_no_adversary_on_injective_code(hamming_codebook):
    report = error_prob(hamming_codebook, _strategy(AdversaryKind.NONE, 0), 1, seed=0)
    assert report.exact and report.max_error == 0.0


def test_decoding_batches_do_not_change_results(hamming_codebook, monkeypatch):
    strategy = _strategy(AdversaryKind.OBLIVIOUS_EXHAUSTIVE, 2)
    whole = error_prob(hamming_codebook, strategy, 16, seed=0)
    # one received word per batch
    monkeypatch.setattr(settings, "DECODE_BATCH_ELEMENTS", 16)
    single = error_prob(hamming_codebook, strategy, 16, seed=0)
    assert single.per_message == whole.per_message
    assert whole.max_error > 0


def test_twenty_bit_codebook_decodes(rng, make_code):
    book = linear_codebook(make_code(rng, 24, 4, 16))
    report = error_prob(book, _strategy(AdversaryKind.NONE, 0), 4, seed=1)
    assert report.max_error == 0.0
    assert not report.exact


def test_duplicate_codeword_forces_error(duplicated):
    report = error_prob(duplicated, _strategy(AdversaryKind.NONE, 0), 2, seed=0)
    assert report.per_message == [0.5, 0.5]
    assert report.max_error >= 0.5


def test_exhaustive_error_grows_with_flip_budget():
    book = pseudolinear_codebook(sample_pseudolinear(7, 2, 2, k=2, seed=3))
    errors = []
    for pn in range(8):
        strategy = _strategy(AdversaryKind.OBLIVIOUS_EXHAUSTIVE, pn)
        errors.append(error_prob(book, strategy, 8, seed=1).max_error)
    assert errors == sorted(errors)
    assert errors[-1] > 0.0


def test_sampled_keys_are_not_exact():
    book = pseudolinear_codebook(sample_pseudolinear(7, 1, 3, k=2, seed=0))
    report = error_prob(book, _strategy(AdversaryKind.NONE, 0), 4, seed=2)
    assert not report.exact
    assert report.trials == 4


def test_random_strategy_is_seeded():
    book = pseudolinear_codebook(sample_pseudolinear(8, 2, 2, k=2, seed=6))
    strategy = _strategy(AdversaryKind.RANDOM, 2)
    first = error_prob(book, strategy, 50, seed=9)
    second = error_prob(book, strategy, 50, seed=9)
    assert first.per_message == second.per_message
    assert not first.exact


def test_random_and_greedy_within_correction_radius(hamming_codebook):
    for kind in (AdversaryKind.RANDOM, AdversaryKind.Z_AWARE_GREEDY):
        report = error_prob(hamming_codebook, _strategy(kind, 1, rn=3), 10, seed=4)
        assert report.max_error == 0.0


def test_greedy_beyond_correction_radius(hamming_codebook):
    # with every coordinate read, two flips land within distance 1 of the
    # nearest rival codeword
    report = error_prob(
        hamming_codebook, _strategy(AdversaryKind.Z_AWARE_GREEDY, 2, rn=7), 5, seed=0
    )
    assert report.max_error == 1.0


def test_budgets_validated(hamming_codebook):
    with pytest.raises(DomainError):
        error_prob(hamming_codebook, _strategy(AdversaryKind.NONE, 8), 1, seed=0)
    with pytest.raises(DomainError):
        error_prob(hamming_codebook, _strategy(AdversaryKind.NONE, 0), 0, seed=0)


# ---------------------------------------------------------------------------
# Sampled-code experiment
# ---------------------------------------------------------------------------


def test_experiment_without_adversary():
    report = theorem2_experiment(
        6, 1, 2, [2, 4], pn=0, rn=0, trials=8, seed=12, samples=3
    )
    assert len(report.rows) == 6
    for row in report.rows:
        assert row.seed == derive_seed(12, f"theorem2/k{row.k}", row.sample)
        assert row.capacity_mi == pytest.approx(0.0, abs=1e-12)
        book = pseudolinear_codebook(sample_pseudolinear(6, 1, 2, row.k, row.seed))
        if np.unique(book.words).size == book.words.size:
            assert row.max_error == 0.0
            assert row.success
    for k in (2, 4):
        wins = [row.success for row in report.rows if row.k == k]
        assert report.success_fraction[k] == pytest.approx(sum(wins) / 3)


def test_experiment_one_row_per_strategy():
    kinds = (AdversaryKind.NONE, AdversaryKind.RANDOM)
    report = theorem2_experiment(
        6, 1, 1, [2], pn=1, rn=1, trials=4, seed=0, strategies=kinds
    )
    assert [row.strategy.split("(")[0] for row in report.rows] == ["none", "random"]
    assert report.rows[0].success == report.rows[1].success
