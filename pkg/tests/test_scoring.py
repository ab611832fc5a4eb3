import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from attnlens.errors import AllWordsFiltered, NotRowStochastic, SelectorError
from attnlens.model import AttentionStack, forward
from attnlens.scoring import (
    FilterConfig,
    HeadSelector,
    analyze,
    analyze_stack,
    apply_filters,
    normalize,
    reduce_stack,
    token_scores,
    word_scores,
)
from attnlens.tokenizer import encode


def random_stack(rng, L, H, N):
    raw = rng.random((L, H, N, N))
    return AttentionStack((raw / raw.sum(-1, keepdims=True)).astype(np.float32))


class TestReduceStack:
    def test_single_matrix_identity(self):
        rng = np.random.default_rng(1)
        stack = random_stack(rng, 1, 1, 4)
        out = reduce_stack(stack, HeadSelector())
        assert np.array_equal(out, stack.values[0, 0])

    def test_two_matrix_mean(self):
        rng = np.random.default_rng(2)
        stack = random_stack(rng, 2, 1, 5)
        out = reduce_stack(stack, HeadSelector())
        expected = (stack.values[0, 0].astype(np.float64) + stack.values[1, 0]) / 2
        assert np.allclose(out, expected, atol=1e-7)

    def test_mean_of_means(self):
        rng = np.random.default_rng(3)
        stack = random_stack(rng, 2, 2, 6)
        full = reduce_stack(stack, HeadSelector())
        per_layer = [reduce_stack(stack, HeadSelector(layer=l)) for l in range(2)]
        assert np.allclose(full, np.mean(per_layer, axis=0), atol=1e-6)

    def test_selector_consistency_over_heads(self):
        rng = np.random.default_rng(4)
        stack = random_stack(rng, 3, 4, 5)
        for l in range(3):
            by_head = [
                reduce_stack(stack, HeadSelector(layer=l, head=h)) for h in range(4)
            ]
            assert np.allclose(
                reduce_stack(stack, HeadSelector(layer=l)),
                np.mean(by_head, axis=0),
                atol=1e-6,
            )

    def test_rows_remain_stochastic(self):
        rng = np.random.default_rng(5)
        stack = random_stack(rng, 2, 3, 7)
        out = reduce_stack(stack, HeadSelector())
        assert np.max(np.abs(out.sum(-1) - 1.0)) <= 1e-5

    def test_out_of_range(self):
        stack = random_stack(np.random.default_rng(6), 2, 2, 3)
        with pytest.raises(SelectorError):
            reduce_stack(stack, HeadSelector(layer=2))
        with pytest.raises(SelectorError):
            reduce_stack(stack, HeadSelector(layer=0, head=9))

    def test_head_without_layer_rejected(self):
        with pytest.raises(SelectorError):
            HeadSelector(layer=None, head=1)


class TestTokenScores:
    def test_uniform_matrix(self):
        n = 4
        s = token_scores(np.full((n, n), 1.0 / n))
        assert np.allclose(s, 1.0 / n)

    def test_identity_matrix(self):
        s = token_scores(np.eye(3))
        assert np.allclose(s, [1 / 3, 1 / 3, 1 / 3])

    def test_hand_column_mean(self):
        s = token_scores(np.array([[1.0, 0.0], [0.5, 0.5]]))
        assert np.allclose(s, [0.75, 0.25])

    def test_mass_conserved(self):
        rng = np.random.default_rng(7)
        m = rng.random((9, 9))
        m /= m.sum(-1, keepdims=True)
        assert abs(token_scores(m).sum() - 1.0) <= 1e-5

    def test_not_row_stochastic(self):
        with pytest.raises(NotRowStochastic):
            token_scores(np.ones((3, 3)))


class TestWordScores:
    def test_paper_max_example(self, vocab):
        # "tokenizing" splits into subwords; word takes its best token score
        tok = encode(vocab, "tokenizing", max_len=16)
        n = len(tok.ids)
        scores = np.full(n, 0.01)
        first_sub = tok.word_index.index(0)
        scores[first_sub] = 0.05
        report = word_scores(scores, tok)
        entry = next(e for e in report.entries if not e.is_special)
        assert entry.word == "tokenizing"
        assert entry.raw_score == pytest.approx(0.05)
        assert entry.token_count == sum(1 for w in tok.word_index if w == 0)

    def test_singleton_max(self, vocab):
        tok = encode(vocab, "a", max_len=16)
        report = word_scores(np.array([0.3, 0.4, 0.3]), tok)
        entry = next(e for e in report.entries if not e.is_special)
        assert entry.raw_score == pytest.approx(0.4)

    def test_brute_force_max(self, vocab):
        rng = np.random.default_rng(8)
        text = "tokenizing hello world izing tok en a b c hello"
        tok = encode(vocab, text, max_len=64)
        scores = rng.random(len(tok.ids))
        report = word_scores(scores, tok)
        words = [e for e in report.entries if not e.is_special]
        for w, e in enumerate(words):
            expected = max(
                scores[i] for i, wi in enumerate(tok.word_index) if wi == w
            )
            assert e.raw_score == pytest.approx(expected)
            assert e.raw_score >= expected  # dominance with equality

    def test_specials_are_pseudo_entries(self, vocab):
        tok = encode(vocab, "tok", max_len=16)
        report = word_scores(np.array([0.5, 0.2, 0.3]), tok)
        assert report.entries[0].is_special and report.entries[0].word == "<s>"
        assert report.entries[-1].is_special and report.entries[-1].word == "</s>"
        assert all(e.token_count == 1 for e in report.entries if e.is_special)


def _report(vocab, text="the season . hello", scores_seed=9):
    tok = encode(vocab, text, max_len=64)
    rng = np.random.default_rng(scores_seed)
    s = rng.random(len(tok.ids))
    return word_scores(s / s.sum(), tok)


class TestFilters:
    def test_no_filters_is_identity(self, vocab):
        report = _report(vocab)
        out = apply_filters(report, FilterConfig())
        assert all(not e.filtered for e in out.entries)
        assert [e.raw_score for e in out.entries] == [
            e.raw_score for e in report.entries
        ]

    def test_exclude_special(self, vocab):
        out = apply_filters(_report(vocab), FilterConfig(exclude_special=True))
        assert all(e.filtered == e.is_special for e in out.entries)

    def test_exclude_dots(self, vocab):
        out = apply_filters(_report(vocab), FilterConfig(exclude_punctuation=True))
        flagged = {e.word for e in out.entries if e.filtered}
        assert flagged == {"."}
        assert not next(e for e in out.entries if e.word == "season").filtered

    def test_exclude_stopwords(self, vocab):
        out = apply_filters(_report(vocab), FilterConfig(exclude_stopwords=True))
        flagged = {e.word for e in out.entries if e.filtered}
        assert flagged == {"the"}

    def test_filters_never_change_raw_scores(self, vocab):
        report = _report(vocab)
        for cfg in (
            FilterConfig(exclude_special=True),
            FilterConfig(exclude_special=True, exclude_punctuation=True),
            FilterConfig(True, True, exclude_stopwords=True),
        ):
            out = apply_filters(report, cfg)
            assert [e.raw_score for e in out.entries] == [
                e.raw_score for e in report.entries
            ]

    def test_filter_monotone(self, vocab):
        report = _report(vocab)
        once = apply_filters(report, FilterConfig(exclude_special=True))
        twice = apply_filters(once, FilterConfig(exclude_punctuation=True))
        for before, after in zip(once.entries, twice.entries):
            if before.filtered:
                assert after.filtered


def _scores_by_word(tok, word_values, special_value=0.0):
    """Token score vector where every token of word w gets word_values[w]."""
    return np.array(
        [special_value if wi < 0 else word_values[wi] for wi in tok.word_index]
    )


class TestNormalize:
    def test_endpoints(self, vocab):
        tok = encode(vocab, "a b c", max_len=16)
        report = word_scores(_scores_by_word(tok, [0.2, 0.5, 0.8]), tok)
        report = apply_filters(report, FilterConfig(exclude_special=True))
        out = normalize(report)
        norms = [e.norm_score for e in out.entries if not e.filtered]
        assert norms == pytest.approx([0.0, 0.5, 1.0])

    def test_degenerate_range_maps_to_one(self, vocab):
        tok = encode(vocab, "a b", max_len=16)
        report = word_scores(_scores_by_word(tok, [0.3, 0.3], 0.1), tok)
        report = apply_filters(report, FilterConfig(exclude_special=True))
        out = normalize(report)
        assert [e.norm_score for e in out.entries if not e.filtered] == [1.0, 1.0]

    def test_filtered_excluded_from_range(self, vocab):
        tok = encode(vocab, "a b", max_len=16)
        # specials get the extreme raw score; they are filtered out
        report = word_scores(_scores_by_word(tok, [0.1, 0.3], 0.9), tok)
        report = apply_filters(report, FilterConfig(exclude_special=True))
        out = normalize(report)
        unfiltered = [e for e in out.entries if not e.filtered]
        assert [e.norm_score for e in unfiltered] == pytest.approx([0.0, 1.0])
        assert all(e.norm_score is None for e in out.entries if e.filtered)

    def test_all_filtered_raises(self, vocab):
        tok = encode(vocab, "the", max_len=16)
        report = word_scores(_scores_by_word(tok, [0.5], 0.2), tok)
        report = apply_filters(
            report, FilterConfig(exclude_special=True, exclude_stopwords=True)
        )
        with pytest.raises(AllWordsFiltered):
            normalize(report)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(0, 1), min_size=2, max_size=20))
    def test_rank_preservation(self, raws):
        from attnlens.scoring import WordScore, WordScoreReport

        entries = tuple(
            WordScore(word=f"w{i}", byte_span=(i, i + 1), token_count=1, raw_score=r)
            for i, r in enumerate(raws)
        )
        out = normalize(WordScoreReport(entries=entries))
        norms = [e.norm_score for e in out.entries]
        assert np.array_equal(np.argsort(norms, kind="stable"),
                              np.argsort(raws, kind="stable"))


class TestAnalyze:
    def test_matches_manual_composition(self, model, vocab):
        text = "hello world tokenizing season"
        cfg = FilterConfig(exclude_special=True)
        report = analyze(text, model, vocab, HeadSelector(), cfg)

        tok = encode(vocab, text, model.config.max_positions)
        stack = forward(model, tok.ids)
        manual = analyze_stack(tok, stack, HeadSelector(), cfg,
                               model_id=model.config.model_id)
        assert report == manual

    def test_stopword_toggle_shrinks_unfiltered(self, model, vocab):
        text = "the hello of world"
        base = analyze(text, model, vocab, cfg=FilterConfig(exclude_special=True))
        filt = analyze(
            text, model, vocab,
            cfg=FilterConfig(exclude_special=True, exclude_stopwords=True),
        )
        unfiltered = lambda r: {e.word for e in r.entries if not e.filtered}
        assert unfiltered(base) - unfiltered(filt) == {"the", "of"}

    def test_single_word_degenerate(self, model, vocab):
        report = analyze(
            "hello", model, vocab, cfg=FilterConfig(exclude_special=True)
        )
        unfiltered = [e for e in report.entries if not e.filtered]
        assert len(unfiltered) == 1 and unfiltered[0].norm_score == 1.0
