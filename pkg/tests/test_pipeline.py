import pytest

from conftest import make_post
from stc_engine.corpus import Corpus
from stc_engine.errors import EmptyQuery
from stc_engine.pipeline import (
    PipelineConfig,
    ScoredPost,
    match,
    rank,
    respond,
    retrieve,
)

CFG = PipelineConfig()
SMALL = PipelineConfig(retrieve_k=3, match_m=2)


class TestRetrieve:
    def test_k_clamps_to_corpus_size(self, toy_bundle):
        out = retrieve("broke up", toy_bundle, CFG)
        assert len(out) == 4
        assert sorted(sp.corpus_ordinal for sp in out) == [0, 1, 2, 3]

    def test_scores_sorted_descending(self, toy_bundle):
        out = retrieve("cafe date", toy_bundle, CFG)
        scores = [sp.score for sp in out]
        assert scores == sorted(scores, reverse=True)

    def test_whitespace_query_raises(self, toy_bundle):
        with pytest.raises(EmptyQuery):
            retrieve("   ", toy_bundle, CFG)

    def test_punctuation_only_query_raises(self, toy_bundle):
        with pytest.raises(EmptyQuery):
            retrieve("...!!!", toy_bundle, CFG)

    def test_all_oov_scores_zero_ordinal_order(self, toy_bundle):
        out = retrieve("zzzz qqqq xxxx", toy_bundle, CFG)
        assert all(sp.score == 0.0 for sp in out)
        assert [sp.corpus_ordinal for sp in out] == [0, 1, 2, 3]

    def test_deterministic(self, toy_bundle):
        a = retrieve("broke up today", toy_bundle, CFG)
        b = retrieve("broke up today", toy_bundle, CFG)
        assert a == b


class TestMatch:
    def test_m_clamps(self, toy_bundle):
        retrieved = retrieve("anniversary", toy_bundle, SMALL)
        out = match("anniversary", retrieved, toy_bundle, CFG)
        assert len(out) == len(retrieved) == 3

    def test_shared_term_ranks_first(self, toy_bundle):
        retrieved = retrieve("anniversary trip", toy_bundle, CFG)
        out = match("anniversary next week", retrieved, toy_bundle, CFG)
        # only post 3's body contains "anniversary ... next week"
        assert out[0].corpus_ordinal == 3
        assert out[0].score > 0

    def test_all_oov_falls_back_to_ordinal_order(self, toy_bundle):
        retrieved = retrieve("cafe", toy_bundle, CFG)
        out = match("zzzz qqqq", retrieved, toy_bundle, CFG)
        assert all(sp.score == 0.0 for sp in out)
        ordinals = [sp.corpus_ordinal for sp in out]
        assert ordinals == sorted(ordinals)

    def test_subset_of_retrieved(self, toy_bundle):
        retrieved = retrieve("cat", toy_bundle, SMALL)
        out = match("cat", retrieved, toy_bundle, SMALL)
        assert {sp.corpus_ordinal for sp in out} <= {
            sp.corpus_ordinal for sp in retrieved
        }
        assert len(out) <= SMALL.match_m


class TestRank:
    def test_popularity_pooling(self, toy_corpus):
        # post 0 comments: (5,1)=4, (3,0)=3, (10,9)=1 -> keep pops 4 and 3
        matched = [ScoredPost(corpus_ordinal=0, score=1.0, stage="matched")]
        resp = rank(matched, toy_corpus, CFG, seed=0)
        assert sorted(c.popularity for c in resp.pool) == [3, 4]
        assert all(c.popularity != 1 for c in resp.pool)

    def test_tie_broken_by_comment_index(self, toy_corpus):
        posts = [
            make_post(0, "t", "b", [("first", 2, 0), ("second", 2, 0), ("third", 2, 0)])
        ]
        corpus = Corpus(posts=posts, source_label="", ingested_at="")
        matched = [ScoredPost(0, 1.0, "matched")]
        resp = rank(matched, corpus, CFG, seed=0)
        assert [c.comment_index for c in resp.pool] == [0, 1]

    def test_single_candidate_forced(self, toy_corpus):
        posts = [make_post(0, "t", "b", [("only", 0, 0)])]
        corpus = Corpus(posts=posts, source_label="", ingested_at="")
        matched = [ScoredPost(0, 1.0, "matched")]
        for seed in range(5):
            assert rank(matched, corpus, CFG, seed=seed).text == "only"

    def test_low_confidence_flag(self, toy_corpus):
        matched = [ScoredPost(0, 0.0, "matched"), ScoredPost(1, 0.0, "matched")]
        assert rank(matched, toy_corpus, CFG, seed=0).low_confidence
        matched = [ScoredPost(0, 0.5, "matched"), ScoredPost(1, 0.0, "matched")]
        assert not rank(matched, toy_corpus, CFG, seed=0).low_confidence

    def test_chosen_in_pool(self, toy_corpus):
        matched = [ScoredPost(i, 1.0, "matched") for i in range(4)]
        for seed in range(10):
            resp = rank(matched, toy_corpus, CFG, seed=seed)
            assert resp.chosen in resp.pool
            assert len(resp.pool) <= CFG.match_m * CFG.comments_per_post


class TestRespond:
    def test_seeded_determinism(self, toy_bundle):
        a = respond("broke up today", toy_bundle, CFG, seed=7)
        b = respond("broke up today", toy_bundle, CFG, seed=7)
        assert a.text == b.text
        assert a.chosen == b.chosen
        assert a.retrieved == b.retrieved
        assert a.matched == b.matched

    def test_subset_chain(self, toy_bundle):
        resp = respond("cat and dog", toy_bundle, SMALL)
        retrieved = {sp.corpus_ordinal for sp in resp.retrieved}
        matched = {sp.corpus_ordinal for sp in resp.matched}
        assert matched <= retrieved
        assert len(resp.retrieved) <= SMALL.retrieve_k
        assert len(resp.matched) <= SMALL.match_m

    def test_single_post_corpus_fully_forced(self):
        from stc_engine.bundle import build_bundle
        from conftest import TOY_PV

        posts = [make_post(0, "hello world", "hello world body", [("the answer", 1, 0)])]
        corpus = Corpus(posts=posts, source_label="", ingested_at="")
        bundle, _ = build_bundle(corpus, pv_config=TOY_PV)
        for _ in range(3):
            assert respond("hello", bundle, CFG).text == "the answer"

    def test_chosen_always_in_pool(self, toy_bundle):
        resp = respond("park in the sun", toy_bundle, CFG, seed=3)
        assert resp.chosen in resp.pool

    def test_empty_query_propagates(self, toy_bundle):
        with pytest.raises(EmptyQuery):
            respond(" . ", toy_bundle, CFG)


class TestConfigValidation:
    def test_match_m_le_retrieve_k(self):
        with pytest.raises(ValueError):
            PipelineConfig(retrieve_k=3, match_m=5)

    def test_bad_field(self):
        with pytest.raises(ValueError):
            PipelineConfig(match_field="comments")
