#include <doctest.h>

#include <sstream>

#include "support/toy_models.hpp"
#include "wordent/corpus.hpp"
#include "wordent/errors.hpp"

using namespace wordent;
using namespace wordent::testing;

TEST_CASE("corpus loading resolves tokens and contexts") {
  const auto a = toy_model_a();
  std::istringstream in(
      "doc_id\tword_index\tword\tpos\ttokens\n"
      "d1\t0\ta\tDT\t\n"
      "d1\t1\tbx\tNN\t" + kMark + "b x\n"
      "d2\t0\tb\tIN\t\n");
  const auto corpus = parse_corpus(in, "corpus.tsv", &a.lexicon());
  REQUIRE(corpus.words.size() == 3);
  CHECK(corpus.has_pos);
  CHECK(corpus.words[0].tokens == std::vector<TokenId>{0});
  CHECK(corpus.words[1].tokens == std::vector<TokenId>{1, 2});
  const auto ctx = corpus.contexts();
  CHECK(ctx[0].empty());
  CHECK(ctx[1] == Context{0});
  CHECK(ctx[2].empty());
  CHECK(corpus.document_initial() == std::vector<bool>{true, false, true});
}

TEST_CASE("corpus loading errors") {
  const auto a = toy_model_a();
  auto load = [&](const std::string& text) {
    std::istringstream in(text);
    return parse_corpus(in, "corpus.tsv", &a.lexicon());
  };
  CHECK_THROWS_AS(load("doc_id\tword_index\tword\nd\t0\tzzz\n"), Error);
  CHECK_THROWS_AS(load("doc_id\tword_index\tword\nd\t1\ta\nd\t0\tb\n"), Error);
  CHECK_THROWS_AS(load("doc_id\tword_index\tword\nd\t0\ta\ne\t0\tb\nd\t1\ta\n"), Error);
  CHECK_THROWS_AS(load("doc_id\tword\nd\ta\n"), Error);
  CHECK_THROWS_AS(load("doc_id\tword_index\tword\ttokens\nd\t0\tax\tx " + kMark + "a\n"),
                  Error);
  try {
    load("doc_id\tword_index\tword\nd\t0\ta\nd\tone\tb\n");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK(std::string(e.what()).find("corpus.tsv:3") != std::string::npos);
  }
}

TEST_CASE("unigram surprisal with add-one smoothing") {
  UnigramTable table({{"the", 3}, {"cat", 1}});
  CHECK(unigram_surprisal(table, "cat") == doctest::Approx(1.8073549220576042).epsilon(1e-12));
  CHECK(unigram_surprisal(table, "dog") == doctest::Approx(2.807354922057604).epsilon(1e-12));
  CHECK_THROWS_AS(UnigramTable({}), Error);
  std::istringstream empty("word\tcount\n");
  CHECK_THROWS_AS(parse_unigram(empty, "unigram.tsv"), Error);
}

TEST_CASE("rt loading") {
  std::istringstream in("doc_id\tword_index\tsubject\trt_ms\tprev_fixated\n"
                        "d\t1\ts1\t300.5\t1\n");
  const auto rt = parse_rt(in, "rt.tsv");
  REQUIRE(rt.rows.size() == 1);
  CHECK(rt.has_prev_fixated);
  CHECK(rt.rows[0].rt_ms == 300.5);
  CHECK(*rt.rows[0].prev_fixated);
  std::istringstream bad("doc_id\tword_index\tsubject\trt_ms\nd\t1\ts1\tslow\n");
  CHECK_THROWS_AS(parse_rt(bad, "rt.tsv"), Error);
}

TEST_CASE("utf8_length counts code points") {
  CHECK(utf8_length("cat") == 3);
  CHECK(utf8_length("caf\xC3\xA9") == 4);
}
