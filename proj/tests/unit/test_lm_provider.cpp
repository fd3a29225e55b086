#include <doctest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "support/toy_models.hpp"
#include "wordent/errors.hpp"
#include "wordent/lm_provider.hpp"

using namespace wordent;
using namespace wordent::testing;

namespace {

Lexicon toy_lexicon() { return toy_model_a().lexicon(); }

double sum(std::span<const double> xs) { return std::accumulate(xs.begin(), xs.end(), 0.0); }

}  // namespace

TEST_CASE("TokenDistribution validation") {
  CHECK_NOTHROW(TokenDistribution({0.5, 0.5}));
  // Small deviations are renormalized.
  TokenDistribution d({0.5, 0.5 + 5e-7});
  CHECK(sum(d.probs()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(TokenDistribution({0.5, 0.6}), Error);
  CHECK_THROWS_AS(TokenDistribution({1.5, -0.5}), Error);
}

TEST_CASE("next_token_distribution lookup and interpolation") {
  const auto lex = toy_lexicon();
  const TokenDistribution uni({0.5, 0.25, 0.25});

  SUBCASE("empty context returns the unconditional table") {
    NGramModel m(lex, uni);
    CHECK(m.next_token_distribution({}) == uni);
  }
  SUBCASE("unseen suffix backs off fully") {
    NGramModel::Table t;
    t.emplace(std::vector<TokenId>{0}, TokenDistribution({0.1, 0.1, 0.8}));
    NGramModel m(lex, uni, t, 1.0);
    const TokenId ctx[] = {2};
    CHECK(m.next_token_distribution(ctx) == uni);
  }
  SUBCASE("convex blend with lambda = 0.5") {
    NGramModel::Table t;
    t.emplace(std::vector<TokenId>{0}, TokenDistribution({0.1, 0.1, 0.8}));
    NGramModel m(lex, uni, t, 0.5);
    const TokenId ctx[] = {1, 0};
    const auto d = m.next_token_distribution(ctx);
    CHECK(d[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(0.175).epsilon(1e-12));
    CHECK(d[2] == doctest::Approx(0.525).epsilon(1e-12));
  }
  SUBCASE("longest suffix wins and <s> anchors document starts") {
    NGramModel::Table t;
    t.emplace(std::vector<TokenId>{NGramModel::kBeginOfSequence},
              TokenDistribution({1.0, 0.0, 0.0}));
    t.emplace(std::vector<TokenId>{0}, TokenDistribution({0.0, 1.0, 0.0}));
    t.emplace(std::vector<TokenId>{1, 0}, TokenDistribution({0.0, 0.0, 1.0}));
    NGramModel m(lex, uni, t);
    CHECK(m.order() == 3);
    CHECK(m.next_token_distribution({})[0] == 1.0);
    const TokenId c1[] = {0};
    CHECK(m.next_token_distribution(c1)[1] == 1.0);
    const TokenId c2[] = {1, 0};
    CHECK(m.next_token_distribution(c2)[2] == 1.0);
    const TokenId c3[] = {2, 2, 0};
    CHECK(m.next_token_distribution(c3)[1] == 1.0);
  }
  SUBCASE("unknown context id") {
    NGramModel m(lex, uni);
    const TokenId ctx[] = {7};
    CHECK_THROWS_AS(m.next_token_distribution(ctx), Error);
  }
}

TEST_CASE("boundary_mass") {
  const auto lex = toy_lexicon();
  CHECK(boundary_mass(lex, TokenDistribution({0.5, 0.25, 0.25})) ==
        doctest::Approx(0.75).epsilon(1e-15));
  CHECK(boundary_mass(lex, TokenDistribution({0.0, 0.0, 1.0})) == 0.0);
  const auto all_b = build_lexicon({{0, "a", true}, {1, "b", true}});
  CHECK(boundary_mass(all_b, TokenDistribution({0.3, 0.7})) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("word_initial_distribution") {
  const auto lex = toy_lexicon();
  const auto w = word_initial_distribution(lex, TokenDistribution({0.5, 0.25, 0.25}));
  CHECK(w.probs[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(w.probs[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w.probs[2] == 0.0);
  CHECK(word_initial_distribution(lex, TokenDistribution({1.0, 0.0, 0.0})).probs[0] == 1.0);
  try {
    word_initial_distribution(lex, TokenDistribution({0.0, 0.0, 1.0}));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateDistribution);
  }
}

TEST_CASE("continuation_distribution") {
  const auto lex = toy_lexicon();
  auto c = continuation_distribution(lex, TokenDistribution({0.5, 0.25, 0.25}));
  CHECK(c.probs[2] == 0.25);
  CHECK(c.eow == 0.75);
  c = continuation_distribution(lex, TokenDistribution({0.0, 0.0, 1.0}));
  CHECK(c.probs[2] == 1.0);
  CHECK(c.eow == 0.0);
  c = continuation_distribution(lex, TokenDistribution({0.5, 0.5, 0.0}));
  CHECK(c.probs[2] == 0.0);
  CHECK(c.eow == 1.0);
}

TEST_CASE("derived distributions stay proper on random inputs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    auto model = random_toy_model(rng, 5, 5);
    const auto& lex = model.lexicon();
    const TokenDistribution dist(random_distribution(lex.size(), rng));
    const auto cont = continuation_distribution(lex, dist);
    CHECK(sum(cont.probs) + cont.eow == doctest::Approx(1.0).epsilon(1e-9));
    double internal = 0.0;
    for (TokenId t : lex.internal_ids()) internal += dist[t];
    CHECK(boundary_mass(lex, dist) + internal == doctest::Approx(1.0).epsilon(1e-9));
    if (boundary_mass(lex, dist) > 0.0) {
      CHECK(sum(word_initial_distribution(lex, dist).probs) ==
            doctest::Approx(1.0).epsilon(1e-9));
    }
    // Pure function of the context.
    const TokenId ctx[] = {0};
    CHECK(model.next_token_distribution(ctx) == model.next_token_distribution(ctx));
  }
}

TEST_CASE("lm.tsv loading") {
  const std::string header = "context\ttoken_id\tprob\n";
  SUBCASE("unconditional, bigram and <s> tables") {
    std::istringstream in(header + "\t0\t0.5\n\t1\t0.25\n\t2\t0.25\n0\t2\t1.0\n<s>\t0\t1\n");
    const auto m = parse_ngram_model(in, "lm.tsv", toy_lexicon());
    CHECK(m.order() == 2);
    CHECK(m.next_token_distribution({})[0] == 1.0);
    const TokenId ctx[] = {0};
    CHECK(m.next_token_distribution(ctx)[2] == 1.0);
  }
  SUBCASE("context that does not sum to one is rejected with its line") {
    std::istringstream in(header + "\t0\t0.5\n\t1\t0.25\n\t2\t0.25\n1\t0\t0.4\n");
    try {
      parse_ngram_model(in, "lm.tsv", toy_lexicon());
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("lm.tsv:5") != std::string::npos);
    }
  }
  SUBCASE("missing unconditional table") {
    std::istringstream in(header + "0\t0\t1.0\n");
    CHECK_THROWS_AS(parse_ngram_model(in, "lm.tsv", toy_lexicon()), Error);
  }
  SUBCASE("unknown token id") {
    std::istringstream in(header + "\t5\t1.0\n");
    CHECK_THROWS_AS(parse_ngram_model(in, "lm.tsv", toy_lexicon()), Error);
  }
  SUBCASE("<s> in the middle of a context") {
    std::istringstream in(header + "\t0\t1.0\n0,<s>\t0\t1.0\n");
    CHECK_THROWS_AS(parse_ngram_model(in, "lm.tsv", toy_lexicon()), Error);
  }
}
