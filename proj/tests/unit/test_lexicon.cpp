#include <doctest.h>

#include <random>
#include <sstream>

#include "support/toy_models.hpp"
#include "wordent/errors.hpp"
#include "wordent/lexicon.hpp"

using namespace wordent;
using wordent::testing::kMark;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected wordent::Error");
  return ErrorKind::Validation;
}

Lexicon toy() {
  return build_lexicon({{0, kMark + "a", true}, {1, kMark + "b", true}, {2, "x", false}});
}

}  // namespace

TEST_CASE("build_lexicon partitions boundary and internal tokens") {
  const auto lex = toy();
  CHECK(lex.size() == 3);
  CHECK(std::vector<TokenId>(lex.boundary_ids().begin(), lex.boundary_ids().end()) ==
        std::vector<TokenId>{0, 1});
  CHECK(std::vector<TokenId>(lex.internal_ids().begin(), lex.internal_ids().end()) ==
        std::vector<TokenId>{2});
}

TEST_CASE("build_lexicon rejects invalid entries") {
  CHECK(kind_of([] { build_lexicon({{0, kMark + "a", true}, {1, kMark + "a", true}}); }) ==
        ErrorKind::Validation);
  CHECK(kind_of([] { build_lexicon({{0, "x", false}}); }) == ErrorKind::Validation);
  CHECK(kind_of([] { build_lexicon({}); }) == ErrorKind::Validation);
  CHECK(kind_of([] { build_lexicon({{0, "a", true}, {0, "b", true}}); }) ==
        ErrorKind::Validation);
  CHECK(kind_of([] { build_lexicon({{0, "a", true}, {2, "b", true}}); }) ==
        ErrorKind::Validation);
  CHECK(kind_of([] { build_lexicon({{0, "", true}}); }) == ErrorKind::Validation);
}

TEST_CASE("is_boundary") {
  const auto lex = toy();
  CHECK(is_boundary(lex, 0));
  CHECK_FALSE(is_boundary(lex, 2));
  CHECK(kind_of([&] { is_boundary(lex, 9); }) == ErrorKind::Lookup);
}

TEST_CASE("render strips the leading marker") {
  const auto lex = toy();
  const TokenId word[] = {0, 2, 2};
  CHECK(lex.render(word) == "axx");
}

TEST_CASE("partition property over random entry lists") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<TokenEntry> entries;
    for (std::size_t i = 0; i < n; ++i) {
      entries.push_back({static_cast<TokenId>(i), "t" + std::to_string(i), rng() % 2 == 0});
    }
    entries[rng() % n].boundary = true;
    std::shuffle(entries.begin(), entries.end(), rng);

    const auto a = build_lexicon(entries);
    const auto b = build_lexicon(entries);
    CHECK(a.boundary_ids().size() + a.internal_ids().size() == n);
    for (TokenId t : a.boundary_ids()) {
      CHECK(std::find(a.internal_ids().begin(), a.internal_ids().end(), t) ==
            a.internal_ids().end());
    }
    CHECK(std::equal(a.boundary_ids().begin(), a.boundary_ids().end(),
                     b.boundary_ids().begin(), b.boundary_ids().end()));
  }
}

TEST_CASE("lexicon.tsv loading") {
  SUBCASE("explicit flags") {
    std::istringstream in("id\tsurface\tboundary\n0\t" + kMark + "a\t1\n1\tx\t0\n");
    const auto lex = parse_lexicon(in, "lex.tsv");
    CHECK(lex.is_boundary(0));
    CHECK_FALSE(lex.is_boundary(1));
  }
  SUBCASE("marker convention") {
    std::istringstream in("id\tsurface\n0\t" + kMark + "a\n1\tx\n2\t" + kMark + "b\n");
    LexiconLoadOptions opts;
    opts.infer_boundary = true;
    const auto lex = parse_lexicon(in, "lex.tsv", opts);
    CHECK(lex.boundary_ids().size() == 2);
    CHECK_FALSE(lex.is_boundary(1));
  }
  SUBCASE("custom marker") {
    std::istringstream in("id\tsurface\n0\tGa\n1\tx\n");
    LexiconLoadOptions opts;
    opts.infer_boundary = true;
    opts.marker = "G";
    CHECK(parse_lexicon(in, "lex.tsv", opts).is_boundary(0));
  }
  SUBCASE("duplicate surface carries a line number") {
    std::istringstream in("id\tsurface\tboundary\n0\ta\t1\n1\ta\t1\n");
    try {
      parse_lexicon(in, "lex.tsv");
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("lex.tsv:3") != std::string::npos);
    }
  }
  SUBCASE("bad boundary flag") {
    std::istringstream in("id\tsurface\tboundary\n0\ta\tyes\n");
    CHECK_THROWS_AS(parse_lexicon(in, "lex.tsv"), Error);
  }
  SUBCASE("no boundary tokens") {
    std::istringstream in("id\tsurface\tboundary\n0\tx\t0\n");
    CHECK_THROWS_AS(parse_lexicon(in, "lex.tsv"), Error);
  }
}
