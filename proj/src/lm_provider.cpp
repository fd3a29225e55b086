#include "wordent/lm_provider.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wordent/errors.hpp"
#include "wordent/tsv.hpp"

namespace wordent {

TokenDistribution::TokenDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) fail(ErrorKind::DegenerateDistribution, "empty distribution");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      fail(ErrorKind::DegenerateDistribution,
           "distribution has a negative or non-finite entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kRenormalizeTolerance) {
    fail(ErrorKind::DegenerateDistribution,
         "distribution sums to " + std::to_string(sum) + ", not 1");
  }
  if (sum != 1.0) {
    for (double& p : probs_) p /= sum;
  }
}

NGramModel::NGramModel(Lexicon lexicon, TokenDistribution unconditional,
                       Table tables, double lambda,
                       std::optional<std::size_t> order)
    : lexicon_(std::move(lexicon)),
      unconditional_(std::move(unconditional)),
      tables_(std::move(tables)),
      lambda_(lambda) {
  if (!(lambda_ >= 0.0 && lambda_ <= 1.0)) {
    fail(ErrorKind::Validation, "interpolation weight must lie in [0, 1]");
  }
  if (unconditional_.size() != lexicon_.size()) {
    fail(ErrorKind::Validation, "unconditional table size does not match lexicon");
  }
  std::size_t longest = 0;
  for (const auto& [ctx, dist] : tables_) {
    if (ctx.empty()) {
      fail(ErrorKind::Validation, "conditional table with empty context");
    }
    if (dist.size() != lexicon_.size()) {
      fail(ErrorKind::Validation, "table size does not match lexicon");
    }
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const bool bos = ctx[i] == kBeginOfSequence;
      if ((bos && i != 0) || (!bos && !lexicon_.contains(ctx[i]))) {
        fail(ErrorKind::Lookup, "table context holds an invalid token id");
      }
    }
    longest = std::max(longest, ctx.size());
  }
  order_ = order.value_or(longest + 1);
  if (order_ < 1) fail(ErrorKind::Validation, "n-gram order must be at least 1");
}

TokenDistribution NGramModel::next_token_distribution(
    std::span<const TokenId> context) const {
  for (TokenId t : context) {
    if (!lexicon_.contains(t)) {
      fail(ErrorKind::Lookup, "unknown token id " + std::to_string(t) + " in context");
    }
  }
  // History as seen by the tables: <s> followed by the context.
  const std::size_t history = context.size() + 1;
  const std::size_t max_len = std::min(order_ - 1, history);
  std::vector<TokenId> key;
  for (std::size_t len = max_len; len >= 1; --len) {
    key.clear();
    if (len == history) {
      key.push_back(kBeginOfSequence);
      key.insert(key.end(), context.begin(), context.end());
    } else {
      key.assign(context.end() - static_cast<std::ptrdiff_t>(len), context.end());
    }
    auto it = tables_.find(key);
    if (it == tables_.end()) continue;
    if (lambda_ == 1.0) return it->second;
    std::vector<double> blend(lexicon_.size());
    for (std::size_t t = 0; t < blend.size(); ++t) {
      blend[t] = lambda_ * it->second.probs()[t] +
                 (1.0 - lambda_) * unconditional_.probs()[t];
    }
    return TokenDistribution(std::move(blend));
  }
  return unconditional_;
}

double boundary_mass(const Lexicon& lexicon, const TokenDistribution& dist) {
  double mass = 0.0;
  for (TokenId t : lexicon.boundary_ids()) mass += dist[t];
  return std::min(mass, 1.0);
}

WordInitialDistribution word_initial_distribution(const Lexicon& lexicon,
                                                  const TokenDistribution& dist) {
  const double mass = boundary_mass(lexicon, dist);
  if (!(mass > 0.0)) {
    fail(ErrorKind::DegenerateDistribution,
         "no probability mass on word-initial tokens");
  }
  WordInitialDistribution out{std::vector<double>(dist.size(), 0.0)};
  for (TokenId t : lexicon.boundary_ids()) out.probs[t] = dist[t] / mass;
  return out;
}

ContinuationDistribution continuation_distribution(const Lexicon& lexicon,
                                                   const TokenDistribution& dist) {
  ContinuationDistribution out{std::vector<double>(dist.size(), 0.0), 0.0};
  for (TokenId t : lexicon.internal_ids()) out.probs[t] = dist[t];
  out.eow = boundary_mass(lexicon, dist);
  return out;
}

namespace {

std::vector<TokenId> parse_context(const TsvReader& reader, std::string_view text,
                                   const Lexicon& lexicon) {
  std::vector<TokenId> ctx;
  if (text.empty()) return ctx;
  const auto parts = split(text, ',');
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] == "<s>") {
      if (i != 0) reader.fail("<s> may only start a context");
      ctx.push_back(NGramModel::kBeginOfSequence);
      continue;
    }
    auto id = parse_int(parts[i]);
    if (!id || *id < 0 || !lexicon.contains(static_cast<TokenId>(*id))) {
      reader.fail("unknown token id '" + std::string(parts[i]) + "' in context");
    }
    ctx.push_back(static_cast<TokenId>(*id));
  }
  return ctx;
}

}  // namespace

NGramModel parse_ngram_model(std::istream& in, const std::string& source,
                             Lexicon lexicon, double lambda,
                             std::optional<std::size_t> order) {
  TsvReader reader(in, source);
  const auto ctx_col = reader.require_column("context");
  const auto tok_col = reader.require_column("token_id");
  const auto prob_col = reader.require_column("prob");

  struct Pending {
    std::vector<double> probs;
    std::size_t first_line = 0;
  };
  std::map<std::vector<TokenId>, Pending> pending;
  while (reader.next()) {
    auto ctx = parse_context(reader, reader.field(ctx_col), lexicon);
    const auto tok = reader.int_field(tok_col);
    if (tok < 0 || !lexicon.contains(static_cast<TokenId>(tok))) {
      reader.fail("unknown token id " + std::to_string(tok));
    }
    const double p = reader.double_field(prob_col);
    if (p < 0.0 || p > 1.0) reader.fail("probability outside [0, 1]");
    auto& slot = pending[ctx];
    if (slot.probs.empty()) {
      slot.probs.assign(lexicon.size(), 0.0);
      slot.first_line = reader.line_number();
    }
    slot.probs[static_cast<std::size_t>(tok)] += p;
  }

  std::optional<TokenDistribution> unconditional;
  NGramModel::Table tables;
  for (auto& [ctx, slot] : pending) {
    const double sum = std::accumulate(slot.probs.begin(), slot.probs.end(), 0.0);
    if (std::abs(sum - 1.0) > kRenormalizeTolerance) {
      throw Error(ErrorKind::Schema,
                  source + ":" + std::to_string(slot.first_line) +
                      ": probabilities for the context starting here sum to " +
                      std::to_string(sum));
    }
    TokenDistribution dist(std::move(slot.probs));
    if (ctx.empty()) {
      unconditional.emplace(std::move(dist));
    } else {
      tables.emplace(ctx, std::move(dist));
    }
  }
  if (!unconditional) {
    fail(ErrorKind::Schema, source + ": missing unconditional table (empty context)");
  }
  return NGramModel(std::move(lexicon), std::move(*unconditional), std::move(tables),
                    lambda, order);
}

NGramModel load_ngram_model(const std::filesystem::path& path, Lexicon lexicon,
                            double lambda, std::optional<std::size_t> order) {
  auto in = open_input(path);
  return parse_ngram_model(in, path.string(), std::move(lexicon), lambda, order);
}

}  // namespace wordent
