#include "wordent/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "wordent/errors.hpp"
#include "wordent/rng.hpp"
#include "wordent/sampler.hpp"
#include "wordent/tsv.hpp"

namespace wordent {

ResponseKind parse_response_kind(std::string_view text) {
  if (text == "spr" || text == "SPR") return ResponseKind::SPR;
  if (text == "fp" || text == "FP") return ResponseKind::FP;
  if (text == "gp" || text == "GP") return ResponseKind::GP;
  fail(ErrorKind::Config, "unknown response kind '" + std::string(text) +
                              "' (expected spr, fp or gp)");
}

const char* to_string(ResponseKind kind) {
  switch (kind) {
    case ResponseKind::SPR: return "spr";
    case ResponseKind::FP: return "fp";
    case ResponseKind::GP: return "gp";
  }
  return "?";
}

std::vector<ItemPredictors> compute_item_predictors(const Corpus& corpus,
                                                    const LanguageModel& model,
                                                    const UnigramTable& unigram) {
  const auto contexts = corpus.contexts();
  const auto initial = corpus.document_initial();
  std::vector<ItemPredictors> items;
  items.reserve(corpus.words.size());
  for (std::size_t i = 0; i < corpus.words.size(); ++i) {
    const auto& w = corpus.words[i];
    ItemPredictors item;
    item.key = w.key;
    item.word = w.word;
    item.word_length = static_cast<double>(utf8_length(w.word));
    item.word_index = static_cast<double>(w.key.word_index);
    item.unigram_surprisal = unigram.surprisal(w.word);
    item.surprisal = score_word(model, contexts[i], w.tokens);
    if (!initial[i]) item.prev_surprisal = items.back().surprisal;
    items.push_back(std::move(item));
  }
  return items;
}

bool is_heldout(const ItemKey& item, double heldout_frac, std::uint64_t seed) {
  std::uint64_t h = fnv1a(item.doc_id.data(), item.doc_id.size());
  h = fnv1a(&item.word_index, sizeof item.word_index, h);
  const double u = static_cast<double>(derive_seed(seed, h) >> 11) * 0x1.0p-53;
  return u < heldout_frac;
}

namespace {

struct RawRow {
  RowKey key;
  bool heldout = false;
  double response = 0.0;
  std::vector<double> values;  // continuous then indicator columns, no intercept
};

}  // namespace

Design build_design(std::span<const ItemPredictors> items, const RtTable& rt,
                    ResponseKind response, const DesignOptions& options,
                    const EntropyColumn* entropy) {
  if (!(options.heldout_frac > 0.0 && options.heldout_frac < 1.0)) {
    fail(ErrorKind::Config, "heldout fraction must lie strictly between 0 and 1");
  }
  const bool eye_tracking = response != ResponseKind::SPR;
  if (eye_tracking && !rt.has_prev_fixated) {
    fail(ErrorKind::Schema, rt.source + ": missing required column 'prev_fixated' for " +
                                to_string(response) + " responses");
  }

  std::map<ItemKey, const ItemPredictors*> by_key;
  for (const auto& item : items) by_key.emplace(item.key, &item);

  std::vector<std::string> continuous = {"word_length", "word_index",
                                         "unigram_surprisal", "surprisal",
                                         "prev_surprisal"};
  if (entropy) continuous.push_back("entropy");
  const std::size_t n_cont = continuous.size();

  std::set<std::string> subjects;
  for (const auto& row : rt.rows) subjects.insert(row.subject);

  Design design;
  std::vector<RawRow> raw;
  raw.reserve(rt.rows.size());
  for (const auto& row : rt.rows) {
    auto it = by_key.find(row.key);
    if (it == by_key.end()) {
      fail(ErrorKind::Schema, rt.source + ":" + std::to_string(row.line) +
                                  ": no corpus word for doc '" + row.key.doc_id +
                                  "' index " + std::to_string(row.key.word_index));
    }
    const ItemPredictors& item = *it->second;
    if (!item.prev_surprisal) {
      ++design.excluded_initial;
      continue;
    }
    if (!std::isfinite(item.surprisal) || !std::isfinite(*item.prev_surprisal)) {
      fail(ErrorKind::Validation, "infinite LM surprisal near word '" + item.word +
                                      "' (doc '" + item.key.doc_id + "' index " +
                                      std::to_string(item.key.word_index) + ")");
    }
    RawRow r;
    r.key = {row.subject, row.key};
    r.heldout = is_heldout(row.key, options.heldout_frac, options.split_seed);
    if (options.log_response) {
      if (row.rt_ms <= 0.0) {
        fail(ErrorKind::Validation, rt.source + ":" + std::to_string(row.line) +
                                        ": log transform needs a positive reading time");
      }
      r.response = std::log(row.rt_ms);
    } else {
      r.response = row.rt_ms;
    }
    r.values = {item.word_length, item.word_index, item.unigram_surprisal,
                item.surprisal, *item.prev_surprisal};
    if (entropy) {
      auto e = entropy->find(row.key);
      if (e == entropy->end() || !std::isfinite(e->second)) {
        fail(ErrorKind::Schema, "entropy column has no finite value for doc '" +
                                    row.key.doc_id + "' index " +
                                    std::to_string(row.key.word_index));
      }
      r.values.push_back(e->second);
    }
    if (eye_tracking) r.values.push_back(*row.prev_fixated ? 1.0 : 0.0);
    raw.push_back(std::move(r));
  }

  // z-score continuous predictors with fit-partition statistics only.
  std::vector<double> mean(n_cont, 0.0), sd(n_cont, 0.0);
  std::size_t n_fit = 0;
  for (const auto& r : raw) {
    if (r.heldout) continue;
    ++n_fit;
    for (std::size_t c = 0; c < n_cont; ++c) mean[c] += r.values[c];
  }
  if (n_fit == 0) fail(ErrorKind::Validation, "fit partition is empty");
  for (auto& m : mean) m /= static_cast<double>(n_fit);
  for (const auto& r : raw) {
    if (r.heldout) continue;
    for (std::size_t c = 0; c < n_cont; ++c) {
      sd[c] += (r.values[c] - mean[c]) * (r.values[c] - mean[c]);
    }
  }
  for (auto& s : sd) s = n_fit > 1 ? std::sqrt(s / static_cast<double>(n_fit - 1)) : 0.0;

  design.columns.push_back("intercept");
  design.columns.insert(design.columns.end(), continuous.begin(), continuous.end());
  if (eye_tracking) design.columns.push_back("prev_fixated");
  std::vector<std::string> dummy_subjects(std::next(subjects.begin(), subjects.empty() ? 0 : 1),
                                          subjects.end());
  for (const auto& s : dummy_subjects) design.columns.push_back("subject[" + s + "]");
  const auto n_cols = static_cast<Eigen::Index>(design.columns.size());

  auto fill = [&](bool heldout, DesignMatrix& m) {
    const auto n = std::count_if(raw.begin(), raw.end(),
                                 [heldout](const RawRow& r) { return r.heldout == heldout; });
    m.X.resize(n, n_cols);
    m.y.resize(n);
    Eigen::Index i = 0;
    for (const auto& r : raw) {
      if (r.heldout != heldout) continue;
      Eigen::Index col = 0;
      m.X(i, col++) = 1.0;
      for (std::size_t c = 0; c < n_cont; ++c) {
        const double centered = r.values[c] - mean[c];
        m.X(i, col++) = sd[c] > 1e-12 ? centered / sd[c] : centered;
      }
      for (std::size_t c = n_cont; c < r.values.size(); ++c) m.X(i, col++) = r.values[c];
      for (const auto& s : dummy_subjects) m.X(i, col++) = r.key.subject == s ? 1.0 : 0.0;
      m.y(i) = r.response;
      m.rows.push_back(r.key);
      ++i;
    }
  };
  fill(false, design.fit);
  fill(true, design.heldout);
  return design;
}

FitResult fit_linear_model(const DesignMatrix& data,
                           std::span<const std::string> columns) {
  const auto n = data.X.rows();
  const auto p = data.X.cols();
  if (static_cast<std::size_t>(p) != columns.size()) {
    fail(ErrorKind::Precondition, "column name count does not match design width");
  }
  if (n <= p) {
    fail(ErrorKind::Precondition, "need more rows (" + std::to_string(n) +
                                      ") than columns (" + std::to_string(p) + ")");
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(data.X);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    std::string names;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < p; ++i) {
      if (!names.empty()) names += ", ";
      names += columns[static_cast<std::size_t>(perm(i))];
    }
    fail(ErrorKind::Collinearity, "design is rank deficient; dependent column(s): " + names);
  }

  FitResult fit;
  fit.columns.assign(columns.begin(), columns.end());
  fit.coefficients = qr.solve(data.y);
  fit.n_obs = static_cast<std::size_t>(n);
  const Eigen::VectorXd resid = data.y - data.X * fit.coefficients;
  fit.residual_variance = resid.squaredNorm() / static_cast<double>(n);
  if (!(fit.residual_variance > kVarianceFloor)) {
    fail(ErrorKind::DegenerateFit, "residual variance below floor (perfect fit)");
  }
  const double nd = static_cast<double>(n);
  fit.loglik = -0.5 * nd * std::log(2.0 * std::numbers::pi * fit.residual_variance) -
               0.5 * nd;
  return fit;
}

double gaussian_loglik(const FitResult& fit, const DesignMatrix& data) {
  if (data.X.cols() != fit.coefficients.size()) {
    fail(ErrorKind::Precondition, "design width does not match fitted model");
  }
  const double nd = static_cast<double>(data.X.rows());
  const double rss = (data.y - data.X * fit.coefficients).squaredNorm();
  return -0.5 * nd * std::log(2.0 * std::numbers::pi * fit.residual_variance) -
         rss / (2.0 * fit.residual_variance);
}

Eigen::VectorXd squared_errors(const FitResult& fit, const DesignMatrix& data) {
  if (data.X.cols() != fit.coefficients.size()) {
    fail(ErrorKind::Precondition, "design width does not match fitted model");
  }
  return (data.y - data.X * fit.coefficients).array().square();
}

double delta_ll(const FitResult& baseline, const FitResult& extended,
                const DesignMatrix& baseline_heldout,
                const DesignMatrix& extended_heldout) {
  if (baseline_heldout.rows != extended_heldout.rows ||
      baseline_heldout.y != extended_heldout.y) {
    fail(ErrorKind::PartitionMismatch,
         "baseline and extended models were evaluated on different held-out rows");
  }
  return gaussian_loglik(extended, extended_heldout) -
         gaussian_loglik(baseline, baseline_heldout);
}

PermutationResult paired_permutation_test(std::span<const double> errors_a,
                                          std::span<const double> errors_b,
                                          std::size_t n_perm, std::uint64_t seed) {
  if (errors_a.size() != errors_b.size()) {
    fail(ErrorKind::Validation, "squared-error vectors differ in length");
  }
  if (errors_a.empty()) fail(ErrorKind::Validation, "no squared errors to compare");
  if (n_perm == 0) fail(ErrorKind::Validation, "n_perm must be at least 1");

  const std::size_t n = errors_a.size();
  std::vector<double> diff(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = errors_a[i] - errors_b[i];
    scale += std::abs(diff[i]);
  }
  const double nd = static_cast<double>(n);
  double total = 0.0;
  for (double d : diff) total += d;

  PermutationResult result;
  result.n_perm = n_perm;
  result.statistic = total / nd;
  // Ties within rounding count as at least as extreme.
  const double observed = std::abs(total) - 1e-12 * scale;

  StreamRng rng(seed, 0, 0);
  std::size_t extreme = 0;
  for (std::size_t p = 0; p < n_perm; ++p) {
    double sum = 0.0;
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) bits = rng.next();
      sum += (bits & 1u) ? -diff[i] : diff[i];
      bits >>= 1;
    }
    if (std::abs(sum) >= observed) ++extreme;
  }
  result.p_value = static_cast<double>(1 + extreme) / static_cast<double>(n_perm + 1);
  return result;
}

}  // namespace wordent
