#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "support/synthetic.hpp"
#include "wordent/errors.hpp"
#include "wordent/regression.hpp"

using namespace wordent;
using namespace wordent::testing;

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

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

double planted_delta(std::uint64_t seed, double coef, bool use_noise) {
  const auto s = make_synthetic_study(seed, coef);
  DesignOptions opts;
  opts.split_seed = seed;
  const auto base = build_design(s.items, s.rt, ResponseKind::SPR, opts);
  const auto ext = build_design(s.items, s.rt, ResponseKind::SPR, opts,
                                use_noise ? &s.noise : &s.entropy);
  const auto base_fit = fit_linear_model(base.fit, base.columns);
  const auto ext_fit = fit_linear_model(ext.fit, ext.columns);
  return delta_ll(base_fit, ext_fit, base.heldout, ext.heldout);
}

}  // namespace

TEST_CASE("design layout") {
  const auto s = make_synthetic_study(1, 0.0, 3, 5, 2);
  const auto d = build_design(s.items, s.rt, ResponseKind::SPR, {});
  CHECK(std::count_if(d.columns.begin(), d.columns.end(), [](const std::string& c) {
          return c.starts_with("subject[");
        }) == 1);
  CHECK(std::find(d.columns.begin(), d.columns.end(), "prev_fixated") == d.columns.end());
  // 3 documents x 5 words, first word of each dropped: 12 rows per subject.
  CHECK(d.fit.y.size() + d.heldout.y.size() == 24);
  CHECK(d.excluded_initial == 6);

  const auto fp = build_design(s.items, s.rt, ResponseKind::FP, {});
  CHECK(std::find(fp.columns.begin(), fp.columns.end(), "prev_fixated") != fp.columns.end());

  auto no_fix = s.rt;
  no_fix.has_prev_fixated = false;
  CHECK(kind_of([&] { build_design(s.items, no_fix, ResponseKind::FP, {}); }) ==
        ErrorKind::Schema);
  CHECK(kind_of([&] { build_design(s.items, no_fix, ResponseKind::GP, {}); }) ==
        ErrorKind::Schema);

  DesignOptions zero;
  zero.heldout_frac = 0.0;
  CHECK(kind_of([&] { build_design(s.items, s.rt, ResponseKind::SPR, zero); }) ==
        ErrorKind::Config);
}

TEST_CASE("items share a partition across subjects") {
  const auto s = make_synthetic_study(2, 0.0);
  const auto d = build_design(s.items, s.rt, ResponseKind::SPR, {});
  std::set<ItemKey> fit_items, held_items;
  for (const auto& r : d.fit.rows) fit_items.insert(r.item);
  for (const auto& r : d.heldout.rows) held_items.insert(r.item);
  for (const auto& k : held_items) CHECK(fit_items.count(k) == 0);
  const double frac = static_cast<double>(d.heldout.y.size()) /
                      static_cast<double>(d.fit.y.size() + d.heldout.y.size());
  CHECK(frac > 0.2);
  CHECK(frac < 0.47);
}

TEST_CASE("z-scoring uses only fit-partition rows") {
  const auto s = make_synthetic_study(3, 5.0);
  const auto base = build_design(s.items, s.rt, ResponseKind::SPR, {});
  const auto fit = fit_linear_model(base.fit, base.columns);

  auto shuffled = s.rt;
  std::mt19937_64 rng(9);
  // Reorder and perturb held-out rows only.
  std::vector<RtRow> held, kept;
  for (const auto& r : shuffled.rows) {
    (is_heldout(r.key, 1.0 / 3.0, 0) ? held : kept).push_back(r);
  }
  std::shuffle(held.begin(), held.end(), rng);
  for (auto& r : held) r.rt_ms += 1000.0;
  kept.insert(kept.end(), held.begin(), held.end());
  shuffled.rows = kept;
  const auto other = build_design(s.items, shuffled, ResponseKind::SPR, {});
  const auto fit2 = fit_linear_model(other.fit, other.columns);
  CHECK((fit.coefficients - fit2.coefficients).norm() < 1e-9);
}

TEST_CASE("fit_linear_model closed forms and failures") {
  DesignMatrix m;
  m.X = Eigen::MatrixXd::Ones(3, 1);
  m.y = Eigen::Vector3d(1, 2, 3);
  const std::vector<std::string> cols = {"intercept"};
  const auto fit = fit_linear_model(m, cols);
  CHECK(fit.coefficients(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.residual_variance == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(fit.loglik - (-3.6486179374517715)) < 1e-6);
  CHECK(gaussian_loglik(fit, m) == doctest::Approx(fit.loglik).epsilon(1e-12));

  DesignMatrix exact;
  exact.X.resize(4, 2);
  exact.X << 1, 0.5, 1, 1.5, 1, 2.0, 1, 7.0;
  exact.y = exact.X.col(1);
  const std::vector<std::string> two = {"intercept", "x"};
  CHECK(kind_of([&] { fit_linear_model(exact, two); }) == ErrorKind::DegenerateFit);

  DesignMatrix dup;
  dup.X.resize(5, 3);
  dup.X << 1, 1, 1, 1, 2, 2, 1, 3, 3, 1, 5, 5, 1, 8, 8;
  dup.y = Eigen::VectorXd::LinSpaced(5, 0, 1) + Eigen::VectorXd::Constant(5, 0.3);
  dup.y(2) += 0.7;
  const std::vector<std::string> names = {"intercept", "x", "x_copy"};
  try {
    fit_linear_model(dup, names);
    FAIL("expected collinearity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Collinearity);
    const std::string msg = e.what();
    CHECK((msg.find("x_copy") != std::string::npos || msg.find("x") != std::string::npos));
  }
}

TEST_CASE("delta_ll identities") {
  const auto s = make_synthetic_study(4, 5.0);
  const auto base = build_design(s.items, s.rt, ResponseKind::SPR, {});
  const auto fit = fit_linear_model(base.fit, base.columns);
  CHECK(delta_ll(fit, fit, base.heldout, base.heldout) == 0.0);

  // Held-out LL does not depend on column order.
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(base.fit.X.cols()));
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  auto reorder = [&](const DesignMatrix& m) {
    DesignMatrix out = m;
    for (std::size_t c = 0; c < perm.size(); ++c) out.X.col(c) = m.X.col(perm[c]);
    return out;
  };
  std::vector<std::string> names;
  for (auto c : perm) names.push_back(base.columns[static_cast<std::size_t>(c)]);
  const auto fit_r = fit_linear_model(reorder(base.fit), names);
  CHECK(gaussian_loglik(fit_r, reorder(base.heldout)) ==
        doctest::Approx(gaussian_loglik(fit, base.heldout)).epsilon(1e-10));

  auto other = base.heldout;
  other.rows.pop_back();
  CHECK(kind_of([&] { delta_ll(fit, fit, base.heldout, other); }) ==
        ErrorKind::PartitionMismatch);
}

TEST_CASE("planted entropy effects raise held-out likelihood; noise does not") {
  std::size_t planted_positive = 0;
  std::size_t noise_nonpositive = 0;
  const std::size_t sims = 100;
  for (std::size_t i = 0; i < sims; ++i) {
    planted_positive += planted_delta(1000 + i, 15.0, false) > 0.0;
    noise_nonpositive += planted_delta(5000 + i, 15.0, true) <= 0.0;
  }
  CHECK(planted_positive >= 95);
  CHECK(noise_nonpositive > sims / 2);
}

TEST_CASE("paired_permutation_test") {
  const std::vector<double> a = {1, 4, 2, 8, 5};
  const auto same = paired_permutation_test(a, a, 1000, 1);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);

  const std::vector<double> hi(12, 3.0), lo(12, 2.0);
  const auto shifted = paired_permutation_test(hi, lo);
  CHECK(shifted.statistic == 1.0);
  CHECK(shifted.p_value < 0.01);
  CHECK(shifted.p_value > 0.0);
  CHECK(shifted.n_perm == kDefaultPermutations);

  CHECK(kind_of([&] { paired_permutation_test(a, hi); }) == ErrorKind::Validation);
  CHECK(kind_of([&] { paired_permutation_test(a, a, 0); }) == ErrorKind::Validation);
}

TEST_CASE("permutation p-values are calibrated under a true null") {
  std::mt19937_64 rng(77);
  std::chi_squared_distribution<double> chisq(1.0);
  std::size_t rejections = 0;
  const std::size_t sims = 400;
  for (std::size_t i = 0; i < sims; ++i) {
    std::vector<double> a(60), b(60);
    for (auto& x : a) x = chisq(rng);
    for (auto& x : b) x = chisq(rng);
    rejections += paired_permutation_test(a, b, 999, i).p_value <= 0.05;
  }
  const double rate = static_cast<double>(rejections) / sims;
  CHECK(rate >= 0.02);
  CHECK(rate <= 0.08);
}
