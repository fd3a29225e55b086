#include "wordent/cli/commands.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "wordent/aggregate.hpp"
#include "wordent/corpus.hpp"
#include "wordent/errors.hpp"
#include "wordent/estimators.hpp"
#include "wordent/lm_provider.hpp"
#include "wordent/parallel.hpp"
#include "wordent/regression.hpp"
#include "wordent/rng.hpp"
#include "wordent/sampler.hpp"
#include "wordent/tsv.hpp"
#include "wordent/variance.hpp"

namespace wordent::cli {

namespace {

void require_path(const std::string& path, const char* flag) {
  if (path.empty()) fail(ErrorKind::Config, std::string("missing required option ") + flag);
}

NGramModel load_model(const RunConfig& config) {
  require_path(config.lexicon, "--lexicon");
  require_path(config.lm, "--lm");
  LexiconLoadOptions opts;
  opts.infer_boundary = config.infer_boundary;
  opts.marker = config.marker;
  auto lexicon = load_lexicon(config.lexicon, opts);
  return load_ngram_model(config.lm, std::move(lexicon), config.lambda, config.order);
}

SamplerConfig sampler_config(const RunConfig& config) {
  if (config.samples < 1) fail(ErrorKind::Config, "--samples must be at least 1");
  if (config.max_word_tokens < 1) {
    fail(ErrorKind::Config, "--max-word-tokens must be at least 1");
  }
  return {config.samples, config.max_word_tokens, config.seed};
}

std::string opt_fixed6(const std::optional<double>& v) { return v ? fixed6(*v) : ""; }

struct WordEstimates {
  double ft_shannon = 0.0;
  double ft_renyi = 0.0;
  EntropyEstimate mc_shannon;
  EntropyEstimate mc_renyi;
  double surprisal = 0.0;
};

// First-token, Monte Carlo and surprisal values for every corpus word. Word i
// draws from sampler streams keyed by context index i.
std::vector<WordEstimates> estimate_corpus(const LanguageModel& model,
                                           const Corpus& corpus,
                                           const RunConfig& config, bool with_mc) {
  const auto order = RenyiOrder::of(config.alpha);
  const auto sampler = sampler_config(config);
  const auto contexts = corpus.contexts();
  std::vector<WordEstimates> out(corpus.words.size());
  parallel_for(out.size(), effective_threads(config), [&](std::size_t i) {
    const auto dist = model.next_token_distribution(contexts[i]);
    auto& e = out[i];
    e.ft_shannon = first_token_shannon(dist);
    e.ft_renyi = first_token_renyi(dist, order);
    e.surprisal = score_word(model, contexts[i], corpus.words[i].tokens);
    if (with_mc) {
      const auto set = sample_set(model, contexts[i], sampler, i);
      e.mc_shannon = mc_shannon(set);
      e.mc_renyi = mc_renyi(set, order,
                            {config.n_boot, derive_seed(config.seed, 0x5E000000 + i)});
    }
  });
  return out;
}

bool variant_needs_mc(const std::string& v) { return v.starts_with("mc-"); }

void check_variant(const std::string& v) {
  static const std::vector<std::string> known = {"ft-shannon", "ft-renyi", "mc-shannon",
                                                 "mc-renyi"};
  if (std::find(known.begin(), known.end(), v) == known.end()) {
    fail(ErrorKind::Config, "unknown entropy variant '" + v +
                                "' (expected ft-shannon, ft-renyi, mc-shannon or mc-renyi)");
  }
}

double variant_value(const WordEstimates& e, const std::string& v) {
  if (v == "ft-shannon") return e.ft_shannon;
  if (v == "ft-renyi") return e.ft_renyi;
  if (v == "mc-shannon") return e.mc_shannon.bits;
  return e.mc_renyi.bits;
}

std::string variant_column(std::string v) {
  std::replace(v.begin(), v.end(), '-', '_');
  return v;
}

}  // namespace

void cmd_estimate(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const auto model = load_model(config);
  require_path(config.corpus, "--corpus");
  const auto corpus = load_corpus(config.corpus, &model.lexicon(), config.marker);
  const auto est = estimate_corpus(model, corpus, config, true);

  out << config_echo(config) << '\n';
  out << "doc_id\tword_index\tword\tft_shannon\tft_renyi\tmc_shannon\t"
         "mc_shannon_stderr\tmc_renyi\tmc_renyi_stderr\tsurprisal\ttruncated_count\n";
  std::size_t truncated = 0;
  std::size_t infinite = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const auto& w = corpus.words[i];
    const auto& e = est[i];
    truncated += e.mc_shannon.truncated_count;
    if (std::isinf(e.surprisal)) ++infinite;
    out << w.key.doc_id << '\t' << w.key.word_index << '\t' << w.word << '\t'
        << fixed6(e.ft_shannon) << '\t' << fixed6(e.ft_renyi) << '\t'
        << fixed6(e.mc_shannon.bits) << '\t' << opt_fixed6(e.mc_shannon.stderr_bits)
        << '\t' << fixed6(e.mc_renyi.bits) << '\t' << opt_fixed6(e.mc_renyi.stderr_bits)
        << '\t' << fixed6(e.surprisal) << '\t' << e.mc_shannon.truncated_count << '\n';
  }
  log << "words: " << est.size() << ", truncated samples: " << truncated << '\n';
  if (infinite > 0) log << "warning: " << infinite << " word(s) have infinite surprisal\n";
}

void cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const auto model = load_model(config);
  const auto order = RenyiOrder::of(config.alpha);
  const auto sampler = sampler_config(config);

  struct Row {
    std::string doc_id = "-";
    std::string word_index = "-";
    std::string word = "-";
    Context context;
  };
  std::vector<Row> rows;
  if (config.corpus.empty()) {
    rows.emplace_back();
  } else {
    const auto corpus = load_corpus(config.corpus, &model.lexicon(), config.marker);
    const auto contexts = corpus.contexts();
    for (std::size_t i = 0; i < contexts.size(); ++i) {
      const auto& w = corpus.words[i];
      rows.push_back({w.key.doc_id, std::to_string(w.key.word_index), w.word, contexts[i]});
    }
  }

  out << config_echo(config) << " depth=" << config.depth << '\n';
  out << "doc_id\tword_index\tword\tdepth\tresidual_mass\tapproximate\tft_shannon\t"
         "exact_shannon\tmc_shannon\tmc_shannon_stderr\tft_renyi\texact_renyi\tmc_renyi\t"
         "lower_bound_shannon\tlower_bound_renyi\n";
  std::size_t failures = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto enumeration = enumerate_words(model, row.context, config.depth);
    const auto exact_h = exact_shannon(enumeration, config.residual_tol);
    const auto exact_r = exact_renyi(enumeration, order, config.residual_tol);
    const auto dist = model.next_token_distribution(row.context);
    const double ft_h = first_token_shannon(dist);
    const double ft_r = first_token_renyi(dist, order);
    const auto set = sample_set(model, row.context, sampler, i, effective_threads(config));
    const auto mc_h = mc_shannon(set);
    const double mc_r = mc_renyi_bits(set.surprisals(), order);

    std::string verdict_h = "NA";
    std::string verdict_r = "NA";
    if (!exact_h.approximate) {
      verdict_h = ft_h <= exact_h.bits + 1e-9 ? "PASS" : "FAIL";
      verdict_r = ft_r <= exact_r.bits + 1e-9 ? "PASS" : "VIOLATION";
      if (verdict_h == "FAIL") ++failures;
    }
    char residual[32];
    std::snprintf(residual, sizeof residual, "%.6e", enumeration.residual_mass);
    out << row.doc_id << '\t' << row.word_index << '\t' << row.word << '\t'
        << config.depth << '\t' << residual << '\t'
        << (exact_h.approximate ? "yes" : "no") << '\t' << fixed6(ft_h) << '\t'
        << fixed6(exact_h.bits) << '\t' << fixed6(mc_h.bits) << '\t'
        << opt_fixed6(mc_h.stderr_bits) << '\t' << fixed6(ft_r) << '\t'
        << fixed6(exact_r.bits) << '\t' << fixed6(mc_r) << '\t' << verdict_h << '\t'
        << verdict_r << '\n';
  }
  if (failures > 0) log << "lower-bound check failed for " << failures << " context(s)\n";
}

void cmd_variance(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const auto model = load_model(config);
  require_path(config.corpus, "--corpus");
  const auto corpus = load_corpus(config.corpus, &model.lexicon(), config.marker);
  const auto contexts = corpus.contexts();

  CVOptions opts;
  opts.ks = config.ks;
  opts.n_boot = config.n_boot;
  opts.sampler = sampler_config(config);
  opts.threads = effective_threads(config);
  const RenyiOrder orders[] = {RenyiOrder::shannon(), RenyiOrder::of(config.alpha)};
  const auto reports = bootstrap_cv(model, contexts, orders, opts);

  out << config_echo(config) << '\n';
  out << "k\tcv_shannon\tcv_renyi\tundefined_shannon\tundefined_renyi\n";
  for (std::size_t r = 0; r < reports[0].rows.size(); ++r) {
    const auto& h = reports[0].rows[r];
    const auto& q = reports[1].rows[r];
    out << h.k << '\t' << fixed6(h.cv) << '\t' << fixed6(q.cv) << '\t' << h.n_undefined
        << '\t' << q.n_undefined << '\n';
  }
  log << "contexts: " << contexts.size() << '\n';
}

void cmd_regress(const RunConfig& config, std::ostream& out, std::ostream& log) {
  if (config.variants.empty() || config.variants.size() > 2) {
    fail(ErrorKind::Config, "regress takes one or two --variant values");
  }
  for (const auto& v : config.variants) check_variant(v);
  if (!(config.heldout_frac > 0.0 && config.heldout_frac < 1.0)) {
    fail(ErrorKind::Config, "--heldout-frac must lie strictly between 0 and 1");
  }
  const auto response = parse_response_kind(config.response);

  const auto model = load_model(config);
  require_path(config.corpus, "--corpus");
  require_path(config.rt, "--rt");
  require_path(config.unigram, "--unigram");
  const auto corpus = load_corpus(config.corpus, &model.lexicon(), config.marker);
  const auto rt = load_rt(config.rt);
  const auto unigram = load_unigram(config.unigram);

  const bool with_mc = std::any_of(config.variants.begin(), config.variants.end(),
                                   variant_needs_mc);
  const auto est = estimate_corpus(model, corpus, config, with_mc);
  const auto items = compute_item_predictors(corpus, model, unigram);

  DesignOptions design_opts;
  design_opts.heldout_frac = config.heldout_frac;
  design_opts.split_seed = config.seed;
  design_opts.log_response = config.log_rt;

  const auto base_design = build_design(items, rt, response, design_opts);
  const auto base_fit = fit_linear_model(base_design.fit, base_design.columns);
  const double base_ll = gaussian_loglik(base_fit, base_design.heldout);

  out << config_echo(config) << " response=" << to_string(response)
      << " heldout_frac=" << fixed6(config.heldout_frac) << '\n';
  out << "variant\tn_fit\tn_heldout\tbaseline_heldout_ll\textended_heldout_ll\tdelta_ll\n";

  std::vector<Eigen::VectorXd> errors;
  for (const auto& v : config.variants) {
    EntropyColumn column;
    for (std::size_t i = 0; i < corpus.words.size(); ++i) {
      column[corpus.words[i].key] = variant_value(est[i], v);
    }
    const auto design = build_design(items, rt, response, design_opts, &column);
    const auto fit = fit_linear_model(design.fit, design.columns);
    const double ll = gaussian_loglik(fit, design.heldout);
    const double delta = delta_ll(base_fit, fit, base_design.heldout, design.heldout);
    out << v << '\t' << design.fit.y.size() << '\t' << design.heldout.y.size() << '\t'
        << fixed6(base_ll) << '\t' << fixed6(ll) << '\t' << fixed6(delta) << '\n';
    errors.push_back(squared_errors(fit, design.heldout));
  }
  if (errors.size() == 2) {
    const auto perm = paired_permutation_test(
        std::span<const double>(errors[0].data(), static_cast<std::size_t>(errors[0].size())),
        std::span<const double>(errors[1].data(), static_cast<std::size_t>(errors[1].size())),
        config.n_perm, derive_seed(config.seed, 0x9E77));
    out << "# paired permutation test on held-out squared errors: " << config.variants[0]
        << " - " << config.variants[1] << '\n';
    out << "statistic\tp_value\tn_perm\n";
    out << fixed6(perm.statistic) << '\t' << fixed6(perm.p_value) << '\t' << perm.n_perm
        << '\n';
  }
  log << "excluded document-initial rows: " << base_design.excluded_initial << '\n';
}

void cmd_aggregate(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const std::string variant = config.variants.empty() ? "mc-shannon" : config.variants[0];
  check_variant(variant);
  require_path(config.corpus, "--corpus");

  std::vector<double> entropies;
  Corpus corpus;
  if (!config.entropies.empty()) {
    corpus = load_corpus(config.corpus, nullptr, config.marker);
    if (!corpus.has_pos) fail(ErrorKind::Schema, config.corpus + ": missing 'pos' column");
    auto in = open_input(config.entropies);
    TsvReader reader(in, config.entropies, true);
    const auto doc_col = reader.require_column("doc_id");
    const auto idx_col = reader.require_column("word_index");
    const auto val_col = reader.require_column(variant_column(variant));
    std::map<ItemKey, double> values;
    while (reader.next()) {
      values[{std::string(reader.field(doc_col)), reader.int_field(idx_col)}] =
          reader.double_field(val_col);
    }
    for (const auto& w : corpus.words) {
      auto it = values.find(w.key);
      if (it == values.end()) {
        fail(ErrorKind::Schema, config.entropies + ": no entry for doc '" + w.key.doc_id +
                                    "' index " + std::to_string(w.key.word_index));
      }
      entropies.push_back(it->second);
    }
  } else {
    const auto model = load_model(config);
    corpus = load_corpus(config.corpus, &model.lexicon(), config.marker);
    if (!corpus.has_pos) fail(ErrorKind::Schema, config.corpus + ": missing 'pos' column");
    const auto est = estimate_corpus(model, corpus, config, variant_needs_mc(variant));
    for (const auto& e : est) entropies.push_back(variant_value(e, variant));
  }

  std::vector<std::string> tags;
  for (const auto& w : corpus.words) tags.push_back(w.pos.value_or(""));
  const auto agg = aggregate_by_tag(
      entropies, tags,
      config.top_k == 0 ? std::nullopt : std::optional<std::size_t>(config.top_k));

  out << config_echo(config) << " variant=" << variant << " top_k=" << config.top_k
      << '\n';
  out << "tag\tcount\tmean_entropy\tsem\n";
  for (const auto& t : agg.tags) {
    out << t.tag << '\t' << t.count << '\t' << fixed6(t.mean) << '\t' << opt_fixed6(t.sem)
        << '\n';
  }
  log << "tags: " << agg.tags.size() << '\n';
}

namespace {

void add_model_options(CLI::App& app, RunConfig& c) {
  app.add_option("--lexicon", c.lexicon, "Lexicon TSV (id, surface, boundary)");
  app.add_option("--lm", c.lm, "N-gram model TSV (context, token_id, prob)");
  app.add_option("--lambda", c.lambda, "Interpolation weight on matched context tables")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--order", c.order, "Cap on n-gram order (default: from file)");
  app.add_flag("--infer-boundary", c.infer_boundary,
               "Infer boundary tokens from the marker prefix");
  app.add_option("--marker", c.marker, "Word-boundary marker prefix");
  app.add_option("--corpus", c.corpus, "Corpus TSV (doc_id, word_index, word[, pos, tokens])");
  app.add_option("--output,-o", c.output, "Write the table here instead of stdout");
  app.add_option("--threads", c.threads, "Worker threads (0 = all cores)");
}

void add_sampling_options(CLI::App& app, RunConfig& c) {
  app.add_option("--samples", c.samples, "Words sampled per context");
  app.add_option("--alpha", c.alpha, "Renyi order");
  app.add_option("--max-word-tokens", c.max_word_tokens, "Token cap per sampled word");
  app.add_option("--seed", c.seed, "Seed for every random stream");
  app.add_option("--n-boot", c.n_boot, "Bootstrap resamples");
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.output, std::ios::binary);
  if (!file) fail(ErrorKind::Io, "cannot write '" + config.output + "'");
  file << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Word-level contextual entropy estimation over subword language models",
               "wordent"};
  app.set_config("--config", "", "Read options from an INI/TOML file");
  app.require_subcommand(1);

  auto* estimate = app.add_subcommand("estimate", "Per-word entropy table");
  add_model_options(*estimate, config);
  add_sampling_options(*estimate, config);

  auto* oracle = app.add_subcommand("oracle", "Exact enumeration versus estimates");
  add_model_options(*oracle, config);
  add_sampling_options(*oracle, config);
  oracle->add_option("--depth", config.depth, "Maximum word length in tokens");
  oracle->add_option("--residual-tol", config.residual_tol,
                     "Residual mass above which results are approximate");

  auto* variance = app.add_subcommand("variance", "Bootstrap CV by sample count");
  add_model_options(*variance, config);
  add_sampling_options(*variance, config);
  variance->add_option("--ks", config.ks, "Sample-count grid")->delimiter(',');

  auto* regress = app.add_subcommand("regress", "Delta log likelihood of entropy predictors");
  add_model_options(*regress, config);
  add_sampling_options(*regress, config);
  regress->add_option("--rt", config.rt, "Reading-time TSV");
  regress->add_option("--unigram", config.unigram, "Unigram counts TSV");
  regress->add_option("--response", config.response, "spr, fp or gp");
  regress->add_option("--variant", config.variants,
                      "ft-shannon, ft-renyi, mc-shannon or mc-renyi (once or twice)");
  regress->add_option("--heldout-frac", config.heldout_frac, "Held-out fraction of items");
  regress->add_option("--n-perm", config.n_perm, "Permutations for the paired test");
  regress->add_flag("--log-rt", config.log_rt, "Regress on log reading time");

  auto* aggregate = app.add_subcommand("aggregate", "Mean entropy per part-of-speech tag");
  add_model_options(*aggregate, config);
  add_sampling_options(*aggregate, config);
  aggregate->add_option("--variant", config.variants, "Entropy variant to aggregate");
  aggregate->add_option("--entropies", config.entropies,
                        "Use a precomputed estimate table instead of a model");
  aggregate->add_option("--top-k", config.top_k, "Most frequent tags to keep (0 = all)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "wordent: " << e.what() << '\n';
    return 2;
  }

  try {
    std::ostringstream table;
    if (*estimate) cmd_estimate(config, table, err);
    else if (*oracle) cmd_oracle(config, table, err);
    else if (*variance) cmd_variance(config, table, err);
    else if (*regress) cmd_regress(config, table, err);
    else if (*aggregate) cmd_aggregate(config, table, err);
    emit(config, table.str(), out);
  } catch (const Error& e) {
    err << "wordent: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "wordent: internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace wordent::cli
