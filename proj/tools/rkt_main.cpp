// rkt: random-kernel time-series features, classification, and analysis audits.

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "rkt/report_json.hpp"
#include "rkt/rkt.hpp"

namespace {

struct transform_flags {
  rkt::transform_config cfg;
  std::string dilation = "exponential";
  std::string padding = "circular";
  std::string weight_law = "variance-scaled";
  bool no_standardize = false;

  void add_to(CLI::App* app, bool with_kernel_count = true) {
    if (with_kernel_count)
      app->add_option("--kernels", cfg.num_kernels, "number of random kernels")
          ->check(CLI::PositiveNumber)
          ->capture_default_str();
    app->add_option("--kernel-lengths", cfg.kernel_lengths,
                    "candidate kernel lengths")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    app->add_option("--dilation", dilation, "'exponential' or 'fixed:<d>'")
        ->capture_default_str();
    app->add_option("--padding", padding,
                    "circular | always-zero | random-zero-or-none")
        ->check(CLI::IsMember({"circular", "always-zero", "random-zero-or-none"}))
        ->capture_default_str();
    app->add_option("--weight-law", weight_law,
                    "variance-scaled | centered-unit")
        ->check(CLI::IsMember({"variance-scaled", "centered-unit"}))
        ->capture_default_str();
    app->add_flag("--no-standardize", no_standardize,
                  "feed raw series to the kernels");
  }

  rkt::transform_config finalize() {
    if (dilation == "exponential") {
      cfg.dilation = rkt::dilation_policy::exponential_random();
    } else {
      std::string spec = dilation;
      if (spec.rfind("fixed:", 0) == 0) spec = spec.substr(6);
      char* end = nullptr;
      const unsigned long d = std::strtoul(spec.c_str(), &end, 10);
      if (end == spec.c_str() || *end != '\0' || d < 1)
        throw rkt::config_error("bad --dilation value '" + dilation +
                                "'; expected 'exponential' or 'fixed:<d>'");
      cfg.dilation = rkt::dilation_policy::fixed(static_cast<std::uint32_t>(d));
    }
    if (padding == "circular")
      cfg.padding = rkt::padding_policy::circular;
    else if (padding == "always-zero")
      cfg.padding = rkt::padding_policy::always_zero;
    else
      cfg.padding = rkt::padding_policy::random_zero_or_none;
    cfg.law = weight_law == "centered-unit" ? rkt::weight_law::centered_unit
                                            : rkt::weight_law::variance_scaled;
    cfg.standardize_inputs = !no_standardize;
    return cfg;
  }
};

rkt::table_format parse_data_format(const std::string& s) {
  if (s == "csv") return rkt::table_format::csv;
  if (s == "tsv") return rkt::table_format::tsv;
  return rkt::table_format::autodetect;
}

rkt::noise_law parse_noise_law(const std::string& s) {
  if (s == "gaussian") return rkt::noise_law::gaussian;
  if (s == "uniform") return rkt::noise_law::uniform;
  return rkt::noise_law::laplace;
}

void emit_manifest(const std::string& subcommand, const rkt::njson& config,
                   std::uint64_t seed, const std::vector<std::string>& inputs,
                   const std::string& explicit_path,
                   const std::string& default_path) {
  rkt::run_manifest m;
  m.subcommand = subcommand;
  m.config = config;
  m.seed = seed;
  m.timestamp_utc = rkt::utc_timestamp();
  for (const auto& p : inputs) m.input_digests.emplace_back(p, rkt::file_digest(p));
  const std::string path = explicit_path.empty() ? default_path : explicit_path;
  rkt::write_json_file(rkt::manifest_json(m), path);
}

void print_report(const rkt::njson& j, const std::string& format,
                  const std::function<void()>& text_printer) {
  if (format == "json")
    std::printf("%s\n", j.dump(2).c_str());
  else
    text_printer();
}

double accuracy_of(const std::vector<std::string>& predicted,
                   const std::vector<std::string>& actual) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == actual[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

rkt::time_series pick_instance(const std::string& data_path,
                               const std::string& data_format,
                               std::size_t instance) {
  const rkt::dataset ds = rkt::load_dataset(data_path, parse_data_format(data_format));
  if (instance >= ds.instances.size())
    throw rkt::config_error("--instance " + std::to_string(instance) +
                            " out of range; dataset has " +
                            std::to_string(ds.instances.size()) + " rows");
  return ds.instances[instance].series;
}

rkt::time_series synthetic_series(std::size_t n, std::uint64_t seed) {
  rkt::rng_stream rng(seed, 0xa5a5a5a5ull);
  rkt::time_series x;
  x.values.resize(n);
  for (auto& v : x.values) v = rng.gaussian();
  return x;
}

int run_transform(const std::string& data_path, const std::string& data_format,
                  const std::string& out_path, const std::string& out_format,
                  transform_flags& tf, unsigned threads,
                  const std::string& format, const std::string& manifest_path) {
  const rkt::transform_config cfg = tf.finalize();
  const rkt::dataset ds = rkt::load_dataset(data_path, parse_data_format(data_format));
  const rkt::feature_matrix fm = rkt::transform(ds, cfg, threads);
  std::vector<std::string> labels;
  labels.reserve(ds.instances.size());
  for (const auto& inst : ds.instances) labels.push_back(inst.label);

  if (out_format == "json")
    rkt::write_json_file(rkt::features_json(fm, labels, cfg), out_path);
  else
    rkt::save_features_csv(fm, labels, out_path);

  rkt::njson config = rkt::config_json(cfg);
  config["out"] = out_path;
  config["out_format"] = out_format;
  config["threads"] = threads;
  emit_manifest("transform", config, cfg.seed, {data_path}, manifest_path,
                out_path + ".manifest.json");

  rkt::njson summary{{"rows", fm.rows},
                     {"cols", fm.cols},
                     {"kernel_set_id", fm.kernel_set_id},
                     {"out", out_path}};
  print_report(summary, format, [&] {
    std::printf("wrote %zu x %zu feature matrix to %s (kernel set %s)\n", fm.rows,
                fm.cols, out_path.c_str(), fm.kernel_set_id.c_str());
  });
  return 0;
}

int run_classify(const std::string& train_path, const std::string& test_path,
                 const std::string& train_features_path,
                 const std::string& test_features_path,
                 const std::string& data_format, transform_flags& tf,
                 std::vector<double> lambda_grid, unsigned folds,
                 const std::string& model_out, unsigned threads,
                 const std::string& format, const std::string& manifest_path) {
  rkt::labeled_features train, test;
  std::vector<std::string> inputs;
  rkt::njson config;
  std::uint64_t seed = 0;

  if (!train_features_path.empty()) {
    train = rkt::load_features_csv(train_features_path);
    test = rkt::load_features_csv(test_features_path);
    if (train.features.cols != test.features.cols)
      throw rkt::dimension_error(
          "test feature count " + std::to_string(test.features.cols) +
          " does not match train feature count " +
          std::to_string(train.features.cols));
    inputs = {train_features_path, test_features_path};
    config["train_features"] = train_features_path;
    config["test_features"] = test_features_path;
  } else {
    const rkt::transform_config cfg = tf.finalize();
    seed = cfg.seed;
    const auto fmt = parse_data_format(data_format);
    const rkt::dataset train_ds = rkt::load_dataset(train_path, fmt);
    const rkt::dataset test_ds = rkt::load_dataset(test_path, fmt);
    std::size_t min_n = train_ds.instances.front().series.size();
    for (const auto& inst : train_ds.instances)
      min_n = std::min(min_n, inst.series.size());
    for (const auto& inst : test_ds.instances)
      min_n = std::min(min_n, inst.series.size());
    const auto kernels = rkt::generate_kernels(cfg, min_n);
    train.features = rkt::apply_kernels(train_ds, kernels, cfg, threads);
    test.features = rkt::apply_kernels(test_ds, kernels, cfg, threads);
    for (const auto& inst : train_ds.instances) train.labels.push_back(inst.label);
    for (const auto& inst : test_ds.instances) test.labels.push_back(inst.label);
    inputs = {train_path, test_path};
    config = rkt::config_json(cfg);
    config["train"] = train_path;
    config["test"] = test_path;
  }

  const rkt::ridge_model model =
      rkt::fit_ridge(train.features, train.labels, lambda_grid, folds);
  const std::vector<std::string> predicted = rkt::predict(model, test.features);
  const double acc = accuracy_of(predicted, test.labels);

  // Confusion counts over the union of observed labels, model order first.
  std::vector<std::string> all_labels = model.class_labels;
  for (const auto& l : test.labels)
    if (std::find(all_labels.begin(), all_labels.end(), l) == all_labels.end())
      all_labels.push_back(l);
  std::map<std::pair<std::string, std::string>, std::size_t> confusion;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    ++confusion[{test.labels[i], predicted[i]}];

  if (!model_out.empty()) rkt::write_json_file(rkt::model_json(model), model_out);

  config["lambda_grid"] = lambda_grid;
  config["folds"] = folds;
  config["threads"] = threads;
  if (!model_out.empty()) config["model_out"] = model_out;
  emit_manifest("classify", config, seed, inputs, manifest_path,
                model_out.empty() ? "rkt-manifest.json"
                                  : model_out + ".manifest.json");

  rkt::njson jconf = rkt::njson::array();
  for (const auto& actual : all_labels) {
    rkt::njson row = rkt::njson::array();
    for (const auto& pred : all_labels) {
      const auto it = confusion.find({actual, pred});
      row.push_back(it == confusion.end() ? 0 : it->second);
    }
    jconf.push_back(row);
  }
  rkt::njson summary{{"accuracy", rkt::json_number(acc)},
                     {"lambda", rkt::json_number(model.lambda)},
                     {"labels", all_labels},
                     {"confusion", jconf}};
  print_report(summary, format, [&] {
    std::printf("accuracy %.4f (lambda %g)\n", acc, model.lambda);
    std::printf("%-12s", "actual\\pred");
    for (const auto& l : all_labels) std::printf(" %10s", l.c_str());
    std::printf("\n");
    for (const auto& actual : all_labels) {
      std::printf("%-12s", actual.c_str());
      for (const auto& pred : all_labels) {
        const auto it = confusion.find({actual, pred});
        std::printf(" %10zu", it == confusion.end() ? std::size_t{0} : it->second);
      }
      std::printf("\n");
    }
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-kernel time-series features, classification, and audits"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI/TOML file");
  app.failure_message(CLI::FailureMessage::help);

  std::string format = "text";
  std::string manifest_path;
  unsigned threads = rkt::default_threads();
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--manifest", manifest_path,
                 "where to write the run manifest");
  app.add_option("--threads", threads, "worker thread count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // ---- transform ----
  auto* t = app.add_subcommand("transform",
                               "turn labeled series into kernel features");
  std::string t_data, t_out, t_data_format = "auto", t_out_format = "csv";
  transform_flags t_flags;
  t->add_option("--data", t_data, "labeled series table")->required();
  t->add_option("--out", t_out, "feature matrix destination")->required();
  t->add_option("--data-format", t_data_format, "auto | csv | tsv")
      ->check(CLI::IsMember({"auto", "csv", "tsv"}))
      ->capture_default_str();
  t->add_option("--out-format", t_out_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  t_flags.add_to(t);

  // ---- classify ----
  auto* c = app.add_subcommand("classify",
                               "fit ridge one-vs-rest and score a test set");
  std::string c_train, c_test, c_train_feats, c_test_feats;
  std::string c_data_format = "auto", c_model_out;
  std::vector<double> c_lambda_grid = rkt::default_lambda_grid();
  unsigned c_folds = 5;
  transform_flags c_flags;
  auto* c_train_opt = c->add_option("--train", c_train, "labeled training series");
  auto* c_test_opt = c->add_option("--test", c_test, "labeled test series");
  auto* c_trainf_opt = c->add_option("--train-features", c_train_feats,
                                     "precomputed training features");
  auto* c_testf_opt = c->add_option("--test-features", c_test_feats,
                                    "precomputed test features");
  c_train_opt->needs(c_test_opt)->excludes(c_trainf_opt)->excludes(c_testf_opt);
  c_test_opt->needs(c_train_opt);
  c_trainf_opt->needs(c_testf_opt);
  c_testf_opt->needs(c_trainf_opt);
  c->add_option("--data-format", c_data_format, "auto | csv | tsv")
      ->check(CLI::IsMember({"auto", "csv", "tsv"}))
      ->capture_default_str();
  c->add_option("--lambda-grid", c_lambda_grid, "ridge penalties to try")
      ->delimiter(',');
  c->add_option("--folds", c_folds, "cross-validation folds")
      ->check(CLI::Range(2u, 1000u))
      ->capture_default_str();
  c->add_option("--model-out", c_model_out, "write the fitted model here");
  c_flags.add_to(c);

  // ---- audit ----
  auto* a = app.add_subcommand("audit", "numerical checks and reports");
  a->require_subcommand(1);

  auto* ab = a->add_subcommand("coherence-bound",
                               "tail bound vs measured kernel overlaps");
  std::size_t ab_n = 80, ab_k = 9, ab_trials = 2000;
  double ab_alpha = 2.0;
  std::uint64_t ab_seed = 0;
  ab->add_option("--n", ab_n, "series length")->capture_default_str();
  ab->add_option("--k", ab_k, "kernel length")->capture_default_str();
  ab->add_option("--alpha", ab_alpha, "overlap threshold")->capture_default_str();
  ab->add_option("--trials", ab_trials, "Monte Carlo trials")->capture_default_str();
  ab->add_option("--seed", ab_seed, "RNG seed")->capture_default_str();

  auto* ar = a->add_subcommand("recoverability",
                               "sparse-recovery sufficient conditions");
  std::size_t ar_n = 80, ar_k = 9, ar_s = 2, ar_trials = 200;
  double ar_cs = 0.1, ar_mu = -1.0;
  std::uint64_t ar_seed = 0;
  ar->add_option("--n", ar_n, "series length")->capture_default_str();
  ar->add_option("--k", ar_k, "kernel length")->capture_default_str();
  ar->add_option("--s", ar_s, "sparsity level")->capture_default_str();
  ar->add_option("--c-s", ar_cs, "restricted-isometry constant factor")
      ->capture_default_str();
  ar->add_option("--mu", ar_mu,
                 "coherence to use; measured from random kernels if omitted");
  ar->add_option("--trials", ar_trials, "trials for measured coherence")
      ->capture_default_str();
  ar->add_option("--seed", ar_seed, "RNG seed")->capture_default_str();

  auto* ax = a->add_subcommand("axioms", "sparsity-measure axiom battery");
  std::size_t ax_trials = 200;
  std::uint64_t ax_seed = 0;
  ax->add_option("--trials", ax_trials, "random probes per axiom")
      ->capture_default_str();
  ax->add_option("--seed", ax_seed, "RNG seed")->capture_default_str();

  auto* as = a->add_subcommand("sparsity", "feature sparsity of one instance");
  std::string as_data, as_data_format = "auto";
  std::size_t as_instance = 0;
  double as_threshold = 0.0;
  transform_flags as_flags;
  as->add_option("--data", as_data, "labeled series table")->required();
  as->add_option("--data-format", as_data_format, "auto | csv | tsv")
      ->check(CLI::IsMember({"auto", "csv", "tsv"}))
      ->capture_default_str();
  as->add_option("--instance", as_instance, "row to analyze")
      ->capture_default_str();
  as->add_option("--threshold", as_threshold, "positivity threshold")
      ->capture_default_str();
  as_flags.add_to(as);

  auto* al = a->add_subcommand("lipschitz",
                               "noise-robustness ratio certificate");
  double al_l = 10000, al_alpha = 0.005;
  std::size_t al_n = 80;
  al->add_option("--l", al_l, "Lipschitz budget (kernel count)")
      ->capture_default_str();
  al->add_option("--n", al_n, "series length / degrees of freedom")
      ->capture_default_str();
  al->add_option("--alpha", al_alpha, "tail probability")->capture_default_str();

  auto* an = a->add_subcommand("noise",
                               "Monte Carlo check of the robustness certificate");
  std::string an_data, an_data_format = "auto", an_law = "gaussian";
  std::size_t an_instance = 0, an_n = 80, an_trials = 200;
  double an_alpha = 0.05, an_sigma = 1.0;
  transform_flags an_flags;
  an->add_option("--data", an_data, "labeled series table (else synthetic)");
  an->add_option("--data-format", an_data_format, "auto | csv | tsv")
      ->check(CLI::IsMember({"auto", "csv", "tsv"}))
      ->capture_default_str();
  an->add_option("--instance", an_instance, "row to analyze")
      ->capture_default_str();
  an->add_option("--n", an_n, "synthetic series length")->capture_default_str();
  an->add_option("--alpha", an_alpha, "tail probability")->capture_default_str();
  an->add_option("--sigma", an_sigma, "noise scale")->capture_default_str();
  an->add_option("--law", an_law, "gaussian | uniform | laplace")
      ->check(CLI::IsMember({"gaussian", "uniform", "laplace"}))
      ->capture_default_str();
  an->add_option("--trials", an_trials, "Monte Carlo trials")
      ->check(CLI::Range(100u, 1000000u))
      ->capture_default_str();
  an_flags.add_to(an);

  auto* ai = a->add_subcommand("shift-invariance",
                               "feature stability under circular shifts");
  std::string ai_data, ai_data_format = "auto";
  std::size_t ai_instance = 0;
  std::vector<long long> ai_shifts;
  transform_flags ai_flags;
  ai->add_option("--data", ai_data, "labeled series table")->required();
  ai->add_option("--data-format", ai_data_format, "auto | csv | tsv")
      ->check(CLI::IsMember({"auto", "csv", "tsv"}))
      ->capture_default_str();
  ai->add_option("--instance", ai_instance, "row to analyze")
      ->capture_default_str();
  ai->add_option("--shifts", ai_shifts, "circular shifts to test")
      ->delimiter(',');
  ai_flags.add_to(ai);

  auto* ap = a->add_subcommand("pca", "effective dimensionality of features");
  std::string ap_train_feats, ap_test_feats, ap_scope = "pooled";
  std::vector<double> ap_thresholds = {0.90, 0.95};
  ap->add_option("--train-features", ap_train_feats, "feature csv")->required();
  ap->add_option("--test-features", ap_test_feats, "feature csv (pooled scope)");
  ap->add_option("--pca-scope", ap_scope, "pooled | train")
      ->check(CLI::IsMember({"pooled", "train"}))
      ->capture_default_str();
  ap->add_option("--thresholds", ap_thresholds, "variance fractions")
      ->delimiter(',');

  auto* ac = a->add_subcommand("cross-basis",
                               "coherence between dilation families");
  std::size_t ac_n = 64, ac_k = 9, ac_pairs = 200;
  std::uint32_t ac_d1 = 1, ac_d2 = 4;
  std::uint64_t ac_seed = 0;
  ac->add_option("--n", ac_n, "series length")->capture_default_str();
  ac->add_option("--k", ac_k, "kernel length")->capture_default_str();
  ac->add_option("--d1", ac_d1, "first dilation")->capture_default_str();
  ac->add_option("--d2", ac_d2, "second dilation")->capture_default_str();
  ac->add_option("--pairs", ac_pairs, "kernel pairs to average")
      ->capture_default_str();
  ac->add_option("--seed", ac_seed, "RNG seed")->capture_default_str();

  // Let global options (--format, --manifest, ...) appear after a subcommand.
  const std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* node) {
    for (CLI::App* sub : node->get_subcommands(
             [](const CLI::App*) { return true; })) {
      sub->fallthrough();
      enable_fallthrough(sub);
    }
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*t)
      return run_transform(t_data, t_data_format, t_out, t_out_format, t_flags,
                           threads, format, manifest_path);
    if (*c)
      return run_classify(c_train, c_test, c_train_feats, c_test_feats,
                          c_data_format, c_flags, c_lambda_grid, c_folds,
                          c_model_out, threads, format, manifest_path);

    if (*ab) {
      const rkt::coherence_report rep =
          rkt::verify_bound_monte_carlo(ab_n, ab_k, ab_alpha, ab_trials, ab_seed);
      rkt::njson config{{"n", ab_n}, {"k", ab_k},
                        {"alpha", rkt::json_number(ab_alpha)},
                        {"trials", ab_trials}};
      emit_manifest("audit coherence-bound", config, ab_seed, {}, manifest_path,
                    "rkt-manifest.json");
      print_report(rkt::report_json(rep), format, [&] {
        std::printf("bound %.6f%s  empirical %.6f (+/- %.6f over %zu trials)  %s\n",
                    rep.bound_value, rep.vacuous ? " (vacuous)" : "",
                    rep.empirical_exceed_rate, rep.std_error, rep.trials,
                    rep.within_bound ? "within bound" : "EXCEEDS BOUND");
      });
      return rep.within_bound ? 0 : 1;
    }

    if (*ar) {
      double mu = ar_mu;
      if (mu < 0.0) mu = rkt::measured_max_coherence(ar_n, ar_k, ar_trials, ar_seed);
      const rkt::recoverability_verdict v =
          rkt::recoverability(ar_s, ar_n, ar_k, ar_cs, mu);
      rkt::njson config{{"n", ar_n}, {"k", ar_k}, {"s", ar_s},
                        {"c_s", rkt::json_number(ar_cs)},
                        {"mu", rkt::json_number(mu)},
                        {"trials", ar_trials}};
      emit_manifest("audit recoverability", config, ar_seed, {}, manifest_path,
                    "rkt-manifest.json");
      print_report(rkt::report_json(v), format, [&] {
        std::printf("restricted isometry: need k > %.4f, have %zu -> %s\n",
                    v.rip_threshold, v.k, v.rip_ok ? "ok" : "not satisfied");
        std::printf("coherence: need mu < %.6f, have %.6f -> %s\n",
                    v.coherence_threshold, v.mu_used,
                    v.coherence_ok ? "ok" : "not satisfied");
      });
      return 0;
    }

    if (*ax) {
      const std::vector<rkt::axiom_result> results =
          rkt::axiom_battery(ax_trials, ax_seed);
      rkt::njson config{{"trials", ax_trials}};
      emit_manifest("audit axioms", config, ax_seed, {}, manifest_path,
                    "rkt-manifest.json");
      bool as_expected = true;
      for (const auto& r : results)
        as_expected = as_expected && r.observed_satisfied == r.expected_satisfied;
      print_report(rkt::report_json(results), format, [&] {
        std::printf("%-4s %-14s %-9s %-9s\n", "code", "axiom", "expected",
                    "observed");
        for (const auto& r : results) {
          std::printf("%-4s %-14s %-9s %-9s", rkt::axiom_code(r.axiom),
                      rkt::axiom_name(r.axiom),
                      r.expected_satisfied ? "holds" : "fails",
                      r.observed_satisfied ? "holds" : "fails");
          if (!r.witness.empty() && !r.observed_satisfied)
            std::printf("  e.g. %s", r.witness.c_str());
          std::printf("\n");
        }
      });
      return as_expected ? 0 : 1;
    }

    if (*as) {
      const rkt::transform_config cfg = as_flags.finalize();
      const rkt::time_series x = pick_instance(as_data, as_data_format, as_instance);
      rkt::dataset one;
      one.instances.push_back({"_", x});
      const rkt::feature_matrix fm = rkt::transform(one, cfg, threads);
      rkt::time_series row;
      row.values.assign(fm.data.begin(), fm.data.begin() + fm.cols);
      const rkt::sparsity_report rep = rkt::estimate_sparsity(row, as_threshold);
      rkt::njson config = rkt::config_json(cfg);
      config["data"] = as_data;
      config["instance"] = as_instance;
      config["threshold"] = rkt::json_number(as_threshold);
      emit_manifest("audit sparsity", config, cfg.seed, {as_data}, manifest_path,
                    "rkt-manifest.json");
      print_report(rkt::report_json(rep), format, [&] {
        std::printf("ppv %.6f  positives %zu/%zu  estimated sparsity %.1f",
                    rep.ppv, rep.positive_count, rep.n, rep.estimated_s);
        if (std::isinf(rep.inv_ppv))
          std::printf("  (1/ppv infinite)\n");
        else
          std::printf("  1/ppv %.4f\n", rep.inv_ppv);
      });
      return 0;
    }

    if (*al) {
      const rkt::robustness_certificate cert =
          rkt::lipschitz_certificate(al_l, al_n, al_alpha);
      rkt::njson config{{"l", rkt::json_number(al_l)}, {"n", al_n},
                        {"alpha", rkt::json_number(al_alpha)}};
      emit_manifest("audit lipschitz", config, 0, {}, manifest_path,
                    "rkt-manifest.json");
      print_report(rkt::report_json(cert), format, [&] {
        std::printf("chi-square lower quantile (dof %zu, alpha %g): %.6f\n",
                    cert.n, cert.alpha, cert.chi2_quantile);
        std::printf("squared-distance ratio bound: %.6f\n", cert.ratio_bound);
        std::printf("norm ratio bound: %.6f (confidence %.4f)\n",
                    cert.norm_ratio_bound, cert.confidence);
      });
      return 0;
    }

    if (*an) {
      const rkt::transform_config cfg = an_flags.finalize();
      rkt::time_series x;
      std::vector<std::string> inputs;
      if (!an_data.empty()) {
        x = pick_instance(an_data, an_data_format, an_instance);
        inputs.push_back(an_data);
      } else {
        x = synthetic_series(an_n, cfg.seed);
      }
      const rkt::robustness_certificate cert = rkt::verify_noise_robustness(
          x, cfg, an_alpha, an_trials, cfg.seed, an_sigma, parse_noise_law(an_law));
      rkt::njson config = rkt::config_json(cfg);
      config["alpha"] = rkt::json_number(an_alpha);
      config["sigma"] = rkt::json_number(an_sigma);
      config["law"] = an_law;
      config["trials"] = an_trials;
      if (!an_data.empty()) {
        config["data"] = an_data;
        config["instance"] = an_instance;
      } else {
        config["n"] = an_n;
      }
      emit_manifest("audit noise", config, cfg.seed, inputs, manifest_path,
                    "rkt-manifest.json");
      print_report(rkt::report_json(cert), format, [&] {
        std::printf("ratio bound %.6f  max observed %.6f\n", cert.ratio_bound,
                    cert.max_observed_ratio);
        std::printf("violations %zu/%zu (rate %.6f, tolerance %g + 3 s.e.)  %s\n",
                    cert.violation_count, cert.trials, cert.violation_rate,
                    cert.alpha, cert.empirical_pass ? "pass" : "FAIL");
      });
      return cert.empirical_pass ? 0 : 1;
    }

    if (*ai) {
      const rkt::transform_config cfg = ai_flags.finalize();
      const rkt::time_series x = pick_instance(ai_data, ai_data_format, ai_instance);
      if (ai_shifts.empty())
        ai_shifts = {1, static_cast<long long>(x.size() / 2),
                     static_cast<long long>(x.size() - 1)};
      const rkt::shift_invariance_report rep =
          rkt::verify_shift_invariance(x, cfg, ai_shifts);
      rkt::njson config = rkt::config_json(cfg);
      config["data"] = ai_data;
      config["instance"] = ai_instance;
      config["shifts"] = ai_shifts;
      emit_manifest("audit shift-invariance", config, cfg.seed, {ai_data},
                    manifest_path, "rkt-manifest.json");
      print_report(rkt::report_json(rep), format, [&] {
        std::printf("padding %s, %zu shifts: %s (max feature discrepancy %g)\n",
                    rep.padding.c_str(), rep.shifts_tested.size(),
                    rep.exact ? "exact invariance" : "not invariant",
                    rep.max_feature_discrepancy);
      });
      return 0;
    }

    if (*ap) {
      const rkt::labeled_features train = rkt::load_features_csv(ap_train_feats);
      rkt::feature_matrix pooled = train.features;
      std::vector<std::string> inputs{ap_train_feats};
      if (ap_scope == "pooled" && !ap_test_feats.empty()) {
        const rkt::labeled_features test = rkt::load_features_csv(ap_test_feats);
        if (test.features.cols != pooled.cols)
          throw rkt::dimension_error("feature files disagree on column count");
        pooled.data.insert(pooled.data.end(), test.features.data.begin(),
                           test.features.data.end());
        pooled.rows += test.features.rows;
        inputs.push_back(ap_test_feats);
      }
      rkt::pca_report rep = rkt::pca_effective_dim(pooled, ap_thresholds);
      rep.scope = ap_scope;
      rkt::njson config{{"train_features", ap_train_feats},
                        {"scope", ap_scope},
                        {"thresholds", rkt::json_vector(ap_thresholds)}};
      if (!ap_test_feats.empty()) config["test_features"] = ap_test_feats;
      emit_manifest("audit pca", config, 0, inputs, manifest_path,
                    "rkt-manifest.json");
      print_report(rkt::report_json(rep), format, [&] {
        std::printf("%zu features, scope %s\n", rep.total_features,
                    rep.scope.c_str());
        for (std::size_t i = 0; i < rep.threshold_ks.size(); ++i)
          std::printf("components for %.0f%% variance: %zu\n",
                      100.0 * rep.threshold_ks[i].first,
                      rep.threshold_ks[i].second);
      });
      return 0;
    }

    if (*ac) {
      const double self1 =
          rkt::mean_cross_dilation_coherence(ac_n, ac_k, ac_d1, ac_d1, ac_pairs, ac_seed)
              .mean_coherence;
      const double cross =
          rkt::mean_cross_dilation_coherence(ac_n, ac_k, ac_d1, ac_d2, ac_pairs, ac_seed)
              .mean_coherence;
      const double self2 =
          rkt::mean_cross_dilation_coherence(ac_n, ac_k, ac_d2, ac_d2, ac_pairs, ac_seed)
              .mean_coherence;
      rkt::njson config{{"n", ac_n}, {"k", ac_k}, {"d1", ac_d1}, {"d2", ac_d2},
                        {"pairs", ac_pairs}};
      emit_manifest("audit cross-basis", config, ac_seed, {}, manifest_path,
                    "rkt-manifest.json");
      rkt::njson summary{{"schema_version", rkt::report_schema_version},
                         {"n", ac_n},
                         {"k", ac_k},
                         {"d1", ac_d1},
                         {"d2", ac_d2},
                         {"pairs", ac_pairs},
                         {"mean_coherence_d1_d1", rkt::json_number(self1)},
                         {"mean_coherence_d1_d2", rkt::json_number(cross)},
                         {"mean_coherence_d2_d2", rkt::json_number(self2)}};
      print_report(summary, format, [&] {
        std::printf("mean coherence  d%" PRIu32 " vs d%" PRIu32 ": %.6f\n", ac_d1,
                    ac_d1, self1);
        std::printf("mean coherence  d%" PRIu32 " vs d%" PRIu32 ": %.6f\n", ac_d1,
                    ac_d2, cross);
        std::printf("mean coherence  d%" PRIu32 " vs d%" PRIu32 ": %.6f\n", ac_d2,
                    ac_d2, self2);
      });
      return 0;
    }
  } catch (const rkt::config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const rkt::dimension_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
