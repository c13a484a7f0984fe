#include "concordia/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "concordia/agreement.hpp"
#include "concordia/annotation.hpp"
#include "concordia/case_study.hpp"
#include "concordia/error.hpp"
#include "concordia/io.hpp"
#include "concordia/power.hpp"
#include "concordia/report.hpp"
#include "concordia/significance.hpp"
#include "concordia/soft_metrics.hpp"

namespace concordia::cli {

namespace {

/// Invalid flag values or combinations discovered after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string format = "text";
  std::optional<std::uint64_t> seed;

  // Inputs
  std::string confusion, long_csv, wide_csv;
  std::string raters;
  std::string positive;

  // agree
  std::string level = "nominal";
  std::string order, values;

  // test
  bool no_continuity = false;
  std::string truth = "a";
  std::string metric = "accuracy";
  std::size_t replicates = 2000;
  double conf_level = 0.95;

  // soft
  std::string p, q;
  std::string base = "2";
  double epsilon = 0.0;
  bool raw = false;
  std::string human, model;

  // power
  std::optional<double> p1, p2, d;
  double alpha = 0.05, power = 0.8;
  int tails = 2;
  std::string scores, scale, sizes = "100,300,600";
  std::size_t reps = 20;
  std::optional<double> bandwidth;
  std::size_t grid = 512;
  std::string density_out;

  // report
  std::string fixture;
};

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return in;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  while (!s.empty()) {
    auto comma = s.find(',');
    auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(s)) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw UsageError("--sizes: '" + item + "' is not a count");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--sizes: no sizes given");
  return out;
}

LogBase parse_base(const std::string& s) {
  if (s == "2") return LogBase::Two;
  if (s == "e") return LogBase::E;
  throw UsageError("--base must be 2 or e");
}

TruthAxis parse_truth(const std::string& s) {
  if (s == "a" || s == "A") return TruthAxis::RaterA;
  if (s == "b" || s == "B") return TruthAxis::RaterB;
  throw UsageError("--truth must be a or b");
}

AnnotationTable load_table(const Options& o) {
  if (!o.long_csv.empty()) {
    auto in = open(o.long_csv);
    return read_long_csv(in);
  }
  if (!o.wide_csv.empty()) {
    auto in = open(o.wide_csv);
    return read_wide_csv(in);
  }
  throw UsageError("an annotation table is required (--long or --wide)");
}

bool has_table(const Options& o) { return !o.long_csv.empty() || !o.wide_csv.empty(); }

PairedLabels load_paired(const Options& o) {
  auto table = load_table(o);
  std::size_t a = 0, b = 1;
  if (!o.raters.empty()) {
    auto names = split_list(o.raters);
    if (names.size() != 2) throw UsageError("--raters needs exactly two rater ids");
    auto ia = table.rater_index(names[0]), ib = table.rater_index(names[1]);
    if (!ia || !ib) throw UsageError("--raters: unknown rater id");
    a = *ia;
    b = *ib;
  } else if (table.rater_count() != 2) {
    throw UsageError("table has " + std::to_string(table.rater_count()) +
                     " raters; choose two with --raters");
  }
  return paired_from_table(table, a, b);
}

ConfusionTable2x2 load_confusion(const Options& o) {
  if (!o.confusion.empty()) {
    auto in = open(o.confusion);
    return read_confusion_json(in);
  }
  if (!has_table(o)) throw UsageError("an input is required (--confusion, --long or --wide)");
  if (o.positive.empty()) throw UsageError("--positive is required with annotation tables");
  return to_confusion(load_paired(o), Label(o.positive));
}

LabelDistribution parse_distribution(const std::string& spec, const char* flag) {
  if (spec.empty()) throw UsageError(std::string(flag) + " is required");
  auto scale = parse_scale(spec);
  return LabelDistribution(std::move(scale), 1);
}

MeasurementLevel measurement_level(const Options& o) {
  switch (parse_level(o.level)) {
    case Level::Nominal:
      return MeasurementLevel::nominal();
    case Level::Ordinal: {
      if (o.order.empty()) throw UsageError("--order is required for ordinal data");
      std::vector<Label> order;
      for (const auto& s : split_list(o.order)) order.emplace_back(s);
      return MeasurementLevel::ordinal(std::move(order));
    }
    case Level::Interval:
      if (o.values.empty()) throw UsageError("--values is required for interval data");
      return MeasurementLevel::interval(parse_scale(o.values));
    case Level::Ratio:
      if (o.values.empty()) throw UsageError("--values is required for ratio data");
      return MeasurementLevel::ratio(parse_scale(o.values));
  }
  throw UsageError("unknown --level");
}

EntropyVector load_entropy(const std::string& path, const Options& o) {
  std::ifstream in = open(path);
  std::string first;
  std::getline(in, first);
  in.seekg(0);
  if (trim(first).starts_with("unit_id,entropy")) return read_entropy_csv(in);
  AnnotationTable table = trim(first) == "unit_id,rater_id,label" ? read_long_csv(in) : read_wide_csv(in);
  return entropy_vector(table, parse_base(o.base), !o.raw);
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("CONCORDIA_SEED"); env && *env) {
    std::string_view s(env);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw UsageError("CONCORDIA_SEED is not an unsigned integer: '" + std::string(s) + "'");
    return v;
  }
  return kDefaultSeed;
}

void add_table_inputs(CLI::App* cmd, Options& o, bool with_confusion) {
  auto* lng = cmd->add_option("--long", o.long_csv, "Long-format CSV (unit_id,rater_id,label)")
                  ->check(CLI::ExistingFile);
  auto* wide = cmd->add_option("--wide", o.wide_csv, "Wide-format CSV (unit_id,<raters...>)")
                   ->check(CLI::ExistingFile);
  lng->excludes(wide);
  if (with_confusion) {
    auto* conf = cmd->add_option("--confusion", o.confusion, "Confusion JSON {tt,tf,ft,ff}")
                     ->check(CLI::ExistingFile);
    conf->excludes(lng)->excludes(wide);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Agreement, significance and disagreement-aware evaluation statistics", "concordia"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--seed", o.seed, "Random seed (default: $CONCORDIA_SEED, else built in)");

  // agree -------------------------------------------------------------------
  auto* agree = app.add_subcommand("agree", "Inter-rater reliability coefficients");
  agree->require_subcommand(1);
  add_table_inputs(agree, o, true);
  agree->add_option("--raters", o.raters, "Two rater ids to compare (Cohen on tables)");
  agree->add_option("--level", o.level, "Measurement level for Krippendorff's alpha")
      ->check(CLI::IsMember({"nominal", "ordinal", "interval", "ratio"}));
  agree->add_option("--order", o.order, "Ordinal label order, e.g. Yes,Maybe,No");
  agree->add_option("--values", o.values, "Numeric label values, e.g. Yes=1,Maybe=2,No=3");
  auto* a_cohen = agree->add_subcommand("cohen", "Cohen's kappa (two raters)");
  auto* a_fleiss = agree->add_subcommand("fleiss", "Fleiss' kappa (complete designs)");
  auto* a_kripp = agree->add_subcommand("kripp", "Krippendorff's alpha (missing ratings allowed)");
  auto* a_percent = agree->add_subcommand("percent", "Raw percent agreement (two raters)");

  // test --------------------------------------------------------------------
  auto* test = app.add_subcommand("test", "Significance tests and hard-metric uncertainty");
  test->require_subcommand(1);
  add_table_inputs(test, o, true);
  test->add_option("--raters", o.raters, "Two rater ids to pair");
  test->add_option("--positive", o.positive, "Positive label when reading annotation tables");
  auto* t_mcnemar = test->add_subcommand("mcnemar", "McNemar's test on paired binary labels");
  t_mcnemar->add_flag("--no-continuity", o.no_continuity, "Disable the continuity correction");
  auto* t_metrics = test->add_subcommand("metrics", "Accuracy, precision, recall and F1");
  auto* t_boot = test->add_subcommand("bootstrap", "Percentile bootstrap CI for a hard metric");
  for (auto* cmd : {t_metrics, t_boot}) {
    cmd->add_option("--truth", o.truth, "Rater holding the reference labels (a or b)")
        ->check(CLI::IsMember({"a", "b", "A", "B"}));
  }
  t_boot->add_option("--metric", o.metric, "accuracy, precision, recall or f1")
      ->check(CLI::IsMember({"accuracy", "precision", "recall", "f1"}));
  t_boot->add_option("--replicates", o.replicates, "Bootstrap replicates")->check(CLI::PositiveNumber);
  t_boot->add_option("--level", o.conf_level, "Confidence level in (0, 1)");

  // soft --------------------------------------------------------------------
  auto* soft = app.add_subcommand("soft", "Soft (distributional) metrics");
  soft->require_subcommand(1);
  soft->add_option("--base", o.base, "Logarithm base (2 or e)")->check(CLI::IsMember({"2", "e"}));
  auto* s_jsd = soft->add_subcommand("jsd", "Jensen-Shannon divergence of two distributions");
  auto* s_xent = soft->add_subcommand("xent", "Cross-entropy H(p, q)");
  for (auto* cmd : {s_jsd, s_xent}) {
    cmd->add_option("--p", o.p, "Distribution p, e.g. Yes=0.5,No=0.5");
    cmd->add_option("--q", o.q, "Distribution q over the same labels");
  }
  s_xent->add_option("--epsilon", o.epsilon, "Additive smoothing of q")->check(CLI::NonNegativeNumber);
  auto* s_entropy = soft->add_subcommand("entropy", "Per-item entropy vector of a table");
  add_table_inputs(s_entropy, o, false);
  auto* s_esim = soft->add_subcommand("esim", "Cosine similarity of entropy vectors");
  auto* s_ecorr = soft->add_subcommand("ecorr", "Pearson correlation of entropy vectors");
  for (auto* cmd : {s_esim, s_ecorr}) {
    cmd->add_option("--human", o.human, "Human table or unit_id,entropy CSV")->check(CLI::ExistingFile);
    cmd->add_option("--model", o.model, "Model table or unit_id,entropy CSV")->check(CLI::ExistingFile);
  }
  for (auto* cmd : {s_entropy, s_esim, s_ecorr}) {
    cmd->add_flag("--raw", o.raw, "Do not normalize entropies by log(k)");
  }

  // power -------------------------------------------------------------------
  auto* power = app.add_subcommand("power", "Sample size and subsample convergence");
  power->require_subcommand(1);
  auto* p_size = power->add_subcommand("size", "Required sample size per group");
  auto* opt_p1 = p_size->add_option("--p1", o.p1, "Proportion in group 1");
  auto* opt_p2 = p_size->add_option("--p2", o.p2, "Proportion in group 2");
  auto* opt_d = p_size->add_option("--d", o.d, "Standardized mean difference");
  opt_d->excludes(opt_p1)->excludes(opt_p2);
  p_size->add_option("--alpha", o.alpha, "Significance level");
  p_size->add_option("--power", o.power, "Target power");
  p_size->add_option("--tails", o.tails, "1 or 2")->check(CLI::IsMember({1, 2}));
  auto* p_conv = power->add_subcommand("converge", "Mean JSD of subsample densities to the full sample");
  auto* p_scores = power->add_subcommand("scores", "Mean scale score per unit");
  for (auto* cmd : {p_conv, p_scores}) {
    add_table_inputs(cmd, o, false);
    cmd->add_option("--scale", o.scale, "Label values, e.g. Yes=1,Maybe=2,No=3");
  }
  p_conv->add_option("--scores", o.scores, "CSV with a `score` column")->check(CLI::ExistingFile);
  p_conv->add_option("--sizes", o.sizes, "Comma-separated subsample sizes");
  p_conv->add_option("--reps", o.reps, "Subsamples per size")->check(CLI::PositiveNumber);
  p_conv->add_option("--bandwidth", o.bandwidth, "Fixed kernel bandwidth (default: Silverman)")
      ->check(CLI::PositiveNumber);
  p_conv->add_option("--grid", o.grid, "Density grid points")->check(CLI::Range(2, 1 << 20));
  p_conv->add_option("--density-out", o.density_out, "Write the full-sample density as x,density CSV");

  // report ------------------------------------------------------------------
  auto* report = app.add_subcommand("report", "Reports");
  report->require_subcommand(1);
  auto* r_case = report->add_subcommand("casestudy", "Check the published case-study numbers");
  r_case->add_option("--fixture", o.fixture, "Confusion JSON fixture (default: bundled)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::ostringstream buf;
  try {
    const Format fmt = parse_format(o.format);

    if (agree->parsed()) {
      if (a_cohen->parsed()) {
        auto result = o.confusion.empty() ? cohen_kappa(load_paired(o)) : cohen_kappa(load_confusion(o));
        buf << render(result, fmt);
      } else if (a_percent->parsed()) {
        double v = o.confusion.empty() ? percent_agreement(load_paired(o))
                                       : percent_agreement(load_confusion(o));
        buf << render(ScalarResult{"percent_agreement", v}, fmt);
      } else {
        if (!o.confusion.empty()) throw UsageError("--confusion only applies to cohen and percent");
        auto table = load_table(o);
        if (a_fleiss->parsed()) buf << render(fleiss_kappa(table), fmt);
        if (a_kripp->parsed()) buf << render(krippendorff_alpha(table, measurement_level(o)), fmt);
      }
    } else if (test->parsed()) {
      auto confusion = load_confusion(o);
      if (t_mcnemar->parsed()) {
        buf << render(mcnemar(confusion, !o.no_continuity), fmt);
      } else if (t_metrics->parsed()) {
        buf << render(classification_metrics(confusion, parse_truth(o.truth)), fmt);
      } else if (t_boot->parsed()) {
        BootstrapOptions opt;
        opt.replicates = o.replicates;
        opt.level = o.conf_level;
        opt.seed = resolve_seed(o);
        buf << render(bootstrap_ci(parse_metric(o.metric), confusion, parse_truth(o.truth), opt), fmt);
      }
    } else if (soft->parsed()) {
      const LogBase base = parse_base(o.base);
      if (s_jsd->parsed()) {
        auto p = parse_distribution(o.p, "--p"), q = parse_distribution(o.q, "--q");
        buf << render(ScalarResult{"js_divergence", js_divergence(p, q, base)}, fmt);
      } else if (s_xent->parsed()) {
        auto p = parse_distribution(o.p, "--p"), q = parse_distribution(o.q, "--q");
        buf << render(ScalarResult{"cross_entropy", cross_entropy(p, q, base, o.epsilon)}, fmt);
      } else if (s_entropy->parsed()) {
        buf << render(entropy_vector(load_table(o), base, !o.raw), fmt);
      } else {
        if (o.human.empty() || o.model.empty()) throw UsageError("--human and --model are required");
        auto human = load_entropy(o.human, o), model = load_entropy(o.model, o);
        if (s_esim->parsed())
          buf << render(ScalarResult{"entropy_similarity", entropy_similarity(human, model)}, fmt);
        else
          buf << render(ScalarResult{"entropy_correlation", entropy_correlation(human, model)}, fmt);
      }
    } else if (power->parsed()) {
      if (p_size->parsed()) {
        PowerSpec spec;
        spec.alpha = o.alpha;
        spec.power = o.power;
        spec.tails = o.tails;
        if (o.d) {
          spec.effect = StandardizedEffect{*o.d};
        } else if (o.p1 && o.p2) {
          spec.effect = ProportionEffect{*o.p1, *o.p2};
        } else {
          throw UsageError("give --p1 and --p2, or --d");
        }
        buf << render(SampleSizeResult{spec, required_sample_size_exact(spec), required_sample_size(spec)},
                      fmt);
      } else if (p_scores->parsed()) {
        if (o.scale.empty()) throw UsageError("--scale is required");
        buf << render(mean_item_scores(load_table(o), parse_scale(o.scale)), fmt);
      } else {
        std::vector<double> data;
        if (!o.scores.empty()) {
          if (has_table(o)) throw UsageError("--scores cannot be combined with --long/--wide");
          auto in = open(o.scores);
          data = read_scores_csv(in);
        } else {
          if (o.scale.empty()) throw UsageError("--scale is required with annotation tables");
          data = observation_scores(load_table(o), parse_scale(o.scale));
        }
        ConvergenceOptions opt;
        opt.sizes = parse_sizes(o.sizes);
        opt.reps = o.reps;
        opt.seed = resolve_seed(o);
        opt.bandwidth = o.bandwidth;
        opt.grid_points = o.grid;
        auto points = subsample_convergence(data, opt);
        if (!o.density_out.empty()) {
          std::ofstream dens(o.density_out);
          if (!dens) throw Error(ErrorCode::IoError, "cannot write '" + o.density_out + "'");
          write_density_csv(dens, density_estimate(data, o.bandwidth, o.grid));
        }
        buf << render(points, fmt);
      }
    } else if (report->parsed() && r_case->parsed()) {
      auto result = o.fixture.empty() ? reproduce_case_study() : reproduce_case_study(o.fixture);
      buf << render(result, fmt);
      if (!result.overall) {
        out << buf.str();
        return kExitComputation;
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnsupportedFormat) {
      err << "usage error: " << e.what() << "\n";
      return kExitUsage;
    }
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  out << buf.str();
  return kExitOk;
}

}  // namespace concordia::cli
