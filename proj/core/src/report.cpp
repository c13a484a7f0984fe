#include "concordia/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "concordia/error.hpp"
#include "concordia/io.hpp"

namespace concordia {

using ojson = nlohmann::ordered_json;

namespace {

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

ojson ratio_json(const Ratio& r) { return r ? ojson(*r) : ojson(nullptr); }

std::string ratio_text(const Ratio& r, int decimals) {
  return r ? format_fixed(*r, decimals) : std::string("NotDefined");
}

std::string ratio_csv(const Ratio& r) { return r ? format_double(*r) : std::string("NA"); }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string_view column_title(Statistic s) {
  switch (s) {
    case Statistic::Percent: return "Agreement";
    case Statistic::CohenKappa:
    case Statistic::FleissKappa: return "Kappa";
    case Statistic::KrippendorffAlpha: return "alpha";
  }
  return "Value";
}

std::string_view display_name(Statistic s) {
  switch (s) {
    case Statistic::Percent: return "Percent Agreement";
    case Statistic::CohenKappa: return "Cohen's Kappa";
    case Statistic::FleissKappa: return "Fleiss' Kappa";
    case Statistic::KrippendorffAlpha: return "Krippendorff's Alpha";
  }
  return "";
}

Statistic parse_statistic(std::string_view name) {
  for (auto s : {Statistic::Percent, Statistic::CohenKappa, Statistic::FleissKappa,
                 Statistic::KrippendorffAlpha}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::ParseError, "unknown statistic '" + std::string(name) + "'");
}

template <typename F>
auto parse_json(std::string_view text, F&& build) {
  try {
    return build(ojson::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "text") return Format::Text;
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw Error(ErrorCode::UnsupportedFormat, "unsupported output format '" + std::string(name) + "'");
}

std::string_view to_string(Format f) noexcept {
  switch (f) {
    case Format::Text: return "text";
    case Format::Json: return "json";
    case Format::Csv: return "csv";
  }
  return "text";
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string s(buf);
  if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_p_value(double p) {
  if (p < 0.001) return "p < .001";
  auto s = format_fixed(p, 3);
  if (s.starts_with("0.")) s.erase(0, 1);
  return "p = " + s;
}

// ---------------------------------------------------------------------------

std::string render(const ReliabilityResult& r, Format f) {
  switch (f) {
    case Format::Json: {
      ojson j;
      j["statistic"] = to_string(r.statistic);
      j["value"] = r.value;
      j["n_subjects"] = r.n_subjects;
      j["n_raters"] = r.n_raters;
      j["level"] = to_string(r.level);
      j["band"] = r.band;
      j["excluded_units"] = r.excluded_units;
      return dump(j);
    }
    case Format::Csv: {
      std::ostringstream out;
      out << "statistic,value,n_subjects,n_raters,level,band,excluded_units\n"
          << to_string(r.statistic) << ',' << format_double(r.value) << ',' << r.n_subjects << ','
          << r.n_raters << ',' << to_string(r.level) << ',' << r.band << ',' << r.excluded_units
          << '\n';
      return out.str();
    }
    case Format::Text: {
      std::ostringstream out;
      out << display_name(r.statistic);
      if (r.statistic == Statistic::KrippendorffAlpha) out << " (" << to_string(r.level) << ")";
      out << '\n'
          << "Subjects  Raters  " << column_title(r.statistic) << '\n'
          << pad(std::to_string(r.n_subjects), 8) << "  " << pad(std::to_string(r.n_raters), 6)
          << "  " << format_fixed(r.value, 4) << '\n';
      if (!r.band.empty()) out << "Agreement: " << r.band << '\n';
      if (r.excluded_units > 0)
        out << "Units with fewer than 2 ratings excluded: " << r.excluded_units << '\n';
      return out.str();
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

std::string render(const McNemarResult& r, Format f) {
  switch (f) {
    case Format::Json: {
      ojson j;
      j["test"] = "mcnemar";
      j["chi_square"] = r.chi_square;
      j["df"] = r.df;
      j["p_value"] = r.p_value;
      j["n"] = r.n;
      j["continuity"] = r.continuity_corrected;
      return dump(j);
    }
    case Format::Csv: {
      std::ostringstream out;
      out << "test,chi_square,df,p_value,n,continuity\n"
          << "mcnemar," << format_double(r.chi_square) << ',' << r.df << ','
          << format_double(r.p_value) << ',' << r.n << ','
          << (r.continuity_corrected ? "true" : "false") << '\n';
      return out.str();
    }
    case Format::Text: {
      std::ostringstream out;
      out << "\xCF\x87" "2(" << r.df << ", N = " << r.n << ") = " << format_fixed(r.chi_square, 2)
          << ", " << format_p_value(r.p_value) << '\n';
      return out.str();
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

std::string render(const ClassificationMetrics& m, Format f) {
  switch (f) {
    case Format::Json: {
      ojson j;
      j["tp"] = m.tp;
      j["fp"] = m.fp;
      j["fn"] = m.fn;
      j["tn"] = m.tn;
      j["accuracy"] = ratio_json(m.accuracy);
      j["precision"] = ratio_json(m.precision);
      j["recall"] = ratio_json(m.recall);
      j["f1"] = ratio_json(m.f1);
      return dump(j);
    }
    case Format::Csv: {
      std::ostringstream out;
      out << "tp,fp,fn,tn,accuracy,precision,recall,f1\n"
          << m.tp << ',' << m.fp << ',' << m.fn << ',' << m.tn << ',' << ratio_csv(m.accuracy)
          << ',' << ratio_csv(m.precision) << ',' << ratio_csv(m.recall) << ',' << ratio_csv(m.f1)
          << '\n';
      return out.str();
    }
    case Format::Text: {
      std::ostringstream out;
      out << "tp " << m.tp << "  fp " << m.fp << "  fn " << m.fn << "  tn " << m.tn << '\n'
          << "accuracy   " << ratio_text(m.accuracy, 4) << '\n'
          << "precision  " << ratio_text(m.precision, 4) << '\n'
          << "recall     " << ratio_text(m.recall, 4) << '\n'
          << "f1         " << ratio_text(m.f1, 4) << '\n';
      return out.str();
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

std::string render(const BootstrapCI& ci, Format f) {
  switch (f) {
    case Format::Json: {
      ojson j;
      j["metric"] = ci.metric_name;
      j["point"] = ci.point;
      j["estimate"] = ci.estimate;
      j["lower"] = ci.lower;
      j["upper"] = ci.upper;
      j["level"] = ci.level;
      j["replicates"] = ci.replicates;
      j["seed"] = ci.seed;
      j["undefined_replicates"] = ci.undefined_replicates;
      return dump(j);
    }
    case Format::Csv: {
      std::ostringstream out;
      out << "metric,point,estimate,lower,upper,level,replicates,seed,undefined_replicates\n"
          << ci.metric_name << ',' << format_double(ci.point) << ',' << format_double(ci.estimate)
          << ',' << format_double(ci.lower)
          << ',' << format_double(ci.upper) << ',' << format_double(ci.level) << ','
          << ci.replicates << ',' << ci.seed << ',' << ci.undefined_replicates << '\n';
      return out.str();
    }
    case Format::Text: {
      std::ostringstream out;
      out << ci.metric_name << " = " << format_fixed(ci.point, 4) << ", "
          << format_fixed(100.0 * ci.level, 0) << "% CI [" << format_fixed(ci.lower, 4) << ", "
          << format_fixed(ci.upper, 4) << "] (percentile bootstrap, " << ci.replicates
          << " replicates, seed " << ci.seed << ")\n";
      if (ci.point != ci.estimate)
        out << "full-sample estimate " << format_fixed(ci.estimate, 4) << " lies outside the interval\n";
      if (ci.undefined_replicates > 0)
        out << "replicates with undefined " << ci.metric_name << ": " << ci.undefined_replicates << '\n';
      return out.str();
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

std::string render(const ScalarResult& s, Format f) {
  switch (f) {
    case Format::Json: {
      ojson j;
      j["metric"] = s.name;
      j["value"] = s.value;
      return dump(j);
    }
    case Format::Csv:
      return "metric,value\n" + s.name + "," + format_double(s.value) + "\n";
    case Format::Text:
      return s.name + " = " + format_fixed(s.value, 4) + "\n";
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

std::string render(const EntropyVector& v, Format f) {
  switch (f) {
    case Format::Json: {
      ojson j;
      j["base"] = v.base == LogBase::Two ? "2" : "e";
      j["normalized"] = v.normalized;
      j["units"] = v.units;
      j["entropy"] = v.values;
      return dump(j);
    }
    case Format::Csv: {
      std::ostringstream out;
      write_entropy_csv(out, v);
      return out.str();
    }
    case Format::Text: {
      std::ostringstream out;
      out << (v.normalized ? "normalized " : "") << "entropy ("
          << (v.base == LogBase::Two ? "bits" : "nats") << ")\n";
      for (std::size_t i = 0; i < v.values.size(); ++i) {
        out << pad(i < v.units.size() ? v.units[i] : std::to_string(i + 1), 12) << "  "
            << format_fixed(v.values[i], 4) << '\n';
      }
      return out.str();
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

std::string render(const ItemScores& s, Format f) {
  switch (f) {
    case Format::Json: {
      ojson j;
      j["units"] = s.units;
      j["scores"] = s.scores;
      j["obs_counts"] = s.obs_counts;
      return dump(j);
    }
    case Format::Csv: {
      std::ostringstream out;
      out << "unit_id,score,obs\n";
      for (std::size_t i = 0; i < s.scores.size(); ++i)
        out << s.units[i] << ',' << format_double(s.scores[i]) << ',' << s.obs_counts[i] << '\n';
      return out.str();
    }
    case Format::Text: {
      std::ostringstream out;
      out << "unit          score   n\n";
      for (std::size_t i = 0; i < s.scores.size(); ++i)
        out << pad(s.units[i], 12) << "  " << format_fixed(s.scores[i], 4) << "  " << s.obs_counts[i]
            << '\n';
      return out.str();
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

std::string render(const DensityCurve& c, Format f) {
  switch (f) {
    case Format::Json: {
      ojson j;
      j["bandwidth"] = c.bandwidth;
      j["n"] = c.n;
      j["x"] = c.grid;
      j["density"] = c.density;
      return dump(j);
    }
    case Format::Csv: {
      std::ostringstream out;
      write_density_csv(out, c);
      return out.str();
    }
    case Format::Text: {
      std::ostringstream out;
      out << "kernel density: n = " << c.n << ", bandwidth = " << format_fixed(c.bandwidth, 4)
          << ", " << c.grid.size() << " grid points\n";
      return out.str();
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

std::string render(const std::vector<ConvergencePoint>& points, Format f) {
  switch (f) {
    case Format::Json: {
      ojson arr = ojson::array();
      for (const auto& p : points) {
        ojson j;
        j["size"] = p.size;
        j["mean_jsd"] = p.mean_jsd;
        j["rep_count"] = p.rep_count;
        arr.push_back(std::move(j));
      }
      return dump(arr);
    }
    case Format::Csv: {
      std::ostringstream out;
      write_convergence_csv(out, points);
      return out.str();
    }
    case Format::Text: {
      std::ostringstream out;
      out << "size      mean JSD (bits)  reps\n";
      for (const auto& p : points)
        out << pad(std::to_string(p.size), 8) << "  " << pad(format_fixed(p.mean_jsd, 6), 15)
            << "  " << p.rep_count << '\n';
      return out.str();
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

std::string render(const SampleSizeResult& s, Format f) {
  const auto* prop = std::get_if<ProportionEffect>(&s.spec.effect);
  switch (f) {
    case Format::Json: {
      ojson j;
      j["alpha"] = s.spec.alpha;
      j["power"] = s.spec.power;
      j["tails"] = s.spec.tails;
      if (prop) {
        j["p1"] = prop->p1;
        j["p2"] = prop->p2;
      } else {
        j["d"] = std::get<StandardizedEffect>(s.spec.effect).d;
      }
      j["exact"] = s.exact;
      j["n_per_group"] = s.per_group;
      return dump(j);
    }
    case Format::Csv: {
      std::ostringstream out;
      out << "alpha,power,tails,effect,exact,n_per_group\n"
          << format_double(s.spec.alpha) << ',' << format_double(s.spec.power) << ','
          << s.spec.tails << ','
          << (prop ? "p1=" + format_double(prop->p1) + ";p2=" + format_double(prop->p2)
                   : "d=" + format_double(std::get<StandardizedEffect>(s.spec.effect).d))
          << ',' << format_double(s.exact) << ',' << s.per_group << '\n';
      return out.str();
    }
    case Format::Text: {
      std::ostringstream out;
      out << "required sample size: " << s.per_group << " per group (exact "
          << format_fixed(s.exact, 2) << "; alpha = " << format_double(s.spec.alpha)
          << ", power = " << format_double(s.spec.power) << ", " << s.spec.tails << "-tailed)\n";
      return out.str();
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

// ---------------------------------------------------------------------------

ReliabilityResult reliability_from_json(std::string_view json) {
  return parse_json(json, [](const ojson& j) {
    ReliabilityResult r;
    r.statistic = parse_statistic(j.at("statistic").get<std::string>());
    r.value = j.at("value").get<double>();
    r.n_subjects = j.at("n_subjects").get<std::size_t>();
    r.n_raters = j.at("n_raters").get<std::size_t>();
    r.level = parse_level(j.at("level").get<std::string>());
    r.band = j.at("band").get<std::string>();
    r.excluded_units = j.at("excluded_units").get<std::size_t>();
    return r;
  });
}

McNemarResult mcnemar_from_json(std::string_view json) {
  return parse_json(json, [](const ojson& j) {
    if (j.at("test") != "mcnemar") throw Error(ErrorCode::ParseError, "not a McNemar result");
    McNemarResult r;
    r.chi_square = j.at("chi_square").get<double>();
    r.df = j.at("df").get<int>();
    r.p_value = j.at("p_value").get<double>();
    r.n = j.at("n").get<std::uint64_t>();
    r.continuity_corrected = j.at("continuity").get<bool>();
    return r;
  });
}

BootstrapCI bootstrap_from_json(std::string_view json) {
  return parse_json(json, [](const ojson& j) {
    BootstrapCI ci;
    ci.metric_name = j.at("metric").get<std::string>();
    ci.point = j.at("point").get<double>();
    ci.estimate = j.at("estimate").get<double>();
    ci.lower = j.at("lower").get<double>();
    ci.upper = j.at("upper").get<double>();
    ci.level = j.at("level").get<double>();
    ci.replicates = j.at("replicates").get<std::size_t>();
    ci.seed = j.at("seed").get<std::uint64_t>();
    ci.undefined_replicates = j.at("undefined_replicates").get<std::size_t>();
    return ci;
  });
}

}  // namespace concordia
