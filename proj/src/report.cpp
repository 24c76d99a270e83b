#include "poissonity/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "poissonity/error.hpp"

namespace poissonity {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json alternative_to_json(const AlternativeSpec& spec) {
  json j;
  j["family"] = family_name(spec);
  if (const auto* s = std::get_if<Poisson>(&spec)) {
    j["lambda"] = s->lambda;
  } else if (const auto* s = std::get_if<Binomial>(&spec)) {
    j["m_b"] = s->trials;
    j["p_b"] = s->p;
  } else if (const auto* s = std::get_if<NegativeBinomial>(&spec)) {
    j["m_nb"] = s->successes;
    j["p_nb"] = s->p;
  } else if (const auto* s = std::get_if<BetaBinomial>(&spec)) {
    j["m_b"] = s->trials;
    j["alpha"] = s->alpha;
    j["beta"] = s->beta;
  } else if (const auto* s = std::get_if<BinNegBinMixture>(&spec)) {
    j["w"] = s->w;
    j["m_b"] = s->m_b;
    j["m_nb"] = s->m_nb;
    j["p"] = s->p;
  } else if (const auto* s = std::get_if<FloorNormal>(&spec)) {
    j["a"] = s->a;
  } else if (const auto* s = std::get_if<FloorGamma>(&spec)) {
    j["k"] = s->k;
    j["b"] = s->b;
  } else if (const auto* s = std::get_if<FloorWeibull>(&spec)) {
    j["k"] = s->k;
    j["b"] = s->b;
  }
  return j;
}

AlternativeSpec alternative_from_json(const json& j) {
  try {
    const std::string family = j.at("family").get<std::string>();
    const auto num = [&](const char* key) { return j.at(key).get<double>(); };
    const auto integer = [&](const char* key) { return j.at(key).get<std::int64_t>(); };
    AlternativeSpec spec;
    if (family == "poisson") {
      spec = Poisson{num("lambda")};
    } else if (family == "binomial") {
      spec = Binomial{integer("m_b"), num("p_b")};
    } else if (family == "negative_binomial") {
      spec = NegativeBinomial{integer("m_nb"), num("p_nb")};
    } else if (family == "beta_binomial") {
      spec = BetaBinomial{integer("m_b"), num("alpha"), num("beta")};
    } else if (family == "bin_negbin_mixture") {
      spec = BinNegBinMixture{num("w"), integer("m_b"), integer("m_nb"), num("p")};
    } else if (family == "floor_normal") {
      spec = FloorNormal{num("a")};
    } else if (family == "floor_gamma") {
      spec = FloorGamma{num("k"), num("b")};
    } else if (family == "floor_weibull") {
      spec = FloorWeibull{num("k"), num("b")};
    } else {
      throw DomainError("unknown alternative family '" + family + "'");
    }
    validate(spec);
    return spec;
  } catch (const json::exception& e) {
    throw DomainError(std::string("alternative: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& c) {
  return json{
      {"lambda", c.lambda},
      {"alternative", alternative_to_json(c.alternative)},
      {"n", c.n},
      {"replications", c.replications},
      {"k_min", c.k_min},
      {"k_max", c.k_max},
      {"alpha_levels", c.alpha_levels},
      {"master_seed", c.master_seed},
      {"expected_count_floor", c.expected_count_floor},
  };
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  if (!j.is_object()) throw DomainError("config: expected a JSON object");
  static const char* const known[] = {"lambda",       "alternative", "n",
                                      "replications", "k_min",       "k_max",
                                      "alpha_levels", "master_seed", "expected_count_floor"};
  for (const auto& item : j.items()) {
    if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known)) {
      throw DomainError("config: unknown field '" + item.key() + "'");
    }
  }
  try {
    if (j.contains("lambda")) c.lambda = j["lambda"].get<double>();
    if (j.contains("alternative")) c.alternative = alternative_from_json(j["alternative"]);
    if (j.contains("n")) c.n = j["n"].get<std::size_t>();
    if (j.contains("replications")) c.replications = j["replications"].get<std::size_t>();
    if (j.contains("k_min")) c.k_min = j["k_min"].get<Count>();
    if (j.contains("k_max")) c.k_max = j["k_max"].get<Count>();
    if (j.contains("alpha_levels")) c.alpha_levels = j["alpha_levels"].get<std::vector<double>>();
    if (j.contains("master_seed")) c.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("expected_count_floor")) {
      c.expected_count_floor = j["expected_count_floor"].get<double>();
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DomainError("config: " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json power_to_json(const std::vector<PowerEntry>& table) {
  json arr = json::array();
  for (const auto& e : table) {
    arr.push_back({{"test", to_string(e.test)},
                   {"sided", to_string(e.sided)},
                   {"alpha", e.alpha},
                   {"critical_value", e.critical_value},
                   {"power", e.power}});
  }
  return json{{"power", arr}};
}

std::vector<PowerEntry> power_from_json(const json& j) {
  std::vector<PowerEntry> table;
  try {
    for (const auto& e : j.at("power")) {
      PowerEntry p{};
      const std::string test = e.at("test").get<std::string>();
      bool found = false;
      for (TestKind t : kAllTests) {
        if (to_string(t) == test) {
          p.test = t;
          found = true;
        }
      }
      if (!found) throw DomainError("power: unknown test '" + test + "'");
      const std::string sided = e.at("sided").get<std::string>();
      if (sided == "two_sided") {
        p.sided = Sided::two_sided;
      } else if (sided == "one_sided_upper") {
        p.sided = Sided::one_sided_upper;
      } else {
        throw DomainError("power: unknown sidedness '" + sided + "'");
      }
      p.alpha = e.at("alpha").get<double>();
      p.critical_value = e.at("critical_value").get<double>();
      p.power = e.at("power").get<double>();
      table.push_back(p);
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("power: ") + e.what());
  }
  return table;
}

json summary_to_json(const ExperimentResult& r) {
  json j;
  j["config"] = config_to_json(r.config);
  j["master_seed"] = r.config.master_seed;
  j["alternative"] = describe(r.config.alternative);
  j["power"] = power_to_json(r.power)["power"];
  j["warnings"] = r.warnings;
  j["failures"] = {{"null", r.null_failures}, {"alternative", r.alt_failures}};
  json used = json::object();
  for (const auto& t : r.tests) {
    used[to_string(t.test)] = {{"null", t.null_stats.size()}, {"alternative", t.alt_stats.size()}};
  }
  j["replications_used"] = used;
  return j;
}

std::string edf_file_name(TestKind test) {
  switch (test) {
    case TestKind::c_hat:
      return "edf_chat.csv";
    case TestKind::gof_theta:
      return "edf_gof_theta.csv";
    case TestKind::gof_mle:
      return "edf_gof_mle.csv";
  }
  return "edf_unknown.csv";
}

std::string edf_csv(const TestOutcome& outcome) {
  std::string out = "half,statistic,cumulative_fraction\n";
  const auto emit = [&](const char* half, const std::vector<EdfPoint>& curve) {
    for (const auto& p : curve) {
      out += half;
      out += ',';
      out += format_double(p.value);
      out += ',';
      out += format_double(p.fraction);
      out += '\n';
    }
  };
  emit("null", outcome.null_edf);
  emit("alternative", outcome.alt_edf);
  return out;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_outputs(const ExperimentResult& result, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& t : result.tests) write_text_file(dir / edf_file_name(t.test), edf_csv(t));
  write_text_file(dir / "power.json", power_to_json(result.power).dump(2) + "\n");
  write_text_file(dir / "summary.json", summary_to_json(result).dump(2) + "\n");
}

std::vector<PmfRow> pmf_compare(const ExperimentConfig& config, double tail_eps) {
  validate(config.alternative);
  constexpr Count kRowCap = 100000;
  const auto top = support_max(config.alternative);
  std::vector<PmfRow> rows;
  double poisson_cum = 0.0;
  double alt_cum = 0.0;
  for (Count x = 0; x < kRowCap; ++x) {
    PmfRow row{x, poisson_pmf(config.lambda, x), alternative_pmf(config.alternative, x)};
    poisson_cum += row.poisson;
    alt_cum += row.alternative;
    rows.push_back(row);

    const double alt_tail =
        is_floor_discretized(config.alternative)
            ? continuous_survival(config.alternative, static_cast<double>(x + 1))
            : (top && x >= *top ? 0.0 : 1.0 - alt_cum);
    const bool poisson_done = 1.0 - poisson_cum < tail_eps && static_cast<double>(x) > config.lambda;
    if (x >= config.k_max && poisson_done && alt_tail < tail_eps) break;
  }
  return rows;
}

std::string pmf_csv(const std::vector<PmfRow>& rows) {
  std::string out = "x,poisson_pmf,alternative_pmf\n";
  for (const auto& r : rows) {
    out += std::to_string(r.x) + ',' + format_double(r.poisson) + ',' +
           format_double(r.alternative) + '\n';
  }
  return out;
}

json calibration_to_json(const CalibrationResult& r, double target, double tol) {
  return json{{"family", to_string(r.family)},
              {"target", target},
              {"tol", tol},
              {"k", r.shape},
              {"b", r.scale},
              {"achieved_mean", r.achieved_mean},
              {"achieved_variance", r.achieved_variance},
              {"residual", r.residual},
              {"iterations", r.iterations}};
}

}  // namespace poissonity
