#include "widths/records.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "widths/errors.hpp"
#include "widths/width_formulas.hpp"

namespace widths {

namespace {

// The attaining index is reported in p-space, preferring the exponent
// exactly as the user wrote it over the round trip through z = 1/p.
std::string display_p(const RunConfig& config, double z) {
  for (const BallInput& b : config.balls) {
    if (z_from_p(b.p) == z) return format_double(b.p);
  }
  return format_double(p_from_z(z));
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string csv_cell(const std::optional<double>& v) {
  return v.has_value() ? format_double(*v) : std::string();
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// JSON-lines scalar for a possibly absent or infinite value.  Emitted by
// hand because the infinity token is not part of strict JSON.
std::string jsonl_number(const std::optional<double>& v) {
  if (!v.has_value()) return "null";
  if (std::isinf(*v)) return *v > 0 ? "Infinity" : "-Infinity";
  if (std::isnan(*v)) return "NaN";
  return format_double(*v);
}

std::string jsonl_string(const std::string& s) {
  return nlohmann::json(s).dump();
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

SweepRecord evaluate_point_strict(const RunConfig& config, int n, int cap,
                                  double q, bool with_bounds) {
  SweepRecord rec;
  rec.n = n;
  rec.cap = cap;
  rec.q = q;
  const BallFamily fam = family_from(config, cap);
  const WidthQuery query{n, cap, z_from_p(q)};
  EstimateResult est;
  if (with_bounds) {
    SandwichOptions opts;
    opts.use_grid_oracle = config.use_grid_oracle;
    opts.auto_normalize = config.auto_normalize;
    opts.resolution = config.resolution;
    opts.seed = config.seed;
    const SandwichReport report = sandwich(fam, query, opts);
    est = report.estimate;
    rec.upper = report.upper;
    rec.lower = report.lower;
    for (const std::string& tag : report.method_tags) {
      rec.warnings.push_back("method:" + tag);
    }
  } else {
    est = estimate(fam, query, config.auto_normalize);
  }
  rec.case_tag = to_string(est.case_tag);
  rec.phi = est.value;
  if (est.case_tag == CaseTag::kCase5) {
    rec.phi1 = est.phi1;
    rec.phi2 = est.phi2;
    rec.phi3 = est.phi3;
  } else if (est.case_tag == CaseTag::kCase3) {
    rec.phi1 = est.phi1;
  }
  if (est.alpha_star >= 0) {
    rec.alpha_star_p =
        display_p(config, est.family_used.balls[est.alpha_star].z);
  }
  if (est.beta_star >= 0) {
    rec.beta_star_p =
        display_p(config, est.family_used.balls[est.beta_star].z);
  }
  for (const std::string& w : est.warnings) rec.warnings.push_back(w);
  return rec;
}

SweepRecord evaluate_point(const RunConfig& config, int n, int cap, double q,
                           bool with_bounds) {
  try {
    return evaluate_point_strict(config, n, cap, q, with_bounds);
  } catch (const Error& e) {
    SweepRecord rec;
    rec.n = n;
    rec.cap = cap;
    rec.q = q;
    rec.warnings.push_back(std::string("skipped: ") + e.what());
    return rec;
  } catch (const std::exception& e) {
    SweepRecord rec;
    rec.n = n;
    rec.cap = cap;
    rec.q = q;
    rec.warnings.push_back(std::string("skipped: internal error: ") + e.what());
    return rec;
  }
}

std::vector<SweepRecord> run_sweep(const RunConfig& config) {
  const SweepAxes axes = config.sweep.value_or(SweepAxes{});
  const std::vector<int> ns =
      axes.n_values.empty() ? std::vector<int>{config.n} : axes.n_values;
  const std::vector<int> caps =
      axes.cap_values.empty() ? std::vector<int>{config.N} : axes.cap_values;
  const std::vector<double> qs =
      axes.q_values.empty() ? std::vector<double>{config.q} : axes.q_values;

  std::vector<std::tuple<int, int, double>> grid;
  for (int cap : caps) {
    for (int n : ns) {
      for (double q : qs) grid.push_back({n, cap, q});
    }
  }

  std::vector<SweepRecord> records(grid.size());
  auto work = [&](std::size_t i) {
    const auto& [n, cap, q] = grid[i];
    records[i] = evaluate_point(config, n, cap, q, config.with_bounds);
  };

  const std::size_t workers =
      std::min<std::size_t>(std::thread::hardware_concurrency(), grid.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) work(i);
  } else {
    // Index-addressed output keeps grid order independent of scheduling.
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) work(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }
  return records;
}

std::string to_csv(const std::vector<SweepRecord>& records) {
  std::string out =
      "n,N,q,case,phi,phi1,phi2,phi3,upper,lower,alpha_star_p,beta_star_p,"
      "warnings\n";
  for (const SweepRecord& rec : records) {
    out += std::to_string(rec.n);
    out += ',';
    out += std::to_string(rec.cap);
    out += ',';
    out += format_double(rec.q);
    out += ',';
    out += csv_escape(rec.case_tag);
    out += ',';
    out += csv_cell(rec.phi);
    out += ',';
    out += csv_cell(rec.phi1);
    out += ',';
    out += csv_cell(rec.phi2);
    out += ',';
    out += csv_cell(rec.phi3);
    out += ',';
    out += csv_cell(rec.upper);
    out += ',';
    out += csv_cell(rec.lower);
    out += ',';
    out += csv_escape(rec.alpha_star_p);
    out += ',';
    out += csv_escape(rec.beta_star_p);
    out += ',';
    out += csv_escape(join(rec.warnings, "; "));
    out += '\n';
  }
  return out;
}

std::string to_jsonl(const std::vector<SweepRecord>& records) {
  std::string out;
  for (const SweepRecord& rec : records) {
    out += "{\"n\":" + std::to_string(rec.n);
    out += ",\"N\":" + std::to_string(rec.cap);
    out += ",\"q\":" + jsonl_number(rec.q);
    out += ",\"case\":" + jsonl_string(rec.case_tag);
    out += ",\"phi\":" + jsonl_number(rec.phi);
    out += ",\"phi1\":" + jsonl_number(rec.phi1);
    out += ",\"phi2\":" + jsonl_number(rec.phi2);
    out += ",\"phi3\":" + jsonl_number(rec.phi3);
    out += ",\"upper\":" + jsonl_number(rec.upper);
    out += ",\"lower\":" + jsonl_number(rec.lower);
    out += ",\"alpha_star_p\":" + jsonl_string(rec.alpha_star_p);
    out += ",\"beta_star_p\":" + jsonl_string(rec.beta_star_p);
    out += ",\"warnings\":[";
    for (std::size_t i = 0; i < rec.warnings.size(); ++i) {
      if (i) out += ',';
      out += jsonl_string(rec.warnings[i]);
    }
    out += "]}\n";
  }
  return out;
}

}  // namespace widths
