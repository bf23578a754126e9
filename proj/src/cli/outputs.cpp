#include "see/cli/outputs.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "see/cli/formulas.hpp"
#include "see/errors.hpp"

namespace see::cli {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CurveWriter::CurveWriter(const std::filesystem::path& path, std::string env, std::uint64_t seed)
    : out_(path, std::ios::binary | std::ios::trunc), env_(std::move(env)), seed_(seed) {
  if (!out_) throw ConfigError("cannot write " + path.string());
  out_ << "step,metric,value,seed\n";
}

void CurveWriter::write(const trainer::MetricsRecord& r) {
  out_ << r.step << ',' << r.metric << ',' << format_value(r.value) << ',' << seed_ << '\n';
  if (r.kind == trainer::RecordKind::evaluation)
    out_ << r.step << ",eval_score," << format_value(normalized_score(env_, r.value)) << ','
         << seed_ << '\n';
}

std::vector<CurveRow> read_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curve file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "step,metric,value,seed")
    throw ConfigError("unexpected header in " + path.string());
  std::vector<CurveRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string step, metric, value, seed;
    if (!std::getline(fields, step, ',') || !std::getline(fields, metric, ',') ||
        !std::getline(fields, value, ',') || !std::getline(fields, seed))
      throw ConfigError("malformed row in " + path.string() + ": " + line);
    rows.push_back({std::stoull(step), metric, std::strtod(value.c_str(), nullptr), std::stoull(seed)});
  }
  return rows;
}

bool is_aggregated_metric(const std::string& metric) {
  return metric == "eval_return" || metric == "eval_score" || metric == "exploit_loss" ||
         metric == "explore_loss";
}

std::vector<AggregateRow> aggregate(const std::vector<std::filesystem::path>& curves) {
  std::map<std::pair<std::string, std::uint64_t>, std::vector<double>> groups;
  for (const auto& path : curves)
    for (const auto& row : read_curve(path))
      if (is_aggregated_metric(row.metric)) groups[{row.metric, row.step}].push_back(row.value);
  std::vector<AggregateRow> out;
  for (const auto& [key, values] : groups) {
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double se = 0.0;
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    out.push_back({key.second, key.first, mean, se, values.size()});
  }
  return out;
}

void write_aggregate(const std::filesystem::path& path, const std::vector<AggregateRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "step,metric,mean,stderr,n\n";
  for (const auto& r : rows)
    out << r.step << ',' << r.metric << ',' << format_value(r.mean) << ',' << format_value(r.std_error)
        << ',' << r.n << '\n';
}

}  // namespace see::cli
