#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "see/trainer/trainer.hpp"

namespace see::cli {

/// Round-trip text form of a double ("%.17g").
std::string format_value(double v);

/// Streams records as CSV rows `step,metric,value,seed`. Evaluation rows are
/// followed by an `eval_score` row holding the normalized score.
class CurveWriter {
 public:
  CurveWriter(const std::filesystem::path& path, std::string env, std::uint64_t seed);

  void write(const trainer::MetricsRecord& record);
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
  std::string env_;
  std::uint64_t seed_;
};

struct CurveRow {
  std::uint64_t step = 0;
  std::string metric;
  double value = 0.0;
  std::uint64_t seed = 0;
};

std::vector<CurveRow> read_curve(const std::filesystem::path& path);

struct AggregateRow {
  std::uint64_t step = 0;
  std::string metric;
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n); 0 when n = 1
  std::size_t n = 0;
};

/// Metrics that are aggregated across seeds: the ones logged at evaluation
/// points (eval_return, eval_score, exploit_loss, explore_loss).
bool is_aggregated_metric(const std::string& metric);

/// Per (metric, step) mean and standard error over the given curve files,
/// sorted by metric then step.
std::vector<AggregateRow> aggregate(const std::vector<std::filesystem::path>& curves);

/// CSV with header `step,metric,mean,stderr,n`.
void write_aggregate(const std::filesystem::path& path, const std::vector<AggregateRow>& rows);

}  // namespace see::cli
