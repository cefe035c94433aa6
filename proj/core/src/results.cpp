#include <cmath>
#include <fstream>

#include <fmt/core.h>

#include "lsviae/error.hpp"
#include "lsviae/experiment.hpp"

namespace lsviae {

double fit_growth_exponent(std::span<const double> series) {
  if (series.size() < 100) {
    throw InvalidArgument(fmt::format("fit_growth_exponent: need at least 100 points, got {}", series.size()));
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long n = 0;
  for (std::size_t k = series.size() / 2; k < series.size(); ++k) {
    if (!(series[k] > 0.0)) continue;
    const double x = std::log(static_cast<double>(k + 1));
    const double y = std::log(series[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

std::string results_csv(const Metrics& m) {
  std::string out = "episode,reward,hard_violation,cum_regret,cum_violation\n";
  for (long k = 0; k < m.episodes(); ++k) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", k + 1, m.reward[k], m.hard_violation[k],
                       m.cum_regret[k], m.cum_violation[k]);
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  out << body;
  out.flush();
  if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

}  // namespace

void emit_results(const Metrics& metrics, const ExperimentConfig& config, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  write_file(dir / "results.csv", results_csv(metrics));
  write_file(dir / "config.txt", serialize(config));
}

}  // namespace lsviae
