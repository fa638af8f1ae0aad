#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tdebt/features.hpp"
#include "tdebt/ingest.hpp"
#include "tdebt/matrix.hpp"
#include "tdebt/rng.hpp"

namespace tdebt::test {

inline std::string fixture_path(const std::string& name) {
  return std::string(TDEBT_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---- independent scoring oracles -------------------------------------------

// Brute-force MAE: long double accumulation, reverse index order, so it shares
// no code path with eval's implementation.
inline double mae_oracle(const std::vector<double>& actual,
                         const std::vector<double>& predicted) {
  long double acc = 0.0L;
  for (std::size_t i = actual.size(); i-- > 0;) {
    long double d = static_cast<long double>(actual[i]) - predicted[i];
    acc += d < 0 ? -d : d;
  }
  return static_cast<double>(acc / static_cast<long double>(actual.size()));
}

inline double r2_oracle(const std::vector<double>& actual,
                        const std::vector<double>& predicted) {
  long double mean = 0.0L;
  for (std::size_t i = actual.size(); i-- > 0;) mean += actual[i];
  mean /= static_cast<long double>(actual.size());
  long double res = 0.0L, tot = 0.0L;
  for (std::size_t i = actual.size(); i-- > 0;) {
    long double r = actual[i] - static_cast<long double>(predicted[i]);
    long double d = actual[i] - mean;
    res += r * r;
    tot += d * d;
  }
  return static_cast<double>(1.0L - res / tot);
}

// ---- synthetic regression data ----------------------------------------------

struct Synth {
  Matrix x;
  std::vector<double> y;
};

inline double gaussian(Rng& rng) {
  // Box-Muller; consumes two uniforms per call.
  double u1 = rng.next_real();
  double u2 = rng.next_real();
  if (u1 <= 0.0) u1 = 1e-12;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Friedman's benchmark surface over five uniform features plus optional
/// inert extras: y = 10 sin(pi x0 x1) + 20 (x2 - 0.5)^2 + 10 x3 + 5 x4.
inline Synth friedman(std::size_t n, std::uint64_t seed, double noise_sd,
                      std::size_t extra_features = 0) {
  Rng rng(seed);
  Synth s;
  s.x = Matrix(n, 5 + extra_features);
  s.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 5 + extra_features; ++j) s.x(i, j) = rng.next_real();
    s.y[i] = 10.0 * std::sin(3.14159265358979323846 * s.x(i, 0) * s.x(i, 1)) +
             20.0 * (s.x(i, 2) - 0.5) * (s.x(i, 2) - 0.5) + 10.0 * s.x(i, 3) +
             5.0 * s.x(i, 4);
    if (noise_sd > 0.0) s.y[i] += noise_sd * gaussian(rng);
  }
  return s;
}

/// Noiseless linear surface y = 3 x0 - 2 x1 + 0.5 x2 + 7.
inline Synth linear_surface(std::size_t n, std::size_t p, std::uint64_t seed) {
  Rng rng(seed);
  Synth s;
  s.x = Matrix(n, p);
  s.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) s.x(i, j) = -5.0 + 10.0 * rng.next_real();
    s.y[i] = 3.0 * s.x(i, 0) + 7.0;
    if (p > 1) s.y[i] += -2.0 * s.x(i, 1);
    if (p > 2) s.y[i] += 0.5 * s.x(i, 2);
  }
  return s;
}

inline DesignMatrix to_design(const Synth& s, TargetKind kind = TargetKind::Maintainability,
                              std::size_t n_groups = 4) {
  DesignMatrix m;
  m.rows = s.x;
  m.target = s.y;
  m.target_kind = kind;
  for (std::size_t j = 0; j < s.x.cols(); ++j)
    m.feature_names.push_back("f" + std::to_string(j));
  for (std::size_t i = 0; i < s.x.rows(); ++i)
    m.groups.push_back("p" + std::to_string(i % n_groups));
  return m;
}

// ---- synthetic snapshot corpus ------------------------------------------------

/// Valid snapshots whose targets correlate with the metric columns, so
/// cross-validated R2 is meaningfully positive.
inline std::vector<MetricSnapshot> synthetic_snapshots(std::size_t n_projects,
                                                       std::size_t per_project,
                                                       std::uint64_t seed) {
  std::vector<MetricSnapshot> out;
  const Instant base = parse_instant("2018-01-01");
  for (std::size_t p = 0; p < n_projects; ++p) {
    Rng rng(mix_seed(seed, p));
    double scale = 0.5 + 2.0 * rng.next_real();  // project size factor
    for (std::size_t c = 0; c < per_project; ++c) {
      MetricSnapshot s;
      s.project_id = "proj" + std::to_string(p);
      char sha[41];
      for (int i = 0; i < 40; ++i)
        sha[i] = "0123456789abcdef"[(mix_seed(seed, p * 1000 + c * 40 + i)) % 16];
      sha[40] = '\0';
      s.commit_sha = sha;
      s.timestamp = base + static_cast<Instant>(p * 31 + c * 190) * kSecondsPerDay;

      double growth = 1.0 + 0.08 * static_cast<double>(c);
      double ncloc = 4000.0 * scale * growth + 500.0 * rng.next_real();
      double classes = ncloc / 80.0 + 3.0 * rng.next_real();
      double files = classes * 0.85;
      double functions = ncloc / 11.0;
      double complexity = ncloc * 0.22 + 40.0 * rng.next_real();
      double duplicated_lines = ncloc * (0.01 + 0.05 * rng.next_real());
      double coverage = 35.0 + 50.0 * rng.next_real();

      s.set_metric("classes", std::floor(classes));
      s.set_metric("files", std::floor(files));
      s.set_metric("lines", std::floor(ncloc * 1.6));
      s.set_metric("ncloc", std::floor(ncloc));
      s.set_metric("classes_and_interfaces", std::floor(classes * 1.05));
      s.set_metric("missing_package_info", std::floor(8.0 * rng.next_real()));
      s.set_metric("packages", std::floor(5.0 + classes / 12.0));
      s.set_metric("statements", std::floor(ncloc * 0.45));
      s.set_metric("directories", std::floor(6.0 + classes / 15.0));
      s.set_metric("functions", std::floor(functions));
      s.set_metric("comment_lines", std::floor(ncloc * 0.18));
      s.set_metric("comment_lines_density", 10.0 + 8.0 * rng.next_real());
      s.set_metric("complexity", std::floor(complexity));
      s.set_metric("class_complexity", complexity / std::max(classes, 1.0));
      s.set_metric("function_complexity", complexity / std::max(functions, 1.0));
      s.set_metric("cognitive_complexity", std::floor(complexity * 0.9));
      s.set_metric("package_dependency_cycles", std::floor(4.0 * rng.next_real()));
      s.set_metric("coverage", coverage);
      s.set_metric("lines_to_cover", std::floor(ncloc * 0.8));
      s.set_metric("line_coverage", std::min(100.0, coverage + 2.0));
      s.set_metric("uncovered_lines", std::floor(ncloc * 0.8 * (100.0 - coverage) / 100.0));
      s.set_metric("duplicated_lines", std::floor(duplicated_lines));
      s.set_metric("duplicated_blocks", std::floor(duplicated_lines / 22.0));
      s.set_metric("duplicated_files", std::floor(duplicated_lines / 90.0));
      s.set_metric("duplicated_lines_density",
                   100.0 * duplicated_lines / std::max(ncloc * 1.6, 1.0));

      Distribution lang{{"java", std::floor(ncloc * 0.96)}, {"xml", std::floor(ncloc * 0.04)}};
      Distribution fdist{{"1", std::floor(functions * 0.6)},
                         {"2", std::floor(functions * 0.25)},
                         {"4", std::floor(functions * 0.1)},
                         {"6", std::floor(functions * 0.05)}};
      Distribution cdist{{"0", std::floor(files * 0.4)},
                         {"5", std::floor(files * 0.3)},
                         {"10", std::floor(files * 0.2)},
                         {"20", std::floor(files * 0.1)}};
      s.distributions[*schema::distribution_index("ncloc_language_distribution")] = lang;
      s.distributions[*schema::distribution_index("function_complexity_distribution")] = fdist;
      s.distributions[*schema::distribution_index("file_complexity_distribution")] = cdist;

      double smell_noise = 300.0 * rng.next_real();
      s.sqale_index = std::max(
          0.0, 0.6 * ncloc + 1.4 * complexity + 9.0 * duplicated_lines / 22.0 + smell_noise);
      s.reliability_remediation_effort =
          std::max(0.0, 0.035 * complexity + 12.0 * (100.0 - coverage) / 10.0 +
                            25.0 * rng.next_real());
      s.security_remediation_effort = std::floor(40.0 * rng.next_real());
      out.push_back(std::move(s));
    }
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace tdebt::test
