/*
 * Copyright 2026 The oodx Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "oodx/projection.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include "oodx/csv.h"
#include "oodx/error.h"

namespace oodx::projection {

namespace {

constexpr int kCalibrationSteps = 50;
constexpr double kPerplexityTolerance = 1e-5;

// Entropy (nats) of the row distribution exp(-beta * (d - d_min)).
double RowEntropy(std::span<const double> dist, int self, double d_min,
                  double beta, std::span<double> out) {
  double z = 0.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j < dist.size(); ++j) {
    if (static_cast<int>(j) == self) {
      out[j] = 0.0;
      continue;
    }
    const double shifted = dist[j] - d_min;
    const double p = std::exp(-beta * shifted);
    out[j] = p;
    z += p;
    weighted += p * shifted;
  }
  for (double& p : out) p /= z;
  return std::log(z) + beta * weighted / z;
}

}  // namespace

FeatureMatrix Standardize(const FeatureMatrix& features) {
  FeatureMatrix out = features;
  if (features.rows == 0) return out;
  for (int c = 0; c < features.cols; ++c) {
    double mean = 0.0;
    for (int r = 0; r < features.rows; ++r) mean += features(r, c);
    mean /= features.rows;
    double var = 0.0;
    for (int r = 0; r < features.rows; ++r) {
      const double d = features(r, c) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / features.rows);
    for (int r = 0; r < features.rows; ++r) {
      double& v = out.data[static_cast<std::size_t>(r) * features.cols + c];
      v = sd > 0.0 ? (v - mean) / sd : v - mean;
    }
  }
  return out;
}

Affinities CalibrateAffinities(const FeatureMatrix& x, double perplexity) {
  const int n = x.rows;
  std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double d = 0.0;
      for (int c = 0; c < x.cols; ++c) {
        const double diff = x(i, c) - x(j, c);
        d += diff * diff;
      }
      dist[static_cast<std::size_t>(i) * n + j] = d;
      dist[static_cast<std::size_t>(j) * n + i] = d;
    }
  }

  Affinities out;
  out.conditional.assign(static_cast<std::size_t>(n) * n, 0.0);
  out.perplexity.assign(n, 0.0);
  const double target = std::log(perplexity);
  for (int i = 0; i < n; ++i) {
    const std::span<const double> row(dist.data() + static_cast<std::size_t>(i) * n, n);
    const std::span<double> p(out.conditional.data() + static_cast<std::size_t>(i) * n, n);
    double d_min = std::numeric_limits<double>::infinity();
    double d_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      d_min = std::min(d_min, row[j]);
      d_sum += row[j];
    }
    const double spread = d_sum / (n - 1) - d_min;
    // Bisection on log(beta) over a window centred on the row's scale.
    const double centre = spread > 0.0 ? -std::log(spread) : 0.0;
    double lo = centre - 40.0;
    double hi = centre + 40.0;
    double entropy = 0.0;
    bool converged = false;
    for (int step = 0; step < kCalibrationSteps; ++step) {
      const double mid = 0.5 * (lo + hi);
      entropy = RowEntropy(row, i, d_min, std::exp(mid), p);
      if (std::abs(std::exp(entropy) - perplexity) < kPerplexityTolerance) {
        converged = true;
        break;
      }
      // Entropy falls as beta grows.
      if (entropy > target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "perplexity calibration failed for row " << i << " (reached "
          << std::exp(entropy) << ", wanted " << perplexity
          << "); too many duplicate rows?";
      throw Error(ErrorCode::kDegenerateInput, msg.str());
    }
    out.perplexity[i] = std::exp(entropy);
  }
  return out;
}

ProjectedPoints Tsne(const FeatureMatrix& features, const TsneOptions& options) {
  const int n = features.rows;
  if (n < 4) throw Error(ErrorCode::kInvalidInput, "t-SNE needs at least 4 samples");
  if (!(options.perplexity > 0.0) || options.perplexity >= n / 3.0) {
    throw Error(ErrorCode::kInvalidInput, "perplexity must lie in (0, N/3)");
  }
  for (double v : features.data) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidInput, "non-finite feature value");
  }

  const FeatureMatrix x = Standardize(features);
  const Affinities affinities = CalibrateAffinities(x, options.perplexity);
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  std::vector<double> p(nn);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      p[static_cast<std::size_t>(i) * n + j] =
          std::max((affinities.conditional[static_cast<std::size_t>(i) * n + j] +
                    affinities.conditional[static_cast<std::size_t>(j) * n + i]) /
                       (2.0 * n),
                   1e-300);
    }
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, options.init_sigma);
  std::vector<double> y(2 * n);
  for (double& v : y) v = normal(rng);
  std::vector<double> velocity(2 * n, 0.0);
  std::vector<double> gains(2 * n, 1.0);
  std::vector<double> grad(2 * n);
  std::vector<double> num(nn);

  for (int iter = 0; iter < options.iterations; ++iter) {
    const double exaggeration =
        iter < options.exaggeration_iterations ? options.early_exaggeration : 1.0;
    const double momentum = iter < options.momentum_switch_iteration
                                ? options.initial_momentum
                                : options.final_momentum;

    // Student-t kernel; row sums are accumulated in a fixed order.
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
      double row_sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (i == j) {
          num[static_cast<std::size_t>(i) * n + j] = 0.0;
          continue;
        }
        const double dx = y[2 * i] - y[2 * j];
        const double dy = y[2 * i + 1] - y[2 * j + 1];
        const double q = 1.0 / (1.0 + dx * dx + dy * dy);
        num[static_cast<std::size_t>(i) * n + j] = q;
        row_sum += q;
      }
      z += row_sum;
    }

    for (int i = 0; i < n; ++i) {
      double gx = 0.0, gy = 0.0;
      const double* p_row = p.data() + static_cast<std::size_t>(i) * n;
      const double* num_row = num.data() + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double mult = (exaggeration * p_row[j] - num_row[j] / z) * num_row[j];
        gx += mult * (y[2 * i] - y[2 * j]);
        gy += mult * (y[2 * i + 1] - y[2 * j + 1]);
      }
      grad[2 * i] = 4.0 * gx;
      grad[2 * i + 1] = 4.0 * gy;
    }

    for (int d = 0; d < 2 * n; ++d) {
      const bool same_sign = (grad[d] > 0.0) == (velocity[d] > 0.0);
      gains[d] = same_sign ? std::max(gains[d] * 0.8, 0.01) : gains[d] + 0.2;
      velocity[d] = momentum * velocity[d] - options.learning_rate * gains[d] * grad[d];
      y[d] += velocity[d];
    }
  }

  ProjectedPoints out;
  out.source = Source::kComputed;
  out.seed = options.seed;
  out.standardized = true;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += y[2 * i];
    my += y[2 * i + 1];
  }
  mx /= n;
  my /= n;
  out.coords.reserve(n);
  for (int i = 0; i < n; ++i) out.coords.push_back({y[2 * i] - mx, y[2 * i + 1] - my});
  return out;
}

ProjectedPoints LoadPrecomputed(const std::filesystem::path& path,
                                std::optional<int> expected_rows) {
  const csv::Table table = csv::Read(path);
  const int cx = table.Column("x");
  const int cy = table.Column("y");
  const int rows = static_cast<int>(table.rows.size());
  if (expected_rows.has_value() && rows != *expected_rows) {
    throw Error(ErrorCode::kManifestMismatch,
                path.string() + ": " + std::to_string(rows) +
                    " rows, manifest declares " + std::to_string(*expected_rows));
  }
  ProjectedPoints out;
  out.source = Source::kPrecomputed;
  out.coords.reserve(rows);
  for (int r = 0; r < rows; ++r) {
    const Point2 p{csv::ParseDouble(table.rows[r][cx], table, r, cx),
                   csv::ParseDouble(table.rows[r][cy], table, r, cy)};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::kParse, path.string() + ": non-finite coordinate in row " +
                                         std::to_string(r + 1));
    }
    out.coords.push_back(p);
  }
  return out;
}

void SavePrecomputed(const std::filesystem::path& path,
                     std::span<const Point2> coords) {
  std::string text = "x,y\n";
  for (const Point2& p : coords) {
    text += csv::FormatDouble(p.x) + "," + csv::FormatDouble(p.y) + "\n";
  }
  csv::WriteText(path, text);
}

nlohmann::json MetadataJson(const ProjectedPoints& points, const std::string& feature_set) {
  if (points.source == Source::kPrecomputed) {
    return {{"source", "precomputed"}, {"standardized", points.standardized}};
  }
  return {{"source", "tsne"},
          {"seed", points.seed},
          {"standardized", points.standardized},
          {"feature_set", feature_set}};
}

}  // namespace oodx::projection
