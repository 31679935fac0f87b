// Copyright 2026 The CenterTrack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "centertrack/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "centertrack/random.hpp"

namespace centertrack {

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

GradientCheck check_gradient(const LossFunction& f, std::span<const double> x, double h) {
  const LossValue base = f(x);
  if (base.gradient.size() != x.size()) {
    throw std::invalid_argument("check_gradient: gradient size does not match input size");
  }
  std::vector<double> probe(x.begin(), x.end());
  GradientCheck out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe).value;
    probe[i] = x[i] - h;
    const double down = f(probe).value;
    probe[i] = x[i];
    const double numeric = (up - down) / (2.0 * h);
    out.max_relative_error = std::max(out.max_relative_error, relative_error(base.gradient[i], numeric));
    ++out.coordinates;
  }
  return out;
}

namespace {

void record(LossCheckSummary& s, const GradientCheck& g, double tol) {
  ++s.trials;
  s.worst_relative_error = std::max(s.worst_relative_error, g.max_relative_error);
  if (!(g.max_relative_error <= tol)) ++s.failures;
}

}  // namespace

LossCheckReport run_loss_checks(const LossCheckOptions& o) {
  Rng rng(o.seed);
  LossCheckReport report;
  for (std::size_t t = 0; t < o.trials; ++t) {
    // Focal: a small map with a few exact-1 peaks and soft negatives.
    const std::size_t n = 8 + rng.below(25);
    std::vector<double> pred(n), target(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = rng.uniform(0.05, 0.95);
      target[i] = rng.bernoulli(0.2) ? 1.0 : rng.uniform(0.0, 0.9);
    }
    const LossFunction focal = [&](std::span<const double> p) {
      return focal_loss(p, target, o.focal_alpha, o.focal_beta);
    };
    record(report.focal, check_gradient(focal, pred, o.step), o.rel_tolerance);

    // L1: random mask over cells of `channels` values each.
    const std::size_t cells = 2 + rng.below(8);
    const std::size_t channels = 1 + rng.below(kRegressionChannels);
    std::vector<double> rp(cells * channels), rt(cells * channels);
    std::vector<std::uint8_t> mask(cells);
    for (std::size_t c = 0; c < cells; ++c) mask[c] = rng.bernoulli(0.6) ? 1 : 0;
    for (std::size_t i = 0; i < rp.size(); ++i) {
      rt[i] = rng.uniform(-3.0, 3.0);
      const double mag = rng.uniform(1e-3, 2.0);
      rp[i] = rt[i] + (rng.bernoulli(0.5) ? mag : -mag);
    }
    const LossFunction l1 = [&](std::span<const double> p) { return l1_masked(p, rt, mask, channels); };
    record(report.l1, check_gradient(l1, rp, o.step), o.rel_tolerance);

    // BCE on one score.
    const double score_target_value = rng.uniform();
    const std::vector<double> score{rng.uniform(0.05, 0.95)};
    const LossFunction bce = [&](std::span<const double> p) { return score_bce(p[0], score_target_value); };
    record(report.bce, check_gradient(bce, score, o.step), o.rel_tolerance);
  }
  return report;
}

}  // namespace centertrack
