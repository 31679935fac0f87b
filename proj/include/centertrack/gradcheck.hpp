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

/// \file
/// \brief Central finite-difference checks of analytic loss gradients.
#ifndef CENTERTRACK_GRADCHECK_HPP_
#define CENTERTRACK_GRADCHECK_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "centertrack/losses.hpp"

namespace centertrack {

/// |a - n| / max(|a|, |n|, floor). The floor keeps near-zero gradients from
/// turning finite-difference round-off into large ratios.
double relative_error(double analytic, double numeric, double floor = 1e-6);

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t coordinates = 0;
};

using LossFunction = std::function<LossValue(std::span<const double>)>;

/// Compares f(x).gradient against (f(x + h e_i) - f(x - h e_i)) / 2h for every i.
GradientCheck check_gradient(const LossFunction& f, std::span<const double> x, double h);

struct LossCheckOptions {
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  double step = 1e-5;
  double rel_tolerance = 1e-4;
  double focal_alpha = kFocalAlpha;
  double focal_beta = kFocalBeta;
};

struct LossCheckSummary {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst_relative_error = 0.0;
  bool passed() const { return failures == 0; }
};

struct LossCheckReport {
  LossCheckSummary focal;
  LossCheckSummary l1;
  LossCheckSummary bce;
  bool passed() const { return focal.passed() && l1.passed() && bce.passed(); }
};

/**
 * Randomized gradient checks of the three losses. Inputs keep away from the
 * points where a loss is not differentiable: predictions lie in
 * [0.05, 0.95] and L1 residuals are at least 1e-3 in magnitude.
 */
LossCheckReport run_loss_checks(const LossCheckOptions& options);

}  // namespace centertrack

#endif  // CENTERTRACK_GRADCHECK_HPP_
