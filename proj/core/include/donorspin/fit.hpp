// Copyright 2026 The donorspin Authors
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

#ifndef DONORSPIN_FIT_HPP
#define DONORSPIN_FIT_HPP

#include <vector>

namespace donorspin {

enum class DecayModel { single_exponential, double_exponential };

/// y(t) = sum_k amplitude_k exp(-rate_k t) [+ offset]
struct DecayFit {
  DecayModel model = DecayModel::single_exponential;
  std::vector<double> rates;  // 1/T, ascending
  std::vector<double> amplitudes;
  double offset = 0.0;
  double residual_rms = 0.0;
  bool converged = false;

  double evaluate(double t) const;
  /// 1/rate of the slowest component.
  double lifetime() const;
};

struct FitOptions {
  bool with_offset = false;
  int restarts = 12;  // starting rates per component, log-spaced
};

/// Least-squares fit by Levenberg-Marquardt over log-rates, restarted from a
/// fixed grid of initial rates. Throws std::invalid_argument for fewer than
/// 10 points, mismatched lengths or a non-increasing time grid.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y, DecayModel model,
                   const FitOptions& options = {});

/// Double exponential when it lowers the residual by at least `improvement`.
DecayFit fit_decay_auto(const std::vector<double>& t, const std::vector<double>& y,
                        double improvement = 4.0, const FitOptions& options = {});

/// Window starting at 0 spanning `lifetimes` expected lifetimes.
std::vector<double> fit_window(double expected_lifetime, int samples = 200, double lifetimes = 5.0);

}  // namespace donorspin

#endif
