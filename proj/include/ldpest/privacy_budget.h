// Copyright 2026 The ldpest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDPEST_PRIVACY_BUDGET_H_
#define LDPEST_PRIVACY_BUDGET_H_

#include <string>

namespace ldpest {

// Privacy level epsilon in nats, epsilon >= 0. Caches e^epsilon since every
// mechanism and decoder needs it.
class PrivacyBudget {
 public:
  // Throws std::invalid_argument if epsilon is negative or non-finite.
  explicit PrivacyBudget(double epsilon);

  double epsilon() const { return epsilon_; }
  double exp_epsilon() const { return exp_epsilon_; }
  double exp_half_epsilon() const { return exp_half_epsilon_; }

 private:
  double epsilon_;
  double exp_epsilon_;
  double exp_half_epsilon_;
};

// Parses "0.5" or the shorthand "lnK" (e.g. "ln8" -> ln 8). Throws
// std::invalid_argument on malformed input. Experiment grids are most
// natural in ln-space, so both spellings are accepted wherever an epsilon
// appears in a flag or config file.
double ParseEpsilon(const std::string& text);

}  // namespace ldpest

#endif  // LDPEST_PRIVACY_BUDGET_H_
