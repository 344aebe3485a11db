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

#include "ldpest/privacy_budget.h"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ldpest {

PrivacyBudget::PrivacyBudget(double epsilon)
    : epsilon_(epsilon),
      exp_epsilon_(std::exp(epsilon)),
      exp_half_epsilon_(std::exp(epsilon / 2.0)) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw std::invalid_argument("PrivacyBudget: epsilon must be finite and >= 0");
  }
}

double ParseEpsilon(const std::string& text) {
  if (text.empty()) {
    throw std::invalid_argument("epsilon: empty string");
  }
  const bool ln_form = text.size() > 2 && text[0] == 'l' && text[1] == 'n';
  const std::string number = ln_form ? text.substr(2) : text;
  char* end = nullptr;
  const double value = std::strtod(number.c_str(), &end);
  if (end == number.c_str() || *end != '\0' || !std::isfinite(value)) {
    throw std::invalid_argument("epsilon: cannot parse '" + text + "'");
  }
  if (ln_form) {
    if (value <= 0.0) {
      throw std::invalid_argument("epsilon: lnK requires K > 0 in '" + text + "'");
    }
    return std::log(value);
  }
  return value;
}

}  // namespace ldpest
