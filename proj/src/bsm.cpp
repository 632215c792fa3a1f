// Copyright 2026 The mdiqm Authors
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

#include "mdiqm/bsm.hpp"

#include "mdiqm/errors.hpp"

namespace mdiqm {
namespace {

// Payoff entries stored as twice their value so the table is exact
// integers.  Row = x in (H,V,D,R), column = y in (H,V,D,R).
constexpr int kTwicePlus[4][4] = {
    {0, -1, -1, 1},
    {-1, 0, -1, 1},
    {-1, -1, 2, 0},
    {1, 1, 0, -2},
};

constexpr int kTwiceMinus[4][4] = {
    {0, -1, 1, -1},
    {-1, 0, 1, -1},
    {1, 1, -2, 0},
    {-1, -1, 0, 2},
};

}  // namespace

char to_char(Outcome b) {
  switch (b) {
    case Outcome::Plus:
      return '+';
    case Outcome::Minus:
      return '-';
    case Outcome::Zero:
      return '0';
  }
  throw ConfigError("invalid outcome");
}

Outcome outcome_from_char(char c) {
  switch (c) {
    case '+':
      return Outcome::Plus;
    case '-':
      return Outcome::Minus;
    case '0':
      return Outcome::Zero;
    default:
      throw DataError(std::string("unknown outcome label '") + c +
                      "' (expected +, - or 0)");
  }
}

double payoff(Outcome b, StateLabel x, StateLabel y) {
  const int r = static_cast<int>(x);
  const int c = static_cast<int>(y);
  switch (b) {
    case Outcome::Plus:
      return 0.5 * kTwicePlus[r][c];
    case Outcome::Minus:
      return 0.5 * kTwiceMinus[r][c];
    case Outcome::Zero:
      return 0.0;
  }
  throw ConfigError("invalid outcome");
}

double payoff_checksum() {
  int twice = 0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      twice += kTwicePlus[r][c] + kTwiceMinus[r][c];
    }
  }
  return 0.5 * twice;
}

const CMat& BsmModel::element(Outcome b) const {
  switch (b) {
    case Outcome::Plus:
      return s_plus;
    case Outcome::Minus:
      return s_minus;
    case Outcome::Zero:
      return s_zero;
  }
  throw ConfigError("invalid outcome");
}

BsmModel bsm_povm(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 0.5)) {
    throw ConfigError("bsm lambda must lie in [0, 1/2], got " +
                      std::to_string(lambda));
  }
  const CMat phi_plus = bell_state(BellLabel::PhiPlus);
  const CMat phi_minus = bell_state(BellLabel::PhiMinus);

  BsmModel model;
  model.lambda = lambda;
  model.s_plus = (1.0 - lambda) * phi_plus + lambda * phi_minus;
  model.s_minus = (1.0 - lambda) * phi_minus + lambda * phi_plus;
  // S0 = 1 - Phi+ - Phi- independent of lambda; computing it from the
  // model elements keeps completeness exact by construction.
  model.s_zero = CMat::identity(4) - model.s_plus - model.s_minus;
  return model;
}

double lambda_from_visibility(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError("visibility must lie in [0, 1], got " +
                      std::to_string(v));
  }
  return 0.5 * (1.0 - v * v);
}

double visibility_from_overlap(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("mode overlap must lie in [0, 1], got " +
                      std::to_string(alpha));
  }
  return alpha;
}

double orthogonal_fraction(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("mode overlap must lie in [0, 1], got " +
                      std::to_string(alpha));
  }
  return 1.0 - alpha * alpha;
}

}  // namespace mdiqm
