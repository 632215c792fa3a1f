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

#include "mdiqm/game.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mdiqm/errors.hpp"
#include "mdiqm/rng.hpp"
#include "textutil.hpp"

namespace mdiqm {
namespace {

using Dist = std::array<double, 3>;

std::array<std::array<Dist, 4>, 4> all_distributions(const Channel& n,
                                                     const BsmModel& bsm) {
  std::array<std::array<Dist, 4>, 4> dist;
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      dist[x][y] = outcome_distribution(n, bsm, static_cast<StateLabel>(x),
                                        static_cast<StateLabel>(y));
    }
  }
  return dist;
}

std::string cell_name(int x, int y) {
  return std::string("(") + to_char(static_cast<StateLabel>(x)) + "," +
         to_char(static_cast<StateLabel>(y)) + ")";
}

// Inverse-CDF binomial draw; linear scan is fine at the per-cell sizes
// bootstrap is meant for.  (1-p)^n underflows long before the per-cell
// sizes get interesting, so the unrepresentable lower tail (total mass
// below double resolution) is skipped in log space first.
std::int64_t binomial_draw(Rng& rng, std::int64_t n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const double u = rng.next_double();
  const double ratio = p / (1.0 - p);
  const double log_ratio = std::log(ratio);
  constexpr double kLogTiny = -700.0;  // exp() of this is still normal

  double log_pmf = static_cast<double>(n) * std::log1p(-p);
  std::int64_t k = 0;
  while (log_pmf < kLogTiny && k < n) {
    log_pmf += log_ratio + std::log(static_cast<double>(n - k)) -
               std::log(static_cast<double>(k + 1));
    ++k;
  }
  double pmf = std::exp(log_pmf);
  double cdf = pmf;
  while (cdf < u && k < n) {
    pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
    cdf += pmf;
    ++k;
  }
  return k;
}

struct CellProb {
  double p[3];
  std::int64_t total;
};

}  // namespace

std::int64_t& Tally::at(StateLabel x, StateLabel y, Outcome b) {
  return counts[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]
               [static_cast<std::size_t>(b)];
}

std::int64_t Tally::at(StateLabel x, StateLabel y, Outcome b) const {
  return counts[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]
               [static_cast<std::size_t>(b)];
}

std::int64_t Tally::cell_total(StateLabel x, StateLabel y) const {
  const auto& cell =
      counts[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
  return cell[0] + cell[1] + cell[2];
}

std::int64_t Tally::detected_total() const {
  std::int64_t total = 0;
  for (const auto& row : counts) {
    for (const auto& cell : row) {
      total += cell[0] + cell[1] + cell[2];
    }
  }
  return total;
}

std::array<double, 3> outcome_distribution(const Channel& n,
                                           const BsmModel& bsm, StateLabel x,
                                           StateLabel y) {
  const CMat stored = n.apply(prepared_state(x));
  const CMat joint = tensor_product(stored, prepared_state(y));

  std::array<double, 3> p{};
  for (int b = 0; b < kNumOutcomes; ++b) {
    const CMat& element = bsm.element(static_cast<Outcome>(b));
    p[static_cast<std::size_t>(b)] =
        std::max(0.0, (element * joint).trace().real());
  }
  return p;
}

double exact_witness(const Channel& n, const BsmModel& bsm) {
  double w = 0.0;
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      const auto xl = static_cast<StateLabel>(x);
      const auto yl = static_cast<StateLabel>(y);
      const auto d = outcome_distribution(n, bsm, xl, yl);
      w += d[0] * payoff(Outcome::Plus, xl, yl) +
           d[1] * payoff(Outcome::Minus, xl, yl);
    }
  }
  return w;
}

Tally simulate_rounds(const Channel& n, const BsmModel& bsm,
                      std::int64_t n_rounds, std::uint64_t seed,
                      const SimulateOptions& options) {
  if (n_rounds < 1) {
    throw ConfigError("round count must be at least 1");
  }
  if (!(options.detection_efficiency >= 0.0 &&
        options.detection_efficiency <= 1.0)) {
    throw ConfigError("detection efficiency must lie in [0, 1]");
  }
  if (options.workers < 1) {
    throw ConfigError("worker count must be at least 1");
  }

  const auto dist = all_distributions(n, bsm);
  const double eff = options.detection_efficiency;
  const bool lossy = eff < 1.0;

  using Counts = std::array<std::array<std::array<std::int64_t, 3>, 4>, 4>;

  const auto run_shard = [&](std::int64_t lo, std::int64_t hi, Counts& out) {
    for (std::int64_t i = lo; i < hi; ++i) {
      Rng rng =
          Rng::substream(seed, RngDomain::Game, static_cast<std::uint64_t>(i));
      const auto x = static_cast<std::size_t>(rng.next_index(4));
      const auto y = static_cast<std::size_t>(rng.next_index(4));
      if (lossy && !rng.next_bernoulli(eff)) continue;
      const double u = rng.next_double();
      const Dist& d = dist[x][y];
      std::size_t b = 2;
      if (u < d[0]) {
        b = 0;
      } else if (u < d[0] + d[1]) {
        b = 1;
      }
      ++out[x][y][b];
    }
  };

  Tally tally;
  tally.seed = seed;
  tally.rounds_attempted = n_rounds;

  const int workers =
      static_cast<int>(std::min<std::int64_t>(options.workers, n_rounds));
  if (workers == 1) {
    run_shard(0, n_rounds, tally.counts);
    return tally;
  }

  std::vector<Counts> partial(static_cast<std::size_t>(workers));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (n_rounds + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = static_cast<std::int64_t>(w) * chunk;
    const std::int64_t hi = std::min<std::int64_t>(lo + chunk, n_rounds);
    partial[static_cast<std::size_t>(w)] = Counts{};
    if (lo >= hi) continue;
    threads.emplace_back(run_shard, lo, hi,
                         std::ref(partial[static_cast<std::size_t>(w)]));
  }
  for (auto& t : threads) t.join();

  for (const Counts& c : partial) {
    for (std::size_t x = 0; x < 4; ++x) {
      for (std::size_t y = 0; y < 4; ++y) {
        for (std::size_t b = 0; b < 3; ++b) {
          tally.counts[x][y][b] += c[x][y][b];
        }
      }
    }
  }
  return tally;
}

WitnessResult witness_estimate(const Tally& tally,
                               const EstimateOptions& options) {
  std::array<std::array<CellProb, 4>, 4> cells;
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      const auto& c =
          tally.counts[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
      const std::int64_t total = c[0] + c[1] + c[2];
      if (total == 0) {
        throw DataError("insufficient data: no detected events in cell " +
                        cell_name(x, y));
      }
      CellProb& cp = cells[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
      cp.total = total;
      for (int b = 0; b < 3; ++b) {
        cp.p[b] = static_cast<double>(c[static_cast<std::size_t>(b)]) /
                  static_cast<double>(total);
      }
    }
  }

  WitnessResult result;
  result.rounds_used = tally.detected_total();

  double value = 0.0;
  double variance = 0.0;
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      const auto xl = static_cast<StateLabel>(x);
      const auto yl = static_cast<StateLabel>(y);
      const CellProb& cp =
          cells[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
      double mean = 0.0;
      double second = 0.0;
      for (int b = 0; b < 3; ++b) {
        const double w = payoff(static_cast<Outcome>(b), xl, yl);
        mean += w * cp.p[b];
        second += w * w * cp.p[b];
      }
      value += mean;
      // Delta-method variance of the per-cell payoff mean under a
      // multinomial with the observed frequencies.
      variance += (second - mean * mean) / static_cast<double>(cp.total);
    }
  }
  result.value = value;

  if (options.method == ErrorMethod::Delta) {
    result.std_error = std::sqrt(std::max(0.0, variance));
    return result;
  }

  if (options.bootstrap_resamples < 2) {
    throw ConfigError("bootstrap needs at least 2 resamples");
  }
  const std::uint64_t seed = options.bootstrap_seed.value_or(tally.seed);
  const int resamples = options.bootstrap_resamples;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int r = 0; r < resamples; ++r) {
    Rng rng = Rng::substream(seed, RngDomain::Bootstrap,
                             static_cast<std::uint64_t>(r));
    double w_star = 0.0;
    for (int x = 0; x < 4; ++x) {
      for (int y = 0; y < 4; ++y) {
        const auto xl = static_cast<StateLabel>(x);
        const auto yl = static_cast<StateLabel>(y);
        const CellProb& cp =
            cells[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
        const std::int64_t total = cp.total;
        const std::int64_t c_plus = binomial_draw(rng, total, cp.p[0]);
        const double rest = 1.0 - cp.p[0];
        const double p_minus = rest > 0.0 ? cp.p[1] / rest : 0.0;
        const std::int64_t c_minus =
            binomial_draw(rng, total - c_plus, p_minus);
        const double inv = 1.0 / static_cast<double>(total);
        w_star += payoff(Outcome::Plus, xl, yl) *
                      static_cast<double>(c_plus) * inv +
                  payoff(Outcome::Minus, xl, yl) *
                      static_cast<double>(c_minus) * inv;
      }
    }
    sum += w_star;
    sum_sq += w_star * w_star;
  }
  const double nres = static_cast<double>(resamples);
  const double mean = sum / nres;
  result.std_error =
      std::sqrt(std::max(0.0, (sum_sq - nres * mean * mean) / (nres - 1.0)));
  return result;
}

void save_tally_csv(const std::string& path, const Tally& tally) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write tally file: " + path);
  }
  out << "x,y,b,count\n";
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      for (int b = 0; b < 3; ++b) {
        const std::int64_t c =
            tally.counts[static_cast<std::size_t>(x)]
                        [static_cast<std::size_t>(y)][static_cast<std::size_t>(b)];
        if (c == 0) continue;
        out << to_char(static_cast<StateLabel>(x)) << ','
            << to_char(static_cast<StateLabel>(y)) << ','
            << to_char(static_cast<Outcome>(b)) << ',' << c << '\n';
      }
    }
  }
}

Tally load_tally_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open tally file: " + path);
  }
  Tally tally;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "x,y,b,count") {
        throw DataError("tally file " + path +
                        " line 1: expected header x,y,b,count");
      }
      continue;
    }
    if (line.empty()) continue;

    const std::string where =
        "tally file " + path + " line " + std::to_string(line_no);
    std::array<std::string, 4> field;
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      const std::size_t comma = line.find(',', start);
      if (f < 3) {
        if (comma == std::string::npos) {
          throw DataError(where + ": expected 4 comma-separated fields");
        }
        field[static_cast<std::size_t>(f)] = line.substr(start, comma - start);
        start = comma + 1;
      } else {
        if (comma != std::string::npos) {
          throw DataError(where + ": expected 4 comma-separated fields");
        }
        field[3] = line.substr(start);
      }
    }
    if (field[0].size() != 1 || field[1].size() != 1 || field[2].size() != 1) {
      throw DataError(where + ": labels must be single characters");
    }

    StateLabel x;
    StateLabel y;
    Outcome b;
    try {
      x = state_label_from_char(field[0][0]);
      y = state_label_from_char(field[1][0]);
      b = outcome_from_char(field[2][0]);
    } catch (const std::exception& e) {
      throw DataError(where + ": " + e.what());
    }

    std::int64_t count = 0;
    const char* first = field[3].data();
    const char* last = first + field[3].size();
    const auto parsed = std::from_chars(first, last, count);
    if (parsed.ec != std::errc() || parsed.ptr != last || count < 0) {
      throw DataError(where + ": count must be a nonnegative integer");
    }
    tally.at(x, y, b) += count;
  }
  if (line_no == 0) {
    throw DataError("tally file " + path + " is empty");
  }
  tally.rounds_attempted = tally.detected_total();
  return tally;
}

void save_tally_meta(const std::string& path, const Tally& tally,
                     const std::string& channel_name, double lambda,
                     double detection_efficiency) {
  nlohmann::json doc;
  doc["channel"] = channel_name;
  doc["lambda"] = lambda;
  doc["detection_efficiency"] = detection_efficiency;
  doc["rounds_attempted"] = tally.rounds_attempted;
  doc["seed"] = tally.seed;

  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write tally metadata: " + path);
  }
  out << doc.dump(2) << '\n';
}

void save_witness_json(const std::string& path, const WitnessResult& result) {
  nlohmann::json doc;
  doc["value"] = result.value;
  doc["std_error"] = result.std_error;
  doc["rounds_used"] = result.rounds_used;

  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write witness result: " + path);
  }
  out << doc.dump(2) << '\n';
}

}  // namespace mdiqm
