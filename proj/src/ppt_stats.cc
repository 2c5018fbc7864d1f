// Copyright 2026 The Phonaudit Authors.
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

#include "phonaudit/ppt_stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <boost/multiprecision/cpp_int.hpp>

#include "phonaudit/errors.h"

namespace phonaudit {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr int kExactLimit = 64;

// num / 2^shift.
struct Dyadic {
  cpp_int num;
  int64_t shift = 0;
};

// Every finite double is a dyadic rational.
Dyadic ToDyadic(double x) {
  Dyadic d;
  if (x == 0.0) return d;
  int exp = 0;
  double mantissa = std::frexp(x, &exp);  // x = mantissa * 2^exp
  int64_t scaled = static_cast<int64_t>(std::ldexp(mantissa, 53));
  d.num = scaled;
  d.shift = 53 - exp;
  while (d.shift > 0 && (d.num & 1) == 0) {
    d.num >>= 1;
    --d.shift;
  }
  if (d.shift < 0) {
    d.num <<= static_cast<unsigned>(-d.shift);
    d.shift = 0;
  }
  return d;
}

// a <= b
bool LessEqual(const Dyadic& a, const Dyadic& b) {
  int64_t s = std::max(a.shift, b.shift);
  cpp_int lhs = a.num << static_cast<unsigned>(s - a.shift);
  cpp_int rhs = b.num << static_cast<unsigned>(s - b.shift);
  return lhs <= rhs;
}

double ToDouble(const Dyadic& d) {
  cpp_rational r(d.num, cpp_int(1) << static_cast<unsigned>(d.shift));
  return r.convert_to<double>();
}

// Exact running CDF of Binomial(n, p): Next() adds the pmf of the next
// success count. With p = a / 2^e, pmf(i) = C(n,i) a^i (2^e - a)^(n-i) /
// 2^(e n).
class ExactCdf {
 public:
  ExactCdf(int n, double p) : n_(n) {
    Dyadic dp = ToDyadic(p);
    a_ = dp.num;
    b_ = (cpp_int(1) << static_cast<unsigned>(dp.shift)) - dp.num;
    shift_ = dp.shift * n;
    binom_ = 1;
  }

  // Cumulative value after adding pmf(next_).
  const Dyadic& Next() {
    const int i = next_++;
    if (i > 0) binom_ = binom_ * (n_ - i + 1) / i;
    cpp_int term = binom_ * pow(a_, static_cast<unsigned>(i)) *
                   pow(b_, static_cast<unsigned>(n_ - i));
    sum_.num += term;
    sum_.shift = shift_;
    return sum_;
  }

 private:
  int n_;
  int next_ = 0;
  cpp_int a_, b_, binom_;
  int64_t shift_ = 0;
  Dyadic sum_;
};

double LogSpaceCdf(int k, int n, double p) {
  if (p == 0.0) return 1.0;
  if (p == 1.0) return k >= n ? 1.0 : 0.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_nf = std::lgamma(n + 1.0);
  std::vector<double> terms;
  terms.reserve(k + 1);
  double peak = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= k; ++i) {
    double t = log_nf - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
               i * log_p + (n - i) * log_q;
    terms.push_back(t);
    peak = std::max(peak, t);
  }
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - peak);
  return std::min(1.0, std::exp(peak + std::log(acc)));
}

void CheckArgs(int k, int n, double p) {
  if (n < 1) throw Error(ErrorCode::kDomainError, "n must be positive");
  if (k < -1 || k > n) {
    throw Error(ErrorCode::kDomainError,
                "k=" + std::to_string(k) + " outside [-1, " +
                    std::to_string(n) + "]");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kDomainError, "p must be in [0, 1]");
  }
}

}  // namespace

void TestConfig::Validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kDomainError, "alpha must be in (0, 1)");
  }
  if (!(theta_null > 0.0 && theta_null < 1.0) ||
      !(theta_alt > 0.0 && theta_alt < 1.0)) {
    throw Error(ErrorCode::kDomainError, "theta values must be in (0, 1)");
  }
  if (theta_alt > theta_null) {
    throw Error(ErrorCode::kDomainError,
                "theta_alt must not exceed theta_null (one-sided test)");
  }
  if (sample_size < 1 || min_decided < 0 || min_decided > sample_size) {
    throw Error(ErrorCode::kDomainError,
                "need sample_size >= 1 and 0 <= min_decided <= sample_size");
  }
}

double BinomCdf(int k, int n, double p) {
  CheckArgs(k, n, p);
  if (k == -1) return 0.0;
  if (k == n) return 1.0;
  if (n > kExactLimit) return LogSpaceCdf(k, n, p);
  ExactCdf cdf(n, p);
  const Dyadic* value = nullptr;
  for (int i = 0; i <= k; ++i) value = &cdf.Next();
  return ToDouble(*value);
}

int CriticalValue(int n, double alpha, double theta_null) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kDomainError, "alpha must be in (0, 1)");
  }
  CheckArgs(0, n, theta_null);
  if (n > kExactLimit) {
    int k = -1;
    while (k + 1 < n && BinomCdf(k + 1, n, theta_null) <= alpha) ++k;
    return k;
  }
  const Dyadic bound = ToDyadic(alpha);
  ExactCdf cdf(n, theta_null);
  int k = -1;
  while (k + 1 <= n && LessEqual(cdf.Next(), bound)) ++k;
  return k;
}

PowerRow PowerAt(const TestConfig& config, int n) {
  PowerRow row;
  row.n = n;
  row.k = CriticalValue(n, config.alpha, config.theta_null);
  row.power = BinomCdf(row.k, n, config.theta_alt);
  row.type1 = BinomCdf(row.k, n, config.theta_null);
  return row;
}

std::vector<PowerRow> SampleSizeTable(const TestConfig& config,
                                      std::span<const int> n_values) {
  config.Validate();
  if (n_values.empty()) {
    throw Error(ErrorCode::kDomainError, "no sample sizes requested");
  }
  std::vector<PowerRow> rows;
  rows.reserve(n_values.size());
  for (int n : n_values) rows.push_back(PowerAt(config, n));
  return rows;
}

void PreferenceCounts::Add(ResolvedPreference preference) {
  switch (preference) {
    case ResolvedPreference::kGold: ++gold_preferred; break;
    case ResolvedPreference::kModel: ++model_preferred; break;
    case ResolvedPreference::kTieGood: ++abstain_good; break;
    case ResolvedPreference::kTiePoor: ++abstain_poor; break;
  }
}

std::string_view DecisionName(Decision decision) {
  return decision == Decision::kFlag ? "flag" : "pass";
}

Verdict PptVerdict(const PreferenceCounts& counts, const TestConfig& config,
                   std::string language_code) {
  config.Validate();
  if (counts.gold_preferred < 0 || counts.model_preferred < 0 ||
      counts.abstain_good < 0 || counts.abstain_poor < 0) {
    throw Error(ErrorCode::kDomainError, "counts must be non-negative");
  }
  if (counts.decided() < config.min_decided) {
    throw Error(ErrorCode::kInsufficientAnnotations,
                (language_code.empty() ? "" : language_code + ": ") +
                    std::to_string(counts.decided()) +
                    " forced choices, need " +
                    std::to_string(config.min_decided));
  }
  Verdict v;
  v.language_code = std::move(language_code);
  v.counts = counts;
  v.n_annotated = counts.total();
  v.abstentions = counts.abstain_good + counts.abstain_poor;
  v.n_trials = std::max(config.sample_size, v.n_annotated);
  v.critical_value = CriticalValue(v.n_trials, config.alpha, config.theta_null);
  v.decision = counts.gold_preferred <= v.critical_value ? Decision::kFlag
                                                         : Decision::kPass;
  v.config = config;
  return v;
}

double Agreement(std::span<const PreferenceRecord> a,
                 std::span<const PreferenceRecord> b) {
  auto index = [](std::span<const PreferenceRecord> records, const char* side) {
    std::map<std::string, Choice> out;
    for (const auto& r : records) {
      if (!out.emplace(r.task_id, r.choice).second) {
        throw Error(ErrorCode::kMismatchedItems,
                    std::string("duplicate task '") + r.task_id + "' in " +
                        side);
      }
    }
    return out;
  };
  auto left = index(a, "first record set");
  auto right = index(b, "second record set");
  if (left.empty()) throw Error(ErrorCode::kMismatchedItems, "no items");
  if (left.size() != right.size()) {
    throw Error(ErrorCode::kMismatchedItems, "record sets differ in size");
  }
  int same = 0;
  for (const auto& [task, choice] : left) {
    auto it = right.find(task);
    if (it == right.end()) {
      throw Error(ErrorCode::kMismatchedItems,
                  "task '" + task + "' missing from second record set");
    }
    if (it->second == choice) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(left.size());
}

}  // namespace phonaudit
