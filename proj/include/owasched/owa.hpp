#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "owasched/errors.hpp"
#include "owasched/rational.hpp"

namespace owasched {

// Ordered weighted averaging weights: v_1..v_K in [0,1] summing to 1. The
// weight position refers to cost rank, not scenario identity: v_1 multiplies
// the largest cost. Construction validates, so a live object is always sound.
struct OwaWeights {
  std::vector<Rational> v;

  explicit OwaWeights(std::vector<Rational> weights) : v(std::move(weights)) {
    if (v.empty()) throw PreconditionError("owa weights: need at least one entry");
    Rational sum;
    for (const auto& w : v) {
      if (w.is_negative() || w > Rational(1))
        throw PreconditionError("owa weights: entry " + w.str() + " outside [0,1]");
      sum += w;
    }
    if (sum != Rational(1))
      throw PreconditionError("owa weights: entries sum to " + sum.str() + ", expected 1");
  }

  int K() const { return static_cast<int>(v.size()); }
  bool nonincreasing() const { return std::is_sorted(v.rbegin(), v.rend()); }
};

inline OwaWeights preset_maximum(int K) {
  std::vector<Rational> v(std::max(K, 0));
  if (K >= 1) v[0] = Rational(1);
  return OwaWeights(std::move(v));
}

inline OwaWeights preset_minimum(int K) {
  std::vector<Rational> v(std::max(K, 0));
  if (K >= 1) v[K - 1] = Rational(1);
  return OwaWeights(std::move(v));
}

inline OwaWeights preset_average(int K) {
  if (K < 1) throw PreconditionError("owa preset: need at least one scenario");
  return OwaWeights(std::vector<Rational>(K, Rational(1, K)));
}

// The k-th largest cost, 1-based: v_k = 1.
inline OwaWeights preset_quantile(int K, int k) {
  if (k < 1 || k > K)
    throw PreconditionError("owa preset: quantile index " + std::to_string(k) +
                            " outside [1," + std::to_string(K) + "]");
  std::vector<Rational> v(K);
  v[k - 1] = Rational(1);
  return OwaWeights(std::move(v));
}

inline OwaWeights preset_median(int K) { return preset_quantile(K, K / 2 + 1); }

// v_1 = alpha, v_K = 1-alpha; collapses to (1) when K = 1.
inline OwaWeights preset_hurwicz(int K, const Rational& alpha) {
  if (alpha.is_negative() || alpha > Rational(1))
    throw PreconditionError("owa preset: hurwicz alpha " + alpha.str() + " outside [0,1]");
  if (K < 1) throw PreconditionError("owa preset: need at least one scenario");
  std::vector<Rational> v(K);
  if (K == 1) {
    v[0] = Rational(1);
  } else {
    v[0] = alpha;
    v[K - 1] = Rational(1) - alpha;
  }
  return OwaWeights(std::move(v));
}

inline Rational owa_value(const OwaWeights& w, std::vector<Rational> f) {
  if (static_cast<int>(f.size()) != w.K())
    throw PreconditionError("owa_value: got " + std::to_string(f.size()) + " costs for " +
                            std::to_string(w.K()) + " weights");
  std::sort(f.begin(), f.end(), std::greater<>());
  Rational total;
  for (int i = 0; i < w.K(); ++i) total += w.v[i] * f[i];
  return total;
}

struct DeviationWeights {
  std::vector<Rational> v_prime;  // v'_i = v_i - v_{i+1}, v'_K = v_K
  bool all_nonnegative = true;    // holds exactly when v is nonincreasing
};

inline DeviationWeights deviation_weights(const OwaWeights& w) {
  DeviationWeights out;
  out.v_prime.resize(w.K());
  for (int i = 0; i < w.K(); ++i) {
    out.v_prime[i] = (i + 1 < w.K()) ? w.v[i] - w.v[i + 1] : w.v[i];
    if (out.v_prime[i].is_negative()) out.all_nonnegative = false;
  }
  return out;
}

// Sum of the k largest entries (the cumulative ordered cost), 1-based k.
inline Rational theta_k(std::vector<Rational> f, int k) {
  if (k < 1 || k > static_cast<int>(f.size()))
    throw PreconditionError("theta_k: index " + std::to_string(k) + " outside [1," +
                            std::to_string(f.size()) + "]");
  std::partial_sort(f.begin(), f.begin() + k, f.end(), std::greater<>());
  Rational total;
  for (int i = 0; i < k; ++i) total += f[i];
  return total;
}

}  // namespace owasched
