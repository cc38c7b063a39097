#include "mspgw/psi.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace mspgw {

namespace {

Rational odd_double_factorial(int k) {
  // (2k+1)!!
  Rational r = 1;
  for (int i = 1; i <= 2 * k + 1; i += 2) r *= Rational(i);
  return r;
}

using Key = std::pair<int, std::vector<int>>;

Rational psi_rec(int g, std::vector<int> d, std::map<Key, Rational>& memo);

Rational psi_lookup(int g, std::vector<int> d, std::map<Key, Rational>& memo) {
  if (g < 0) return 0;
  int n = static_cast<int>(d.size());
  if (2 * g - 2 + n <= 0) return 0;  // unstable
  int dim = 3 * g - 3 + n;
  int sum = 0;
  for (int x : d) {
    if (x < 0) return 0;
    sum += x;
  }
  if (sum != dim) return 0;
  std::sort(d.begin(), d.end());
  Key key{g, d};
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  Rational v = psi_rec(g, d, memo);
  memo.emplace(std::move(key), v);
  return v;
}

Rational psi_rec(int g, std::vector<int> d, std::map<Key, Rational>& memo) {
  int n = static_cast<int>(d.size());
  if (g == 0 && n == 3) return 1;  // <tau_0^3>_0 = 1
  // string equation if some d_i = 0 and (g,n) != (0,3)
  for (int i = 0; i < n; ++i) {
    if (d[static_cast<size_t>(i)] == 0) {
      std::vector<int> rest;
      for (int j = 0; j < n; ++j)
        if (j != i) rest.push_back(d[static_cast<size_t>(j)]);
      Rational s = 0;
      for (size_t j = 0; j < rest.size(); ++j) {
        std::vector<int> r2 = rest;
        r2[j] -= 1;
        s += psi_lookup(g, r2, memo);
      }
      return s;
    }
  }
  // all d_i >= 1: apply the DVV recursion to the largest index
  std::sort(d.begin(), d.end());
  int k1 = d.back();  // tau_{k+1} with k = k1 - 1
  d.pop_back();
  int k = k1 - 1;
  std::vector<int>& rest = d;
  int m = static_cast<int>(rest.size());
  Rational total = 0;
  // sum over j: (2(d_j + k) + 1)!!/(2 d_j - 1)!! <tau_{d_j + k} ...>
  for (int j = 0; j < m; ++j) {
    std::vector<int> r2;
    for (int i = 0; i < m; ++i)
      if (i != j) r2.push_back(rest[static_cast<size_t>(i)]);
    r2.push_back(rest[static_cast<size_t>(j)] + k);
    Rational coeff = odd_double_factorial(rest[static_cast<size_t>(j)] + k) /
                     odd_double_factorial(rest[static_cast<size_t>(j)] - 1);
    total += coeff * psi_lookup(g, r2, memo);
  }
  // boundary terms: (1/2) sum_{a+b=k-1} (2a+1)!!(2b+1)!! [ nonseparating +
  // separating with ordered splits ]
  for (int a = 0; a <= k - 1; ++a) {
    int b = k - 1 - a;
    Rational coeff = Rational(1, 2) * odd_double_factorial(a) * odd_double_factorial(b);
    // nonseparating: genus g-1 with tau_a tau_b added
    {
      std::vector<int> r2 = rest;
      r2.push_back(a);
      r2.push_back(b);
      total += coeff * psi_lookup(g - 1, r2, memo);
    }
    // separating: ordered (g1, I) + (g2, J)
    for (int g1 = 0; g1 <= g; ++g1) {
      int g2 = g - g1;
      unsigned subsets = 1u << m;
      for (unsigned mask = 0; mask < subsets; ++mask) {
        std::vector<int> r1{a}, r2v{b};
        for (int i = 0; i < m; ++i)
          if (mask & (1u << i))
            r1.push_back(rest[static_cast<size_t>(i)]);
          else
            r2v.push_back(rest[static_cast<size_t>(i)]);
        total += coeff * psi_lookup(g1, r1, memo) * psi_lookup(g2, r2v, memo);
      }
    }
  }
  // genus-1 one-point anomaly: <tau_1>_1 = 1/24 from the central term
  if (g == 1 && m == 0 && k == 0) total += Rational(1, 8);
  Rational result = total / odd_double_factorial(k + 1);
  return result;
}

}  // namespace

Rational psi_integral(int g, std::vector<int> exponents) {
  if (g < 0 || g > 3) throw GenusUnsupported("psi_integral: genus must be 0..3");
  int n = static_cast<int>(exponents.size());
  if (2 * g - 2 + n <= 0)
    throw DimensionMismatch("psi_integral: unstable (g,n)");
  long sum = 0;
  for (int x : exponents) {
    if (x < 0) throw DimensionMismatch("psi_integral: negative exponent");
    sum += x;
  }
  if (sum != 3L * g - 3 + n)
    throw DimensionMismatch("psi_integral: exponents must sum to 3g-3+n");
  static std::map<Key, Rational> memo;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  return psi_lookup(g, std::move(exponents), memo);
}

}  // namespace mspgw
