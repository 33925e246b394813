#pragma once

// Shared generators and brute-force oracles for the test programs.

#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "bhk/graph.hpp"
#include "bhk/zlinalg.hpp"

namespace bhk::testing {

inline std::string padded(char prefix, std::size_t i) {
  const std::string digits = std::to_string(i);
  return prefix + std::string(digits.size() < 2 ? 2 - digits.size() : 0, '0') + digits;
}

/// Connected multigraph with 1..max_v vertices and 1..max_e edges; loops and
/// parallel edges appear with fair probability.
inline Multigraph random_connected(std::mt19937_64& rng, std::size_t max_v = 10,
                                   std::size_t max_e = 14) {
  std::uniform_int_distribution<std::size_t> nv(1, max_v);
  const std::size_t n = nv(rng);
  const std::size_t min_e = n == 1 ? 1 : n - 1;
  std::uniform_int_distribution<std::size_t> ne(min_e, std::max(min_e, max_e));
  const std::size_t m = ne(rng);

  Multigraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_vertex(padded('v', i));
  std::size_t e = 0;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    g.add_edge(padded('e', e++), padded('v', parent(rng)), padded('v', i));
  }
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  std::bernoulli_distribution loop(0.25);
  while (e < m) {
    const std::size_t a = any(rng);
    const std::size_t b = loop(rng) ? a : any(rng);
    g.add_edge(padded('e', e++), padded('v', a), padded('v', b));
  }
  return g;
}

/// One vertex "v" with petals u1..um and rays r1..rn.
inline Presentation rose_with_rays(std::size_t m, std::size_t n) {
  Presentation p;
  p.core.add_vertex("v");
  for (std::size_t i = 1; i <= m; ++i) p.core.add_edge("u" + std::to_string(i), "v", "v");
  for (std::size_t i = 1; i <= n; ++i) p.rays.push_back({"r" + std::to_string(i), "v"});
  return p;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows,
                               std::size_t cols, long lo, long hi) {
  std::uniform_int_distribution<long> entry(lo, hi);
  IntMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = entry(rng);
  return a;
}

/// Random unimodular matrix: a product of elementary operations.
inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
  IntMatrix u = IntMatrix::identity(n);
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<long> mult(-2, 2);
  for (int step = 0; step < 3 * static_cast<int>(n); ++step) {
    const std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    const long k = mult(rng);
    for (std::size_t c = 0; c < n; ++c) u(i, c) += k * u(j, c);
  }
  return u;
}

/// Determinantal divisors: d_k = gcd of all k x k minors. The invariant
/// factors are d_k / d_{k-1}. Exponential, for matrices up to 5 x 5.
inline std::vector<Integer> invariant_factors_by_minors(const IntMatrix& a) {
  const std::size_t n = std::min(a.rows(), a.cols());
  std::vector<Integer> divisors(n + 1, 0);
  divisors[0] = 1;
  auto subsets = [](std::size_t total, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
      if (cur.size() == k) {
        out.push_back(cur);
        return;
      }
      for (std::size_t i = start; i < total; ++i) {
        cur.push_back(i);
        self(self, i + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
    return out;
  };
  for (std::size_t k = 1; k <= n; ++k) {
    Integer g = 0;
    for (const auto& rs : subsets(a.rows(), k))
      for (const auto& cs : subsets(a.cols(), k)) {
        IntMatrix minor(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) minor(i, j) = a(rs[i], cs[j]);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), determinant(minor).get_mpz_t());
      }
    divisors[k] = g;
  }
  std::vector<Integer> factors;
  for (std::size_t k = 1; k <= n; ++k)
    factors.push_back(divisors[k] == 0 ? Integer(0) : Integer(divisors[k] / divisors[k - 1]));
  return factors;
}

}  // namespace bhk::testing
