// Copyright 2026 The pmatch Authors
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

#include "pmatch/lp.hpp"

#include <stdexcept>

namespace pmatch {

std::optional<std::vector<Rational>> find_nonnegative_solution(const RationalMatrix& a,
                                                               const std::vector<Rational>& b) {
  const std::size_t m = a.size();
  if (b.size() != m) throw std::invalid_argument("row count mismatch");
  const std::size_t n = m == 0 ? 0 : a.front().size();
  // columns: n originals, m artificials, then the right-hand side
  const std::size_t width = n + m + 1;
  RationalMatrix t(m, std::vector<Rational>(width));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != n) throw std::invalid_argument("ragged matrix");
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = flip ? Rational(-a[i][j]) : a[i][j];
    t[i][n + i] = 1;
    t[i][width - 1] = flip ? Rational(-b[i]) : b[i];
    basis[i] = n + i;
  }
  // reduced costs of the objective: minimize the sum of artificials
  std::vector<Rational> cost(width);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[j] -= t[i][j];
    cost[width - 1] -= t[i][width - 1];
  }
  auto pivot = [&](std::size_t row, std::size_t col) {
    const Rational p = t[row][col];
    for (auto& x : t[row]) x /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || t[i][col] == 0) continue;
      const Rational f = t[i][col];
      for (std::size_t j = 0; j < width; ++j) {
        if (t[row][j] != 0) t[i][j] -= f * t[row][j];
      }
    }
    if (cost[col] != 0) {
      const Rational f = cost[col];
      for (std::size_t j = 0; j < width; ++j) {
        if (t[row][j] != 0) cost[j] -= f * t[row][j];
      }
    }
    basis[row] = col;
  };
  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      const Rational r = t[i][width - 1] / t[i][enter];
      if (leave == m || r < best || (r == best && basis[i] < basis[leave])) {
        leave = i;
        best = r;
      }
    }
    if (leave == m) break;  // cannot happen: the objective is bounded below by 0
    pivot(leave, enter);
  }
  if (cost[width - 1] != 0) return std::nullopt;
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) x[basis[i]] = t[i][width - 1];
  }
  return x;
}

FeasibilityResult solve_inequalities(const RationalMatrix& g, const std::vector<Rational>& h) {
  const std::size_t m = g.size();
  const std::size_t n = m == 0 ? 0 : g.front().size();
  // g x + s = h with slacks s >= 0
  RationalMatrix a(m, std::vector<Rational>(n + m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = g[i][j];
    a[i][n + i] = 1;
  }
  FeasibilityResult out;
  if (auto x = find_nonnegative_solution(a, h)) {
    out.feasible = true;
    out.point.assign(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(n));
    return out;
  }
  // g^T lambda - tau = 0, h^T lambda = -1, lambda, tau >= 0
  RationalMatrix f(n + 1, std::vector<Rational>(m + n));
  std::vector<Rational> rhs(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) f[j][i] = g[i][j];
    f[j][m + j] = -1;
  }
  for (std::size_t i = 0; i < m; ++i) f[n][i] = h[i];
  rhs[n] = -1;
  auto lambda = find_nonnegative_solution(f, rhs);
  if (!lambda) throw std::logic_error("neither a point nor a Farkas certificate was found");
  out.farkas.assign(lambda->begin(), lambda->begin() + static_cast<std::ptrdiff_t>(m));
  return out;
}

bool verify_point(const RationalMatrix& g, const std::vector<Rational>& h, const std::vector<Rational>& x) {
  for (const Rational& v : x) {
    if (v < 0) return false;
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    Rational lhs{0};
    for (std::size_t j = 0; j < x.size(); ++j) lhs += g[i][j] * x[j];
    if (lhs > h[i]) return false;
  }
  return true;
}

bool verify_farkas(const RationalMatrix& g, const std::vector<Rational>& h, const std::vector<Rational>& lambda) {
  if (lambda.size() != g.size()) return false;
  for (const Rational& v : lambda) {
    if (v < 0) return false;
  }
  const std::size_t n = g.empty() ? 0 : g.front().size();
  for (std::size_t j = 0; j < n; ++j) {
    Rational col{0};
    for (std::size_t i = 0; i < g.size(); ++i) col += lambda[i] * g[i][j];
    if (col < 0) return false;
  }
  Rational rhs{0};
  for (std::size_t i = 0; i < g.size(); ++i) rhs += lambda[i] * h[i];
  return rhs < 0;
}

}  // namespace pmatch
