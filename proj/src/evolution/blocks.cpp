#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cornu/evolution.hpp"

namespace cornu::evo {

namespace {

using Vec2r = std::array<double, 2>;

Vec2r chi(double s, const SpiralParams& params) {
  const double phase = 0.5 * params.a * s * s;
  const double inv_r = params.inverse_radius();
  return {-std::sin(phase) * inv_r, std::cos(phase) * inv_r};
}

double dot(const Vec2r& u, const Vec2r& v) { return u[0] * v[0] + u[1] * v[1]; }

Mat3 multiply(const Mat3& l, const Mat3& r) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += l[i][k] * r[k][j];
      out[i][j] = acc;
    }
  }
  return out;
}

// Checks the product M(s_0)...M(s_{k-1}) against the block pattern.
//
// Even k = 2n: top-left (-1)^n chi_1 (chi_2.chi_3)...(chi_{2n-2}.chi_{2n-1}) chi_{2n}^T,
//              bottom-right (-1)^n prod chi_{2m-1}.chi_{2m}.
// Odd k = 2n+1: top-right (-1)^n chi_1 prod chi_{2m}.chi_{2m+1},
//               bottom-left (-1)^{n+1} (prod chi_{2m-1}.chi_{2m}) chi_{2n+1}^T.
void check_product(const Mat3& p, const std::vector<Vec2r>& c, BlockReport& rep) {
  const std::size_t k = c.size();
  const std::size_t n = k / 2;
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  double zero = 0.0;
  double formula = 0.0;
  if (k % 2 == 0) {
    zero = std::max({std::abs(p[0][2]), std::abs(p[1][2]), std::abs(p[2][0]), std::abs(p[2][1])});
    double inner = 1.0;
    for (std::size_t m = 1; m + 1 < k; m += 2) inner *= dot(c[m], c[m + 1]);
    double corner = 1.0;
    for (std::size_t m = 0; m + 1 < k; m += 2) corner *= dot(c[m], c[m + 1]);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        formula = std::max(formula, std::abs(p[i][j] - sign * c.front()[i] * inner * c.back()[j]));
      }
    }
    formula = std::max(formula, std::abs(p[2][2] - sign * corner));
  } else {
    zero = std::max({std::abs(p[0][0]), std::abs(p[0][1]), std::abs(p[1][0]), std::abs(p[1][1]),
                     std::abs(p[2][2])});
    double right = 1.0;
    for (std::size_t m = 1; m + 1 < k; m += 2) right *= dot(c[m], c[m + 1]);
    double left = 1.0;
    for (std::size_t m = 0; m + 1 < k; m += 2) left *= dot(c[m], c[m + 1]);
    for (int i = 0; i < 2; ++i) {
      formula = std::max(formula, std::abs(p[i][2] - sign * c.front()[i] * right));
      formula = std::max(formula, std::abs(p[2][i] + sign * left * c.back()[i]));
    }
  }
  rep.zero_block = std::max(rep.zero_block, zero);
  rep.block_formula = std::max(rep.block_formula, formula);
  ++rep.products;
}

void check_pair(double s1, double s2, const SpiralParams& params, BlockReport& rep) {
  const double inv_r = params.inverse_radius();
  const double expected = inv_r * inv_r * std::cos(0.5 * params.a * (s1 * s1 - s2 * s2));
  rep.chi_identity = std::max(rep.chi_identity, std::abs(dot(chi(s1, params), chi(s2, params)) - expected));
  ++rep.pairs;
}

void check_prefixes(std::span<const double> s_values, const SpiralParams& params, BlockReport& rep) {
  Mat3 p = generator_matrix(s_values.front(), params);
  std::vector<Vec2r> c{chi(s_values.front(), params)};
  check_product(p, c, rep);
  for (std::size_t i = 1; i < s_values.size(); ++i) {
    p = multiply(p, generator_matrix(s_values[i], params));
    c.push_back(chi(s_values[i], params));
    check_product(p, c, rep);
  }
}

}  // namespace

Mat3 generator_matrix(double s, const SpiralParams& params) {
  const Vec2r v = chi(s, params);
  return {{{0.0, 0.0, v[0]}, {0.0, 0.0, v[1]}, {-v[0], -v[1], 0.0}}};
}

double BlockReport::max_deviation() const noexcept { return std::max({zero_block, block_formula, chi_identity}); }

BlockReport block_structure_check(std::span<const double> s_values, const SpiralParams& params) {
  if (s_values.size() < 2) throw std::invalid_argument("block_structure_check: need at least two s values");
  BlockReport rep;
  check_prefixes(s_values, params, rep);
  for (std::size_t i = 0; i + 1 < s_values.size(); ++i) check_pair(s_values[i], s_values[i + 1], params, rep);
  return rep;
}

BlockReport block_structure_suite(std::size_t products, std::size_t pairs, std::size_t max_length, double s_range,
                                  const SpiralParams& params, std::uint64_t seed) {
  if (max_length < 1) throw std::invalid_argument("block_structure_suite: max_length must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pick(-s_range, s_range);
  std::uniform_int_distribution<std::size_t> length(1, max_length);
  BlockReport rep;
  std::vector<double> s;
  for (std::size_t t = 0; t < products; ++t) {
    s.resize(length(rng));
    for (double& v : s) v = pick(rng);
    Mat3 p = generator_matrix(s.front(), params);
    std::vector<Vec2r> c{chi(s.front(), params)};
    for (std::size_t i = 1; i < s.size(); ++i) {
      p = multiply(p, generator_matrix(s[i], params));
      c.push_back(chi(s[i], params));
    }
    check_product(p, c, rep);
  }
  for (std::size_t t = 0; t < pairs; ++t) {
    const double s1 = pick(rng);
    const double s2 = pick(rng);
    check_pair(s1, s2, params, rep);
  }
  return rep;
}

}  // namespace cornu::evo
