#pragma once

// Reference implementations used only by tests. They take the slow, obvious
// route and share no code paths with the library beyond its data types.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

// Exact fraction with 64-bit parts; enough for the small fixtures used here.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const auto g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Truth/prediction as 0/1 matrices [instance][label].
using Binary = std::vector<std::vector<int>>;

inline Rational hamming_loss(const Binary& t, const Binary& p) {
  std::int64_t wrong = 0;
  const auto n = static_cast<std::int64_t>(t.front().size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t[i].size(); ++j) wrong += t[i][j] != p[i][j] ? 1 : 0;
  }
  return {wrong, n * static_cast<std::int64_t>(t.size())};
}

inline Rational accuracy(const Binary& t, const Binary& p) {
  std::int64_t same = 0;
  for (std::size_t i = 0; i < t.size(); ++i) same += t[i] == p[i] ? 1 : 0;
  return {same, static_cast<std::int64_t>(t.size())};
}

struct Counts {
  std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
};

inline Counts counts_for(const Binary& t, const Binary& p, std::size_t j) {
  Counts c;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i][j] == 1 && p[i][j] == 1) ++c.tp;
    if (t[i][j] == 0 && p[i][j] == 0) ++c.tn;
    if (t[i][j] == 0 && p[i][j] == 1) ++c.fp;
    if (t[i][j] == 1 && p[i][j] == 0) ++c.fn;
  }
  return c;
}

// F with the 0/0 -> `empty` convention.
inline Rational f_value(const Counts& c, Rational empty) {
  const auto den = 2 * c.tp + c.fp + c.fn;
  return den == 0 ? empty : Rational(2 * c.tp, den);
}

inline Rational f_macro(const Binary& t, const Binary& p, Rational empty) {
  const auto n = t.front().size();
  Rational sum(0);
  for (std::size_t j = 0; j < n; ++j) sum = sum + f_value(counts_for(t, p, j), empty);
  return sum / Rational(static_cast<std::int64_t>(n));
}

inline Rational f_micro(const Binary& t, const Binary& p, Rational empty) {
  Counts total;
  for (std::size_t j = 0; j < t.front().size(); ++j) {
    const auto c = counts_for(t, p, j);
    total.tp += c.tp;
    total.tn += c.tn;
    total.fp += c.fp;
    total.fn += c.fn;
  }
  return f_value(total, empty);
}

// Solves the square system A x = b by Gaussian elimination with partial
// pivoting; A is row-major n x n.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

// Ridge least squares through the normal equations (D^T D + ridge I) w = D^T y.
inline std::vector<double> ridge_least_squares(const std::vector<std::vector<double>>& design,
                                               const std::vector<double>& y, double ridge) {
  const std::size_t p = design.front().size();
  std::vector<std::vector<double>> gram(p, std::vector<double>(p, 0.0));
  std::vector<double> rhs(p, 0.0);
  for (std::size_t i = 0; i < design.size(); ++i) {
    for (std::size_t a = 0; a < p; ++a) {
      rhs[a] += design[i][a] * y[i];
      for (std::size_t b = 0; b < p; ++b) gram[a][b] += design[i][a] * design[i][b];
    }
  }
  for (std::size_t a = 0; a < p; ++a) gram[a][a] += ridge;
  return solve(gram, rhs);
}

// Nonconformity straight from its definition, with labelsets as 0/1 vectors
// and mu as a full matrix.
inline double nonconformity(const std::vector<double>& o, const std::vector<int>& t,
                            const std::vector<std::vector<int>>& mu, double d, double lambda) {
  double sum = 0.0;
  for (std::size_t j = 0; j < o.size(); ++j) sum += std::pow(std::abs(t[j] - o[j]), d);
  double pairs = 0.0;
  for (std::size_t j = 0; j < o.size(); ++j) {
    for (std::size_t r = j + 1; r < o.size(); ++r) pairs += t[j] * t[r] * mu[j][r];
  }
  return sum + lambda * pairs;
}

}  // namespace oracle
