#include "relthue/poly.hpp"

#include "relthue/errors.hpp"

#include <sstream>

namespace relthue {

int degree(const IntPoly& p) {
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k)
    if (p[k] != 0) return k;
  return -1;
}

void trim(IntPoly& p) { p.resize(static_cast<std::size_t>(degree(p) + 1)); }

IntPoly derivative(const IntPoly& p) {
  IntPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  return d;
}

Integer evaluate(const IntPoly& p, const Integer& x) {
  Integer acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::string to_string(const IntPoly& p, const std::string& var) {
  std::ostringstream os;
  bool first = true;
  for (int k = degree(p); k >= 0; --k) {
    const Integer& c = p[k];
    if (c == 0) continue;
    Integer a = boost::multiprecision::abs(c);
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    if (a != 1 || k == 0) os << a;
    if (k > 0) os << var;
    if (k > 1) os << "^" << k;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

Integer determinant(IntMatrix m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) fail(ErrorKind::kInput, "determinant of a non-square matrix");
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (m(k, k) == 0) {
      Eigen::Index p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.row(k).swap(m.row(p));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

Integer resultant(const IntPoly& a, const IntPoly& b) {
  const int da = degree(a), db = degree(b);
  if (da < 0 || db < 0) return 0;
  if (da == 0) return ipow(a[0], static_cast<unsigned>(db));
  if (db == 0) return ipow(b[0], static_cast<unsigned>(da));
  const int n = da + db;
  IntMatrix s = IntMatrix::Zero(n, n);
  for (int r = 0; r < db; ++r)
    for (int k = 0; k <= da; ++k) s(r, r + k) = a[da - k];
  for (int r = 0; r < da; ++r)
    for (int k = 0; k <= db; ++k) s(db + r, r + k) = b[db - k];
  return determinant(std::move(s));
}

Integer discriminant(const IntPoly& p) {
  const int n = degree(p);
  if (n < 1) fail(ErrorKind::kInput, "discriminant of a constant polynomial");
  Integer r = resultant(p, derivative(p)) / p[n];
  return ((n * (n - 1) / 2) % 2 == 0) ? r : Integer(-r);
}

IntPoly characteristic_polynomial(const IntMatrix& a) {
  const Eigen::Index n = a.rows();
  // Berkowitz: c holds the characteristic polynomial of the leading r x r
  // block, highest degree first.
  std::vector<Integer> c{1, -a(0, 0)};
  for (Eigen::Index r = 1; r < n; ++r) {
    IntMatrix lead = a.topLeftCorner(r, r);
    Vec<Integer> col = a.col(r).head(r);
    Eigen::Matrix<Integer, 1, Eigen::Dynamic> row = a.row(r).head(r);
    std::vector<Integer> q(static_cast<std::size_t>(r + 2));
    q[0] = 1;
    q[1] = -a(r, r);
    Vec<Integer> w = col;
    for (Eigen::Index k = 2; k <= r + 1; ++k) {
      q[k] = -(row * w)(0, 0);
      w = lead * w;
    }
    std::vector<Integer> next(static_cast<std::size_t>(r + 2), Integer(0));
    for (Eigen::Index i = 0; i <= r + 1; ++i)
      for (Eigen::Index j = 0; j <= std::min(i, r); ++j) next[i] += q[i - j] * c[j];
    c = std::move(next);
  }
  return IntPoly(c.rbegin(), c.rend());
}

std::pair<std::vector<Integer>, Integer> solve_exact(const IntMatrix& m, const std::vector<Integer>& rhs) {
  const Eigen::Index n = m.rows();
  if (n != m.cols() || static_cast<Eigen::Index>(rhs.size()) != n)
    fail(ErrorKind::kInput, "solve_exact: dimension mismatch");
  Mat<Rational> aug(n, n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) aug(i, j) = Rational(m(i, j));
    aug(i, n) = Rational(rhs[i]);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    while (p < n && aug(p, k) == 0) ++p;
    if (p == n) fail(ErrorKind::kInput, "solve_exact: singular matrix");
    if (p != k) aug.row(k).swap(aug.row(p));
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k || aug(i, k) == 0) continue;
      Rational f = aug(i, k) / aug(k, k);
      for (Eigen::Index j = k; j <= n; ++j) aug(i, j) -= f * aug(k, j);
    }
  }
  Integer den = 1;
  std::vector<Rational> x(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = aug(i, n) / aug(i, i);
    den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(x[i]));
  }
  std::vector<Integer> num(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    num[i] = boost::multiprecision::numerator(x[i]) * (den / boost::multiprecision::denominator(x[i]));
  return {num, den};
}

ColumnEchelon column_echelon(const IntMatrix& m) {
  ColumnEchelon ce;
  ce.h = m;
  const Eigen::Index cols = m.cols();
  ce.u = IntMatrix::Identity(cols, cols);
  Eigen::Index p = 0;
  for (Eigen::Index r = 0; r < m.rows() && p < cols; ++r) {
    while (true) {
      Eigen::Index best = -1;
      for (Eigen::Index c = p; c < cols; ++c) {
        if (ce.h(r, c) == 0) continue;
        if (best < 0 || boost::multiprecision::abs(ce.h(r, c)) < boost::multiprecision::abs(ce.h(r, best))) best = c;
      }
      if (best < 0) break;
      if (best != p) {
        ce.h.col(best).swap(ce.h.col(p));
        ce.u.col(best).swap(ce.u.col(p));
      }
      bool done = true;
      for (Eigen::Index c = p + 1; c < cols; ++c) {
        if (ce.h(r, c) == 0) continue;
        Integer q = ce.h(r, c) / ce.h(r, p);
        ce.h.col(c) -= q * ce.h.col(p);
        ce.u.col(c) -= q * ce.u.col(p);
        if (ce.h(r, c) != 0) done = false;
      }
      if (done) {
        ++p;
        break;
      }
    }
  }
  ce.rank = static_cast<int>(p);
  return ce;
}

Integer exact_sqrt(const Integer& x) {
  if (x < 0) return -1;
  Integer r = boost::multiprecision::sqrt(x);
  return r * r == x ? r : Integer(-1);
}

}  // namespace relthue
