#include "relthue/units.hpp"

#include "relthue/errors.hpp"

#include <sstream>

namespace relthue {
namespace {

IntMatrix to_int(const ExpMatrix& m) { return m.unaryExpr([](long long x) { return Integer(x); }); }

}  // namespace

ExpMatrix fixed_sublattice(const ExpMatrix& conj_action) {
  const Eigen::Index n = conj_action.rows();
  IntMatrix m = to_int(conj_action) - IntMatrix::Identity(n, n);
  ColumnEchelon ce = column_echelon(m);
  ExpMatrix k(n, n - ce.rank);
  for (Eigen::Index c = ce.rank; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) k(r, c - ce.rank) = ce.u(r, c).convert_to<long long>();
  return k;
}

int numeric_rank(const RealMatrix& m_in, const Real& threshold) {
  RealMatrix m = m_in;
  int rank = 0;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  std::vector<bool> used(rows, false);
  for (Eigen::Index c = 0; c < cols; ++c) {
    Eigen::Index piv = -1;
    Real best = threshold;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (used[r]) continue;
      Real a = abs(m(r, c));
      if (a > best) {
        best = a;
        piv = r;
      }
    }
    if (piv < 0) continue;
    used[piv] = true;
    ++rank;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (r == piv) continue;
      Real f = m(r, c) / m(piv, c);
      m.row(r) -= f * m.row(piv);
    }
  }
  return rank;
}

UnitSystem make_unit_system(Extension ext, std::vector<Element> base_units, std::vector<Element> units,
                            ExpMatrix conj_action, std::vector<int> conj_signs) {
  UnitSystem us;
  us.ext = std::move(ext);
  us.base_units = std::move(base_units);
  us.units = std::move(units);
  us.conj_action = std::move(conj_action);
  us.conj_signs = std::move(conj_signs);
  const int n = us.count();
  if (us.conj_action.rows() != n || us.conj_action.cols() != n || static_cast<int>(us.conj_signs.size()) != n)
    fail(ErrorKind::kInput, "conjugation action has the wrong shape");
  for (int s : us.conj_signs)
    if (s != 1 && s != -1) fail(ErrorKind::kInput, "only torsion signs +1 and -1 are supported");
  us.sigma = relative_conjugation(us.ext);
  const OrderContext& g = us.field();
  for (const auto& u : us.units) {
    if (u.size() != g.degree()) fail(ErrorKind::kInput, "unit has the wrong number of coordinates");
    auto inv = divide_exact(g.one(), u, g);
    us.inverses.push_back(inv ? *inv : g.zero());
  }
  us.rank_fixed = static_cast<int>(fixed_sublattice(us.conj_action).cols());
  us.rank_relative = n - us.rank_fixed;
  return us;
}

RealMatrix log_embedding_matrix(const UnitSystem& us, unsigned digits) {
  PrecisionGuard guard(digits + 10);
  const int m = us.m();
  RealMatrix l(2 * m, us.count());
  for (int k = 0; k < us.count(); ++k) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < 2; ++j) {
        Real a = at_working(abs(embed(us.units[k], us.field(), us.root(i, j))));
        if (a < pow10_neg(static_cast<int>(digits / 2)))
          fail(ErrorKind::kPrecision, "unit conjugate below the underflow guard");
        l(2 * i + j, k) = log(a);
      }
    }
  }
  return l;
}

RealMatrix arg_embedding_matrix(const UnitSystem& us, unsigned digits) {
  PrecisionGuard guard(digits + 10);
  const int m = us.m();
  RealMatrix a(2 * m, us.count());
  for (int k = 0; k < us.count(); ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < 2; ++j) {
        ComplexR z = at_working(embed(us.units[k], us.field(), us.root(i, j)));
        a(2 * i + j, k) = atan2(z.im, z.re);
      }
  return a;
}

Conjugated relative_conjugate(const UnitSystem& us, const ExpVec& v) {
  Conjugated out;
  out.exponents = us.conj_action * v;
  for (int k = 0; k < us.count(); ++k)
    if (us.conj_signs[k] < 0 && (v(k) % 2 != 0)) out.sign = -out.sign;
  return out;
}

ComplexR unit_value(const UnitSystem& us, const ExpVec& v, int i, int j, unsigned digits) {
  PrecisionGuard guard(digits + 10);
  Real logabs = 0, arg = 0;
  for (int k = 0; k < us.count(); ++k) {
    if (v(k) == 0) continue;
    ComplexR z = at_working(embed(us.units[k], us.field(), us.root(i, j)));
    logabs += Real(v(k)) * log(abs(z));
    arg += Real(v(k)) * atan2(z.im, z.re);
  }
  Real r = exp(logabs);
  return ComplexR(r * cos(arg), r * sin(arg));
}

Element exponent_vector_to_element(const UnitSystem& us, const ExpVec& v, std::size_t cap_bits) {
  const OrderContext& g = us.field();
  Element acc = g.one();
  for (int k = 0; k < us.count(); ++k) {
    if (v(k) == 0) continue;
    const Element& base = v(k) > 0 ? us.units[k] : us.inverses[k];
    if (base.isZero()) fail(ErrorKind::kVerification, "unit is not invertible in the order");
    acc = mul(acc, power(base, static_cast<unsigned>(v(k) > 0 ? v(k) : -v(k)), g), g);
    for (int c = 0; c < g.degree(); ++c)
      if (acc(c) != 0 && boost::multiprecision::msb(boost::multiprecision::abs(acc(c))) > cap_bits)
        fail(ErrorKind::kCardinalityCap, "exact unit power product exceeds the coordinate cap");
  }
  return acc;
}

UnitCheck verify_unit_system(const UnitSystem& us) {
  UnitCheck rep;
  auto failure = [&](const std::string& what) {
    rep.ok = false;
    rep.failures.push_back(what);
  };
  for (std::size_t k = 0; k < us.base_units.size(); ++k) {
    Integer nm = norm(us.base_units[k], us.base());
    if (nm != 1 && nm != -1) failure("base unit " + std::to_string(k + 1) + " has norm " + nm.str());
  }
  bool all_units = true;
  for (int k = 0; k < us.count(); ++k) {
    Integer nm = norm(us.units[k], us.field());
    if (nm != 1 && nm != -1) {
      failure("unit " + std::to_string(k + 1) + " has norm " + nm.str());
      all_units = false;
    }
  }
  if (!all_units) return rep;

  const unsigned digits = us.field().digits();
  RealMatrix l = log_embedding_matrix(us, digits);
  {
    PrecisionGuard guard(digits + 10);
    for (int k = 0; k < us.count(); ++k) {
      if (abs(l.col(k).sum()) > pow10_neg(static_cast<int>(digits / 2)))
        failure("log row sum of unit " + std::to_string(k + 1) + " is not zero");
    }
    if (numeric_rank(l, pow10_neg(static_cast<int>(digits / 4))) != us.count())
      failure("log embedding matrix is rank deficient");
  }

  ExpMatrix c2 = us.conj_action * us.conj_action;
  if (c2 != ExpMatrix::Identity(us.count(), us.count())) failure("conjugation action is not an involution");

  for (int k = 0; k < us.count(); ++k) {
    ExpVec e = ExpVec::Zero(us.count());
    e(k) = 1;
    Conjugated cj = relative_conjugate(us, e);
    Element exact_image = apply_automorphism(us.units[k], us.sigma, us.field());
    Element claimed;
    try {
      claimed = exponent_vector_to_element(us, cj.exponents);
    } catch (const Error&) {
      failure("conjugate of unit " + std::to_string(k + 1) + " cannot be formed");
      continue;
    }
    if (cj.sign < 0) claimed = -claimed;
    if (claimed != exact_image) {
      failure("conjugation action of unit " + std::to_string(k + 1) + " does not match");
      continue;
    }
    // Numeric form of the same statement: sigma swaps j and its partner.
    PrecisionGuard guard(digits + 10);
    for (int i = 0; i < us.m(); ++i) {
      for (int j = 0; j < 2; ++j) {
        ComplexR lhs = unit_value(us, cj.exponents, i, j, digits);
        if (cj.sign < 0) lhs = -lhs;
        ComplexR rhs = at_working(embed(us.units[k], us.field(), us.root(i, 1 - j)));
        if (abs(lhs - rhs) > pow10_neg(static_cast<int>(digits / 2)) * (1 + abs(rhs)))
          failure("numeric conjugation check failed for unit " + std::to_string(k + 1));
      }
    }
  }
  return rep;
}

}  // namespace relthue
