#pragma once

// Unit groups of the base field M and of a relative quadratic extension G,
// their logarithmic embeddings and the action of the relative conjugation.

#include "relthue/order.hpp"

#include <string>
#include <vector>

namespace relthue {

using ExpVec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;
using ExpMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

struct UnitSystem {
  Extension ext;                    // M inside G
  std::vector<Element> base_units;  // fundamental units of M, M coordinates
  std::vector<Element> units;       // fundamental units of G, G coordinates
  /// Column k is the exponent vector of sigma(units[k]) up to the sign
  /// conj_signs[k] in {+1,-1}.
  ExpMatrix conj_action;
  std::vector<int> conj_signs;

  // Derived on construction.
  Element sigma;                   // image of the generator of G under sigma
  std::vector<Element> inverses;   // units[k]^-1
  int rank_fixed = 0;              // r: rank of the sigma-fixed sublattice
  int rank_relative = 0;           // s = units.size() - r

  const OrderContext& base() const { return *ext.base; }
  const OrderContext& field() const { return *ext.top; }
  int count() const { return static_cast<int>(units.size()); }
  int m() const { return ext.base->degree(); }
  /// Embedding index in G of the conjugate (i, j), j = 0, 1.
  int root(int i, int j) const { return ext.fibres[i][j]; }
};

/// Fills the derived members. Throws kVerification when the conjugation
/// action is not an integer involution or a unit is not invertible.
UnitSystem make_unit_system(Extension ext, std::vector<Element> base_units, std::vector<Element> units,
                            ExpMatrix conj_action, std::vector<int> conj_signs);

/// Rows (i, j) in the order (1,1),(1,2),(2,1),...; entry log|u_k^(ij)|.
RealMatrix log_embedding_matrix(const UnitSystem& us, unsigned digits);

/// Arguments of the unit conjugates (zero or pi for real embeddings).
RealMatrix arg_embedding_matrix(const UnitSystem& us, unsigned digits);

struct Conjugated {
  int sign = 1;
  ExpVec exponents;
};
Conjugated relative_conjugate(const UnitSystem& us, const ExpVec& v);

/// prod units[k]^(i,j) ^ v_k at `digits` precision.
ComplexR unit_value(const UnitSystem& us, const ExpVec& v, int i, int j, unsigned digits);

/// Exact power product in G. Throws kCardinalityCap when a coordinate
/// exceeds cap_bits.
Element exponent_vector_to_element(const UnitSystem& us, const ExpVec& v, std::size_t cap_bits = 1u << 22);

struct UnitCheck {
  bool ok = true;
  std::vector<std::string> failures;
};
UnitCheck verify_unit_system(const UnitSystem& us);

/// Integer basis of ker(C - I), the exponent vectors of sigma-fixed units
/// (up to sign), in Hermite-like echelon form.
ExpMatrix fixed_sublattice(const ExpMatrix& conj_action);

/// Numeric rank of a real matrix with singular values below `threshold`
/// treated as zero.
int numeric_rank(const RealMatrix& m, const Real& threshold);

}  // namespace relthue
