// Copyright 2026 The qficd Authors
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

#pragma once

// Symbolic algebra over tensor products of Pauli operators.
//
// Site convention: qubit 0 is the leftmost letter of a string and the most
// significant tensor factor of the dense representation.

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "qficd/linalg.hpp"

namespace qficd {

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(PauliLetter l);
PauliLetter letter_from_char(char c);

struct LetterProduct {
  cplx phase;
  PauliLetter letter;
};

/// a * b = phase * letter.
LetterProduct letter_product(PauliLetter a, PauliLetter b);

class PauliTerm {
 public:
  PauliTerm() = default;
  explicit PauliTerm(std::vector<PauliLetter> letters);
  static PauliTerm parse(std::string_view text);
  static PauliTerm identity(int q);

  int size() const { return static_cast<int>(letters_.size()); }
  int weight() const;
  PauliLetter operator[](int site) const { return letters_[static_cast<std::size_t>(site)]; }
  const std::vector<PauliLetter>& letters() const { return letters_; }
  std::string str() const;

  // Symplectic bit masks; bit (q-1-site) set for X/Y (x mask) or Z/Y (z mask).
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;

  auto operator<=>(const PauliTerm&) const = default;

 private:
  std::vector<PauliLetter> letters_;
};

struct TermProduct {
  cplx phase;
  PauliTerm term;
};

TermProduct multiply(const PauliTerm& a, const PauliTerm& b);

/// One nonzero structure constant: [P_i, P_j] = value * P_k with value = +-2i.
struct StructureEntry {
  std::uint32_t i;
  std::uint32_t j;
  std::uint32_t k;
  double imag;  // value = i * imag
};

/// Ordered truncated basis of Pauli strings with weight <= k.
///
/// Terms are sorted weight-major, then lexicographically with I < X < Y < Z.
/// Immutable after construction; the structure-constant table is built on
/// first use and shared between threads.
class OperatorBasis {
 public:
  int q() const { return q_; }
  int k() const { return k_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  const PauliTerm& term(std::size_t idx) const { return terms_[idx]; }
  /// Position of `t` in the basis, or -1 when it lies outside the truncation.
  std::ptrdiff_t index_of(const PauliTerm& t) const;
  std::ptrdiff_t index_of_masks(std::uint64_t x, std::uint64_t z) const;

  /// Non-commuting pairs (i, j) whose product stays inside the basis, sorted
  /// by (k, i, j).
  const std::vector<StructureEntry>& structure() const;
  /// CSR offsets into structure() by output index k (size() + 1 entries).
  const std::vector<std::size_t>& structure_offsets() const;

  std::uint64_t x_mask(std::size_t idx) const { return xm_[idx]; }
  std::uint64_t z_mask(std::size_t idx) const { return zm_[idx]; }

  friend std::shared_ptr<const OperatorBasis> build_basis(int q, int k);

 private:
  OperatorBasis() = default;
  void build_structure() const;

  int q_ = 0;
  int k_ = 0;
  std::vector<PauliTerm> terms_;
  std::vector<std::uint64_t> xm_;
  std::vector<std::uint64_t> zm_;
  std::unordered_map<std::uint64_t, std::size_t> index_;

  mutable std::once_flag structure_once_;
  mutable std::vector<StructureEntry> structure_;
  mutable std::vector<std::size_t> offsets_;
};

using BasisPtr = std::shared_ptr<const OperatorBasis>;

/// Size of the k-local basis on q qubits: sum_{l<=k} C(q,l) 3^l.
std::size_t basis_size(int q, int k);

/// Throws std::invalid_argument unless 1 <= q <= 32 and 0 <= k <= q.
BasisPtr build_basis(int q, int k);

class OperatorCoeffs {
 public:
  OperatorCoeffs() = default;
  explicit OperatorCoeffs(BasisPtr basis);
  OperatorCoeffs(BasisPtr basis, CVector values);

  static OperatorCoeffs from_real(BasisPtr basis, const RVector& values);

  const BasisPtr& basis() const { return basis_; }
  const CVector& values() const { return values_; }
  CVector& values() { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

  cplx operator[](std::size_t i) const { return values_(static_cast<Eigen::Index>(i)); }
  cplx& operator[](std::size_t i) { return values_(static_cast<Eigen::Index>(i)); }
  cplx coeff(std::string_view term) const;
  void set(std::string_view term, cplx value);

  RVector real() const { return values_.real(); }
  /// Largest |imag| over all coefficients.
  double max_imag() const;
  /// Throws std::logic_error when max_imag() > tol.
  void require_hermitian(double tol = 1e-12) const;

  OperatorCoeffs operator+(const OperatorCoeffs& o) const;
  OperatorCoeffs operator-(const OperatorCoeffs& o) const;
  OperatorCoeffs operator*(cplx s) const;

 private:
  BasisPtr basis_;
  CVector values_;
};

struct CommutatorResult {
  OperatorCoeffs coeffs;
  /// Sum of |c|^2 over strings generated outside the truncated basis.
  double dropped_norm2 = 0.0;
};

/// Coefficients of [A, B] projected onto the shared basis.
OperatorCoeffs commutator_in_basis(const OperatorCoeffs& a, const OperatorCoeffs& b);

/// Same as commutator_in_basis, also reporting the weight dropped by the
/// projection. Enumerates nonzero pairs directly; slower.
CommutatorResult commutator_with_dropped(const OperatorCoeffs& a, const OperatorCoeffs& b);

/// Euler-Lagrange residual coefficients r = [i g - [a, h], h].
CVector el_residual_coeffs(const OperatorCoeffs& a, const OperatorCoeffs& h, const OperatorCoeffs& g);

inline constexpr int kDefaultDenseCeiling = 6;

/// sum_k c_k P_k as a dense 2^q x 2^q matrix. Throws std::length_error when
/// q exceeds `ceiling`.
CMatrix to_dense(const OperatorCoeffs& a, int ceiling = kDefaultDenseCeiling);
CMatrix to_dense(const PauliTerm& t);

/// Coefficients c_k = tr(P_k^H M) / 2^q of a dense matrix, restricted to the
/// basis.
OperatorCoeffs project_dense(const CMatrix& m, BasisPtr basis);

nlohmann::json to_json(const OperatorCoeffs& a);
OperatorCoeffs coeffs_from_json(const nlohmann::json& j);

}  // namespace qficd
