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

#include "qficd/pauli.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace qficd {

namespace {

std::uint64_t key_of(std::uint64_t x, std::uint64_t z) { return x | (z << 32); }

cplx i_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void require_same_basis(const OperatorCoeffs& a, const OperatorCoeffs& b, const char* what) {
  if (!a.basis() || a.basis() != b.basis()) throw std::invalid_argument(std::string(what) + ": basis mismatch");
}

}  // namespace

char to_char(PauliLetter l) {
  static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(l)];
}

PauliLetter letter_from_char(char c) {
  switch (c) {
    case 'I': return PauliLetter::I;
    case 'X': return PauliLetter::X;
    case 'Y': return PauliLetter::Y;
    case 'Z': return PauliLetter::Z;
    default: throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
  }
}

LetterProduct letter_product(PauliLetter a, PauliLetter b) {
  if (a == PauliLetter::I) return {1.0, b};
  if (b == PauliLetter::I) return {1.0, a};
  if (a == b) return {1.0, PauliLetter::I};
  const int ai = static_cast<int>(a);
  const int bi = static_cast<int>(b);
  // X=1, Y=2, Z=3; cyclic order X->Y->Z gives +i.
  const int c = 6 - ai - bi;
  const bool cyclic = (bi - ai + 3) % 3 == 1;
  return {cyclic ? kI : -kI, static_cast<PauliLetter>(c)};
}

PauliTerm::PauliTerm(std::vector<PauliLetter> letters) : letters_(std::move(letters)) {}

PauliTerm PauliTerm::parse(std::string_view text) {
  std::vector<PauliLetter> letters;
  letters.reserve(text.size());
  for (char c : text) letters.push_back(letter_from_char(c));
  return PauliTerm(std::move(letters));
}

PauliTerm PauliTerm::identity(int q) { return PauliTerm(std::vector<PauliLetter>(static_cast<std::size_t>(q), PauliLetter::I)); }

int PauliTerm::weight() const {
  return static_cast<int>(std::count_if(letters_.begin(), letters_.end(), [](PauliLetter l) { return l != PauliLetter::I; }));
}

std::string PauliTerm::str() const {
  std::string s;
  s.reserve(letters_.size());
  for (auto l : letters_) s.push_back(to_char(l));
  return s;
}

std::uint64_t PauliTerm::x_mask() const {
  std::uint64_t m = 0;
  const int q = size();
  for (int s = 0; s < q; ++s) {
    const auto l = letters_[static_cast<std::size_t>(s)];
    if (l == PauliLetter::X || l == PauliLetter::Y) m |= std::uint64_t{1} << (q - 1 - s);
  }
  return m;
}

std::uint64_t PauliTerm::z_mask() const {
  std::uint64_t m = 0;
  const int q = size();
  for (int s = 0; s < q; ++s) {
    const auto l = letters_[static_cast<std::size_t>(s)];
    if (l == PauliLetter::Z || l == PauliLetter::Y) m |= std::uint64_t{1} << (q - 1 - s);
  }
  return m;
}

TermProduct multiply(const PauliTerm& a, const PauliTerm& b) {
  if (a.size() != b.size()) throw std::invalid_argument("multiply: length mismatch");
  std::vector<PauliLetter> out(static_cast<std::size_t>(a.size()));
  cplx phase = 1.0;
  for (int s = 0; s < a.size(); ++s) {
    const auto p = letter_product(a[s], b[s]);
    phase *= p.phase;
    out[static_cast<std::size_t>(s)] = p.letter;
  }
  return {phase, PauliTerm(std::move(out))};
}

std::size_t basis_size(int q, int k) {
  std::size_t total = 0;
  std::size_t binom = 1;
  std::size_t pow3 = 1;
  for (int l = 0; l <= k; ++l) {
    total += binom * pow3;
    binom = binom * static_cast<std::size_t>(q - l) / static_cast<std::size_t>(l + 1);
    pow3 *= 3;
  }
  return total;
}

BasisPtr build_basis(int q, int k) {
  if (q < 1 || q > 32) throw std::invalid_argument("build_basis: q must lie in [1, 32]");
  if (k < 0 || k > q) throw std::invalid_argument("build_basis: locality k must satisfy 0 <= k <= q");

  std::shared_ptr<OperatorBasis> basis(new OperatorBasis());
  basis->q_ = q;
  basis->k_ = k;

  // Depth-first enumeration in lexicographic order; a stable sort by weight
  // then yields weight-major, lexicographic-minor ordering.
  std::vector<PauliLetter> cur(static_cast<std::size_t>(q), PauliLetter::I);
  std::vector<PauliTerm> terms;
  terms.reserve(basis_size(q, k));
  auto rec = [&](auto&& self, int site, int weight) -> void {
    if (site == q) {
      terms.emplace_back(cur);
      return;
    }
    for (int l = 0; l < 4; ++l) {
      const int w = weight + (l != 0 ? 1 : 0);
      if (w > k) continue;
      cur[static_cast<std::size_t>(site)] = static_cast<PauliLetter>(l);
      self(self, site + 1, w);
    }
    cur[static_cast<std::size_t>(site)] = PauliLetter::I;
  };
  rec(rec, 0, 0);
  std::stable_sort(terms.begin(), terms.end(), [](const PauliTerm& a, const PauliTerm& b) { return a.weight() < b.weight(); });

  basis->terms_ = std::move(terms);
  basis->xm_.reserve(basis->terms_.size());
  basis->zm_.reserve(basis->terms_.size());
  for (std::size_t idx = 0; idx < basis->terms_.size(); ++idx) {
    const auto x = basis->terms_[idx].x_mask();
    const auto z = basis->terms_[idx].z_mask();
    basis->xm_.push_back(x);
    basis->zm_.push_back(z);
    basis->index_.emplace(key_of(x, z), idx);
  }
  return basis;
}

std::ptrdiff_t OperatorBasis::index_of_masks(std::uint64_t x, std::uint64_t z) const {
  const auto it = index_.find(key_of(x, z));
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::ptrdiff_t OperatorBasis::index_of(const PauliTerm& t) const {
  if (t.size() != q_) return -1;
  return index_of_masks(t.x_mask(), t.z_mask());
}

void OperatorBasis::build_structure() const {
  std::call_once(structure_once_, [this] {
    const std::size_t m = terms_.size();
    std::vector<StructureEntry> entries;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const int parity = std::popcount(xm_[i] & zm_[j]) + std::popcount(zm_[i] & xm_[j]);
        if ((parity & 1) == 0) continue;  // commuting
        const auto k = index_of_masks(xm_[i] ^ xm_[j], zm_[i] ^ zm_[j]);
        if (k < 0) continue;  // projected out
        const auto prod = multiply(terms_[i], terms_[j]);
        entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(k),
                           2.0 * prod.phase.imag()});
      }
    }
    std::sort(entries.begin(), entries.end(), [](const StructureEntry& a, const StructureEntry& b) {
      if (a.k != b.k) return a.k < b.k;
      if (a.i != b.i) return a.i < b.i;
      return a.j < b.j;
    });
    offsets_.assign(m + 1, 0);
    for (const auto& e : entries) ++offsets_[e.k + 1];
    for (std::size_t k = 0; k < m; ++k) offsets_[k + 1] += offsets_[k];
    structure_ = std::move(entries);
  });
}

const std::vector<StructureEntry>& OperatorBasis::structure() const {
  build_structure();
  return structure_;
}

const std::vector<std::size_t>& OperatorBasis::structure_offsets() const {
  build_structure();
  return offsets_;
}

OperatorCoeffs::OperatorCoeffs(BasisPtr basis) : basis_(std::move(basis)) {
  values_ = CVector::Zero(static_cast<Eigen::Index>(basis_->size()));
}

OperatorCoeffs::OperatorCoeffs(BasisPtr basis, CVector values) : basis_(std::move(basis)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != basis_->size())
    throw std::invalid_argument("OperatorCoeffs: value count does not match basis size");
}

OperatorCoeffs OperatorCoeffs::from_real(BasisPtr basis, const RVector& values) {
  return OperatorCoeffs(std::move(basis), values.cast<cplx>());
}

cplx OperatorCoeffs::coeff(std::string_view term) const {
  const auto idx = basis_->index_of(PauliTerm::parse(term));
  if (idx < 0) return 0.0;
  return values_(idx);
}

void OperatorCoeffs::set(std::string_view term, cplx value) {
  const auto idx = basis_->index_of(PauliTerm::parse(term));
  if (idx < 0) throw std::out_of_range("OperatorCoeffs::set: term " + std::string(term) + " not in basis");
  values_(idx) = value;
}

double OperatorCoeffs::max_imag() const {
  double m = 0.0;
  for (Eigen::Index i = 0; i < values_.size(); ++i) m = std::max(m, std::abs(values_(i).imag()));
  return m;
}

void OperatorCoeffs::require_hermitian(double tol) const {
  if (max_imag() > tol) throw std::logic_error("operator is not Hermitian: imaginary coefficient above tolerance");
}

OperatorCoeffs OperatorCoeffs::operator+(const OperatorCoeffs& o) const {
  require_same_basis(*this, o, "operator+");
  return {basis_, values_ + o.values_};
}

OperatorCoeffs OperatorCoeffs::operator-(const OperatorCoeffs& o) const {
  require_same_basis(*this, o, "operator-");
  return {basis_, values_ - o.values_};
}

OperatorCoeffs OperatorCoeffs::operator*(cplx s) const { return {basis_, values_ * s}; }

OperatorCoeffs commutator_in_basis(const OperatorCoeffs& a, const OperatorCoeffs& b) {
  require_same_basis(a, b, "commutator_in_basis");
  const auto& table = a.basis()->structure();
  OperatorCoeffs out(a.basis());
  const auto& av = a.values();
  const auto& bv = b.values();
  auto& ov = out.values();
  for (const auto& e : table) ov(e.k) += cplx(0.0, e.imag) * av(e.i) * bv(e.j);
  return out;
}

CommutatorResult commutator_with_dropped(const OperatorCoeffs& a, const OperatorCoeffs& b) {
  require_same_basis(a, b, "commutator_with_dropped");
  const auto& basis = *a.basis();
  CommutatorResult res{OperatorCoeffs(a.basis()), 0.0};
  std::map<std::uint64_t, cplx> dropped;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const cplx ai = a[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const cplx bj = b[j];
      if (bj == 0.0) continue;
      const int parity = std::popcount(basis.x_mask(i) & basis.z_mask(j)) + std::popcount(basis.z_mask(i) & basis.x_mask(j));
      if ((parity & 1) == 0) continue;
      const auto prod = multiply(basis.term(i), basis.term(j));
      const cplx c = 2.0 * prod.phase * ai * bj;
      const auto k = basis.index_of(prod.term);
      if (k >= 0) {
        res.coeffs[static_cast<std::size_t>(k)] += c;
      } else {
        dropped[key_of(prod.term.x_mask(), prod.term.z_mask())] += c;
      }
    }
  }
  for (const auto& [key, c] : dropped) res.dropped_norm2 += std::norm(c);
  return res;
}

CVector el_residual_coeffs(const OperatorCoeffs& a, const OperatorCoeffs& h, const OperatorCoeffs& g) {
  require_same_basis(a, h, "el_residual_coeffs");
  require_same_basis(a, g, "el_residual_coeffs");
  const OperatorCoeffs c = commutator_in_basis(a, h);
  const OperatorCoeffs qv(a.basis(), kI * g.values() - c.values());
  return commutator_in_basis(qv, h).values();
}

CMatrix to_dense(const PauliTerm& t) {
  const int q = t.size();
  const std::size_t d = std::size_t{1} << q;
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const auto x = t.x_mask();
  const auto z = t.z_mask();
  const cplx base = i_power(std::popcount(x & z));
  for (std::size_t b = 0; b < d; ++b) {
    const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) = base * sign;
  }
  return m;
}

CMatrix to_dense(const OperatorCoeffs& a, int ceiling) {
  const auto& basis = *a.basis();
  if (basis.q() > ceiling) throw std::length_error("to_dense: system size exceeds dense ceiling");
  const std::size_t d = std::size_t{1} << basis.q();
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const cplx c = a[k];
    if (c == 0.0) continue;
    const auto x = basis.x_mask(k);
    const auto z = basis.z_mask(k);
    const cplx base = c * i_power(std::popcount(x & z));
    for (std::size_t b = 0; b < d; ++b) {
      const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += base * sign;
    }
  }
  return m;
}

OperatorCoeffs project_dense(const CMatrix& m, BasisPtr basis) {
  const std::size_t d = std::size_t{1} << basis->q();
  if (static_cast<std::size_t>(m.rows()) != d || static_cast<std::size_t>(m.cols()) != d)
    throw std::invalid_argument("project_dense: dimension mismatch");
  OperatorCoeffs out(basis);
  for (std::size_t k = 0; k < basis->size(); ++k) {
    const auto x = basis->x_mask(k);
    const auto z = basis->z_mask(k);
    const cplx base = i_power(std::popcount(x & z));
    cplx acc = 0.0;
    for (std::size_t b = 0; b < d; ++b) {
      const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
      acc += std::conj(base * sign) * m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b));
    }
    out[k] = acc / static_cast<double>(d);
  }
  return out;
}

nlohmann::json to_json(const OperatorCoeffs& a) {
  const auto& basis = *a.basis();
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t k = 0; k < basis.size(); ++k)
    terms.push_back({{"string", basis.term(k).str()}, {"re", a[k].real()}, {"im", a[k].imag()}});
  return {{"q", basis.q()}, {"k", basis.k()}, {"terms", std::move(terms)}};
}

OperatorCoeffs coeffs_from_json(const nlohmann::json& j) {
  auto basis = build_basis(j.at("q").get<int>(), j.at("k").get<int>());
  OperatorCoeffs out(basis);
  for (const auto& t : j.at("terms")) {
    const auto s = t.at("string").get<std::string>();
    out.set(s, cplx(t.at("re").get<double>(), t.at("im").get<double>()));
  }
  return out;
}

}  // namespace qficd
