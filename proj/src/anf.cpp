#include "tfgen/anf.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "tfgen/error.hpp"

namespace tfgen {

namespace {

void normalize(std::vector<std::uint32_t>& monomials) {
  std::sort(monomials.begin(), monomials.end());
  // Coefficients live in GF(2): pairs of equal monomials cancel.
  std::vector<std::uint32_t> out;
  out.reserve(monomials.size());
  for (std::size_t i = 0; i < monomials.size();) {
    std::size_t j = i;
    while (j < monomials.size() && monomials[j] == monomials[i]) ++j;
    if ((j - i) % 2 == 1) out.push_back(monomials[i]);
    i = j;
  }
  monomials = std::move(out);
}

}  // namespace

BooleanANF::BooleanANF(unsigned variables, std::vector<std::uint32_t> monomials)
    : variables_(variables), monomials_(std::move(monomials)) {
  if (variables > kMaxVariables) throw Error("too many ANF variables: " + std::to_string(variables));
  const std::uint32_t limit = variables == 32 ? 0 : (std::uint32_t{1} << variables);
  for (auto m : monomials_) {
    if (m >= limit) throw Error("monomial uses a variable outside x0..x" + std::to_string(variables - 1));
  }
  normalize(monomials_);
}

BooleanANF BooleanANF::constant(unsigned variables, bool value) {
  return value ? BooleanANF(variables, {0}) : BooleanANF(variables);
}

BooleanANF BooleanANF::variable(unsigned variables, unsigned index) {
  if (index >= variables) throw Error("variable index out of range");
  return BooleanANF(variables, {std::uint32_t{1} << index});
}

void moebius_transform(std::span<std::uint8_t> table) {
  const std::size_t size = table.size();
  for (std::size_t bit = 1; bit < size; bit <<= 1) {
    for (std::size_t mask = 0; mask < size; ++mask) {
      if (mask & bit) table[mask] ^= table[mask ^ bit];
    }
  }
}

BooleanANF BooleanANF::from_truth_table(std::span<const std::uint8_t> table, unsigned variables) {
  if (variables > kMaxVariables) throw Error("truth table over budget");
  if (table.size() != (std::size_t{1} << variables)) throw Error("truth table size does not match variable count");
  std::vector<std::uint8_t> coeffs(table.begin(), table.end());
  for (auto& c : coeffs) c &= 1U;
  moebius_transform(coeffs);
  BooleanANF out;
  out.variables_ = variables;
  for (std::uint32_t m = 0; m < coeffs.size(); ++m) {
    if (coeffs[m]) out.monomials_.push_back(m);
  }
  return out;
}

bool BooleanANF::evaluate(std::uint32_t point) const noexcept {
  bool v = false;
  for (auto m : monomials_) v ^= (point & m) == m;
  return v;
}

std::vector<std::uint8_t> BooleanANF::truth_table() const {
  std::vector<std::uint8_t> table(std::size_t{1} << variables_, 0);
  for (auto m : monomials_) table[m] ^= 1U;
  moebius_transform(table);
  return table;
}

bool BooleanANF::coefficient(std::uint32_t monomial) const noexcept {
  return std::binary_search(monomials_.begin(), monomials_.end(), monomial);
}

int BooleanANF::degree() const noexcept {
  int d = -1;
  for (auto m : monomials_) d = std::max(d, std::popcount(m));
  return d;
}

std::uint32_t BooleanANF::support() const noexcept {
  std::uint32_t s = 0;
  for (auto m : monomials_) s |= m;
  return s;
}

BooleanANF BooleanANF::operator^(const BooleanANF& other) const {
  BooleanANF out;
  out.variables_ = std::max(variables_, other.variables_);
  std::set_symmetric_difference(monomials_.begin(), monomials_.end(), other.monomials_.begin(),
                                other.monomials_.end(), std::back_inserter(out.monomials_));
  return out;
}

BooleanANF BooleanANF::operator*(const BooleanANF& other) const {
  // x_i * x_i = x_i, so a product of monomials is the union of their masks.
  std::unordered_set<std::uint32_t> odd;
  odd.reserve(monomials_.size() * other.monomials_.size());
  for (auto a : monomials_) {
    for (auto b : other.monomials_) {
      auto [it, inserted] = odd.insert(a | b);
      if (!inserted) odd.erase(it);
    }
  }
  BooleanANF out;
  out.variables_ = std::max(variables_, other.variables_);
  out.monomials_.assign(odd.begin(), odd.end());
  std::sort(out.monomials_.begin(), out.monomials_.end());
  return out;
}

std::string BooleanANF::to_string() const {
  if (monomials_.empty()) return "0";
  std::string out;
  // highest degree first
  std::vector<std::uint32_t> order = monomials_;
  std::stable_sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    return pa != pb ? pa > pb : a < b;
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += " + ";
    if (order[i] == 0) {
      out += "1";
      continue;
    }
    for (unsigned v = 0; v < 32; ++v) {
      if ((order[i] >> v) & 1U) out += "x" + std::to_string(v);
    }
  }
  return out;
}

}  // namespace tfgen
