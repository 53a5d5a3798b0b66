#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tfgen {

// Algebraic normal form of a Boolean function in variables x_0..x_{k-1}.
// A monomial is a bit mask of its variables; mask 0 is the constant 1.
class BooleanANF {
 public:
  static constexpr unsigned kMaxVariables = 24;

  BooleanANF() = default;
  explicit BooleanANF(unsigned variables, std::vector<std::uint32_t> monomials = {});

  static BooleanANF constant(unsigned variables, bool value);
  static BooleanANF variable(unsigned variables, unsigned index);
  // Moebius transform of a truth table indexed by the variable assignment mask.
  static BooleanANF from_truth_table(std::span<const std::uint8_t> table, unsigned variables);

  unsigned variables() const noexcept { return variables_; }
  const std::vector<std::uint32_t>& monomials() const noexcept { return monomials_; }
  std::size_t size() const noexcept { return monomials_.size(); }
  bool is_zero() const noexcept { return monomials_.empty(); }

  bool evaluate(std::uint32_t point) const noexcept;
  std::vector<std::uint8_t> truth_table() const;
  bool coefficient(std::uint32_t monomial) const noexcept;
  int degree() const noexcept;  // -1 for the zero function
  // Union of the variables of all monomials.
  std::uint32_t support() const noexcept;
  bool depends_on(unsigned index) const noexcept { return (support() >> index) & 1U; }

  BooleanANF operator^(const BooleanANF& other) const;
  BooleanANF operator*(const BooleanANF& other) const;
  BooleanANF& operator^=(const BooleanANF& other) { return *this = *this ^ other; }

  // e.g. "x0x2 + x1 + 1"; "0" for the zero function.
  std::string to_string() const;

  friend bool operator==(const BooleanANF&, const BooleanANF&) = default;

 private:
  unsigned variables_ = 0;
  std::vector<std::uint32_t> monomials_;  // sorted, unique
};

// In-place binary Moebius transform (an involution) on a table of size 2^variables.
void moebius_transform(std::span<std::uint8_t> table);

}  // namespace tfgen
