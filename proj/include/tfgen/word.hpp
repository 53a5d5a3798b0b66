#pragma once

#include <cstdint>
#include <string_view>

#include "tfgen/error.hpp"

namespace tfgen {

inline constexpr unsigned kMaxWidth = 64;

constexpr std::uint64_t width_mask(unsigned width) noexcept {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

// An element of Z/2^n. Bit j of value() is the j-th base-2 digit (least significant first).
class Word {
 public:
  constexpr Word() = default;
  Word(std::uint64_t value, unsigned width);

  constexpr std::uint64_t value() const noexcept { return value_; }
  constexpr unsigned width() const noexcept { return width_; }
  constexpr unsigned bit(unsigned j) const noexcept { return static_cast<unsigned>((value_ >> j) & 1U); }

  friend constexpr bool operator==(const Word&, const Word&) = default;

 private:
  std::uint64_t value_ = 0;
  unsigned width_ = 1;
};

// Binary operators of the compatible operator set. All are compatible: results
// modulo 2^r depend only on the operands modulo 2^r.
enum class Op { add, sub, mul, div, pow, bit_and, bit_or, bit_xor };
enum class UnaryOp { neg, bit_not };

// Non-compatible helpers are named by effect, not by the usual shift names.
enum class ShiftKind {
  mul_pow2,        // x * 2^m mod 2^n
  floor_div_pow2,  // floor(x / 2^m)
  rotate_up1,      // circular rotation by m single positions towards the high-order bit
};

std::string_view op_name(Op op) noexcept;
bool is_compatible_op(Op op) noexcept;

// Raw kernels on (value, width); inputs are assumed already reduced. Hot loops use these.
namespace raw {

std::uint64_t inv_odd(std::uint64_t a, unsigned width);
// Odd base: exponent reduced modulo the exponent of the unit group. Even base: plain power.
std::uint64_t pow_literal(std::uint64_t base, std::int64_t exponent, unsigned width);
// Variable exponent already reduced mod 2^width; base must be odd.
std::uint64_t pow_variable(std::uint64_t base, std::uint64_t exponent, unsigned width);
std::uint64_t bit_reverse(std::uint64_t x, unsigned width) noexcept;
std::uint64_t rotate_up1(std::uint64_t x, unsigned width) noexcept;

}  // namespace raw

Word apply_primitive(Op op, Word a, Word b);
Word apply_unary(UnaryOp op, Word a);

Word inv_odd(Word a);
// a^e with e a signed literal.
Word pow_2adic(Word base, std::int64_t exponent);
// a^e with e a computed word; the base has to be odd.
Word pow_2adic(Word base, Word exponent);

Word bit_reverse(Word x);
Word shift_rotate(ShiftKind kind, Word x, unsigned count);
unsigned delta(unsigned j, Word x);

}  // namespace tfgen
