#include "tfgen/word.hpp"

#include <string>

namespace tfgen {

namespace {

void require_same_width(Word a, Word b) {
  if (a.width() != b.width()) {
    throw Error("width mismatch: " + std::to_string(a.width()) + " vs " + std::to_string(b.width()));
  }
}

std::uint64_t pow_plain(std::uint64_t base, std::uint64_t exponent, std::uint64_t mask) {
  std::uint64_t result = 1 & mask;
  base &= mask;
  while (exponent != 0) {
    if (exponent & 1U) result = (result * base) & mask;
    base = (base * base) & mask;
    exponent >>= 1;
  }
  return result;
}

// Exponent of the group of odd residues of Z/2^n: 2^(n-2) for n >= 3, 2 for n = 2, 1 for n = 1.
std::uint64_t unit_exponent_mask(unsigned width) {
  if (width >= 3) return width_mask(width - 2);
  return width == 2 ? 1 : 0;
}

}  // namespace

Word::Word(std::uint64_t value, unsigned width) : value_(value & width_mask(width)), width_(width) {
  if (width == 0 || width > kMaxWidth) throw Error("word width must be in [1, 64], got " + std::to_string(width));
}

std::string_view op_name(Op op) noexcept {
  switch (op) {
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    case Op::pow: return "**";
    case Op::bit_and: return "&";
    case Op::bit_or: return "|";
    case Op::bit_xor: return "^";
  }
  return "?";
}

bool is_compatible_op(Op) noexcept { return true; }

namespace raw {

std::uint64_t inv_odd(std::uint64_t a, unsigned width) {
  if ((a & 1U) == 0) throw Error("non-invertible divisor: " + std::to_string(a) + " is even");
  // Newton iteration doubles the number of correct low bits; a*a == 1 mod 8 seeds 3 bits.
  std::uint64_t x = a;
  for (int i = 0; i < 5; ++i) x *= 2 - a * x;
  return x & width_mask(width);
}

std::uint64_t pow_literal(std::uint64_t base, std::int64_t exponent, unsigned width) {
  const std::uint64_t mask = width_mask(width);
  base &= mask;
  if (base & 1U) {
    // Two's complement reduction of a negative exponent is the residue mod 2^(n-2).
    const auto e = static_cast<std::uint64_t>(exponent) & unit_exponent_mask(width);
    return pow_plain(base, e, mask);
  }
  if (exponent < 0) throw Error("negative exponent with even base " + std::to_string(base));
  return pow_plain(base, static_cast<std::uint64_t>(exponent), mask);
}

std::uint64_t pow_variable(std::uint64_t base, std::uint64_t exponent, unsigned width) {
  if ((base & 1U) == 0) throw Error("variable exponent requires an odd base, got " + std::to_string(base));
  return pow_plain(base, exponent & unit_exponent_mask(width), width_mask(width));
}

std::uint64_t bit_reverse(std::uint64_t x, unsigned width) noexcept {
  std::uint64_t r = 0;
  for (unsigned j = 0; j < width; ++j) r |= ((x >> j) & 1U) << (width - 1 - j);
  return r;
}

std::uint64_t rotate_up1(std::uint64_t x, unsigned width) noexcept {
  const std::uint64_t mask = width_mask(width);
  x &= mask;
  return ((x << 1) | (x >> (width - 1))) & mask;
}

}  // namespace raw

Word apply_primitive(Op op, Word a, Word b) {
  require_same_width(a, b);
  const unsigned n = a.width();
  const std::uint64_t x = a.value();
  const std::uint64_t y = b.value();
  switch (op) {
    case Op::add: return {x + y, n};
    case Op::sub: return {x - y, n};
    case Op::mul: return {x * y, n};
    case Op::div: return {x * raw::inv_odd(y, n), n};
    case Op::pow: return {raw::pow_variable(x, y, n), n};
    case Op::bit_and: return {x & y, n};
    case Op::bit_or: return {x | y, n};
    case Op::bit_xor: return {x ^ y, n};
  }
  throw Error("unknown operator");
}

Word apply_unary(UnaryOp op, Word a) {
  switch (op) {
    case UnaryOp::neg: return {0 - a.value(), a.width()};
    case UnaryOp::bit_not: return {~a.value(), a.width()};
  }
  throw Error("unknown unary operator");
}

Word inv_odd(Word a) { return {raw::inv_odd(a.value(), a.width()), a.width()}; }

Word pow_2adic(Word base, std::int64_t exponent) {
  return {raw::pow_literal(base.value(), exponent, base.width()), base.width()};
}

Word pow_2adic(Word base, Word exponent) {
  require_same_width(base, exponent);
  return {raw::pow_variable(base.value(), exponent.value(), base.width()), base.width()};
}

Word bit_reverse(Word x) { return {raw::bit_reverse(x.value(), x.width()), x.width()}; }

Word shift_rotate(ShiftKind kind, Word x, unsigned count) {
  const unsigned n = x.width();
  if (count >= n) throw Error("shift count " + std::to_string(count) + " out of range for width " + std::to_string(n));
  switch (kind) {
    case ShiftKind::mul_pow2: return {x.value() << count, n};
    case ShiftKind::floor_div_pow2: return {x.value() >> count, n};
    case ShiftKind::rotate_up1: {
      std::uint64_t v = x.value();
      for (unsigned i = 0; i < count; ++i) v = raw::rotate_up1(v, n);
      return {v, n};
    }
  }
  throw Error("unknown shift kind");
}

unsigned delta(unsigned j, Word x) {
  if (j >= x.width()) throw Error("digit index " + std::to_string(j) + " out of range");
  return x.bit(j);
}

}  // namespace tfgen
