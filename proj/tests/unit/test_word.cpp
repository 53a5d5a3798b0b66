#include <doctest.h>

#include <random>
#include <string>

#include "tfgen/error.hpp"
#include "tfgen/word.hpp"

using namespace tfgen;

namespace {

// Brute-force oracles.
std::uint64_t slow_inverse(std::uint64_t a, unsigned n) {
  for (std::uint64_t b = 0; b < (1ULL << n); ++b) {
    if ((a * b & width_mask(n)) == 1) return b;
  }
  return 0;
}

std::uint64_t slow_pow(std::uint64_t a, std::uint64_t e, unsigned n) {
  std::uint64_t r = 1 & width_mask(n);
  for (std::uint64_t t = 0; t < e; ++t) r = r * a & width_mask(n);
  return r;
}

std::string bits_lsb_first(std::uint64_t x, unsigned n) {
  std::string s;
  for (unsigned j = 0; j < n; ++j) s += ((x >> j) & 1) ? '1' : '0';
  return s;
}

std::uint64_t from_bits_lsb_first(const std::string& s) {
  std::uint64_t x = 0;
  for (std::size_t j = 0; j < s.size(); ++j) x |= static_cast<std::uint64_t>(s[j] == '1') << j;
  return x;
}

}  // namespace

TEST_CASE("operator agreement examples") {
  CHECK(apply_primitive(Op::bit_xor, Word(1, 3), Word(3, 3)).value() == 2);
  CHECK(apply_primitive(Op::bit_and, Word(2, 3), Word(7, 3)).value() == 2);
  CHECK(apply_unary(UnaryOp::bit_not, Word(13 % 8, 3)).value() == 2);
  CHECK(apply_primitive(Op::div, Word(1, 4), Word(3, 4)).value() == 11);
  CHECK(apply_unary(UnaryOp::neg, Word(5, 4)).value() == 11);
}

TEST_CASE("width mismatch and construction") {
  CHECK_THROWS_AS(apply_primitive(Op::add, Word(1, 3), Word(1, 4)), Error);
  CHECK(Word(17, 4).value() == 1);
  CHECK_THROWS_AS(Word(0, 0), Error);
  CHECK_THROWS_AS(Word(0, 65), Error);
  CHECK(Word(~0ULL, 64).value() == ~0ULL);
}

TEST_CASE("inv_odd") {
  CHECK(inv_odd(Word(3, 4)).value() == 11);
  CHECK(inv_odd(Word(5, 3)).value() == 5);
  for (unsigned n = 1; n <= 64; ++n) CHECK(inv_odd(Word(1, n)).value() == 1);
  for (unsigned n = 1; n <= 12; ++n) {
    for (std::uint64_t a = 1; a < (1ULL << n); a += 2) {
      const auto b = inv_odd(Word(a, n)).value();
      REQUIRE((a * b & width_mask(n)) == 1);
      if (n <= 8) REQUIRE(b == slow_inverse(a, n));
    }
  }
  CHECK_THROWS_WITH_AS(inv_odd(Word(4, 4)), doctest::Contains("non-invertible divisor"), Error);
  CHECK_THROWS_AS(apply_primitive(Op::div, Word(1, 4), Word(2, 4)), Error);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 1000; ++t) {
    const auto a = rng() | 1;
    CHECK(a * inv_odd(Word(a, 64)).value() == 1);
  }
}

TEST_CASE("pow_2adic") {
  CHECK(pow_2adic(Word(3, 4), -5).value() == 11);
  CHECK(pow_2adic(Word(3, 4), 11).value() == 11);
  for (std::uint64_t a = 1; a < 16; a += 2) CHECK(pow_2adic(Word(a, 4), 0).value() == 1);
  CHECK(pow_2adic(Word(3, 4), Word(11, 4)).value() == 11);
  // negative exponent is the inverse of the positive power
  CHECK(pow_2adic(Word(3, 10), -7).value() == inv_odd(pow_2adic(Word(3, 10), 7)).value());

  SUBCASE("exponent periodicity, exhaustive to n = 10") {
    for (unsigned n = 3; n <= 10; ++n) {
      const std::uint64_t half = 1ULL << (n - 2);
      for (std::uint64_t a = 1; a < (1ULL << n); a += 2) {
        for (std::uint64_t e = 0; e < half; ++e) {
          const auto lhs = pow_2adic(Word(a, n), static_cast<std::int64_t>(e + half)).value();
          const auto rhs = pow_2adic(Word(a, n), static_cast<std::int64_t>(e)).value();
          REQUIRE(lhs == rhs);
        }
      }
    }
  }
  SUBCASE("literal powers agree with repeated multiplication") {
    for (unsigned n = 1; n <= 8; ++n) {
      for (std::uint64_t a = 0; a < (1ULL << n); ++a) {
        for (std::uint64_t e = 0; e < 40; ++e) {
          REQUIRE(pow_2adic(Word(a, n), static_cast<std::int64_t>(e)).value() == slow_pow(a, e, n));
        }
      }
    }
  }
  CHECK_THROWS_AS(pow_2adic(Word(2, 4), Word(3, 4)), Error);
  CHECK_THROWS_AS(pow_2adic(Word(2, 4), -1), Error);
}

TEST_CASE("bit reversal") {
  CHECK(bit_reverse(Word(1, 4)).value() == 8);
  CHECK(bit_reverse(Word(3, 4)).value() == 12);
  for (unsigned n = 1; n <= 64; ++n) CHECK(bit_reverse(Word(0, n)).value() == 0);
  for (unsigned n = 1; n <= 10; ++n) {
    for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
      auto s = bits_lsb_first(x, n);
      std::string r(s.rbegin(), s.rend());
      REQUIRE(bit_reverse(Word(x, n)).value() == from_bits_lsb_first(r));
      REQUIRE(bit_reverse(bit_reverse(Word(x, n))).value() == x);
    }
  }
}

TEST_CASE("shifts and rotation") {
  CHECK(shift_rotate(ShiftKind::mul_pow2, Word(3, 4), 1).value() == 6);
  CHECK(shift_rotate(ShiftKind::floor_div_pow2, Word(13, 4), 2).value() == 3);
  CHECK(shift_rotate(ShiftKind::rotate_up1, Word(9, 4), 1).value() == 3);
  CHECK_THROWS_AS(shift_rotate(ShiftKind::mul_pow2, Word(3, 4), 4), Error);
  for (unsigned n = 2; n <= 9; ++n) {
    for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
      // string oracle: last digit moves to the front in LSB-first order
      const auto s = bits_lsb_first(x, n);
      const auto rotated = s.substr(n - 1) + s.substr(0, n - 1);
      REQUIRE(shift_rotate(ShiftKind::rotate_up1, Word(x, n), 1).value() == from_bits_lsb_first(rotated));
    }
  }
}

TEST_CASE("delta") {
  CHECK(delta(0, Word(6, 4)) == 0);
  CHECK(delta(1, Word(6, 4)) == 1);
  CHECK(delta(2, Word(6, 4)) == 1);
  CHECK_THROWS_AS(delta(4, Word(6, 4)), Error);
}

TEST_CASE("compatibility of the operator set") {
  const Op ops[] = {Op::add, Op::sub, Op::mul, Op::bit_and, Op::bit_or, Op::bit_xor};
  SUBCASE("exhaustive at n = 6") {
    const unsigned n = 6;
    for (auto op : ops) {
      for (std::uint64_t a = 0; a < 64; ++a) {
        for (std::uint64_t b = 0; b < 64; ++b) {
          const auto full = apply_primitive(op, Word(a, n), Word(b, n)).value();
          for (unsigned r = 1; r <= n; ++r) {
            const auto low = apply_primitive(op, Word(a, r), Word(b, r)).value();
            REQUIRE((full & width_mask(r)) == low);
          }
        }
      }
    }
  }
  SUBCASE("division and power, odd second operand") {
    const unsigned n = 8;
    for (std::uint64_t a = 0; a < 256; ++a) {
      for (std::uint64_t b = 1; b < 256; b += 2) {
        const auto q = apply_primitive(Op::div, Word(a, n), Word(b, n)).value();
        const auto p = apply_primitive(Op::pow, Word(b, n), Word(a, n)).value();
        for (unsigned r = 1; r <= n; ++r) {
          REQUIRE((q & width_mask(r)) == apply_primitive(Op::div, Word(a, r), Word(b, r)).value());
          REQUIRE((p & width_mask(r)) == apply_primitive(Op::pow, Word(b, r), Word(a, r)).value());
        }
      }
    }
  }
  SUBCASE("randomized at n = 12") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20000; ++t) {
      const auto op = ops[rng() % 6];
      const unsigned r = 1 + rng() % 12;
      const auto a = rng() & 0xfff, b = rng() & 0xfff;
      const auto a2 = (a & width_mask(r)) | (rng() & 0xfff & ~width_mask(r));
      const auto b2 = (b & width_mask(r)) | (rng() & 0xfff & ~width_mask(r));
      const auto x = apply_primitive(op, Word(a, 12), Word(b, 12)).value();
      const auto y = apply_primitive(op, Word(a2, 12), Word(b2, 12)).value();
      REQUIRE((x & width_mask(r)) == (y & width_mask(r)));
    }
  }
  CHECK(is_compatible_op(Op::pow));
}

TEST_CASE("floor division and rotation are not compatible at n = 2") {
  // 0 and 2 agree mod 2; their images do not
  CHECK((shift_rotate(ShiftKind::floor_div_pow2, Word(0, 2), 1).value() & 1) !=
        (shift_rotate(ShiftKind::floor_div_pow2, Word(2, 2), 1).value() & 1));
  CHECK((shift_rotate(ShiftKind::rotate_up1, Word(0, 2), 1).value() & 1) !=
        (shift_rotate(ShiftKind::rotate_up1, Word(2, 2), 1).value() & 1));
}
