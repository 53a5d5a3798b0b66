#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "tfgen/anf_lab.hpp"
#include "tfgen/error.hpp"
#include "tfgen/word.hpp"

using namespace tfgen;

namespace {

Mapping fn(std::function<std::uint64_t(std::uint64_t)> f) {
  return Mapping([f](std::uint64_t x, unsigned) { return f(x); });
}

// Orbit oracle written against a plain table.
bool single_cycle(const std::vector<std::uint64_t>& t) {
  std::vector<bool> seen(t.size());
  std::uint64_t x = 0;
  for (std::size_t s = 0; s < t.size(); ++s) {
    if (seen[x]) return false;
    seen[x] = true;
    x = t[x];
  }
  return x == 0;
}

bool oracle_ergodic(const Mapping& f, unsigned depth) {
  for (unsigned k = 1; k <= depth; ++k) {
    if (!single_cycle(f.table(k))) return false;
  }
  return true;
}

bool oracle_bijective(const std::vector<std::uint64_t>& t) {
  std::set<std::uint64_t> s(t.begin(), t.end());
  return s.size() == t.size();
}

// Definition of compatibility on a table.
bool oracle_compatible(const std::vector<std::uint64_t>& t, unsigned n) {
  for (std::uint64_t a = 0; a < t.size(); ++a) {
    for (std::uint64_t b = 0; b < t.size(); ++b) {
      for (unsigned r = 1; r <= n; ++r) {
        const auto m = width_mask(r);
        if ((a & m) == (b & m) && (t[a] & m) != (t[b] & m)) return false;
      }
    }
  }
  return true;
}

BooleanANF random_anf(std::mt19937_64& rng, unsigned k) {
  std::vector<std::uint32_t> mons;
  const auto count = rng() % 12;
  for (std::uint64_t i = 0; i < count; ++i) mons.push_back(static_cast<std::uint32_t>(rng() & ((1U << k) - 1)));
  std::sort(mons.begin(), mons.end());
  // duplicates cancel in pairs
  std::vector<std::uint32_t> reduced;
  for (std::size_t i = 0; i < mons.size();) {
    std::size_t j = i;
    while (j < mons.size() && mons[j] == mons[i]) ++j;
    if ((j - i) % 2) reduced.push_back(mons[i]);
    i = j;
  }
  return BooleanANF(k, reduced);
}

}  // namespace

TEST_CASE("ANF basics and Moebius round trip") {
  std::mt19937_64 rng(3);
  for (unsigned k = 0; k <= 12; ++k) {
    for (int t = 0; t < 20; ++t) {
      const auto a = random_anf(rng, k);
      const auto tt = a.truth_table();
      // evaluate straight from the monomials
      for (std::uint32_t p = 0; p < (1U << k); ++p) {
        bool v = false;
        for (auto m : a.monomials()) v ^= (p & m) == m;
        REQUIRE(tt[p] == v);
      }
      REQUIRE(BooleanANF::from_truth_table(tt, k) == a);
    }
  }
  const auto x0 = BooleanANF::variable(3, 0), x1 = BooleanANF::variable(3, 1);
  CHECK((x0 * x1).to_string() == "x0x1");
  CHECK((x0 ^ x0).is_zero());
  CHECK((x0 * x1 ^ BooleanANF::constant(3, true)).degree() == 2);
  CHECK(BooleanANF(3).degree() == -1);
  CHECK((x0 ^ x1).support() == 3);
}

TEST_CASE("anf_of_bit") {
  const auto inc = fn([](std::uint64_t x) { return x + 1; });
  CHECK(anf_of_bit(inc, 1, 4) == (BooleanANF::variable(4, 1) ^ BooleanANF::variable(4, 0)));
  CHECK(anf_of_bit(Mapping::identity(), 0, 4) == BooleanANF::variable(4, 0));
  const auto ks5 = fn([](std::uint64_t x) { return x + ((x * x) | 5); });
  for (unsigned n = 1; n <= 8; ++n) {
    CHECK(anf_of_bit(ks5, 0, n) == (BooleanANF::variable(n, 0) ^ BooleanANF::constant(n, true)));
  }
  CHECK_THROWS_AS(anf_of_bit(inc, 0, 17), Error);
}

TEST_CASE("is_compatible") {
  CHECK(is_compatible(fn([](std::uint64_t x) { return x + 1; }), 8).compatible);
  const auto half = Mapping([](std::uint64_t x, unsigned) { return x >> 1; });
  const auto r = is_compatible(half, 4);
  REQUIRE_FALSE(r.compatible);
  REQUIRE(r.witness);
  CHECK(r.witness->modulus_bits == 1);
  const auto& w = *r.witness;
  CHECK((w.u & 1) == (w.u_prime & 1));
  CHECK(((w.u >> 1) & 1) != ((w.u_prime >> 1) & 1));

  const auto rev = Mapping([](std::uint64_t x, unsigned n) {
    std::uint64_t y = 0;
    for (unsigned j = 0; j < n; ++j) y |= ((x >> j) & 1) << (n - 1 - j);
    return y;
  });
  CHECK_FALSE(is_compatible(rev, 2).compatible);
  CHECK(oracle_compatible(rev.table(2), 2) == false);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    std::vector<std::uint64_t> table(16);
    for (auto& v : table) v = rng() % 16;
    const auto m = Mapping::from_table(table, 4);
    const auto verdict = is_compatible(m, 4);
    REQUIRE(verdict.compatible == oracle_compatible(table, 4));
    if (!verdict.compatible) {
      const auto& wt = *verdict.witness;
      const auto mask = width_mask(wt.modulus_bits);
      REQUIRE((wt.u & mask) == (wt.u_prime & mask));
      REQUIRE((table[wt.u] & mask) != (table[wt.u_prime] & mask));
    }
  }
}

TEST_CASE("cycle structure and finite-depth ergodicity") {
  const auto inc = fn([](std::uint64_t x) { return x + 1; });
  for (unsigned n = 1; n <= 12; ++n) CHECK(cycle_structure(inc, n).transitive);
  const auto add2 = cycle_structure(fn([](std::uint64_t x) { return x + 2; }), 2);
  CHECK(add2.bijective);
  CHECK_FALSE(add2.transitive);
  CHECK(add2.cycle_lengths == std::map<std::uint64_t, std::uint64_t>{{2, 2}});
  CHECK(cycle_structure(fn([](std::uint64_t x) { return x + ((x * x) | 5); }), 3).transitive);

  CHECK(is_ergodic_to_depth(inc, 10));
  CHECK_FALSE(is_ergodic_to_depth(Mapping::identity(), 1));
  CHECK(is_ergodic_to_depth(fn([](std::uint64_t x) { return x + ((x * x) | 7); }), 10));
  CHECK_FALSE(is_ergodic_to_depth(fn([](std::uint64_t x) { return x + ((x * x) | 1); }), 10));
  CHECK(is_mp_to_depth(Mapping::identity(), 10));
  CHECK_FALSE(is_mp_to_depth(fn([](std::uint64_t x) { return x * x; }), 3));

  std::mt19937_64 rng(9);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::uint64_t> table(32);
    for (std::uint64_t x = 0; x < 32; ++x) table[x] = x;
    std::shuffle(table.begin(), table.end(), rng);
    const auto m = Mapping::from_table(table, 5);
    const auto cs = cycle_structure(m, 5);
    REQUIRE(cs.transitive == single_cycle(table));
    std::uint64_t total = 0;
    for (auto [len, count] : cs.cycle_lengths) total += len * count;
    REQUIRE(total == 32);
  }
}

TEST_CASE("ANF ergodicity criterion") {
  CHECK(ergodicity_via_anf(fn([](std::uint64_t x) { return x + 1; }), 10));
  const auto xor1 = anf_ergodicity(fn([](std::uint64_t x) { return x ^ 1; }), 10);
  CHECK_FALSE(xor1.ergodic);
  CHECK(xor1.failing_bit == 1);
  CHECK(xor1.measure_preserving);
  CHECK(ergodicity_via_anf(fn([](std::uint64_t x) { return x + 3; }), 10));
  CHECK(is_ergodic_to_depth(fn([](std::uint64_t x) { return x + 3; }), 10));

  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    const unsigned n = 1 + rng() % 8;
    const auto f = mapping_from_bit_anfs(random_compatible_anfs(rng, n));
    REQUIRE(ergodicity_via_anf(f, n) == oracle_ergodic(f, n));
    bool bij = true;
    for (unsigned k = 1; k <= n; ++k) bij = bij && oracle_bijective(f.table(k));
    REQUIRE(anf_ergodicity(f, n).measure_preserving == bij);
  }
}

TEST_CASE("count_transitive against a table-lifting oracle") {
  // compatible maps mod 2^n are the tables whose reduction is compatible mod 2^(n-1),
  // with any top bit chosen per residue mod 2^n
  std::function<std::uint64_t(unsigned)> oracle = [](unsigned n) {
    std::vector<std::vector<std::uint64_t>> level{{0}};
    for (unsigned k = 1; k <= n; ++k) {
      std::vector<std::vector<std::uint64_t>> next;
      const std::uint64_t size = 1ULL << k;
      for (const auto& low : level) {
        for (std::uint64_t bits = 0; bits < (1ULL << size); ++bits) {
          std::vector<std::uint64_t> t(size);
          for (std::uint64_t x = 0; x < size; ++x) {
            t[x] = (k == 1 ? 0 : low[x & (size / 2 - 1)]) | (((bits >> x) & 1) << (k - 1));
          }
          if (single_cycle(t)) next.push_back(t);
        }
      }
      level = std::move(next);
    }
    return static_cast<std::uint64_t>(level.size());
  };
  CHECK(count_transitive(1) == 1);
  CHECK(count_transitive(2) == 2);
  CHECK(count_transitive(3) == 16);
  for (unsigned n = 1; n <= 3; ++n) CHECK(count_transitive(n) == oracle(n));
  CHECK_THROWS_AS(count_transitive(5), Error);
}

TEST_CASE("constructors") {
  const auto inc = fn([](std::uint64_t x) { return x + 1; });
  const auto zero = Mapping::constant(0);
  for (std::uint64_t x = 0; x < 64; ++x) {
    CHECK(make_ergodic_delta(zero, 1)(x, 6) == ((x + 1) & 63));
    CHECK(make_ergodic_delta(Mapping::identity(), 1)(x, 6) == ((x + 3) & 63));
    CHECK(make_mp(0, 1, zero)(x, 6) == x);
    CHECK(make_mp(0, 1, Mapping::identity())(x, 6) == (3 * x & 63));
  }
  CHECK(is_ergodic_to_depth(make_ergodic_delta(fn([](std::uint64_t x) { return (x * x) & 13; }), 1), 10));
  CHECK(is_mp_to_depth(make_mp(5, 3, fn([](std::uint64_t x) { return x * x; })), 10));
  CHECK_THROWS_AS(make_ergodic_delta(zero, 2), Error);
  CHECK_THROWS_AS(make_mp(0, 4, zero), Error);
  CHECK_THROWS_AS(make_ergodic_delta(Mapping([](std::uint64_t x, unsigned) { return x >> 1; }), 1), Error);

  for (int v = 1; v <= 4; ++v) {
    const auto l = lift_compose(inc, zero, static_cast<LiftVariant>(v));
    for (std::uint64_t x = 0; x < 64; ++x) CHECK(l(x, 6) == inc(x, 6));
  }
  const auto five = lift_compose(inc, Mapping::identity(), LiftVariant::add);
  for (std::uint64_t x = 0; x < 64; ++x) CHECK(five(x, 6) == ((5 * x + 1) & 63));
  CHECK(is_ergodic_to_depth(five, 10));
  CHECK(is_ergodic_to_depth(lift_compose(fn([](std::uint64_t x) { return x + 3; }),
                                         fn([](std::uint64_t x) { return x * x; }), LiftVariant::compose_add),
                            10));

  SUBCASE("soundness on random inputs") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 500; ++t) {
      const auto g = mapping_from_bit_anfs(random_compatible_anfs(rng, 10));
      const auto c = rng() | 1;
      REQUIRE(is_ergodic_to_depth(make_ergodic_delta(g, c), 10));
      REQUIRE(is_mp_to_depth(make_mp(rng(), c, g), 10));
      const auto f = make_ergodic_delta(g, 1);
      const auto v = mapping_from_bit_anfs(random_compatible_anfs(rng, 10));
      REQUIRE(is_ergodic_to_depth(lift_compose(f, v, static_cast<LiftVariant>(1 + t % 4)), 10));
    }
  }
}

TEST_CASE("decompose_ergodic") {
  const auto check_identity = [](const Mapping& f, unsigned n) {
    const auto g = decompose_ergodic(f, n);
    REQUIRE(g.size() == (1ULL << n));
    CHECK(g[0] == 0);
    for (std::uint64_t x = 0; x + 1 < (1ULL << n); ++x) {
      REQUIRE(f(x, n) == ((1 + x + 2 * (g[x + 1] - g[x])) & width_mask(n)));
    }
    return g;
  };
  const auto g1 = check_identity(fn([](std::uint64_t x) { return x + 1; }), 8);
  CHECK(std::all_of(g1.begin(), g1.end(), [](auto v) { return v == 0; }));
  const auto g3 = check_identity(fn([](std::uint64_t x) { return x + 3; }), 8);
  for (std::uint64_t x = 0; x + 1 < 256; ++x) CHECK(((g3[x + 1] - g3[x]) & 127) == 1);

  std::mt19937_64 rng(2);
  int done = 0;
  while (done < 20) {
    const auto f = mapping_from_bit_anfs(random_compatible_anfs(rng, 6));
    if (!is_ergodic_to_depth(f, 6)) continue;
    check_identity(f, 6);
    ++done;
  }
  CHECK_THROWS_AS(decompose_ergodic(Mapping::identity(), 4), Error);
}

TEST_CASE("family criteria agree with transitivity") {
  for (std::uint64_t c = 0; c < 8; ++c) {
    const FamilyParams p = family::KlimovShamir{c};
    CHECK(family_criterion(p) == (c % 8 == 5 || c % 8 == 7));
    CHECK(family_criterion(p) == is_ergodic_to_depth(family_mapping(p), 10));
  }
  CHECK(family_criterion(family::Larin{{1, 1}}));
  CHECK(family_kind(family::Larin{{1, 1}}) == "larin");

  std::mt19937_64 rng(77);
  const auto small = [&] { return static_cast<std::int64_t>(rng() % 17) - 8; };
  for (int t = 0; t < 200; ++t) {
    std::vector<FamilyParams> cases;
    std::vector<std::int64_t> poly(1 + rng() % 6);
    for (auto& a : poly) a = small();
    cases.push_back(family::Larin{poly});
    family::XorSum xs{small(), {}};
    for (int i = 0; i < 3; ++i) xs.terms.push_back({small(), rng() % 32});
    cases.push_back(xs);
    family::KotominaChain kc;
    for (int i = 0; i < 3; ++i) kc.steps.push_back({rng() % 32, rng() % 32});
    cases.push_back(kc);
    family::DeltaSeries ds{small(), {}};
    for (int i = 0; i < 6; ++i) ds.coeffs.push_back(small());
    if (t % 2) {  // bias towards the ergodic shape
      ds.a |= 1;
      ds.coeffs[0] = 1 + 4 * small();
      for (std::size_t i = 1; i < ds.coeffs.size(); ++i) ds.coeffs[i] = (std::int64_t{1} << i) * (1 + 2 * small());
    }
    cases.push_back(ds);
    family::EntireRatio er{{small(), small(), small()}, {small(), small()}};
    cases.push_back(er);
    cases.push_back(family::ExpAffine{rng() % 64});
    for (const auto& p : cases) {
      INFO(family_kind(p));
      // a truncated delta series ignores the bits past its last coefficient
      const unsigned depth = std::holds_alternative<family::DeltaSeries>(p) ? 6 : 10;
      REQUIRE(family_criterion(p) == is_ergodic_to_depth(family_mapping(p), depth));
    }
  }
}

TEST_CASE("rational polynomial criterion") {
  using family::Rational;
  // x + 1, and (x^2 + x)/2 + 1 + x which maps Z into Z
  CHECK(family_criterion(family::RationalPoly{{Rational{1, 1}, Rational{1, 1}}}));
  const family::RationalPoly tri{{Rational{1, 1}, Rational{3, 2}, Rational{1, 2}}};
  CHECK(family_criterion(tri) == is_ergodic_to_depth(family_mapping(tri), 10));
  // x/2 is not integer valued
  CHECK_FALSE(family_criterion(family::RationalPoly{{Rational{0, 1}, Rational{1, 2}}}));
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    // integer-valued by construction: integer combinations of binomials x(x-1)/2
    const std::int64_t a = rng() % 8, b = rng() % 8, c = rng() % 8;
    const family::RationalPoly p{{Rational{c, 1}, Rational{2 * b - a, 2}, Rational{a, 2}}};
    REQUIRE(family_criterion(p) == is_ergodic_to_depth(family_mapping(p), 10));
  }
}

TEST_CASE("carry formula") {
  for (unsigned j = 0; j < 8; ++j) {
    for (std::uint64_t i = 0; i < 256; ++i) {
      const auto a = add_carry_anf(j, i);
      for (std::uint64_t z = 0; z < 256; ++z) {
        REQUIRE(a.evaluate(static_cast<std::uint32_t>(z & width_mask(j + 1))) == (((z + i) >> j) & 1));
      }
    }
  }
  CHECK(add_carry_anf(1, 1).evaluate(1));
  for (std::uint64_t i = 0; i < 8; ++i) {
    CHECK(add_carry_anf(0, i) == (BooleanANF::variable(1, 0) ^ BooleanANF::constant(1, i & 1)));
  }
  std::size_t prev = 0;
  for (unsigned j = 1; j <= 12; ++j) {
    const auto size = add_carry_anf(j, (1ULL << j) - 1).size();
    CHECK(size > prev);
    prev = size;
  }
}
