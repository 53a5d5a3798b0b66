#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "tfgen/analysis.hpp"
#include "tfgen/error.hpp"
#include "tfgen/wreath.hpp"

using namespace tfgen;

namespace {

GeneratorSpec counter_spec(unsigned n, std::vector<std::uint64_t> c, std::string update = "x + c") {
  GeneratorSpec s;
  s.n = n;
  s.control = ExplicitControl{std::move(c)};
  s.update = {std::move(update)};
  return s;
}

// Direct simulation oracle; smallest t with a cyclic sequence repeating (brute force).
std::uint64_t brute_period(const std::vector<std::uint64_t>& seq) {
  for (std::uint64_t t = 1; t <= seq.size(); ++t) {
    bool ok = true;
    for (std::size_t i = 0; i < seq.size() && ok; ++i) ok = seq[i] == seq[(i + t) % seq.size()];
    if (ok) return t;
  }
  return seq.size();
}

std::vector<Mapping> adders(std::vector<std::uint64_t> c) {
  std::vector<Mapping> out;
  for (auto v : c) out.push_back(Mapping([v](std::uint64_t x, unsigned) { return x + v; }));
  return out;
}

}  // namespace

TEST_CASE("validate_wp small families") {
  const auto one = validate_wp(adders({1}), 8);
  CHECK(one.parity_period_ok);
  CHECK(one.sum_odd);
  CHECK(one.coef_ok);
  CHECK(one.passed());
  // the literal sum form is 3 mod 4 for x + 1, the g - z form holds
  CHECK_FALSE(one.literal_sum.at(0));
  CHECK(one.literal_sum_minus_z.at(0));

  const auto three = validate_wp(adders({0, 1, 2}), 8);
  CHECK(three.passed());
  CHECK(three.parities == std::vector<std::uint64_t>{0, 1, 0});
  CHECK(three.parity_period == 3);

  // c = 0, 1: all three conditions hold, and simulation gives the full period
  const auto two = validate_wp(adders({0, 1}), 8);
  CHECK(two.parity_period_ok);
  CHECK(two.sum_odd);
  CHECK(two.coef_ok);
  GeneratorSpec s = counter_spec(8, {0, 1});
  CHECK(measure_period(s).state_period == 512);
  // c = 1, 1 breaks (1) and the period collapses
  const auto odd = validate_wp(adders({1, 1}), 8);
  CHECK_FALSE(odd.parity_period_ok);
  CHECK_FALSE(odd.sum_odd);
  CHECK(measure_period(counter_spec(8, {1, 1})).state_period == 256);

  CHECK_THROWS_AS(validate_wp({Mapping([](std::uint64_t x, unsigned) { return x * x; })}, 4), Error);
  CHECK_THROWS_AS(validate_wp(adders({1}), 17), Error);
}

TEST_CASE("generator traces") {
  GeneratorSpec s = counter_spec(2, {0, 1, 2});
  Generator g(s);
  const auto st = g.states(24);
  const std::vector<std::uint64_t> expect{0, 0, 1, 3, 3, 0, 2, 2, 3, 1, 1, 2};
  for (std::size_t i = 0; i < 24; ++i) CHECK(st[i] == expect[i % 12]);
  const auto p = measure_period(s);
  CHECK(p.tail == 0);
  CHECK(p.state_period == 12);
  const auto u = strict_uniformity(expect, 2);
  CHECK(u.counts == std::vector<std::uint64_t>{3, 3, 3, 3});

  GeneratorSpec c = counter_spec(4, {1}, "x + 1");
  c.output.k = 4;
  Generator gc(c);
  const auto out = gc.outputs(32);
  for (std::size_t i = 0; i < 32; ++i) CHECK(out[i] == i % 16);

  // runtime errors surface with the step index
  GeneratorSpec bad = counter_spec(4, {1}, "x + 1 / x");
  Generator gb(bad);
  CHECK_THROWS_WITH_AS(gb.advance(), doctest::Contains("step 0"), Error);
}

TEST_CASE("resolve rejects malformed specs") {
  GeneratorSpec s = counter_spec(4, {0, 1, 2});
  s.m = 4;
  CHECK_THROWS_AS(resolve(s), Error);
  s.m = 3;
  CHECK_NOTHROW(resolve(s));
  s.seed = 16;
  CHECK_THROWS_AS(resolve(s), Error);
  s.seed = 0;
  s.output.k = 5;
  CHECK_THROWS_AS(resolve(s), Error);
  GeneratorSpec e = counter_spec(4, {});
  CHECK_THROWS_AS(resolve(e), Error);
}

TEST_CASE("LFSR control") {
  LfsrControl l{3, {0, 1}, 1};
  const auto seq = lfsr_sequence(l);
  CHECK(seq.size() == 7);
  // simulate the register independently
  std::vector<int> cells{1, 0, 0};
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(seq[i] == static_cast<std::uint64_t>(cells[0]));
    const int fb = cells[0] ^ cells[1];
    cells = {cells[1], cells[2], fb};
  }
  CHECK_THROWS_AS(lfsr_sequence(LfsrControl{3, {0}, 1}), Error);
  CHECK_THROWS_AS(lfsr_sequence(LfsrControl{3, {0, 1}, 0}), Error);
}

TEST_CASE("output functions") {
  const auto inc = Mapping([](std::uint64_t x, unsigned) { return x + 1; });
  const auto f = output_reverse_ergodic({inc}, 4, 4);
  CHECK(f[0](1, 4) == 9);
  CHECK(f[0](0, 4) == 1);
  const auto fr = output_reverse_ergodic({inc}, 4, 4, BitPermutation::rotate);
  CHECK(fr[0](8, 4) == 2);
  const auto g8 = output_reverse_ergodic({inc}, 8, 4);
  std::vector<int> counts(16);
  for (std::uint64_t x = 0; x < 256; ++x) ++counts[g8[0](x, 8)];
  for (auto c : counts) CHECK(c == 16);
  CHECK(is_balanced(g8[0], 8, 4));
  CHECK_THROWS_AS(output_reverse_ergodic({Mapping::identity()}, 8, 4), Error);
}

TEST_CASE("example constructions") {
  SUBCASE("intro") {
    const auto b = build_example("intro", {{"n", 4}, {"m", 3}});
    CHECK(b.report.passed());
    const auto p = measure_period(b.spec);
    CHECK(p.state_period == 48);
    const auto big = build_example("intro", {{"n", 8}, {"m", 3}});
    CHECK(measure_period(big.spec).state_period == 768);
    CHECK_THROWS_WITH_AS(build_example("intro", {{"m", 4}}), doctest::Contains("construction precondition"), Error);
  }
  SUBCASE("klsh") {
    const auto b = build_example("klsh", {{"n", 8}, {"c", {0, 1, 1}}, {"C", {5, 13, 7}}});
    CHECK(b.report.passed());
    const auto fam = resolve(b.spec);
    Generator g(fam, b.spec.seed);
    const auto st = g.states(3 * 256);
    for (unsigned k = 1; k <= 8; ++k) {
      std::vector<std::uint64_t> low;
      for (auto x : st) low.push_back(x & width_mask(k));
      CHECK(brute_period(low) == (3ULL << k));
    }
    CHECK_THROWS_AS(build_example("klsh", {{"C", {5, 9, 7}}}), Error);
  }
  SUBCASE("all kinds build with defaults") {
    for (const auto& kind : example_kinds()) {
      INFO(kind);
      const auto b = build_example(kind);
      if (kind != "sec5") CHECK(b.report.passed());
      const auto p = measure_period(b.spec);
      CHECK(p.pair_period > 0);
    }
  }
  SUBCASE("sec5") {
    const auto b = build_example("sec5", {{"n", 3}, {"k", 2}});
    CHECK_FALSE(b.note.empty());
    CHECK(b.spec.n == 6);
    CHECK(b.report.sum_odd == false);
    CHECK(measure_period(b.spec).state_period > 0);
  }
  CHECK_THROWS_AS(build_example("nope"), Error);
}

TEST_CASE("period measurement agrees with brute force") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    std::vector<std::uint64_t> c(1 + rng() % 4);
    for (auto& v : c) v = rng() % 8;
    GeneratorSpec s = counter_spec(5, c, "(x + c) ^ (4 * (x * x))");
    s.seed = rng() % 32;
    const auto fam = resolve(s);
    const auto p = measure_period(fam, s.seed, 1 << 20);
    Generator g(fam, s.seed);
    // members are bijective, so there is no tail and the pair period is a multiple of m
    const auto st = g.states(2 * p.pair_period);
    CHECK(p.tail == 0);
    CHECK(p.pair_period % c.size() == 0);
    for (std::uint64_t i = 0; i < p.pair_period; ++i) REQUIRE(st[i] == st[i + p.pair_period]);
    std::vector<std::uint64_t> one(st.begin(), st.begin() + static_cast<long>(p.pair_period));
    CHECK(p.state_period == brute_period(one));
  }
  GeneratorSpec s = counter_spec(20, {1}, "x + 1");
  CHECK_THROWS_AS(measure_period(resolve(s), 0, 1000), BudgetError);
}

TEST_CASE("spec JSON and keystream files") {
  auto b = build_example("wp4");
  const auto j = spec_to_json(b.spec);
  const auto back = spec_from_json(j);
  CHECK(spec_to_json(back) == j);
  CHECK(j["seed"].is_string());
  Generator g1(b.spec), g2(back);
  CHECK(g1.outputs(100) == g2.outputs(100));

  const std::vector<std::uint64_t> w{1, 2, 3, 4, 5};
  const auto bytes = pack_words(w, 3);
  CHECK(bytes.size() == 2);
  // 001 010 110 001 101 in LSB-first stream order
  CHECK(bytes[0] == 0b11010001);
  CHECK(bytes[1] == 0b01011000);
  CHECK(unpack_words(bytes, 3, 5) == w);
  CHECK(unpack_words(bytes, 3).size() == 5);
  CHECK_THROWS_AS(unpack_words(bytes, 3, 6), Error);
  CHECK(pack_words({0x1234}, 16) == std::vector<std::uint8_t>{0x34, 0x12});

  const auto path = (std::filesystem::temp_directory_path() / "tfgen_unit.ks").string();
  write_keystream(path, w, 3);
  CHECK(read_keystream(path, 3, 5) == w);
  std::remove(path.c_str());

  CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"n", 4}, {"control", {{"type", "bogus"}}}}), Error);
}
