#include "tfgen/anf_lab.hpp"

#include <numeric>

#include "tfgen/error.hpp"
#include "tfgen/word.hpp"

namespace tfgen {

namespace {

void require_anf_budget(unsigned width) {
  if (width == 0 || width > kAnfWidthBudget) {
    throw Error("width " + std::to_string(width) + " outside the ANF budget [1, " + std::to_string(kAnfWidthBudget) + "]");
  }
}

void require_orbit_budget(unsigned width) {
  if (width == 0 || width > kOrbitWidthBudget) {
    throw Error("width " + std::to_string(width) + " outside the orbit budget [1, " + std::to_string(kOrbitWidthBudget) + "]");
  }
}

class Bitmap {
 public:
  explicit Bitmap(std::uint64_t size) : words_((size + 63) / 64, 0) {}
  bool test(std::uint64_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::uint64_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

 private:
  std::vector<std::uint64_t> words_;
};

std::int64_t mod4(std::int64_t v) { return ((v % 4) + 4) % 4; }

std::uint64_t eval_int_poly(const std::vector<std::int64_t>& coeffs, std::uint64_t x, unsigned width) {
  std::uint64_t acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + static_cast<std::uint64_t>(*it);
  return acc & width_mask(width);
}

using u128 = unsigned __int128;

struct ScaledPoly {
  std::vector<std::int64_t> numerators;  // coefficient * common denominator
  std::int64_t denominator = 1;
};

ScaledPoly scale(const family::RationalPoly& p) {
  ScaledPoly s;
  for (const auto& q : p.coeffs) {
    if (q.den <= 0) throw Error("rational coefficient needs a positive denominator");
    s.denominator = std::lcm(s.denominator, q.den);
    if (s.denominator > (std::int64_t{1} << 30)) throw Error("rational polynomial denominator too large");
  }
  for (const auto& q : p.coeffs) s.numerators.push_back(q.num * (s.denominator / q.den));
  return s;
}

// Value of the scaled numerator at x modulo denominator * 2^width, or nothing if the
// polynomial is not integral at x.
std::optional<std::uint64_t> eval_rational(const ScaledPoly& s, std::uint64_t x, unsigned width) {
  if (width > 32) throw Error("rational polynomial evaluation limited to width 32");
  const u128 modulus = static_cast<u128>(s.denominator) << width;
  auto reduce = [&](std::int64_t v) -> u128 {
    const auto mag = static_cast<u128>(v < 0 ? -static_cast<__int128>(v) : v) % modulus;
    return v < 0 && mag != 0 ? modulus - mag : mag;
  };
  u128 acc = 0;
  const u128 xm = static_cast<u128>(x) % modulus;
  for (auto it = s.numerators.rbegin(); it != s.numerators.rend(); ++it) acc = (acc * xm + reduce(*it)) % modulus;
  if (acc % static_cast<u128>(s.denominator) != 0) return std::nullopt;
  return static_cast<std::uint64_t>(acc / static_cast<u128>(s.denominator)) & width_mask(width);
}

unsigned floor_log2(std::uint64_t v) { return 63U - static_cast<unsigned>(__builtin_clzll(v)); }

}  // namespace

BooleanANF anf_of_bit(const Mapping& f, unsigned bit, unsigned width) {
  require_anf_budget(width);
  if (bit >= width) throw Error("bit index out of range");
  std::vector<std::uint8_t> table(std::size_t{1} << width);
  for (std::uint64_t x = 0; x < table.size(); ++x) table[x] = (f(x, width) >> bit) & 1U;
  return BooleanANF::from_truth_table(table, width);
}

std::vector<BooleanANF> bit_slices(const Mapping& f, unsigned width) {
  require_anf_budget(width);
  const auto values = f.table(width);
  std::vector<BooleanANF> out;
  std::vector<std::uint8_t> table(values.size());
  for (unsigned bit = 0; bit < width; ++bit) {
    for (std::size_t x = 0; x < values.size(); ++x) table[x] = (values[x] >> bit) & 1U;
    out.push_back(BooleanANF::from_truth_table(table, width));
  }
  return out;
}

CompatibilityResult is_compatible(const Mapping& f, unsigned width) {
  const auto slices = bit_slices(f, width);
  bool triangular = true;
  for (unsigned i = 0; i < width && triangular; ++i) {
    triangular = (slices[i].support() >> (i + 1)) == 0;
  }
  if (triangular) return {};

  CompatibilityResult result;
  result.compatible = false;
  const auto values = f.table(width);
  for (unsigned r = 1; r <= width && !result.witness; ++r) {
    const std::uint64_t mask = width_mask(r);
    for (std::uint64_t x = 0; x < values.size(); ++x) {
      if ((values[x] & mask) != (values[x & mask] & mask)) {
        result.witness = CompatibilityWitness{x & mask, x, r};
        break;
      }
    }
  }
  return result;
}

bool is_transitive(const Mapping& f, unsigned width) {
  require_orbit_budget(width);
  const std::uint64_t size = std::uint64_t{1} << width;
  std::uint64_t x = f(0, width);
  std::uint64_t steps = 1;
  while (x != 0 && steps < size) {
    x = f(x, width);
    ++steps;
  }
  return x == 0 && steps == size;
}

bool is_bijective(const Mapping& f, unsigned width) {
  require_orbit_budget(width);
  const std::uint64_t size = std::uint64_t{1} << width;
  Bitmap hit(size);
  for (std::uint64_t x = 0; x < size; ++x) {
    const std::uint64_t y = f(x, width);
    if (hit.test(y)) return false;
    hit.set(y);
  }
  return true;
}

CycleStructure cycle_structure(const Mapping& f, unsigned width) {
  CycleStructure out;
  out.bijective = is_bijective(f, width);
  if (!out.bijective) return out;
  const std::uint64_t size = std::uint64_t{1} << width;
  Bitmap visited(size);
  for (std::uint64_t start = 0; start < size; ++start) {
    if (visited.test(start)) continue;
    std::uint64_t length = 0;
    std::uint64_t x = start;
    do {
      visited.set(x);
      x = f(x, width);
      ++length;
    } while (x != start);
    ++out.cycle_lengths[length];
  }
  out.transitive = out.cycle_lengths.size() == 1 && out.cycle_lengths.begin()->first == size;
  return out;
}

bool is_ergodic_to_depth(const Mapping& f, unsigned depth) {
  for (unsigned k = 1; k <= depth; ++k) {
    if (!is_transitive(f, k)) return false;
  }
  return true;
}

bool is_mp_to_depth(const Mapping& f, unsigned depth) {
  for (unsigned k = 1; k <= depth; ++k) {
    if (!is_bijective(f, k)) return false;
  }
  return true;
}

AnfErgodicity anf_ergodicity(const Mapping& f, unsigned depth) {
  const auto slices = bit_slices(f, depth);
  AnfErgodicity out;
  out.measure_preserving = true;
  out.ergodic = true;
  for (unsigned i = 0; i < depth; ++i) {
    const std::uint32_t own = std::uint32_t{1} << i;
    const std::uint32_t lower = own - 1;
    bool shape_ok = slices[i].coefficient(own);
    for (auto m : slices[i].monomials()) {
      if (m != own && (m & ~lower) != 0) shape_ok = false;
    }
    if (!shape_ok) {
      out.measure_preserving = false;
      out.ergodic = false;
      out.failing_bit = static_cast<int>(i);
      return out;
    }
    // phi_i must contain x_0...x_{i-1}; for i = 0 that monomial is the constant 1.
    if (out.ergodic && !slices[i].coefficient(lower)) {
      out.ergodic = false;
      out.failing_bit = static_cast<int>(i);
    }
  }
  return out;
}

bool ergodicity_via_anf(const Mapping& f, unsigned depth) { return anf_ergodicity(f, depth).ergodic; }

std::uint64_t count_transitive(unsigned n) {
  if (n == 0 || n > 4) throw Error("count_transitive budget exceeded: n must be in [1, 4]");
  // A compatible map transitive mod 2^(i+1) is transitive mod 2^i, so each level only
  // extends the survivors of the previous one by every possible slice ANF.
  std::vector<std::vector<std::uint64_t>> survivors{{0}};
  for (unsigned level = 0; level < n; ++level) {
    const unsigned vars = level + 1;
    const std::size_t points = std::size_t{1} << vars;
    const std::uint64_t choices = std::uint64_t{1} << points;
    std::vector<std::vector<std::uint64_t>> next;
    std::vector<std::uint8_t> slice(points);
    std::vector<std::uint64_t> table(points);
    for (std::uint64_t coeffs = 0; coeffs < choices; ++coeffs) {
      for (std::size_t m = 0; m < points; ++m) slice[m] = (coeffs >> m) & 1U;
      moebius_transform(slice);
      for (const auto& parent : survivors) {
        const std::uint64_t low = width_mask(level);
        for (std::size_t x = 0; x < points; ++x) table[x] = parent[x & low] | (std::uint64_t{slice[x]} << level);
        // Orbit of 0 under the candidate table.
        std::uint64_t x = table[0];
        std::uint64_t steps = 1;
        while (x != 0 && steps < points) {
          x = table[x];
          ++steps;
        }
        if (x == 0 && steps == points) next.push_back(table);
      }
    }
    survivors = std::move(next);
  }
  return survivors.size();
}

Mapping make_ergodic_delta(const Mapping& g, std::uint64_t c) {
  if ((c & 1U) == 0) throw Error("make_ergodic_delta requires an odd constant");
  if (!is_compatible(g, 8).compatible) throw Error("make_ergodic_delta requires a compatible g");
  return Mapping(
      [g, c](std::uint64_t x, unsigned w) { return c + x + 2 * (g(x + 1, w) - g(x, w)); },
      std::to_string(c) + " + x + 2*D(" + g.label() + ")");
}

Mapping make_mp(std::uint64_t d, std::uint64_t c, const Mapping& g) {
  if ((c & 1U) == 0) throw Error("make_mp requires an odd multiplier");
  return Mapping([g, c, d](std::uint64_t x, unsigned w) { return d + c * x + 2 * g(x, w); },
                 std::to_string(d) + " + " + std::to_string(c) + "x + 2*(" + g.label() + ")");
}

std::vector<std::uint64_t> decompose_ergodic(const Mapping& f, unsigned n) {
  if (n == 0 || n > 12) throw Error("decompose_ergodic supports widths 1..12");
  if (!is_transitive(f, n)) throw Error("decompose_ergodic: mapping is not transitive modulo 2^" + std::to_string(n));
  const std::uint64_t size = std::uint64_t{1} << n;
  const std::uint64_t mask = width_mask(n);
  std::vector<std::uint64_t> g(size, 0);
  for (std::uint64_t x = 0; x + 1 < size; ++x) {
    // f(x) - 1 - x is even because f is x + 1 modulo 2.
    const std::uint64_t diff = ((f(x, n) - 1 - x) & mask) >> 1;
    g[x + 1] = (g[x] + diff) & mask;
  }
  return g;
}

Mapping lift_compose(const Mapping& f, const Mapping& v, LiftVariant variant) {
  switch (variant) {
    case LiftVariant::compose_add:
      return Mapping([f, v](std::uint64_t x, unsigned w) { return f(x + 4 * v(x, w), w); }, "f(x+4v)");
    case LiftVariant::compose_xor:
      return Mapping([f, v](std::uint64_t x, unsigned w) { return f(x ^ (4 * v(x, w)), w); }, "f(x^4v)");
    case LiftVariant::add:
      return Mapping([f, v](std::uint64_t x, unsigned w) { return f(x, w) + 4 * v(x, w); }, "f+4v");
    case LiftVariant::bit_xor:
      return Mapping([f, v](std::uint64_t x, unsigned w) { return f(x, w) ^ (4 * v(x, w)); }, "f^4v");
  }
  throw Error("lift_compose variant must be 1..4");
}

std::string family_kind(const FamilyParams& params) {
  struct Visitor {
    std::string operator()(const family::KlimovShamir&) const { return "klimov-shamir"; }
    std::string operator()(const family::Larin&) const { return "larin"; }
    std::string operator()(const family::XorSum&) const { return "xor-sum"; }
    std::string operator()(const family::KotominaChain&) const { return "kotomina-chain"; }
    std::string operator()(const family::DeltaSeries&) const { return "delta-series"; }
    std::string operator()(const family::RationalPoly&) const { return "rational-poly"; }
    std::string operator()(const family::EntireRatio&) const { return "entire"; }
    std::string operator()(const family::ExpAffine&) const { return "exp-affine"; }
  };
  return std::visit(Visitor{}, params);
}

Mapping family_mapping(const FamilyParams& params) {
  struct Visitor {
    Mapping operator()(const family::KlimovShamir& p) const {
      const auto c = p.c;
      return Mapping([c](std::uint64_t x, unsigned) { return x + ((x * x) | c); }, "x+(x*x|c)");
    }
    Mapping operator()(const family::Larin& p) const {
      if (p.coeffs.empty()) throw Error("larin: empty coefficient list");
      auto coeffs = p.coeffs;
      return Mapping([coeffs](std::uint64_t x, unsigned w) { return eval_int_poly(coeffs, x, w); }, "poly");
    }
    Mapping operator()(const family::XorSum& p) const {
      auto q = p;
      return Mapping(
          [q](std::uint64_t x, unsigned) {
            auto acc = static_cast<std::uint64_t>(q.a);
            for (const auto& [a, b] : q.terms) acc += static_cast<std::uint64_t>(a) * (x ^ b);
            return acc;
          },
          "xor-sum");
    }
    Mapping operator()(const family::KotominaChain& p) const {
      if (p.steps.empty()) throw Error("kotomina-chain: no steps");
      auto steps = p.steps;
      return Mapping(
          [steps](std::uint64_t x, unsigned) {
            for (const auto& [c, d] : steps) x = (x + c) ^ d;
            return x;
          },
          "chain");
    }
    Mapping operator()(const family::DeltaSeries& p) const {
      if (p.coeffs.size() > 62) throw Error("delta-series: at most 62 coefficients");
      auto q = p;
      return Mapping(
          [q](std::uint64_t x, unsigned) {
            auto acc = static_cast<std::uint64_t>(q.a);
            for (std::size_t i = 0; i < q.coeffs.size(); ++i) acc += static_cast<std::uint64_t>(q.coeffs[i]) * ((x >> i) & 1U);
            return acc;
          },
          "delta-series");
    }
    Mapping operator()(const family::RationalPoly& p) const {
      if (p.coeffs.empty()) throw Error("rational-poly: empty coefficient list");
      auto scaled = scale(p);
      return Mapping(
          [scaled](std::uint64_t x, unsigned w) {
            auto v = eval_rational(scaled, x, w);
            if (!v) throw Error("rational polynomial is not integer-valued at " + std::to_string(x));
            return *v;
          },
          "rational-poly");
    }
    Mapping operator()(const family::EntireRatio& p) const {
      if (p.u.empty()) throw Error("entire: empty numerator");
      auto q = p;
      if (q.v.empty()) q.v.push_back(0);
      return Mapping(
          [q](std::uint64_t x, unsigned w) {
            const std::uint64_t den = 1 + 2 * eval_int_poly(q.v, x, w);
            return eval_int_poly(q.u, x, w) * raw::inv_odd(den & width_mask(w), w);
          },
          "u/(1+2v)");
    }
    Mapping operator()(const family::ExpAffine& p) const {
      const auto a = p.a;
      return Mapping(
          [a](std::uint64_t x, unsigned w) {
            return a * x + raw::pow_literal(a, static_cast<std::int64_t>(x), w);
          },
          "ax+a^x");
    }
  };
  return std::visit(Visitor{}, params);
}

bool family_criterion(const FamilyParams& params) {
  struct Visitor {
    bool operator()(const family::KlimovShamir& p) const { return p.c % 8 == 5 || p.c % 8 == 7; }
    bool operator()(const family::Larin& p) const {
      if (p.coeffs.empty()) throw Error("larin: empty coefficient list");
      auto a = [&](std::size_t i) -> std::int64_t { return i < p.coeffs.size() ? p.coeffs[i] : 0; };
      std::int64_t odd_sum = 0;
      std::int64_t even_sum = 0;
      for (std::size_t i = 3; i < p.coeffs.size(); i += 2) odd_sum += mod4(a(i));
      for (std::size_t i = 4; i < p.coeffs.size(); i += 2) even_sum += mod4(a(i));
      return mod4(odd_sum) == mod4(2 * a(2)) && mod4(even_sum) == mod4(a(1) + a(2) - 1) && mod4(a(1)) % 2 == 1 &&
             mod4(a(0)) % 2 == 1;
    }
    bool operator()(const family::XorSum& p) const { return is_ergodic_to_depth(family_mapping(p), 2); }
    bool operator()(const family::KotominaChain& p) const { return is_ergodic_to_depth(family_mapping(p), 2); }
    bool operator()(const family::DeltaSeries& p) const {
      if (p.coeffs.empty()) throw Error("delta-series: empty coefficient list");
      if (p.coeffs.size() > 62) throw Error("delta-series: at most 62 coefficients");
      if ((p.a & 1) == 0 || mod4(p.coeffs[0]) != 1) return false;
      for (std::size_t i = 1; i < p.coeffs.size(); ++i) {
        const auto v = static_cast<std::uint64_t>(p.coeffs[i]);
        // a_i divisible by 2^i but not by 2^(i+1).
        if ((v & width_mask(static_cast<unsigned>(i) + 1)) != (std::uint64_t{1} << i)) return false;
      }
      return true;
    }
    bool operator()(const family::RationalPoly& p) const {
      if (p.coeffs.empty()) throw Error("rational-poly: empty coefficient list");
      std::size_t degree = p.coeffs.size() - 1;
      while (degree > 0 && p.coeffs[degree].num == 0) --degree;
      const unsigned k = floor_log2(std::max<std::size_t>(degree, 1)) + 3;
      const auto scaled = scale(p);
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << k); ++x) {
        if (!eval_rational(scaled, x, k)) return false;
      }
      const auto f = family_mapping(p);
      return is_compatible(f, k).compatible && is_transitive(f, k);
    }
    bool operator()(const family::EntireRatio& p) const { return is_ergodic_to_depth(family_mapping(p), 3); }
    bool operator()(const family::ExpAffine& p) const { return (p.a & 1U) == 1; }
  };
  return std::visit(Visitor{}, params);
}

BooleanANF add_carry_anf(unsigned j, std::uint64_t i) {
  if (j > kAnfWidthBudget) throw Error("add_carry_anf: bit index over budget");
  const unsigned vars = j + 1;
  auto digit = [&](unsigned t) { return ((i >> t) & 1U) != 0; };
  BooleanANF result = BooleanANF::variable(vars, j) ^ BooleanANF::constant(vars, digit(j));
  for (unsigned r = 0; r < j; ++r) {
    if (!digit(r)) continue;
    // Carry generated at bit r and propagated through bits r+1..j-1.
    BooleanANF term = BooleanANF::variable(vars, r);
    for (unsigned t = r + 1; t < j; ++t) term = term * (BooleanANF::constant(vars, digit(t)) ^ BooleanANF::variable(vars, t));
    result ^= term;
  }
  return result;
}

Mapping mapping_from_bit_anfs(std::vector<BooleanANF> bits) {
  const auto width = static_cast<unsigned>(bits.size());
  auto shared = std::make_shared<const std::vector<BooleanANF>>(std::move(bits));
  return Mapping(
      [shared, width](std::uint64_t x, unsigned w) -> std::uint64_t {
        if (w > width) throw Error("ANF-defined mapping evaluated above its width");
        std::uint64_t out = 0;
        for (unsigned i = 0; i < w; ++i) out |= std::uint64_t{(*shared)[i].evaluate(static_cast<std::uint32_t>(x))} << i;
        return out;
      },
      "anf");
}

std::vector<BooleanANF> random_compatible_anfs(std::mt19937_64& rng, unsigned width, const RandomAnfOptions& options) {
  if (width > BooleanANF::kMaxVariables) throw Error("random_compatible_anfs: width over budget");
  std::bernoulli_distribution triangular(options.triangular_probability);
  std::bernoulli_distribution toggle_top(options.top_monomial_probability);
  std::uniform_int_distribution<unsigned> count(0, options.max_monomials > 0 ? options.max_monomials - 1 : 0);
  std::vector<BooleanANF> out;
  for (unsigned i = 0; i < width; ++i) {
    const bool tri = triangular(rng);
    // Monomials over x_0..x_{i-1} (triangular form) or x_0..x_i (general compatible slice).
    const std::uint32_t range = std::uint32_t{1} << (tri ? i : i + 1);
    std::uniform_int_distribution<std::uint32_t> pick(0, range - 1);
    std::vector<std::uint32_t> monomials;
    const unsigned terms = options.max_monomials > 0 ? count(rng) : 0;
    for (unsigned t = 0; t < terms; ++t) monomials.push_back(pick(rng));
    BooleanANF slice(width, monomials);
    if (tri) {
      if (toggle_top(rng)) slice ^= BooleanANF(width, {(std::uint32_t{1} << i) - 1});
      slice ^= BooleanANF::variable(width, i);
    }
    out.push_back(std::move(slice));
  }
  return out;
}

}  // namespace tfgen
