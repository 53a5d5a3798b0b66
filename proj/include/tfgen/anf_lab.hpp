#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tfgen/anf.hpp"
#include "tfgen/mapping.hpp"

namespace tfgen {

inline constexpr unsigned kAnfWidthBudget = 16;
inline constexpr unsigned kOrbitWidthBudget = 26;

// Boolean function of output bit `bit` of f on Z/2^width, as an ANF in x_0..x_{width-1}.
BooleanANF anf_of_bit(const Mapping& f, unsigned bit, unsigned width);

// The bit-slice view: one ANF per output bit.
std::vector<BooleanANF> bit_slices(const Mapping& f, unsigned width);

// u == u_prime (mod 2^modulus_bits) while f(u) != f(u_prime) (mod 2^modulus_bits).
struct CompatibilityWitness {
  std::uint64_t u = 0;
  std::uint64_t u_prime = 0;
  unsigned modulus_bits = 0;
};

struct CompatibilityResult {
  bool compatible = true;
  std::optional<CompatibilityWitness> witness;
};

// Triangularity of the bit slices: output bit i may only depend on input bits 0..i.
CompatibilityResult is_compatible(const Mapping& f, unsigned width);

struct CycleStructure {
  bool bijective = false;
  bool transitive = false;
  std::map<std::uint64_t, std::uint64_t> cycle_lengths;  // length -> number of cycles; empty unless bijective
};

CycleStructure cycle_structure(const Mapping& f, unsigned width);

// Single-cycle test by following the orbit of 0; no tables needed.
bool is_transitive(const Mapping& f, unsigned width);
bool is_bijective(const Mapping& f, unsigned width);

// Transitive (resp. bijective) modulo 2^k for every k = 1..depth.
bool is_ergodic_to_depth(const Mapping& f, unsigned depth);
bool is_mp_to_depth(const Mapping& f, unsigned depth);

struct AnfErgodicity {
  bool measure_preserving = false;
  bool ergodic = false;
  int failing_bit = -1;  // first bit slice violating the criterion
};

// Bit-slice criterion: every slice is x_i + phi_i(x_0..x_{i-1}), and for ergodicity
// phi_0 = 1 and phi_i contains the monomial x_0...x_{i-1}.
AnfErgodicity anf_ergodicity(const Mapping& f, unsigned depth);
bool ergodicity_via_anf(const Mapping& f, unsigned depth);

// Number of compatible transitive maps of Z/2^n, by enumeration through per-bit ANFs.
std::uint64_t count_transitive(unsigned n);

// x -> c + x + 2*(g(x+1) - g(x)); c odd and g compatible.
Mapping make_ergodic_delta(const Mapping& g, std::uint64_t c);
// x -> d + c*x + 2*g(x); c odd.
Mapping make_mp(std::uint64_t d, std::uint64_t c, const Mapping& g);

// Table of g on Z/2^n with g(0) = 0 and f(x) = 1 + x + 2*(g(x+1) - g(x)) for x < 2^n - 1.
std::vector<std::uint64_t> decompose_ergodic(const Mapping& f, unsigned n);

enum class LiftVariant : int {
  compose_add = 1,  // f(x + 4 v(x))
  compose_xor = 2,  // f(x ^ 4 v(x))
  add = 3,          // f(x) + 4 v(x)
  bit_xor = 4,      // f(x) ^ 4 v(x)
};

Mapping lift_compose(const Mapping& f, const Mapping& v, LiftVariant variant);

// Parameter sets of the families with closed-form ergodicity criteria.
namespace family {

struct KlimovShamir {  // x + (x^2 | c)
  std::uint64_t c = 0;
};
struct Larin {  // a_0 + a_1 x + ... + a_d x^d
  std::vector<std::int64_t> coeffs;
};
struct XorSum {  // a + sum a_i (x ^ b_i)
  std::int64_t a = 0;
  std::vector<std::pair<std::int64_t, std::uint64_t>> terms;
};
struct KotominaChain {  // (...((x + c_0) ^ d_0) + c_1) ^ d_1 ...
  std::vector<std::pair<std::uint64_t, std::uint64_t>> steps;
};
struct DeltaSeries {  // a + sum a_i delta_i(x), over the listed coefficients
  std::int64_t a = 0;
  std::vector<std::int64_t> coeffs;
};
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};
struct RationalPoly {  // sum q_i x^i with rational q_i
  std::vector<Rational> coeffs;
};
struct EntireRatio {  // u(x) / (1 + 2 v(x))
  std::vector<std::int64_t> u;
  std::vector<std::int64_t> v;
};
struct ExpAffine {  // a x + a^x
  std::uint64_t a = 1;
};

}  // namespace family

using FamilyParams = std::variant<family::KlimovShamir, family::Larin, family::XorSum, family::KotominaChain,
                                  family::DeltaSeries, family::RationalPoly, family::EntireRatio, family::ExpAffine>;

std::string family_kind(const FamilyParams& params);
// Verdict of the family's closed-form criterion.
bool family_criterion(const FamilyParams& params);
// The member of the family itself, for cross-checking the criterion.
Mapping family_mapping(const FamilyParams& params);

// ANF of bit j of z + i in the variables x_0..x_j of z (the ripple-carry formula).
BooleanANF add_carry_anf(unsigned j, std::uint64_t i);

// Mapping whose output bit i is bits[i] evaluated at the input; width is bits.size().
Mapping mapping_from_bit_anfs(std::vector<BooleanANF> bits);

struct RandomAnfOptions {
  unsigned max_monomials = 8;
  // Probability that slice i is x_i + phi_i rather than an arbitrary function of x_0..x_i.
  double triangular_probability = 0.5;
  // Probability of toggling the full monomial x_0...x_{i-1} in phi_i.
  double top_monomial_probability = 0.5;
};

// Bit slices of a random compatible mapping of Z/2^width.
std::vector<BooleanANF> random_compatible_anfs(std::mt19937_64& rng, unsigned width,
                                               const RandomAnfOptions& options = {});

}  // namespace tfgen
