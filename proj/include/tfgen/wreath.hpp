#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tfgen/expr.hpp"
#include "tfgen/mapping.hpp"

namespace tfgen {

struct GeneratorSpec;

struct ExplicitControl {
  std::vector<std::uint64_t> symbols;
};

// Fibonacci register over GF(2): the emitted symbol is cell 0, the new top cell is the
// XOR of the tapped cells. Must have maximum period 2^cells - 1.
struct LfsrControl {
  unsigned cells = 0;
  std::vector<unsigned> taps;
  std::uint64_t init = 1;
};

// Control symbols are the output words of another generator, in stream order.
struct InnerControl {
  std::shared_ptr<const GeneratorSpec> spec;
};

using ControlSource = std::variant<ExplicitControl, LfsrControl, InnerControl>;

// parameter: step i uses update[i mod m mod |update|] with c bound to the control symbol.
// select: step i uses update[c_i mod |update|] (c is bound as well).
enum class ControlRole { parameter, select };

enum class BitPermutation { reverse, rotate };

struct OutputSpec {
  enum class Kind { truncate, reversed_ergodic, family };
  Kind kind = Kind::truncate;
  unsigned k = 0;                  // output width; 0 means n
  std::vector<std::string> exprs;  // H_j for reversed_ergodic, F_j for family
  BitPermutation pi = BitPermutation::reverse;
};

struct GeneratorSpec {
  unsigned n = 8;
  ControlSource control = ExplicitControl{{0}};
  ControlRole role = ControlRole::parameter;
  std::vector<std::string> update{"x + 1"};
  OutputSpec output;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> m;  // declared multiplier, checked against the control period

  unsigned output_width() const noexcept { return output.k == 0 ? n : output.k; }
};

// One full period of control symbols.
std::vector<std::uint64_t> control_period(const ControlSource& source);
std::vector<std::uint64_t> lfsr_sequence(const LfsrControl& lfsr);

// The m effective clock functions g_j and F_j after binding the control sequence.
struct ClockFamily {
  unsigned n = 0;
  unsigned k = 0;
  std::vector<std::uint64_t> control;
  std::vector<Mapping> update;  // g_0..g_{m-1}
  std::vector<Mapping> output;  // F_0..F_{m-1}, onto Z/2^k

  std::size_t m() const noexcept { return update.size(); }
};

ClockFamily resolve(const GeneratorSpec& spec);

struct ValidationReport {
  unsigned depth = 0;
  std::size_t m = 0;
  std::vector<std::uint64_t> parities;  // g_j(0) mod 2
  std::uint64_t parity_period = 0;
  bool parity_period_ok = false;        // condition (1)
  bool sum_odd = false;                 // condition (2)
  std::vector<bool> coef_parity;        // condition (3) for k = 1..depth-1
  bool coef_ok = false;
  // Informational: the literal sum congruence and its g(z) - z variant, for k = 1..depth-1.
  std::vector<bool> literal_sum;
  std::vector<bool> literal_sum_minus_z;
  std::optional<bool> outputs_balanced;

  bool passed() const noexcept { return parity_period_ok && sum_odd && coef_ok && outputs_balanced.value_or(true); }
  nlohmann::json to_json() const;
};

inline constexpr unsigned kValidateDepthBudget = 16;

// Checks the three wreath-product conditions for bits 0..depth-1. Every member must be
// compatible and measure-preserving to that depth, otherwise Error.
ValidationReport validate_wp(const std::vector<Mapping>& members, unsigned depth);
// Depth min(n, 16), plus balancedness of the outputs when n <= 16.
ValidationReport validate_spec(const GeneratorSpec& spec);
ValidationReport validate_family(const ClockFamily& family);

// Shortest period of the cyclic sequence.
std::uint64_t cyclic_period(const std::vector<std::uint64_t>& seq);

// Preimage counting of F: Z/2^n -> Z/2^k.
bool is_balanced(const Mapping& f, unsigned n, unsigned k);

class Generator {
 public:
  explicit Generator(const GeneratorSpec& spec);
  explicit Generator(ClockFamily family, std::uint64_t seed);

  std::uint64_t state() const noexcept { return x_; }
  std::uint64_t step_index() const noexcept { return i_; }
  std::size_t phase() const noexcept { return j_; }
  const ClockFamily& family() const noexcept { return *family_; }

  std::uint64_t output() const;  // F_{i mod m}(x_i)
  void advance();                // x_{i+1} = g_{i mod m}(x_i)
  std::uint64_t next() {
    const auto z = output();
    advance();
    return z;
  }
  void reset(std::uint64_t seed);

  std::vector<std::uint64_t> states(std::uint64_t count);
  std::vector<std::uint64_t> outputs(std::uint64_t count);

 private:
  std::shared_ptr<const ClockFamily> family_;
  std::uint64_t x_ = 0;
  std::uint64_t i_ = 0;
  std::size_t j_ = 0;
};

struct PeriodMeasurement {
  std::uint64_t tail = 0;          // steps before the (phase, state) pair enters its cycle
  std::uint64_t pair_period = 0;   // cycle length of (i mod m, x_i)
  std::uint64_t state_period = 0;  // shortest period of x_i on that cycle
  std::uint64_t output_period = 0; // shortest period of z_i on that cycle
};

// Brent cycle detection on (i mod m, x_i); BudgetError beyond `budget` steps.
PeriodMeasurement measure_period(const ClockFamily& family, std::uint64_t seed, std::uint64_t budget);
PeriodMeasurement measure_period(const GeneratorSpec& spec);

// F_j(x) = H_j(pi(x)) mod 2^k. Each H_j must be ergodic (checked to depth min(n, 12)).
std::vector<Mapping> output_reverse_ergodic(const std::vector<Mapping>& h, unsigned n, unsigned k,
                                            BitPermutation pi = BitPermutation::reverse);

struct ExampleBuild {
  GeneratorSpec spec;
  ValidationReport report;
  std::string note;
};

// Kinds: intro, wp1, wp2, wp3, wp4, klsh, sec5. Violated preconditions raise Error naming the condition.
ExampleBuild build_example(const std::string& kind, const nlohmann::json& params = nlohmann::json::object());
std::vector<std::string> example_kinds();

// Expression of f_F(x) = (1 + x) ^ sum psi_i(x) * 2^(n+1+i) with psi_i over x_0..x_{n-1}.
std::string sec5_expression(unsigned n, const std::vector<BooleanANF>& psi);

// GeneratorSpec JSON form.
nlohmann::json spec_to_json(const GeneratorSpec& spec);
GeneratorSpec spec_from_json(const nlohmann::json& j);
GeneratorSpec load_spec(const std::string& path);

// Keystream files: word i occupies stream bits [i*k, (i+1)*k), least significant bit first,
// stream bit b in byte b/8 at position b%8; zero padding only at the end.
std::vector<std::uint8_t> pack_words(const std::vector<std::uint64_t>& words, unsigned k);
// Without `count`, the number of words is floor(8 * bytes / k).
std::vector<std::uint64_t> unpack_words(const std::vector<std::uint8_t>& bytes, unsigned k,
                                        std::optional<std::uint64_t> count = std::nullopt);
void write_keystream(const std::string& path, const std::vector<std::uint64_t>& words, unsigned k);
std::vector<std::uint64_t> read_keystream(const std::string& path, unsigned k,
                                          std::optional<std::uint64_t> count = std::nullopt);

}  // namespace tfgen
