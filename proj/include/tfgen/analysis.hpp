#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfgen/mapping.hpp"

namespace tfgen {

using Bits = std::vector<std::uint8_t>;

// Smallest t dividing seq.size() with s[i + t] = s[i] (indices cyclic).
std::uint64_t shortest_period(const std::vector<std::uint64_t>& seq);
std::uint64_t shortest_period(const Bits& bits);

struct Uniformity {
  unsigned k = 0;
  std::uint64_t period = 0;
  std::vector<std::uint64_t> counts;  // occurrences of each residue mod 2^k over the shortest period
  bool uniform = false;
};

Uniformity strict_uniformity(const std::vector<std::uint64_t>& seq, unsigned k);

// Concatenated base-2 expansions, least significant bit of each word first.
Bits words_to_bits(const std::vector<std::uint64_t>& words, unsigned width);
Bits parse_bits(const std::string& text);
// Bit j of every word.
Bits coordinate(const std::vector<std::uint64_t>& words, unsigned j);

struct ChainCensus {
  unsigned k = 0;
  std::uint64_t length = 0;
  // counts[v]: chains b_i..b_{i+k-1} (read cyclically) with sum b_{i+t} 2^t = v.
  std::vector<std::uint64_t> counts;
  bool full = false;
};

ChainCensus k_chain_census(const Bits& cycle, unsigned k);
// Highest k <= max_k for which the cycle is k-full (0 if not even 1-full).
unsigned max_full_k(const Bits& cycle, unsigned max_k);

struct Q1Row {
  unsigned k = 0;
  double worst_margin = 0;  // max over words of |nu/N - 2^-k|, counted over the finite string
  double worst_margin_cyclic = 0;
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> counts_cyclic;
  bool pass = false;
};

struct Q1Result {
  std::uint64_t length = 0;
  double bound = 0;  // 1/sqrt(N)
  std::vector<Q1Row> rows;  // k = 1..floor(log2 N)
  bool pass = false;
  const Q1Row* row(unsigned k) const;
};

Q1Result q1_check(const Bits& bits);

struct LinearComplexity {
  std::uint64_t L = 0;
  Bits polynomial;  // c_0 = 1, c_1..c_L with s_i = sum_{t=1}^{L} c_t s_{i-t} for i >= L
};

LinearComplexity berlekamp_massey(const Bits& bits);
// Linear complexity of the periodic sequence with the given period (BM over two periods).
std::uint64_t periodic_linear_complexity(const Bits& period);
bool regenerates(const LinearComplexity& lc, const Bits& bits);

inline constexpr std::size_t kErrorLcPeriodBudget = 64;
inline constexpr unsigned kErrorLcWeightBudget = 3;
// Minimum periodic linear complexity after flipping at most `errors` bits per period.
std::uint64_t l_error_lc(const Bits& period, unsigned errors);

struct CoordinateSummary {
  unsigned j = 0;
  std::uint64_t period = 0;
  bool negation = false;  // second half-period is the complement of the first
  std::uint64_t linear_complexity = 0;
  std::optional<std::uint64_t> gamma;  // sum_{i < 2^j m} 2^i delta_j(x_i), when it fits in 64 bits
};

// seq must hold whole periods of the state sequence.
CoordinateSummary coordinate_analysis(const std::vector<std::uint64_t>& seq, unsigned j, std::uint64_t m);

// Clock tables g_0..g_{m-1} on Z/2^(J+1) and a seed realising the given gamma values.
struct GammaRealization {
  unsigned width = 0;
  std::vector<std::vector<std::uint64_t>> tables;
  std::uint64_t seed = 0;

  std::vector<Mapping> members() const;
};

// gamma[0] holds the m bits of the bit-0 column, gamma[j] the first 2^j m bits of column j.
// Throws when the bit-0 column forces a parity sequence with period shorter than m.
GammaRealization realize_gamma(const std::vector<std::uint64_t>& gamma, std::uint64_t m);
// The gamma values of a state sequence for j = 0..J.
std::vector<std::uint64_t> extract_gamma(const std::vector<std::uint64_t>& states, unsigned J, std::uint64_t m);

struct AnalysisOptions {
  unsigned word_bits = 8;
  bool full_period = false;  // input holds whole periods; otherwise period-based checks are skipped
  bool lc = false;
  unsigned kdist = 0;
  bool q1 = false;
};

struct AnalysisReport {
  AnalysisOptions options;
  std::uint64_t words = 0;
  std::optional<std::uint64_t> period;
  std::optional<Uniformity> uniformity;
  std::vector<ChainCensus> census;
  std::optional<Q1Result> q1;
  std::optional<std::uint64_t> binary_lc;
  std::vector<CoordinateSummary> coordinates;

  bool passed() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

AnalysisReport analyze_words(const std::vector<std::uint64_t>& words, const AnalysisOptions& options);

}  // namespace tfgen
