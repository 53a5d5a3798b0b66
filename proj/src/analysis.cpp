#include "tfgen/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "tfgen/error.hpp"
#include "tfgen/word.hpp"

namespace tfgen {

namespace {

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

template <class Seq>
std::uint64_t reduce_period(const Seq& s) {
  const std::uint64_t n = s.size();
  if (n == 0) return 0;
  auto holds = [&](std::uint64_t d) {
    for (std::uint64_t i = 0; i < n; ++i) {
      if (s[i] != s[(i + d) % n]) return false;
    }
    return true;
  };
  std::uint64_t cand = n;
  for (auto p : prime_factors(n)) {
    while (cand % p == 0 && holds(cand / p)) cand /= p;
  }
  return cand;
}

unsigned floor_log2(std::uint64_t v) { return 63U - static_cast<unsigned>(__builtin_clzll(v)); }

// Packed GF(2) vector with shifted reads and XORs.
class BitVec {
 public:
  explicit BitVec(std::size_t bits) : w_((bits + 63) / 64 + 1, 0) {}
  bool get(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
  std::size_t words() const { return w_.size(); }
  std::uint64_t word(std::size_t i) const { return i < w_.size() ? w_[i] : 0; }
  // 64 bits starting at bit position pos.
  std::uint64_t window(std::size_t pos) const {
    const std::size_t q = pos / 64;
    const unsigned r = pos % 64;
    if (r == 0) return word(q);
    return (word(q) >> r) | (word(q + 1) << (64 - r));
  }
  // this ^= other << shift, keeping only bits that fit.
  void xor_shifted(const BitVec& other, std::size_t shift) {
    const std::size_t q = shift / 64;
    const unsigned r = shift % 64;
    for (std::size_t i = 0; i + q < w_.size() && i < other.w_.size(); ++i) {
      w_[i + q] ^= other.w_[i] << r;
      if (r != 0 && i + q + 1 < w_.size()) w_[i + q + 1] ^= other.w_[i] >> (64 - r);
    }
  }

 private:
  std::vector<std::uint64_t> w_;
};

bool chains_equal(const std::vector<std::uint64_t>& counts) {
  return !counts.empty() && std::all_of(counts.begin(), counts.end(), [&](std::uint64_t c) { return c == counts[0]; });
}

// |nu/N - 2^-k| <= 1/sqrt(N)  <=>  (nu 2^k - N)^2 <= N 4^k, exactly.
bool within_q1(std::uint64_t nu, unsigned k, std::uint64_t n) {
  const __int128 diff = static_cast<__int128>(nu) * (static_cast<__int128>(1) << k) - static_cast<__int128>(n);
  const unsigned __int128 lhs = static_cast<unsigned __int128>(diff < 0 ? -diff : diff);
  return lhs * lhs <= static_cast<unsigned __int128>(n) * (static_cast<unsigned __int128>(1) << (2 * k));
}

}  // namespace

std::uint64_t shortest_period(const std::vector<std::uint64_t>& seq) { return reduce_period(seq); }
std::uint64_t shortest_period(const Bits& bits) { return reduce_period(bits); }

Uniformity strict_uniformity(const std::vector<std::uint64_t>& seq, unsigned k) {
  if (k > 24) throw Error("uniformity check limited to k <= 24");
  Uniformity u;
  u.k = k;
  u.period = shortest_period(seq);
  u.counts.assign(std::size_t{1} << k, 0);
  for (std::uint64_t i = 0; i < u.period; ++i) ++u.counts[seq[i] & width_mask(k)];
  u.uniform = u.period > 0 && chains_equal(u.counts);
  return u;
}

Bits words_to_bits(const std::vector<std::uint64_t>& words, unsigned width) {
  Bits out;
  out.reserve(words.size() * width);
  for (auto w : words) {
    for (unsigned b = 0; b < width; ++b) out.push_back((w >> b) & 1U);
  }
  return out;
}

Bits parse_bits(const std::string& text) {
  Bits out;
  for (char ch : text) {
    if (ch == '0' || ch == '1') out.push_back(static_cast<std::uint8_t>(ch - '0'));
    else if (!std::isspace(static_cast<unsigned char>(ch))) throw Error(std::string("not a bit: '") + ch + "'");
  }
  return out;
}

Bits coordinate(const std::vector<std::uint64_t>& words, unsigned j) {
  Bits out;
  out.reserve(words.size());
  for (auto w : words) out.push_back((w >> j) & 1U);
  return out;
}

ChainCensus k_chain_census(const Bits& cycle, unsigned k) {
  const std::uint64_t n = cycle.size();
  if (n == 0) throw Error("empty cycle");
  if (k > 24) throw Error("chain length over budget");
  ChainCensus c;
  c.k = k;
  c.length = n;
  c.counts.assign(std::size_t{1} << k, 0);
  if (k == 0) {
    c.counts[0] = n;
    c.full = true;
    return c;
  }
  std::uint64_t v = 0;
  for (unsigned t = 0; t < k; ++t) v |= static_cast<std::uint64_t>(cycle[t % n] & 1U) << t;
  for (std::uint64_t i = 0; i < n; ++i) {
    ++c.counts[v];
    v = (v >> 1) | (static_cast<std::uint64_t>(cycle[(i + k) % n] & 1U) << (k - 1));
  }
  c.full = chains_equal(c.counts);
  return c;
}

unsigned max_full_k(const Bits& cycle, unsigned max_k) {
  unsigned best = 0;
  for (unsigned k = 1; k <= max_k; ++k) {
    if (!k_chain_census(cycle, k).full) break;
    best = k;
  }
  return best;
}

const Q1Row* Q1Result::row(unsigned k) const {
  for (const auto& r : rows) {
    if (r.k == k) return &r;
  }
  return nullptr;
}

Q1Result q1_check(const Bits& bits) {
  const std::uint64_t n = bits.size();
  if (n < 2) throw Error("Q1 needs at least 2 bits");
  Q1Result out;
  out.length = n;
  out.bound = 1.0 / std::sqrt(static_cast<double>(n));
  out.pass = true;
  const unsigned kmax = std::min(floor_log2(n), 24U);
  for (unsigned k = 1; k <= kmax; ++k) {
    Q1Row row;
    row.k = k;
    row.counts_cyclic = k_chain_census(bits, k).counts;
    row.counts = row.counts_cyclic;
    // The last k-1 cyclic chains wrap around; drop them for the finite-string count.
    for (std::uint64_t i = n - k + 1; i < n; ++i) {
      std::uint64_t v = 0;
      for (unsigned t = 0; t < k; ++t) v |= static_cast<std::uint64_t>(bits[(i + t) % n] & 1U) << t;
      --row.counts[v];
    }
    const double p = std::ldexp(1.0, -static_cast<int>(k));
    row.pass = true;
    for (std::size_t v = 0; v < row.counts.size(); ++v) {
      row.worst_margin = std::max(row.worst_margin, std::fabs(static_cast<double>(row.counts[v]) / n - p));
      row.worst_margin_cyclic = std::max(row.worst_margin_cyclic, std::fabs(static_cast<double>(row.counts_cyclic[v]) / n - p));
      row.pass = row.pass && within_q1(row.counts[v], k, n);
    }
    out.pass = out.pass && row.pass;
    out.rows.push_back(std::move(row));
  }
  return out;
}

LinearComplexity berlekamp_massey(const Bits& bits) {
  const std::size_t n = bits.size();
  // rev holds the sequence reversed so that the discrepancy is a word-wise dot product.
  BitVec rev(n + 64);
  for (std::size_t i = 0; i < n; ++i) {
    if (bits[i] & 1U) rev.set(n - 1 - i);
  }
  BitVec c(n + 1), b(n + 1);
  c.set(0);
  b.set(0);
  std::size_t L = 0;
  std::size_t shift = 1;
  for (std::size_t i = 0; i < n; ++i) {
    // d = sum_{t=0}^{L} c_t s_{i-t}; s_{i-t} sits at rev position n-1-i+t.
    const std::size_t base = n - 1 - i;
    unsigned parity = 0;
    for (std::size_t w = 0; w * 64 <= L; ++w) {
      std::uint64_t cw = c.word(w);
      if ((w + 1) * 64 > L + 1) cw &= width_mask(static_cast<unsigned>(L + 1 - w * 64));
      parity ^= static_cast<unsigned>(__builtin_popcountll(cw & rev.window(base + w * 64)) & 1);
    }
    if (parity == 0) {
      ++shift;
    } else if (2 * L <= i) {
      BitVec t = c;
      c.xor_shifted(b, shift);
      L = i + 1 - L;
      b = std::move(t);
      shift = 1;
    } else {
      c.xor_shifted(b, shift);
      ++shift;
    }
  }
  LinearComplexity out;
  out.L = L;
  out.polynomial.resize(L + 1);
  for (std::size_t t = 0; t <= L; ++t) out.polynomial[t] = c.get(t);
  return out;
}

bool regenerates(const LinearComplexity& lc, const Bits& bits) {
  if (lc.polynomial.size() != lc.L + 1 || lc.polynomial[0] != 1) return false;
  for (std::size_t i = lc.L; i < bits.size(); ++i) {
    unsigned v = 0;
    for (std::size_t t = 1; t <= lc.L; ++t) v ^= lc.polynomial[t] & bits[i - t];
    if (v != (bits[i] & 1U)) return false;
  }
  return true;
}

std::uint64_t periodic_linear_complexity(const Bits& period) {
  Bits twice(period);
  twice.insert(twice.end(), period.begin(), period.end());
  return berlekamp_massey(twice).L;
}

std::uint64_t l_error_lc(const Bits& period, unsigned errors) {
  if (period.size() > kErrorLcPeriodBudget) throw BudgetError("l-error LC limited to periods of at most 64 bits");
  if (errors > kErrorLcWeightBudget) throw BudgetError("l-error LC limited to at most 3 errors");
  Bits work(period);
  std::uint64_t best = periodic_linear_complexity(work);
  std::function<void(std::size_t, unsigned)> search = [&](std::size_t from, unsigned left) {
    if (left == 0) return;
    for (std::size_t i = from; i < work.size(); ++i) {
      work[i] ^= 1U;
      best = std::min(best, periodic_linear_complexity(work));
      search(i + 1, left - 1);
      work[i] ^= 1U;
    }
  };
  search(0, errors);
  return best;
}

CoordinateSummary coordinate_analysis(const std::vector<std::uint64_t>& seq, unsigned j, std::uint64_t m) {
  if (seq.empty()) throw Error("empty sequence");
  CoordinateSummary s;
  s.j = j;
  const Bits bits = coordinate(seq, j);
  s.period = shortest_period(bits);
  if (s.period % 2 == 0) {
    const auto half = s.period / 2;
    s.negation = true;
    for (std::uint64_t i = 0; i < half && s.negation; ++i) s.negation = bits[i] != bits[i + half];
  }
  s.linear_complexity = periodic_linear_complexity(Bits(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(s.period)));
  if (m > 0 && j < 6) {
    const std::uint64_t len = (std::uint64_t{1} << j) * m;
    if (len <= 64 && len <= seq.size()) {
      std::uint64_t g = 0;
      for (std::uint64_t i = 0; i < len; ++i) g |= static_cast<std::uint64_t>(bits[i]) << i;
      s.gamma = g;
    }
  }
  return s;
}

std::vector<Mapping> GammaRealization::members() const {
  std::vector<Mapping> out;
  for (std::size_t c = 0; c < tables.size(); ++c) {
    out.push_back(Mapping::from_table(tables[c], width, "g_" + std::to_string(c)));
  }
  return out;
}

GammaRealization realize_gamma(const std::vector<std::uint64_t>& gamma, std::uint64_t m) {
  if (m == 0 || m > 4) throw BudgetError("realize_gamma supports 1 <= m <= 4");
  if (gamma.empty() || gamma.size() > 5) throw BudgetError("realize_gamma supports 0 <= J <= 4");
  const unsigned J = static_cast<unsigned>(gamma.size() - 1);
  auto target = [&](unsigned j, std::uint64_t i) { return static_cast<unsigned>((gamma[j] >> i) & 1U); };
  for (unsigned j = 0; j <= J; ++j) {
    const std::uint64_t len = (std::uint64_t{1} << j) * m;
    if (len < 64 && (gamma[j] >> len) != 0) throw Error("gamma_" + std::to_string(j) + " has more than 2^j m bits");
  }

  // phi[c][j][z]: correction bit j of g_c at z < 2^j.
  std::vector<std::vector<std::vector<std::uint8_t>>> phi(m, std::vector<std::vector<std::uint8_t>>(J + 1));
  std::uint64_t seed = 0;
  auto apply_low = [&](std::uint64_t c, std::uint64_t x, unsigned bits) {
    std::uint64_t y = 0;
    for (unsigned t = 0; t < bits; ++t) {
      const unsigned b = static_cast<unsigned>((x >> t) & 1U) ^ phi[c][t][x & width_mask(t)];
      y |= static_cast<std::uint64_t>(b) << t;
    }
    return y;
  };

  for (unsigned j = 0; j <= J; ++j) {
    const std::uint64_t len = (std::uint64_t{1} << j) * m;
    for (std::uint64_t c = 0; c < m; ++c) phi[c][j].assign(std::size_t{1} << j, 0);
    std::vector<std::vector<std::uint8_t>> seen(m, std::vector<std::uint8_t>(std::size_t{1} << j, 0));
    seed |= static_cast<std::uint64_t>(target(j, 0)) << j;
    std::uint64_t x = seed & width_mask(j);
    unsigned parity = 0;
    for (std::uint64_t i = 0; i < len; ++i) {
      const std::uint64_t c = i % m;
      if (seen[c][x]) throw Error("realize_gamma: lower levels revisit a state early");
      seen[c][x] = 1;
      unsigned value;
      if (i + 1 < len) {
        value = target(j, i) ^ target(j, i + 1);
        parity ^= value;
      } else {
        value = parity ^ 1U;  // makes the level-j parity sum odd
      }
      phi[c][j][x] = static_cast<std::uint8_t>(value);
      x = apply_low(c, x, j);
    }
    if (j == 0) {
      std::vector<std::uint64_t> a;
      for (std::uint64_t c = 0; c < m; ++c) a.push_back(phi[c][0][0]);
      if (shortest_period(a) != m) throw Error("realize_gamma: infeasible, the bit-0 column forces a parity period below m");
    }
  }

  GammaRealization out;
  out.width = J + 1;
  out.seed = seed;
  for (std::uint64_t c = 0; c < m; ++c) {
    std::vector<std::uint64_t> table(std::size_t{1} << out.width);
    for (std::uint64_t x = 0; x < table.size(); ++x) table[x] = apply_low(c, x, out.width);
    out.tables.push_back(std::move(table));
  }
  return out;
}

std::vector<std::uint64_t> extract_gamma(const std::vector<std::uint64_t>& states, unsigned J, std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (unsigned j = 0; j <= J; ++j) {
    const std::uint64_t len = (std::uint64_t{1} << j) * m;
    if (len > 64) throw Error("gamma_" + std::to_string(j) + " does not fit in 64 bits");
    if (len > states.size()) throw Error("not enough states to extract gamma_" + std::to_string(j));
    std::uint64_t g = 0;
    for (std::uint64_t i = 0; i < len; ++i) g |= ((states[i] >> j) & 1U) << i;
    out.push_back(g);
  }
  return out;
}

// ---- report ----

AnalysisReport analyze_words(const std::vector<std::uint64_t>& words, const AnalysisOptions& options) {
  if (words.empty()) throw Error("no words to analyze");
  if (options.word_bits == 0 || options.word_bits > 64) throw Error("word width must be in [1, 64]");
  AnalysisReport r;
  r.options = options;
  r.words = words.size();
  std::vector<std::uint64_t> data = words;
  if (options.full_period) {
    r.period = shortest_period(words);
    data.resize(*r.period);
  }
  if (options.word_bits <= 24) {
    // counts over the data as given; with full_period that is one shortest period
    Uniformity u;
    u.k = options.word_bits;
    u.period = data.size();
    u.counts.assign(std::size_t{1} << u.k, 0);
    for (auto w : data) ++u.counts[w & width_mask(u.k)];
    u.uniform = chains_equal(u.counts);
    r.uniformity = u;
  }
  const Bits bits = words_to_bits(data, options.word_bits);
  for (unsigned k = 1; k <= options.kdist; ++k) r.census.push_back(k_chain_census(bits, k));
  if (options.q1) r.q1 = q1_check(bits);
  if (options.lc) {
    r.binary_lc = options.full_period ? periodic_linear_complexity(bits) : berlekamp_massey(bits).L;
    for (unsigned j = 0; j < options.word_bits; ++j) {
      if (options.full_period) {
        r.coordinates.push_back(coordinate_analysis(data, j, 0));
      } else {
        CoordinateSummary s;
        s.j = j;
        s.linear_complexity = berlekamp_massey(coordinate(data, j)).L;
        r.coordinates.push_back(s);
      }
    }
  }
  return r;
}

bool AnalysisReport::passed() const {
  if (uniformity && !uniformity->uniform) return false;
  for (const auto& c : census) {
    if (!c.full) return false;
  }
  if (q1 && !q1->pass) return false;
  return true;
}

nlohmann::json AnalysisReport::to_json() const {
  nlohmann::json j;
  j["words"] = words;
  j["word_bits"] = options.word_bits;
  j["full_period"] = options.full_period;
  if (period) j["period"] = *period;
  if (uniformity) {
    j["uniformity"] = {{"k", uniformity->k}, {"counted_words", uniformity->period}, {"counts", uniformity->counts},
                       {"uniform", uniformity->uniform}};
  }
  for (const auto& c : census) {
    j["kdist"].push_back({{"k", c.k}, {"length", c.length}, {"counts", c.counts}, {"full", c.full}});
  }
  if (q1) {
    nlohmann::json q;
    q["length"] = q1->length;
    q["bound"] = q1->bound;
    q["pass"] = q1->pass;
    for (const auto& row : q1->rows) {
      q["rows"].push_back({{"k", row.k},
                           {"worst_margin", row.worst_margin},
                           {"worst_margin_cyclic", row.worst_margin_cyclic},
                           {"counts", row.counts},
                           {"counts_cyclic", row.counts_cyclic},
                           {"pass", row.pass}});
    }
    j["q1"] = q;
  }
  if (binary_lc) j["binary_linear_complexity"] = *binary_lc;
  for (const auto& c : coordinates) {
    nlohmann::json e{{"j", c.j}, {"linear_complexity", c.linear_complexity}};
    if (c.period) {
      e["period"] = c.period;
      e["negation"] = c.negation;
    }
    j["coordinates"].push_back(e);
  }
  j["passed"] = passed();
  return j;
}

std::string AnalysisReport::to_csv() const {
  std::ostringstream out;
  out << "metric,parameter,value\n";
  out << "words,," << words << "\n";
  if (period) out << "period,," << *period << "\n";
  if (uniformity) {
    out << "uniform," << uniformity->k << "," << uniformity->uniform << "\n";
    for (std::size_t v = 0; v < uniformity->counts.size(); ++v) out << "residue_count," << v << "," << uniformity->counts[v] << "\n";
  }
  for (const auto& c : census) {
    out << "kfull," << c.k << "," << c.full << "\n";
    for (std::size_t v = 0; v < c.counts.size(); ++v) out << "chain_count," << c.k << ":" << v << "," << c.counts[v] << "\n";
  }
  if (q1) {
    for (const auto& row : q1->rows) {
      out << "q1_margin," << row.k << "," << row.worst_margin << "\n";
      out << "q1_margin_cyclic," << row.k << "," << row.worst_margin_cyclic << "\n";
      out << "q1_pass," << row.k << "," << row.pass << "\n";
    }
    out << "q1_bound,," << q1->bound << "\n";
  }
  if (binary_lc) out << "binary_lc,," << *binary_lc << "\n";
  for (const auto& c : coordinates) {
    if (c.period) {
      out << "coord_period," << c.j << "," << c.period << "\n";
      out << "coord_negation," << c.j << "," << c.negation << "\n";
    }
    out << "coord_lc," << c.j << "," << c.linear_complexity << "\n";
  }
  return out.str();
}

}  // namespace tfgen
