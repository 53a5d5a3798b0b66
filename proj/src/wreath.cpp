#include "tfgen/wreath.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "tfgen/budget.hpp"
#include "tfgen/error.hpp"

namespace tfgen {

namespace {

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    if (d != n / d) out.push_back(n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

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

Mapping bind_control(const std::shared_ptr<const CompiledExpr>& e, std::uint64_t c) {
  return Mapping([e, c](std::uint64_t x, unsigned w) { return (*e)(x, w, c); }, e->source().to_string());
}

std::uint64_t apply_pi(std::uint64_t x, unsigned n, BitPermutation pi) {
  return pi == BitPermutation::reverse ? raw::bit_reverse(x, n) : raw::rotate_up1(x, n);
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

}  // namespace

std::uint64_t cyclic_period(const std::vector<std::uint64_t>& seq) {
  const std::uint64_t n = seq.size();
  if (n == 0) return 0;
  for (auto d : divisors(n)) {
    bool ok = true;
    for (std::uint64_t i = 0; i < n && ok; ++i) ok = seq[i] == seq[(i + d) % n];
    if (ok) return d;
  }
  return n;
}

std::vector<std::uint64_t> lfsr_sequence(const LfsrControl& lfsr) {
  if (lfsr.cells == 0 || lfsr.cells > 24) throw Error("lfsr: cells must be in [1, 24]");
  if (lfsr.taps.empty()) throw Error("lfsr: no feedback taps");
  std::uint64_t tap_mask = 0;
  for (auto t : lfsr.taps) {
    if (t >= lfsr.cells) throw Error("lfsr: tap " + std::to_string(t) + " outside the register");
    tap_mask ^= std::uint64_t{1} << t;
  }
  const std::uint64_t mask = width_mask(lfsr.cells);
  if (lfsr.init == 0 || lfsr.init > mask) throw Error("lfsr: initial state must be a nonzero " + std::to_string(lfsr.cells) + "-bit value");
  const std::uint64_t expected = mask;  // 2^cells - 1
  std::vector<std::uint64_t> out;
  std::uint64_t s = lfsr.init;
  do {
    out.push_back(s & 1U);
    const std::uint64_t fb = static_cast<std::uint64_t>(__builtin_popcountll(s & tap_mask) & 1);
    s = (s >> 1) | (fb << (lfsr.cells - 1));
    if (out.size() > expected) break;
  } while (s != lfsr.init);
  if (out.size() != expected) {
    throw Error("lfsr: taps do not give a maximum-period register (period " + std::to_string(out.size()) +
                ", expected " + std::to_string(expected) + ")");
  }
  return out;
}

std::vector<std::uint64_t> control_period(const ControlSource& source) {
  if (const auto* e = std::get_if<ExplicitControl>(&source)) {
    if (e->symbols.empty()) throw Error("explicit control sequence is empty");
    return e->symbols;
  }
  if (const auto* l = std::get_if<LfsrControl>(&source)) return lfsr_sequence(*l);
  const auto& inner = std::get<InnerControl>(source);
  if (!inner.spec) throw Error("inner control generator missing");
  const auto family = resolve(*inner.spec);
  const auto period = measure_period(family, inner.spec->seed, step_budget());
  if (period.tail != 0) throw Error("inner control generator is not purely periodic");
  Generator g(family, inner.spec->seed);
  return g.outputs(period.output_period);
}

ClockFamily resolve(const GeneratorSpec& spec) {
  if (spec.n == 0 || spec.n > kMaxWidth) throw Error("n must be in [1, 64]");
  const unsigned k = spec.output_width();
  if (k > spec.n) throw Error("output width k must not exceed n");
  if (spec.seed > width_mask(spec.n)) throw Error("seed must be below 2^n");
  if (spec.update.empty()) throw Error("update family is empty");

  ClockFamily family;
  family.n = spec.n;
  family.k = k;
  family.control = control_period(spec.control);
  const std::size_t m = family.control.size();
  if (spec.m && *spec.m != m) {
    throw Error("declared m = " + std::to_string(*spec.m) + " does not match the control period " + std::to_string(m));
  }

  auto compile_all = [](const std::vector<std::string>& texts) {
    std::vector<std::shared_ptr<const CompiledExpr>> out;
    for (const auto& t : texts) out.push_back(std::make_shared<const CompiledExpr>(parse(t)));
    return out;
  };
  const auto update = compile_all(spec.update);
  for (std::size_t j = 0; j < m; ++j) {
    const auto c = family.control[j];
    const std::size_t idx = spec.role == ControlRole::parameter ? j % update.size() : c % update.size();
    family.update.push_back(bind_control(update[idx], c));
  }

  const std::uint64_t kmask = width_mask(k);
  const unsigned n = spec.n;
  switch (spec.output.kind) {
    case OutputSpec::Kind::truncate: {
      const unsigned drop = n - k;
      Mapping trunc([drop](std::uint64_t x, unsigned) { return x >> drop; }, "truncate");
      family.output.assign(m, trunc);
      break;
    }
    case OutputSpec::Kind::reversed_ergodic:
    case OutputSpec::Kind::family: {
      if (spec.output.exprs.empty()) throw Error("output family needs at least one expression");
      const auto outs = compile_all(spec.output.exprs);
      const bool reversed = spec.output.kind == OutputSpec::Kind::reversed_ergodic;
      const auto pi = spec.output.pi;
      for (std::size_t j = 0; j < m; ++j) {
        const auto c = family.control[j];
        const auto& e = outs[j % outs.size()];
        family.output.emplace_back(
            [e, c, reversed, pi, kmask, n](std::uint64_t x, unsigned) {
              const auto arg = reversed ? apply_pi(x, n, pi) : x;
              return (*e)(arg, n, c) & kmask;
            },
            e->source().to_string());
      }
      break;
    }
  }
  return family;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json j;
  j["depth"] = depth;
  j["m"] = m;
  j["parities"] = parities;
  j["parity_period"] = parity_period;
  j["condition1_parity_period"] = parity_period_ok;
  j["condition2_sum_odd"] = sum_odd;
  j["condition3_coef_parity"] = coef_parity;
  j["condition3"] = coef_ok;
  j["literal_sum_informational"] = literal_sum;
  j["literal_sum_minus_z_informational"] = literal_sum_minus_z;
  if (outputs_balanced) j["outputs_balanced"] = *outputs_balanced;
  j["passed"] = passed();
  return j;
}

ValidationReport validate_wp(const std::vector<Mapping>& members, unsigned depth) {
  if (depth == 0 || depth > kValidateDepthBudget) throw Error("validation depth must be in [1, 16]");
  if (members.empty()) throw Error("empty clock family");
  ValidationReport r;
  r.depth = depth;
  r.m = members.size();
  const std::uint64_t size = std::uint64_t{1} << depth;
  const unsigned levels = depth - 1;
  std::vector<unsigned> coef(levels, 0);
  std::vector<std::uint64_t> sums(levels, 0);
  std::vector<std::uint64_t> sums_minus_z(levels, 0);
  std::vector<std::uint8_t> hit(size);
  std::uint64_t total_parity = 0;

  for (std::size_t j = 0; j < members.size(); ++j) {
    const auto table = members[j].table(depth);
    for (unsigned rbits = 1; rbits < depth; ++rbits) {
      const std::uint64_t mask = width_mask(rbits);
      for (std::uint64_t x = 0; x < size; ++x) {
        if ((table[x] & mask) != (table[x & mask] & mask)) {
          throw Error("clock function g_" + std::to_string(j) + " is not compatible (" + members[j].label() + ")");
        }
      }
    }
    std::fill(hit.begin(), hit.end(), 0);
    for (auto y : table) {
      if (hit[y]) throw Error("clock function g_" + std::to_string(j) + " is not measure-preserving modulo 2^" +
                              std::to_string(depth) + " (" + members[j].label() + ")");
      hit[y] = 1;
    }
    r.parities.push_back(table[0] & 1U);
    total_parity ^= table[0] & 1U;
    for (unsigned k = 1; k < depth; ++k) {
      const std::uint64_t zs = std::uint64_t{1} << k;
      const std::uint64_t mod = width_mask(k + 1);
      for (std::uint64_t z = 0; z < zs; ++z) {
        coef[k - 1] ^= (table[z] >> k) & 1U;
        sums[k - 1] = (sums[k - 1] + table[z]) & mod;
        sums_minus_z[k - 1] = (sums_minus_z[k - 1] + table[z] - z) & mod;
      }
    }
  }
  r.parity_period = cyclic_period(r.parities);
  r.parity_period_ok = r.parity_period == members.size();
  r.sum_odd = total_parity == 1;
  r.coef_ok = true;
  for (unsigned k = 1; k < depth; ++k) {
    r.coef_parity.push_back(coef[k - 1] == 1);
    r.coef_ok = r.coef_ok && coef[k - 1] == 1;
    r.literal_sum.push_back(sums[k - 1] == (std::uint64_t{1} << k));
    r.literal_sum_minus_z.push_back(sums_minus_z[k - 1] == (std::uint64_t{1} << k));
  }
  return r;
}

bool is_balanced(const Mapping& f, unsigned n, unsigned k) {
  if (n > 24) throw Error("balancedness check limited to n <= 24");
  if (k > n) return false;
  std::vector<std::uint32_t> counts(std::size_t{1} << k, 0);
  const std::uint64_t kmask = width_mask(k);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) ++counts[f(x, n) & kmask];
  const auto expected = std::uint32_t{1} << (n - k);
  return std::all_of(counts.begin(), counts.end(), [&](std::uint32_t c) { return c == expected; });
}

ValidationReport validate_family(const ClockFamily& family) {
  auto report = validate_wp(family.update, std::min(family.n, kValidateDepthBudget));
  if (family.n <= kValidateDepthBudget) {
    bool balanced = true;
    for (const auto& f : family.output) {
      if (!is_balanced(f, family.n, family.k)) {
        balanced = false;
        break;
      }
    }
    report.outputs_balanced = balanced;
  }
  return report;
}

ValidationReport validate_spec(const GeneratorSpec& spec) { return validate_family(resolve(spec)); }

Generator::Generator(const GeneratorSpec& spec) : Generator(resolve(spec), spec.seed) {}

Generator::Generator(ClockFamily family, std::uint64_t seed)
    : family_(std::make_shared<const ClockFamily>(std::move(family))) {
  if (family_->m() == 0) throw Error("generator needs at least one clock function");
  reset(seed);
}

void Generator::reset(std::uint64_t seed) {
  x_ = seed & width_mask(family_->n);
  i_ = 0;
  j_ = 0;
}

std::uint64_t Generator::output() const { return family_->output[j_](x_, family_->n) & width_mask(family_->k); }

void Generator::advance() {
  try {
    x_ = family_->update[j_](x_, family_->n);
  } catch (const Error& e) {
    throw Error("step " + std::to_string(i_) + ": " + e.what());
  }
  ++i_;
  if (++j_ == family_->m()) j_ = 0;
}

std::vector<std::uint64_t> Generator::states(std::uint64_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t t = 0; t < count; ++t) {
    out.push_back(x_);
    advance();
  }
  return out;
}

std::vector<std::uint64_t> Generator::outputs(std::uint64_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t t = 0; t < count; ++t) out.push_back(next());
  return out;
}

PeriodMeasurement measure_period(const ClockFamily& family, std::uint64_t seed, std::uint64_t budget) {
  const std::size_t m = family.m();
  const unsigned n = family.n;
  struct Pair {
    std::size_t j;
    std::uint64_t x;
    bool operator==(const Pair&) const = default;
  };
  auto step = [&](Pair p) { return Pair{(p.j + 1) % m, family.update[p.j](p.x, n)}; };
  const Pair start{0, seed & width_mask(n)};

  std::uint64_t used = 0;
  auto spend = [&](std::uint64_t k) {
    used += k;
    if (used > budget) throw BudgetError("period measurement exceeded the step budget of " + std::to_string(budget));
  };

  // Brent: find the cycle length.
  std::uint64_t power = 1;
  std::uint64_t lam = 1;
  Pair tortoise = start;
  Pair hare = step(start);
  spend(1);
  while (!(tortoise == hare)) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    hare = step(hare);
    ++lam;
    spend(1);
  }
  // Tail length.
  tortoise = hare = start;
  for (std::uint64_t i = 0; i < lam; ++i) hare = step(hare);
  spend(lam);
  std::uint64_t mu = 0;
  while (!(tortoise == hare)) {
    tortoise = step(tortoise);
    hare = step(hare);
    ++mu;
    spend(2);
  }

  PeriodMeasurement out;
  out.tail = mu;
  out.pair_period = lam;

  // Shortest period of the state (or output) sequence on the cycle divides lam.
  auto shortest = [&](bool outputs) {
    std::uint64_t cand = lam;
    auto holds = [&](std::uint64_t d) {
      Generator a(family, seed);
      for (std::uint64_t i = 0; i < mu; ++i) a.advance();
      Generator b = a;
      for (std::uint64_t i = 0; i < d; ++i) b.advance();
      spend(mu + d + lam);
      for (std::uint64_t i = 0; i < lam; ++i) {
        const bool same = outputs ? a.output() == b.output() : a.state() == b.state();
        if (!same) return false;
        a.advance();
        b.advance();
      }
      return true;
    };
    for (auto p : prime_factors(lam)) {
      while (cand % p == 0 && holds(cand / p)) cand /= p;
    }
    return cand;
  };
  out.state_period = shortest(false);
  out.output_period = shortest(true);
  return out;
}

PeriodMeasurement measure_period(const GeneratorSpec& spec) {
  return measure_period(resolve(spec), spec.seed, step_budget());
}

std::vector<Mapping> output_reverse_ergodic(const std::vector<Mapping>& h, unsigned n, unsigned k, BitPermutation pi) {
  if (h.empty()) throw Error("no output functions H_j");
  if (k == 0 || k > n) throw Error("output width k must be in [1, n]");
  std::vector<Mapping> out;
  const std::uint64_t kmask = width_mask(k);
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (!is_ergodic_to_depth(h[j], std::min(n, 12U))) {
      throw Error("H_" + std::to_string(j) + " is not ergodic (" + h[j].label() + ")");
    }
    const auto hj = h[j];
    out.emplace_back([hj, n, pi, kmask](std::uint64_t x, unsigned) { return hj(apply_pi(x, n, pi), n) & kmask; },
                     "H(pi(x))");
  }
  return out;
}

// ---- examples ----

namespace {

std::uint64_t json_u64(const nlohmann::json& v) {
  if (v.is_string()) return std::stoull(v.get<std::string>(), nullptr, 0);
  return v.get<std::uint64_t>();
}

template <class T>
T param(const nlohmann::json& p, const char* key, T fallback) {
  if (!p.contains(key)) return fallback;
  if constexpr (std::is_same_v<T, std::uint64_t>) return json_u64(p.at(key));
  else return p.at(key).get<T>();
}

std::vector<std::string> cycled(const std::vector<std::string>& v, std::size_t m) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < m; ++j) out.push_back(v[j % v.size()]);
  return out;
}

void require(bool ok, const std::string& condition) {
  if (!ok) throw Error("construction precondition violated: " + condition);
}

void require_ergodic(const std::vector<std::string>& exprs, unsigned n, const char* name) {
  for (std::size_t j = 0; j < exprs.size(); ++j) {
    const auto e = parse(exprs[j]);
    const auto cls = classify(e);
    require(cls.verdict == Classification::Verdict::compatible, std::string(name) + "_" + std::to_string(j) + " must be compatible");
    require(is_ergodic_to_depth(to_mapping(e), std::min(n, 12U)), std::string(name) + "_" + std::to_string(j) + " must be ergodic");
  }
}

std::vector<std::uint64_t> u64_list(const nlohmann::json& p, const char* key, std::vector<std::uint64_t> fallback) {
  if (!p.contains(key)) return fallback;
  std::vector<std::uint64_t> out;
  for (const auto& v : p.at(key)) out.push_back(json_u64(v));
  return out;
}

void check_wp3_control(const std::vector<std::uint64_t>& c) {
  const auto m = c.size();
  require(m > 1 && m % 2 == 1, "m must be odd and greater than 1");
  std::uint64_t parity = 0;
  std::vector<std::uint64_t> bits;
  for (auto v : c) {
    parity ^= v & 1U;
    bits.push_back(v & 1U);
  }
  require(parity == 0, "sum of c_j must be even");
  require(cyclic_period(bits) == m, "c_j mod 2 must have shortest period m");
}

std::vector<unsigned> default_taps(unsigned s) {
  switch (s) {
    case 2: return {0, 1};
    case 3: return {0, 1};
    case 4: return {0, 1};
    case 5: return {0, 2};
    case 6: return {0, 1};
    case 7: return {0, 1};
    case 8: return {0, 2, 3, 4};
    case 9: return {0, 4};
    case 10: return {0, 3};
    case 11: return {0, 2};
    default: throw Error("no default taps for " + std::to_string(s) + " cells; pass taps explicitly");
  }
}

std::string wp_member(const std::string& op, const std::string& h) {
  if (op == "xor") return "c ^ " + paren(h);
  if (op == "add") return "c + " + paren(h);
  throw Error("op must be 'xor' or 'add'");
}

std::string anf_expression(const BooleanANF& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (auto mono : f.monomials()) {
    if (!out.empty()) out += " ^ ";
    if (mono == 0) {
      out += "1";
      continue;
    }
    std::string term;
    for (unsigned v = 0; v < 32; ++v) {
      if (!((mono >> v) & 1U)) continue;
      if (!term.empty()) term += " & ";
      term += "bit(" + std::to_string(v) + ", x)";
    }
    out += paren(term);
  }
  return out;
}

ExampleBuild finish(GeneratorSpec spec, std::string note = {}) {
  ExampleBuild b;
  b.report = validate_spec(spec);
  b.spec = std::move(spec);
  b.note = std::move(note);
  return b;
}

}  // namespace

std::string sec5_expression(unsigned n, const std::vector<BooleanANF>& psi) {
  std::string out = "(1 + x)";
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (psi[i].is_zero()) continue;
    out += " ^ (" + paren(anf_expression(psi[i])) + " << " + std::to_string(n + 1 + i) + ")";
  }
  return out;
}

std::vector<std::string> example_kinds() { return {"intro", "wp1", "wp2", "wp3", "wp4", "klsh", "sec5"}; }

ExampleBuild build_example(const std::string& kind, const nlohmann::json& p) {
  GeneratorSpec spec;
  spec.n = param<unsigned>(p, "n", 8);
  spec.seed = param<std::uint64_t>(p, "seed", 0);
  const auto h = param<std::vector<std::string>>(p, "h", {"x + 1"});
  if (p.contains("k")) spec.output.k = p.at("k").get<unsigned>();

  if (kind == "intro") {
    const auto m = param<unsigned>(p, "m", 3);
    require(m >= 3 && m % 4 == 3, "m must be congruent to 3 mod 4");
    const auto v = cycled(param<std::vector<std::string>>(p, "v", {"0"}), m);
    const auto w = cycled(param<std::vector<std::string>>(p, "w", {"0"}), m);
    for (const auto& e : v) require(parse(e).compatible(), "v_j must be a composition of compatible operators");
    for (const auto& e : w) require(parse(e).compatible(), "w_j must be a composition of compatible operators");
    ExplicitControl ctl;
    spec.update.clear();
    for (unsigned j = 0; j < m; ++j) {
      ctl.symbols.push_back(j);
      spec.update.push_back("(c + x) + 4 * " + paren(v[j]));
      spec.output.exprs.push_back("(1 + x) + 4 * " + paren(w[j]));
    }
    spec.control = ctl;
    spec.output.kind = OutputSpec::Kind::reversed_ergodic;
    spec.output.pi = param<std::string>(p, "pi", "reverse") == "rotate" ? BitPermutation::rotate : BitPermutation::reverse;
    std::string note;
    if (static_cast<std::uint64_t>(m) * spec.n > (std::uint64_t{1} << std::min(spec.n, 63U))) note = "m exceeds 2^n/n";
    return finish(spec, note);
  }

  if (kind == "wp1") {
    const auto s = param<unsigned>(p, "s", 2);
    require(s >= 1 && s <= 12, "s must be in [1, 12]");
    const std::size_t m = std::size_t{1} << s;
    const auto kk = param<unsigned>(p, "k_odd", 1);
    require(kk % 2 == 1 && kk < m, "k must be odd and below m");
    const auto hs = cycled(h, m);
    require_ergodic(hs, spec.n, "h");
    spec.update.clear();
    for (std::size_t j = 0; j < m; ++j) spec.update.push_back(j < kk ? "(x ^ (x + 1)) ^ " + paren(hs[j]) : hs[j]);
    spec.role = ControlRole::select;
    if (p.contains("inner")) {
      spec.control = InnerControl{std::make_shared<const GeneratorSpec>(spec_from_json(p.at("inner")))};
      require(control_period(spec.control).size() == m, "inner control generator must have period 2^s");
    } else {
      std::vector<std::uint64_t> perm(m);
      std::iota(perm.begin(), perm.end(), 0);
      perm = u64_list(p, "perm", perm);
      auto sorted = perm;
      std::sort(sorted.begin(), sorted.end());
      bool is_perm = sorted.size() == m;
      for (std::size_t j = 0; j < sorted.size() && is_perm; ++j) is_perm = sorted[j] == j;
      require(is_perm, "control must be a permutation of 0..m-1");
      spec.control = ExplicitControl{perm};
    }
    return finish(spec);
  }

  if (kind == "wp2") {
    const auto s = param<unsigned>(p, "s", 2);
    require(s >= 1 && s <= 12, "s must be in [1, 12]");
    const std::size_t m = std::size_t{1} << s;
    std::vector<std::uint64_t> def(m, 0);
    def[0] = 1;
    const auto c = u64_list(p, "c", def);
    require(c.size() == m, "c must have length m = 2^s");
    std::uint64_t parity = 0;
    for (auto v : c) parity ^= v & 1U;
    require(parity == 1, "sum of c_j must be odd");
    const auto hs = cycled(h, m);
    require_ergodic(hs, spec.n, "h");
    const auto variant = param<std::string>(p, "variant", "add");
    require(variant == "add" || variant == "xor", "variant must be 'add' or 'xor'");
    spec.update.clear();
    for (std::size_t j = 0; j < m; ++j) {
      spec.update.push_back(variant == "add" ? "c + " + paren(hs[j]) : "(c + x) ^ (2 * " + paren(hs[j]) + ")");
    }
    spec.control = ExplicitControl{c};
    return finish(spec);
  }

  if (kind == "wp3" || kind == "klsh") {
    const auto c = u64_list(p, "c", {0, 1, 1});
    check_wp3_control(c);
    const auto m = c.size();
    spec.update.clear();
    if (kind == "wp3") {
      const auto hs = cycled(h, m);
      require_ergodic(hs, spec.n, "h");
      const auto op = param<std::string>(p, "op", "xor");
      for (std::size_t j = 0; j < m; ++j) spec.update.push_back(wp_member(op, hs[j]));
    } else {
      const auto big = u64_list(p, "C", {5, 13, 7});
      require(!big.empty(), "C must be nonempty");
      for (std::size_t j = 0; j < m; ++j) {
        const auto cj = big[j % big.size()];
        require((cj & 1U) == 1 && ((cj >> 2) & 1U) == 1, "C_j must have bits 0 and 2 set");
        spec.update.push_back("(x + c) + ((x * x) | " + std::to_string(cj) + ")");
      }
    }
    spec.control = ExplicitControl{c};
    return finish(spec);
  }

  if (kind == "wp4") {
    LfsrControl lfsr;
    lfsr.cells = param<unsigned>(p, "s", 3);
    require(lfsr.cells >= 2, "s must be at least 2");
    lfsr.taps = p.contains("taps") ? p.at("taps").get<std::vector<unsigned>>() : default_taps(lfsr.cells);
    lfsr.init = param<std::uint64_t>(p, "init", 1);
    const auto c = lfsr_sequence(lfsr);
    check_wp3_control(c);
    const auto m = c.size();
    const auto hs = cycled(h, m);
    require_ergodic(hs, spec.n, "h");
    const auto op = param<std::string>(p, "op", "xor");
    spec.update.clear();
    for (std::size_t j = 0; j < m; ++j) spec.update.push_back(wp_member(op, hs[j]));
    spec.control = lfsr;
    return finish(spec);
  }

  if (kind == "sec5") {
    const auto n = param<unsigned>(p, "n", 3);
    const auto k = param<unsigned>(p, "k", 2);
    require(n >= 1 && n <= 8, "n must be in [1, 8]");
    require(k >= 1 && k <= 4, "k must be in [1, 4]");
    const auto max_monomials = param<unsigned>(p, "max_monomials", 8);
    require(max_monomials >= 1, "max_monomials must be positive");
    const auto key = param<std::uint64_t>(p, "key", 0);
    require(key < (std::uint64_t{1} << n), "key must be below 2^n");
    std::mt19937_64 rng(param<std::uint64_t>(p, "rng_seed", 1));
    std::uniform_int_distribution<unsigned> count(1, max_monomials);
    std::uniform_int_distribution<std::uint32_t> pick(0, (std::uint32_t{1} << n) - 1);
    const unsigned width = n + k + 1;
    const std::size_t m = std::size_t{1} << n;
    spec.n = width;
    spec.seed = key;
    spec.output = OutputSpec{OutputSpec::Kind::truncate, k, {}, BitPermutation::reverse};
    spec.update.clear();
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<BooleanANF> psi;
      for (unsigned t = 0; t < k; ++t) {
        std::vector<std::uint32_t> monos;
        const auto terms = count(rng);
        for (unsigned q = 0; q < terms; ++q) monos.push_back(pick(rng));
        psi.emplace_back(n, monos);
      }
      const auto f = sec5_expression(n, psi);
      if (!ergodicity_via_anf(to_mapping(parse(f)), width)) throw Error("sec5: f_F failed the bit-slice ergodicity check");
      spec.update.push_back(paren(f) + " ^ c");
    }
    std::vector<std::uint64_t> d(m, 0);
    d[m - 1] = 1;
    if (m >= 2) d[m - 2] = 1;
    spec.control = ExplicitControl{d};
    return finish(spec, "steps satisfy sum of g_i(0) even for m = 2^n; period is measured, not asserted");
  }

  throw Error("unknown example kind '" + kind + "'");
}

// ---- JSON ----

namespace {

std::string hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  do {
    s.insert(s.begin(), digits[v & 15U]);
    v >>= 4;
  } while (v);
  return "0x" + s;
}

}  // namespace

nlohmann::json spec_to_json(const GeneratorSpec& spec) {
  nlohmann::json j;
  j["n"] = spec.n;
  if (spec.m) j["m"] = *spec.m;
  j["seed"] = hex(spec.seed);
  nlohmann::json ctl;
  if (const auto* e = std::get_if<ExplicitControl>(&spec.control)) {
    ctl["type"] = "explicit";
    ctl["data"] = e->symbols;
  } else if (const auto* l = std::get_if<LfsrControl>(&spec.control)) {
    ctl["type"] = "lfsr";
    ctl["data"] = {{"cells", l->cells}, {"taps", l->taps}, {"init", l->init}};
  } else {
    ctl["type"] = "inner";
    ctl["data"] = spec_to_json(*std::get<InnerControl>(spec.control).spec);
  }
  ctl["role"] = spec.role == ControlRole::parameter ? "parameter" : "select";
  j["control"] = ctl;
  j["update"] = spec.update;
  nlohmann::json out;
  switch (spec.output.kind) {
    case OutputSpec::Kind::truncate: out["type"] = "truncate"; break;
    case OutputSpec::Kind::reversed_ergodic: out["type"] = "reversed-ergodic"; break;
    case OutputSpec::Kind::family: out["type"] = "family"; break;
  }
  out["k"] = spec.output_width();
  if (!spec.output.exprs.empty()) out["exprs"] = spec.output.exprs;
  if (spec.output.kind == OutputSpec::Kind::reversed_ergodic) {
    out["pi"] = spec.output.pi == BitPermutation::reverse ? "reverse" : "rotate";
  }
  j["output"] = out;
  return j;
}

GeneratorSpec spec_from_json(const nlohmann::json& j) {
  try {
    GeneratorSpec spec;
    spec.n = j.at("n").get<unsigned>();
    if (j.contains("m")) spec.m = j.at("m").get<std::uint64_t>();
    spec.seed = j.contains("seed") ? json_u64(j.at("seed")) : 0;
    const auto& ctl = j.at("control");
    const auto type = ctl.at("type").get<std::string>();
    if (type == "explicit") {
      ExplicitControl e;
      for (const auto& v : ctl.at("data")) e.symbols.push_back(json_u64(v));
      spec.control = e;
    } else if (type == "lfsr") {
      const auto& d = ctl.at("data");
      LfsrControl l;
      l.cells = d.at("cells").get<unsigned>();
      l.taps = d.at("taps").get<std::vector<unsigned>>();
      l.init = d.contains("init") ? json_u64(d.at("init")) : 1;
      spec.control = l;
    } else if (type == "inner") {
      spec.control = InnerControl{std::make_shared<const GeneratorSpec>(spec_from_json(ctl.at("data")))};
    } else {
      throw Error("unknown control type '" + type + "'");
    }
    const auto role = ctl.value("role", std::string("parameter"));
    if (role != "parameter" && role != "select") throw Error("control role must be 'parameter' or 'select'");
    spec.role = role == "select" ? ControlRole::select : ControlRole::parameter;
    spec.update = j.at("update").get<std::vector<std::string>>();
    const auto out = j.value("output", nlohmann::json{{"type", "truncate"}});
    const auto otype = out.at("type").get<std::string>();
    if (otype == "truncate") spec.output.kind = OutputSpec::Kind::truncate;
    else if (otype == "reversed-ergodic") spec.output.kind = OutputSpec::Kind::reversed_ergodic;
    else if (otype == "family") spec.output.kind = OutputSpec::Kind::family;
    else throw Error("unknown output type '" + otype + "'");
    spec.output.k = out.value("k", 0U);
    if (out.contains("exprs")) spec.output.exprs = out.at("exprs").get<std::vector<std::string>>();
    const auto pi = out.value("pi", std::string("reverse"));
    if (pi != "reverse" && pi != "rotate") throw Error("pi must be 'reverse' or 'rotate'");
    spec.output.pi = pi == "rotate" ? BitPermutation::rotate : BitPermutation::reverse;
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid generator spec: ") + e.what());
  }
}

}  // namespace tfgen
