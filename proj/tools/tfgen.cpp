// tfgen command-line front end.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "tfgen/analysis.hpp"
#include "tfgen/anf_lab.hpp"
#include "tfgen/budget.hpp"
#include "tfgen/error.hpp"
#include "tfgen/expr.hpp"
#include "tfgen/wreath.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kUsage = 1;
constexpr int kVerdictFail = 2;

using tfgen::Error;

// ---- check ----

struct CheckArgs {
  std::string expr;
  unsigned depth = 10;
  std::uint64_t control = 0;
};

int run_check(const CheckArgs& a) {
  if (a.depth == 0 || a.depth > tfgen::kOrbitWidthBudget) throw Error("--depth must be in [1, 26]");
  const auto e = tfgen::parse(a.expr);
  std::cout << "expression: " << e.to_string() << "\n";
  const auto cls = tfgen::classify(e, a.control);
  std::cout << "compatible: ";
  if (cls.verdict == tfgen::Classification::Verdict::compatible) {
    std::cout << "yes (all operators compatible)\n";
  } else if (cls.verdict == tfgen::Classification::Verdict::non_compatible) {
    const auto& w = *cls.witness;
    std::cout << "no (witness: u=" << w.u << ", u'=" << w.u_prime << " agree mod 2^" << w.modulus_bits
              << " but their images do not)\n";
    return kVerdictFail;
  } else {
    std::cout << "unknown (non-compatible operators; no witness at width " << cls.checked_width << ")\n";
  }
  const auto f = tfgen::to_mapping(e, a.control);

  unsigned mp_fail = 0;
  for (unsigned k = 1; k <= a.depth && !mp_fail; ++k) {
    if (!tfgen::is_bijective(f, k)) mp_fail = k;
  }
  std::cout << "measure-preserving (depth " << a.depth << "): ";
  if (mp_fail) std::cout << "no (not bijective mod 2^" << mp_fail << ")\n";
  else std::cout << "yes\n";

  unsigned erg_fail = 0;
  for (unsigned k = 1; k <= a.depth && !erg_fail; ++k) {
    if (!tfgen::is_transitive(f, k)) erg_fail = k;
  }
  std::cout << "ergodic (depth " << a.depth << "): ";
  if (erg_fail) {
    std::cout << "no (not transitive mod 2^" << erg_fail << ")";
    const auto cs = tfgen::cycle_structure(f, erg_fail);
    if (cs.bijective) {
      std::cout << "; cycles mod 2^" << erg_fail << ":";
      for (const auto& [len, count] : cs.cycle_lengths) std::cout << " " << count << "x" << len;
    }
    std::cout << "\n";
  } else {
    std::cout << "yes\n";
  }

  if (cls.verdict == tfgen::Classification::Verdict::compatible) {
    const unsigned d = std::min(a.depth, tfgen::kAnfWidthBudget);
    const auto anf = tfgen::anf_ergodicity(f, d);
    std::cout << "bit-slice criterion (depth " << d << "): ";
    if (anf.ergodic) {
      std::cout << "ergodic\n";
    } else {
      std::cout << (anf.measure_preserving ? "measure-preserving only" : "fails") << " (bit " << anf.failing_bit << ": "
                << tfgen::anf_of_bit(f, static_cast<unsigned>(anf.failing_bit), d).to_string() << ")\n";
    }
  }
  return erg_fail ? kVerdictFail : kPass;
}

// ---- gen / example ----

struct GenArgs {
  std::string spec_path;
  std::string example;
  std::string params = "{}";
  std::optional<std::uint64_t> count;
  std::string out;
  bool force = false;
};

tfgen::GeneratorSpec load_or_build(const std::string& spec_path, const std::string& example, const std::string& params) {
  if (!spec_path.empty()) return tfgen::load_spec(spec_path);
  if (example.empty()) throw Error("either --spec or --example is required");
  return tfgen::build_example(example, nlohmann::json::parse(params)).spec;
}

void print_report(const tfgen::ValidationReport& r) {
  std::cerr << "validation (depth " << r.depth << ", m = " << r.m << "): "
            << "parity period " << r.parity_period << (r.parity_period_ok ? " ok" : " FAIL")
            << "; sum of g_j(0) " << (r.sum_odd ? "odd ok" : "even FAIL")
            << "; coefficient parity " << (r.coef_ok ? "ok" : "FAIL");
  if (r.outputs_balanced) std::cerr << "; outputs " << (*r.outputs_balanced ? "balanced" : "NOT balanced");
  std::cerr << "\n";
}

int run_gen(const GenArgs& a) {
  const auto spec = load_or_build(a.spec_path, a.example, a.params);
  const auto family = tfgen::resolve(spec);
  const auto report = tfgen::validate_family(family);
  print_report(report);
  if (!report.passed() && !a.force) {
    std::cerr << "spec failed validation; nothing written (use --force to generate anyway)\n";
    return kVerdictFail;
  }
  std::uint64_t count = 0;
  if (a.count) {
    count = *a.count;
  } else {
    count = tfgen::measure_period(family, spec.seed, tfgen::step_budget()).output_period;
  }
  if (count > tfgen::step_budget()) throw tfgen::BudgetError("--count exceeds the step budget");
  tfgen::Generator g(family, spec.seed);
  const auto words = g.outputs(count);
  tfgen::write_keystream(a.out, words, family.k);
  std::cerr << "wrote " << count << " words of " << family.k << " bits to " << a.out << "\n";
  return report.passed() ? kPass : kVerdictFail;
}

struct ExampleArgs {
  std::string kind;
  std::string params = "{}";
  std::string out;
  bool period = false;
};

int run_example(const ExampleArgs& a) {
  const auto build = tfgen::build_example(a.kind, nlohmann::json::parse(a.params));
  nlohmann::json j;
  j["spec"] = tfgen::spec_to_json(build.spec);
  j["validation"] = build.report.to_json();
  if (!build.note.empty()) j["note"] = build.note;
  if (a.period) {
    const auto p = tfgen::measure_period(build.spec);
    j["period"] = {{"tail", p.tail}, {"pair", p.pair_period}, {"state", p.state_period}, {"output", p.output_period}};
  }
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw Error("cannot write " + a.out);
    out << tfgen::spec_to_json(build.spec).dump(2) << "\n";
  }
  std::cout << j.dump(2) << "\n";
  return build.report.passed() ? kPass : kVerdictFail;
}

// ---- analyze ----

struct AnalyzeArgs {
  std::string in;
  std::string bits;
  unsigned word_bits = 8;
  std::optional<std::uint64_t> count;
  bool full_period = false;
  bool lc = false;
  unsigned kdist = 0;
  bool q1 = false;
  std::string report;
};

int run_analyze(const AnalyzeArgs& a) {
  std::vector<std::uint64_t> words;
  tfgen::AnalysisOptions opt;
  opt.word_bits = a.word_bits;
  if (!a.bits.empty()) {
    for (auto b : tfgen::parse_bits(a.bits)) words.push_back(b);
    opt.word_bits = 1;
  } else {
    if (a.in.empty()) throw Error("either --in or --bits is required");
    words = tfgen::read_keystream(a.in, a.word_bits, a.count);
  }
  opt.full_period = a.full_period;
  opt.lc = a.lc;
  opt.kdist = a.kdist;
  opt.q1 = a.q1;
  const auto r = tfgen::analyze_words(words, opt);
  const auto j = r.to_json();
  if (!a.report.empty()) {
    std::ofstream js(a.report + ".json");
    std::ofstream csv(a.report + ".csv");
    if (!js || !csv) throw Error("cannot write report files with prefix " + a.report);
    js << j.dump(2) << "\n";
    csv << r.to_csv();
  }
  std::cout << "words: " << r.words;
  if (r.period) std::cout << "  shortest period: " << *r.period;
  std::cout << "\n";
  if (r.uniformity) std::cout << "uniform mod 2^" << r.uniformity->k << ": " << (r.uniformity->uniform ? "yes" : "no") << "\n";
  for (const auto& c : r.census) std::cout << c.k << "-full: " << (c.full ? "yes" : "no") << "\n";
  if (r.q1) {
    for (const auto& row : r.q1->rows) {
      std::cout << "Q1 k=" << row.k << ": margin " << row.worst_margin << " (cyclic " << row.worst_margin_cyclic
                << ") bound " << r.q1->bound << " " << (row.pass ? "pass" : "fail") << "\n";
    }
  }
  if (r.binary_lc) std::cout << "binary linear complexity: " << *r.binary_lc << "\n";
  for (const auto& c : r.coordinates) {
    std::cout << "bit " << c.j << ": LC " << c.linear_complexity;
    if (c.period) std::cout << ", period " << c.period << ", half-period negation " << (c.negation ? "yes" : "no");
    std::cout << "\n";
  }
  if (a.report.empty()) std::cout << j.dump(2) << "\n";
  return r.passed() ? kPass : kVerdictFail;
}

// ---- enumerate ----

int run_enumerate(unsigned n, bool transitive) {
  if (n == 0 || n > 4) throw Error("--n must be in [1, 4]");
  if (!transitive) {
    std::cout << "n=" << n << " compatible maps: 2^" << ((1U << (n + 1)) - 2) << " (one ANF per bit slice)\n";
    return kPass;
  }
  const auto count = tfgen::count_transitive(n);
  const std::uint64_t formula = std::uint64_t{1} << ((1U << n) - n - 1);
  std::cout << "n=" << n << " transitive compatible maps: " << count << " = 2^(2^n-n-1) = " << formula << "\n";
  return count == formula ? kPass : kVerdictFail;
}

// ---- sweep ----

struct SweepArgs {
  std::string template_path;
  std::vector<std::string> params;
  std::string out;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) s.replace(pos, from.size(), to);
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

int run_sweep(const SweepArgs& a) {
  std::ifstream in(a.template_path);
  if (!in) throw Error("cannot open template " + a.template_path);
  const std::string tmpl((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& p : a.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw Error("--param must look like name=v1,v2,...");
    axes.emplace_back(p.substr(0, eq), split(p.substr(eq + 1), ','));
    if (axes.back().second.empty()) throw Error("--param " + p + " has no values");
  }
  std::vector<std::vector<std::string>> combos{{}};
  for (const auto& [name, values] : axes) {
    std::vector<std::vector<std::string>> next;
    for (const auto& c : combos) {
      for (const auto& v : values) {
        auto d = c;
        d.push_back(v);
        next.push_back(d);
      }
    }
    combos = std::move(next);
  }

  // Random expressions are drawn up front so results do not depend on thread scheduling.
  std::mt19937_64 rng(a.seed);
  std::vector<std::string> texts;
  for (const auto& c : combos) {
    std::string t = tmpl;
    for (std::size_t i = 0; i < axes.size(); ++i) t = replace_all(t, "${" + axes[i].first + "}", c[i]);
    while (t.find("${random_expr}") != std::string::npos) {
      t.replace(t.find("${random_expr}"), 14, tfgen::random_compatible_expression(rng, 3).to_string());
    }
    texts.push_back(t);
  }

  std::vector<std::string> rows(texts.size());
  std::atomic<std::size_t> next{0};
  const std::uint64_t budget = tfgen::step_budget();
  auto worker = [&] {
    for (std::size_t i = next++; i < texts.size(); i = next++) {
      std::ostringstream row;
      row << i;
      for (const auto& v : combos[i]) row << "," << v;
      try {
        const auto spec = tfgen::spec_from_json(nlohmann::json::parse(texts[i]));
        const auto family = tfgen::resolve(spec);
        const auto report = tfgen::validate_family(family);
        const auto p = tfgen::measure_period(family, spec.seed, budget);
        const std::uint64_t expected = family.m() << spec.n;
        tfgen::Generator g(family, spec.seed);
        for (std::uint64_t t = 0; t < p.tail; ++t) g.advance();
        const auto states = g.states(p.state_period);
        const bool uniform = spec.n <= 24 && tfgen::strict_uniformity(states, spec.n).uniform;
        const auto kfull = spec.n <= 24 ? tfgen::max_full_k(tfgen::words_to_bits(states, spec.n), spec.n) : 0;
        row << "," << family.m() << "," << report.passed() << "," << p.state_period << "," << expected << ","
            << uniform << "," << kfull << ",";
      } catch (const std::exception& e) {
        row << ",,,,,,," << '"' << replace_all(e.what(), "\"", "'") << '"';
      }
      rows[i] = row.str();
    }
  };
  const unsigned threads = a.threads ? a.threads : std::max(1U, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, texts.size()); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ofstream out(a.out);
  if (!out) throw Error("cannot write " + a.out);
  out << "# rng mt19937_64 seed " << a.seed << "\n";
  out << "run";
  for (const auto& ax : axes) out << "," << ax.first;
  out << ",m,valid,state_period,expected_period,uniform,max_kfull,error\n";
  for (const auto& r : rows) out << r << "\n";
  std::cout << "wrote " << rows.size() << " rows to " << a.out << "\n";
  return kPass;
}

// ---- bench ----

struct BenchArgs {
  std::string spec_path;
  std::string example;
  std::string params = "{}";
  double seconds = 1.0;
  unsigned repeats = 5;
};

int run_bench(const BenchArgs& a) {
  if (a.seconds < 0) throw Error("--seconds must be non-negative");
  const auto spec = load_or_build(a.spec_path, a.example, a.params);
  const auto family = tfgen::resolve(spec);
  if (a.seconds == 0) {
    std::cout << "words: 0\n";
    return kPass;
  }
  constexpr std::uint64_t kChunk = 4096;
  std::vector<double> rates;
  std::uint64_t checksum = 0;
  for (unsigned r = 0; r < std::max(1U, a.repeats); ++r) {
    tfgen::Generator g(family, spec.seed);
    std::uint64_t words = 0;
    std::uint64_t acc = 0;
    const auto start = std::chrono::steady_clock::now();
    const auto limit = std::chrono::duration<double>(a.seconds / std::max(1U, a.repeats));
    std::chrono::duration<double> elapsed{};
    do {
      for (std::uint64_t t = 0; t < kChunk; ++t) acc = acc * 31 + g.next();
      words += kChunk;
      elapsed = std::chrono::steady_clock::now() - start;
    } while (elapsed < limit);
    if (r == 0) checksum = acc;
    rates.push_back(static_cast<double>(words) / elapsed.count());
  }
  std::sort(rates.begin(), rates.end());
  std::cout << "median words/second: " << static_cast<std::uint64_t>(rates[rates.size() / 2]) << " over " << rates.size()
            << " runs (first-run checksum " << std::hex << checksum << std::dec << ")\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tfgen: T-function counter-dependent generator lab"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "compatibility, measure preservation and ergodicity of an expression");
  c->add_option("expr", check.expr, "expression in x")->required();
  c->add_option("--depth", check.depth, "check modulo 2^k for k = 1..depth")->capture_default_str();
  c->add_option("--control", check.control, "value bound to c");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a keystream from a spec");
  g->add_option("--spec", gen.spec_path, "GeneratorSpec JSON file");
  g->add_option("--example", gen.example, "build a named example instead of reading a spec");
  g->add_option("--params", gen.params, "JSON parameters for --example");
  g->add_option("--count", gen.count, "number of output words (default: one output period)");
  g->add_option("--out", gen.out, "keystream file")->required();
  g->add_flag("--force", gen.force, "generate even if validation fails");

  ExampleArgs ex;
  auto* e = app.add_subcommand("example", "build a named construction and print its validation");
  e->add_option("kind", ex.kind, "intro, wp1, wp2, wp3, wp4, klsh or sec5")->required();
  e->add_option("--params", ex.params, "JSON parameters");
  e->add_option("--out", ex.out, "write the spec JSON here");
  e->add_flag("--period", ex.period, "measure the period");

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "analyze a keystream");
  a->add_option("--in", an.in, "keystream file");
  a->add_option("--bits", an.bits, "analyze a literal bit string instead");
  a->add_option("--word-bits", an.word_bits, "word width k")->capture_default_str();
  a->add_option("--count", an.count, "number of words in the file");
  a->add_flag("--full-period", an.full_period, "input holds whole periods");
  a->add_flag("--lc", an.lc, "linear complexity of the binary sequence and of each bit");
  a->add_option("--kdist", an.kdist, "k-chain census for k = 1..K");
  a->add_flag("--q1", an.q1, "Q1 bound for every k <= log2 N");
  a->add_option("--report", an.report, "write PREFIX.json and PREFIX.csv");

  unsigned enum_n = 3;
  bool enum_transitive = false;
  auto* en = app.add_subcommand("enumerate", "count compatible (transitive) maps of Z/2^n");
  en->add_option("--n", enum_n, "n <= 4")->required();
  en->add_flag("--transitive", enum_transitive, "count transitive maps by enumeration");

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "validate and measure a grid of specs from a template");
  s->add_option("--template", sw.template_path, "spec JSON with ${name} placeholders")->required();
  s->add_option("--param", sw.params, "name=v1,v2,... (repeatable)");
  s->add_option("--out", sw.out, "CSV output")->required();
  s->add_option("--seed", sw.seed, "seed for ${random_expr}")->capture_default_str();
  s->add_option("--threads", sw.threads, "worker threads (default: hardware)");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "measure generator throughput");
  b->add_option("--spec", bench.spec_path, "GeneratorSpec JSON file");
  b->add_option("--example", bench.example, "named example instead of a spec");
  b->add_option("--params", bench.params, "JSON parameters for --example");
  b->add_option("--seconds", bench.seconds, "total measuring time")->capture_default_str();
  b->add_option("--repeats", bench.repeats, "timed runs; the median is reported")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*c) return run_check(check);
    if (*g) return run_gen(gen);
    if (*e) return run_example(ex);
    if (*a) return run_analyze(an);
    if (*en) return run_enumerate(enum_n, enum_transitive);
    if (*s) return run_sweep(sw);
    if (*b) return run_bench(bench);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
