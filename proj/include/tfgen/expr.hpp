#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tfgen/anf_lab.hpp"
#include "tfgen/mapping.hpp"
#include "tfgen/word.hpp"

namespace tfgen {

enum class NodeKind {
  variable,  // x
  control,   // c, the current control symbol
  literal,
  unary,
  binary,
  shift,     // e << k (multiply by 2^k) or e >> k (floor divide by 2^k)
  reverse,   // rev(e)
  rotate,    // rotl(e) or rotl(e, k)
  digit,     // bit(j, e)
  residue,   // mod(e, k) = e mod 2^k
};

struct Node {
  NodeKind kind = NodeKind::literal;
  Op op = Op::add;
  UnaryOp unary = UnaryOp::neg;
  ShiftKind shift = ShiftKind::mul_pow2;
  std::uint64_t value = 0;  // literal value, shift/rotate count, digit index or residue bits
  std::vector<std::shared_ptr<const Node>> children;
  bool compatible = true;
};

using NodePtr = std::shared_ptr<const Node>;

// Immutable expression tree over x (and optionally the control symbol c).
class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  const NodePtr& ptr() const noexcept { return root_; }
  bool empty() const noexcept { return !root_; }

  // All operators compatible (so the expression is compatible in x).
  bool compatible() const { return root_->compatible; }
  bool uses_control() const;

  // Fully parenthesized; parses back to an equal tree.
  std::string to_string() const;

  std::uint64_t evaluate(std::uint64_t x, unsigned width, std::uint64_t c = 0) const;
  Word eval(Word x, std::uint64_t c = 0) const { return {evaluate(x.value(), x.width(), c), x.width()}; }

  static Expr variable();
  static Expr control();
  static Expr literal(std::uint64_t value);
  static Expr unary(UnaryOp op, Expr a);
  static Expr binary(Op op, Expr a, Expr b);
  static Expr shift(ShiftKind kind, Expr a, unsigned count);
  static Expr call_rev(Expr a);
  static Expr call_rotl(Expr a, unsigned count = 1);
  static Expr call_bit(unsigned j, Expr a);
  static Expr call_mod(Expr a, unsigned bits);

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
};

std::string to_string(const Node& node);
bool structurally_equal(const Node& a, const Node& b);

Expr parse(std::string_view text);

// Postfix program for fast repeated evaluation. Errors carry the offending subexpression.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& expr);

  std::uint64_t operator()(std::uint64_t x, unsigned width, std::uint64_t c = 0) const;
  const Expr& source() const noexcept { return source_; }

 private:
  struct Instr {
    enum class Code : std::uint8_t {
      load_x, load_c, load_lit, neg, bit_not, add, sub, mul, div, pow_var, pow_lit, bit_and, bit_or, bit_xor,
      shl, shr, rev, rotl, digit, residue,
    };
    Code code;
    std::uint64_t imm;
    const Node* node;
  };
  void emit(const Node& node);

  Expr source_;
  std::vector<Instr> program_;
  std::size_t max_stack_ = 0;
};

Mapping to_mapping(const Expr& expr, std::uint64_t control = 0);

struct Classification {
  enum class Verdict { compatible, non_compatible, unknown };
  Verdict verdict = Verdict::unknown;
  bool operator_level = false;  // every operator in the tree is compatible
  unsigned checked_width = 0;   // width of the empirical test; 0 when none was run
  std::optional<CompatibilityWitness> witness;
};

std::string_view verdict_name(Classification::Verdict v) noexcept;

inline constexpr unsigned kClassifyWidth = 10;
Classification classify(const Expr& expr, std::uint64_t control = 0);

// Left-nested composition driven by the bits of `control`: operand t is x when its selector
// bit is 0 and const_table[t] otherwise; the two bits between operands pick the operator
// from op_table (index = first bit + 2 * second bit). Needs 3 * stages - 2 control bits.
struct CompositionTables {
  std::vector<Op> ops{Op::add, Op::mul, Op::bit_xor, Op::bit_and};
  std::vector<std::uint64_t> constants{1};
};

Expr build_controlled_composition(Word control, unsigned stages, const CompositionTables& tables = {});

// Random expression over compatible operators (division only by odd literals), for property tests.
Expr random_compatible_expression(std::mt19937_64& rng, unsigned depth);

// Replace every occurrence of x with `replacement`.
Expr substitute(const Expr& expr, const Expr& replacement);

}  // namespace tfgen
