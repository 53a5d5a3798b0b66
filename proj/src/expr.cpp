#include "tfgen/expr.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "tfgen/error.hpp"

namespace tfgen {

namespace {

NodePtr make(Node node) {
  bool ok = true;
  for (const auto& child : node.children) ok = ok && child->compatible;
  switch (node.kind) {
    case NodeKind::reverse:
    case NodeKind::rotate: ok = false; break;
    case NodeKind::shift: ok = ok && node.shift == ShiftKind::mul_pow2; break;
    case NodeKind::digit: ok = ok && node.value == 0; break;
    default: break;
  }
  node.compatible = ok;
  return std::make_shared<const Node>(std::move(node));
}

// Negative literal exponents appear as unary minus over a literal.
std::optional<std::int64_t> literal_exponent(const Node& e) {
  constexpr std::uint64_t kCut = std::uint64_t{1} << 62;
  // Beyond 2^62 only the residue mod 2^62 matters for odd bases, and any value >= 64 gives 0 for even ones.
  auto clamp = [&](std::uint64_t v) -> std::int64_t {
    return static_cast<std::int64_t>(v < kCut ? v : (v & (kCut - 1)) | kCut);
  };
  if (e.kind == NodeKind::literal) return clamp(e.value);
  if (e.kind == NodeKind::unary && e.unary == UnaryOp::neg && e.children[0]->kind == NodeKind::literal) {
    const auto v = e.children[0]->value;
    if (v >= kCut) return -static_cast<std::int64_t>(v & (kCut - 1));
    return -static_cast<std::int64_t>(v);
  }
  return std::nullopt;
}

std::uint64_t rotate_by(std::uint64_t v, std::uint64_t count, unsigned width) {
  for (std::uint64_t i = 0; i < count % width; ++i) v = raw::rotate_up1(v, width);
  return v;
}

std::uint64_t eval_node(const Node& node, std::uint64_t x, unsigned width, std::uint64_t c) {
  const std::uint64_t mask = width_mask(width);
  auto child = [&](std::size_t i) { return eval_node(*node.children[i], x, width, c); };
  try {
    switch (node.kind) {
      case NodeKind::variable: return x & mask;
      case NodeKind::control: return c & mask;
      case NodeKind::literal: return node.value & mask;
      case NodeKind::unary: {
        const auto a = child(0);
        return (node.unary == UnaryOp::neg ? 0 - a : ~a) & mask;
      }
      case NodeKind::binary: {
        const auto a = child(0);
        if (node.op == Op::pow) {
          if (auto e = literal_exponent(*node.children[1])) return raw::pow_literal(a, *e, width);
          return raw::pow_variable(a, child(1), width);
        }
        const auto b = child(1);
        return apply_primitive(node.op, Word(a, width), Word(b, width)).value();
      }
      case NodeKind::shift: {
        const auto a = child(0);
        if (node.value >= width) return 0;
        return (node.shift == ShiftKind::mul_pow2 ? a << node.value : a >> node.value) & mask;
      }
      case NodeKind::reverse: return raw::bit_reverse(child(0), width);
      case NodeKind::rotate: return rotate_by(child(0), node.value, width);
      case NodeKind::digit: return node.value >= width ? 0 : (child(0) >> node.value) & 1U;
      case NodeKind::residue: return child(0) & width_mask(static_cast<unsigned>(std::min<std::uint64_t>(node.value, 64)));
    }
  } catch (const EvalError&) {
    throw;
  } catch (const Error& e) {
    throw EvalError(e.what(), to_string(node));
  }
  throw Error("unknown expression node");
}

bool any_control(const Node& node) {
  if (node.kind == NodeKind::control) return true;
  return std::any_of(node.children.begin(), node.children.end(), [](const NodePtr& p) { return any_control(*p); });
}

// ---- parser ----

enum class Tok {
  end, number, ident, lparen, rparen, comma, plus, minus, star, slash, power, amp, pipe, caret, tilde, shl, shr,
};

struct Token {
  Tok kind = Tok::end;
  std::size_t pos = 0;
  std::uint64_t number = 0;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    Token t;
    t.pos = i_;
    if (i_ >= s_.size()) return t;
    const char ch = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(ch))) return number(t);
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t start = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      t.kind = Tok::ident;
      t.text = std::string(s_.substr(start, i_ - start));
      if (t.text == "xor") t.kind = Tok::caret;
      if (t.text == "and") t.kind = Tok::amp;
      if (t.text == "or") t.kind = Tok::pipe;
      if (t.text == "not") t.kind = Tok::tilde;
      return t;
    }
    static constexpr struct {
      std::string_view text;
      Tok kind;
    } kSymbols[] = {
        {"**", Tok::power}, {"<<", Tok::shl},   {">>", Tok::shr},   {"\xE2\x8A\x95", Tok::caret},
        {"\xE2\x88\xA7", Tok::amp},  {"\xE2\x88\xA8", Tok::pipe}, {"\xE2\x88\x92", Tok::minus},
        {"\xC2\xAC", Tok::tilde},   {"\xC2\xB7", Tok::star},    {"\xC3\x97", Tok::star},
        {"(", Tok::lparen},  {")", Tok::rparen}, {",", Tok::comma}, {"+", Tok::plus},
        {"-", Tok::minus},   {"*", Tok::star},   {"/", Tok::slash}, {"&", Tok::amp},
        {"|", Tok::pipe},    {"^", Tok::caret},  {"~", Tok::tilde},
    };
    for (const auto& sym : kSymbols) {
      if (s_.substr(i_, sym.text.size()) == sym.text) {
        i_ += sym.text.size();
        t.kind = sym.kind;
        return t;
      }
    }
    throw ParseError("unexpected character '" + std::string(1, ch) + "'", i_);
  }

 private:
  Token number(Token t) {
    t.kind = Tok::number;
    unsigned base = 10;
    if (s_[i_] == '0' && i_ + 1 < s_.size() && (s_[i_ + 1] == 'x' || s_[i_ + 1] == 'X')) {
      base = 16;
      i_ += 2;
      if (i_ >= s_.size() || !std::isxdigit(static_cast<unsigned char>(s_[i_]))) throw ParseError("malformed hex literal", t.pos);
    }
    std::uint64_t v = 0;
    while (i_ < s_.size()) {
      const auto ch = static_cast<unsigned char>(s_[i_]);
      unsigned d;
      if (std::isdigit(ch)) d = ch - '0';
      else if (base == 16 && std::isxdigit(ch)) d = static_cast<unsigned>(std::tolower(ch) - 'a' + 10);
      else break;
      if (v > (std::numeric_limits<std::uint64_t>::max() - d) / base) throw ParseError("literal does not fit in 64 bits", t.pos);
      v = v * base + d;
      ++i_;
    }
    t.number = v;
    return t;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { advance(); }

  Expr parse_all() {
    auto e = parse_or();
    if (cur_.kind != Tok::end) throw ParseError("unexpected token", cur_.pos);
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) throw ParseError(std::string("expected ") + what, cur_.pos);
    advance();
  }

  std::uint64_t expect_literal(const char* what) {
    if (cur_.kind != Tok::number) throw ParseError(what, cur_.pos);
    const auto v = cur_.number;
    advance();
    return v;
  }

  Expr parse_or() {
    auto e = parse_xor();
    while (cur_.kind == Tok::pipe) {
      advance();
      e = Expr::binary(Op::bit_or, e, parse_xor());
    }
    return e;
  }

  Expr parse_xor() {
    auto e = parse_and();
    while (cur_.kind == Tok::caret) {
      advance();
      e = Expr::binary(Op::bit_xor, e, parse_and());
    }
    return e;
  }

  Expr parse_and() {
    auto e = parse_shift();
    while (cur_.kind == Tok::amp) {
      advance();
      e = Expr::binary(Op::bit_and, e, parse_shift());
    }
    return e;
  }

  Expr parse_shift() {
    auto e = parse_additive();
    while (cur_.kind == Tok::shl || cur_.kind == Tok::shr) {
      const auto kind = cur_.kind == Tok::shl ? ShiftKind::mul_pow2 : ShiftKind::floor_div_pow2;
      advance();
      const auto count = expect_literal("shift count must be a literal");
      if (count > 64) throw ParseError("shift count larger than 64", cur_.pos);
      e = Expr::shift(kind, e, static_cast<unsigned>(count));
    }
    return e;
  }

  Expr parse_additive() {
    auto e = parse_multiplicative();
    while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
      const auto op = cur_.kind == Tok::plus ? Op::add : Op::sub;
      advance();
      e = Expr::binary(op, e, parse_multiplicative());
    }
    return e;
  }

  Expr parse_multiplicative() {
    auto e = parse_power();
    while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
      const auto op = cur_.kind == Tok::star ? Op::mul : Op::div;
      advance();
      e = Expr::binary(op, e, parse_power());
    }
    return e;
  }

  Expr parse_power() {
    auto base = parse_unary();
    if (cur_.kind != Tok::power) return base;
    advance();
    return Expr::binary(Op::pow, base, parse_power());
  }

  Expr parse_unary() {
    if (cur_.kind == Tok::minus) {
      advance();
      return Expr::unary(UnaryOp::neg, parse_unary());
    }
    if (cur_.kind == Tok::tilde) {
      advance();
      return Expr::unary(UnaryOp::bit_not, parse_unary());
    }
    return parse_primary();
  }

  Expr parse_primary() {
    if (cur_.kind == Tok::number) {
      const auto v = cur_.number;
      advance();
      return Expr::literal(v);
    }
    if (cur_.kind == Tok::lparen) {
      advance();
      auto e = parse_or();
      expect(Tok::rparen, "')'");
      return e;
    }
    if (cur_.kind == Tok::ident) {
      const auto name = cur_.text;
      const auto pos = cur_.pos;
      advance();
      if (name == "x") return Expr::variable();
      if (name == "c") return Expr::control();
      if (name == "rev" || name == "rotl" || name == "bit" || name == "mod") return parse_call(name);
      throw ParseError("unknown identifier '" + name + "'", pos);
    }
    if (cur_.kind == Tok::end) throw ParseError("unexpected end of expression", cur_.pos);
    throw ParseError("unexpected token", cur_.pos);
  }

  Expr parse_call(const std::string& name) {
    expect(Tok::lparen, "'(' after function name");
    Expr out;
    if (name == "rev") {
      out = Expr::call_rev(parse_or());
    } else if (name == "rotl") {
      auto arg = parse_or();
      std::uint64_t count = 1;
      if (cur_.kind == Tok::comma) {
        advance();
        count = expect_literal("rotation count must be a literal");
        if (count > 64) throw ParseError("rotation count larger than 64", cur_.pos);
      }
      out = Expr::call_rotl(arg, static_cast<unsigned>(count));
    } else if (name == "bit") {
      const auto j = expect_literal("bit index must be a literal");
      if (j >= 64) throw ParseError("bit index must be below 64", cur_.pos);
      expect(Tok::comma, "','");
      out = Expr::call_bit(static_cast<unsigned>(j), parse_or());
    } else {
      auto arg = parse_or();
      expect(Tok::comma, "','");
      const auto k = expect_literal("residue width must be a literal");
      if (k > 64) throw ParseError("residue width larger than 64", cur_.pos);
      out = Expr::call_mod(arg, static_cast<unsigned>(k));
    }
    expect(Tok::rparen, "')'");
    return out;
  }

  Lexer lex_;
  Token cur_;
};

}  // namespace

std::string to_string(const Node& node) {
  auto child = [&](std::size_t i) { return to_string(*node.children[i]); };
  switch (node.kind) {
    case NodeKind::variable: return "x";
    case NodeKind::control: return "c";
    case NodeKind::literal: return std::to_string(node.value);
    case NodeKind::unary: return std::string("(") + (node.unary == UnaryOp::neg ? "-" : "~") + child(0) + ")";
    case NodeKind::binary: return "(" + child(0) + " " + std::string(op_name(node.op)) + " " + child(1) + ")";
    case NodeKind::shift:
      return "(" + child(0) + (node.shift == ShiftKind::mul_pow2 ? " << " : " >> ") + std::to_string(node.value) + ")";
    case NodeKind::reverse: return "rev(" + child(0) + ")";
    case NodeKind::rotate:
      return node.value == 1 ? "rotl(" + child(0) + ")" : "rotl(" + child(0) + ", " + std::to_string(node.value) + ")";
    case NodeKind::digit: return "bit(" + std::to_string(node.value) + ", " + child(0) + ")";
    case NodeKind::residue: return "mod(" + child(0) + ", " + std::to_string(node.value) + ")";
  }
  return "?";
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::unary:
      if (a.unary != b.unary) return false;
      break;
    case NodeKind::binary:
      if (a.op != b.op) return false;
      break;
    case NodeKind::shift:
      if (a.shift != b.shift || a.value != b.value) return false;
      break;
    case NodeKind::literal:
    case NodeKind::rotate:
    case NodeKind::digit:
    case NodeKind::residue:
      if (a.value != b.value) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return structurally_equal(a.root(), b.root());
}

bool Expr::uses_control() const { return any_control(*root_); }

std::string Expr::to_string() const { return tfgen::to_string(*root_); }

std::uint64_t Expr::evaluate(std::uint64_t x, unsigned width, std::uint64_t c) const {
  if (width == 0 || width > kMaxWidth) throw Error("evaluation width must be in [1, 64]");
  return eval_node(*root_, x, width, c);
}

Expr Expr::variable() {
  Node n;
  n.kind = NodeKind::variable;
  return Expr(make(std::move(n)));
}

Expr Expr::control() {
  Node n;
  n.kind = NodeKind::control;
  return Expr(make(std::move(n)));
}

Expr Expr::literal(std::uint64_t value) {
  Node n;
  n.kind = NodeKind::literal;
  n.value = value;
  return Expr(make(std::move(n)));
}

Expr Expr::unary(UnaryOp op, Expr a) {
  Node n;
  n.kind = NodeKind::unary;
  n.unary = op;
  n.children = {a.ptr()};
  return Expr(make(std::move(n)));
}

Expr Expr::binary(Op op, Expr a, Expr b) {
  Node n;
  n.kind = NodeKind::binary;
  n.op = op;
  n.children = {a.ptr(), b.ptr()};
  return Expr(make(std::move(n)));
}

Expr Expr::shift(ShiftKind kind, Expr a, unsigned count) {
  if (kind == ShiftKind::rotate_up1) return call_rotl(std::move(a), count);
  Node n;
  n.kind = NodeKind::shift;
  n.shift = kind;
  n.value = count;
  n.children = {a.ptr()};
  return Expr(make(std::move(n)));
}

Expr Expr::call_rev(Expr a) {
  Node n;
  n.kind = NodeKind::reverse;
  n.children = {a.ptr()};
  return Expr(make(std::move(n)));
}

Expr Expr::call_rotl(Expr a, unsigned count) {
  Node n;
  n.kind = NodeKind::rotate;
  n.value = count;
  n.children = {a.ptr()};
  return Expr(make(std::move(n)));
}

Expr Expr::call_bit(unsigned j, Expr a) {
  Node n;
  n.kind = NodeKind::digit;
  n.value = j;
  n.children = {a.ptr()};
  return Expr(make(std::move(n)));
}

Expr Expr::call_mod(Expr a, unsigned bits) {
  Node n;
  n.kind = NodeKind::residue;
  n.value = bits;
  n.children = {a.ptr()};
  return Expr(make(std::move(n)));
}

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

// ---- compiled form ----

CompiledExpr::CompiledExpr(const Expr& expr) : source_(expr) {
  if (expr.empty()) throw Error("cannot compile an empty expression");
  emit(expr.root());
  std::size_t depth = 0;
  for (const auto& ins : program_) {
    switch (ins.code) {
      case Instr::Code::load_x:
      case Instr::Code::load_c:
      case Instr::Code::load_lit: ++depth; break;
      case Instr::Code::add:
      case Instr::Code::sub:
      case Instr::Code::mul:
      case Instr::Code::div:
      case Instr::Code::pow_var:
      case Instr::Code::bit_and:
      case Instr::Code::bit_or:
      case Instr::Code::bit_xor: --depth; break;
      default: break;
    }
    max_stack_ = std::max(max_stack_, depth);
  }
}

void CompiledExpr::emit(const Node& node) {
  using C = Instr::Code;
  switch (node.kind) {
    case NodeKind::variable: program_.push_back({C::load_x, 0, &node}); return;
    case NodeKind::control: program_.push_back({C::load_c, 0, &node}); return;
    case NodeKind::literal: program_.push_back({C::load_lit, node.value, &node}); return;
    case NodeKind::unary:
      emit(*node.children[0]);
      program_.push_back({node.unary == UnaryOp::neg ? C::neg : C::bit_not, 0, &node});
      return;
    case NodeKind::binary: {
      emit(*node.children[0]);
      if (node.op == Op::pow) {
        if (auto e = literal_exponent(*node.children[1])) {
          program_.push_back({C::pow_lit, static_cast<std::uint64_t>(*e), &node});
          return;
        }
      }
      emit(*node.children[1]);
      C code = C::add;
      switch (node.op) {
        case Op::add: code = C::add; break;
        case Op::sub: code = C::sub; break;
        case Op::mul: code = C::mul; break;
        case Op::div: code = C::div; break;
        case Op::pow: code = C::pow_var; break;
        case Op::bit_and: code = C::bit_and; break;
        case Op::bit_or: code = C::bit_or; break;
        case Op::bit_xor: code = C::bit_xor; break;
      }
      program_.push_back({code, 0, &node});
      return;
    }
    case NodeKind::shift:
      emit(*node.children[0]);
      program_.push_back({node.shift == ShiftKind::mul_pow2 ? C::shl : C::shr, node.value, &node});
      return;
    case NodeKind::reverse:
      emit(*node.children[0]);
      program_.push_back({C::rev, 0, &node});
      return;
    case NodeKind::rotate:
      emit(*node.children[0]);
      program_.push_back({C::rotl, node.value, &node});
      return;
    case NodeKind::digit:
      emit(*node.children[0]);
      program_.push_back({C::digit, node.value, &node});
      return;
    case NodeKind::residue:
      emit(*node.children[0]);
      program_.push_back({C::residue, node.value, &node});
      return;
  }
}

std::uint64_t CompiledExpr::operator()(std::uint64_t x, unsigned width, std::uint64_t c) const {
  using C = Instr::Code;
  if (width == 0 || width > kMaxWidth) throw Error("evaluation width must be in [1, 64]");
  const std::uint64_t mask = width_mask(width);
  constexpr std::size_t kInline = 64;
  std::uint64_t inline_stack[kInline];
  inline_stack[0] = 0;
  std::vector<std::uint64_t> heap;
  std::uint64_t* st = inline_stack;
  if (max_stack_ > kInline) {
    heap.resize(max_stack_);
    st = heap.data();
  }
  std::size_t sp = 0;
  for (const auto& ins : program_) {
    switch (ins.code) {
      case C::load_x: st[sp++] = x & mask; break;
      case C::load_c: st[sp++] = c & mask; break;
      case C::load_lit: st[sp++] = ins.imm & mask; break;
      case C::neg: st[sp - 1] = (0 - st[sp - 1]) & mask; break;
      case C::bit_not: st[sp - 1] = ~st[sp - 1] & mask; break;
      case C::add: --sp; st[sp - 1] = (st[sp - 1] + st[sp]) & mask; break;
      case C::sub: --sp; st[sp - 1] = (st[sp - 1] - st[sp]) & mask; break;
      case C::mul: --sp; st[sp - 1] = (st[sp - 1] * st[sp]) & mask; break;
      case C::bit_and: --sp; st[sp - 1] &= st[sp]; break;
      case C::bit_or: --sp; st[sp - 1] |= st[sp]; break;
      case C::bit_xor: --sp; st[sp - 1] ^= st[sp]; break;
      case C::div:
        --sp;
        if ((st[sp] & 1U) == 0) throw EvalError("non-invertible divisor", to_string(*ins.node));
        st[sp - 1] = (st[sp - 1] * raw::inv_odd(st[sp], width)) & mask;
        break;
      case C::pow_var:
        --sp;
        if ((st[sp - 1] & 1U) == 0) throw EvalError("variable exponent requires an odd base", to_string(*ins.node));
        st[sp - 1] = raw::pow_variable(st[sp - 1], st[sp], width);
        break;
      case C::pow_lit:
        try {
          st[sp - 1] = raw::pow_literal(st[sp - 1], static_cast<std::int64_t>(ins.imm), width);
        } catch (const Error& e) {
          throw EvalError(e.what(), to_string(*ins.node));
        }
        break;
      case C::shl: st[sp - 1] = ins.imm >= width ? 0 : (st[sp - 1] << ins.imm) & mask; break;
      case C::shr: st[sp - 1] = ins.imm >= width ? 0 : st[sp - 1] >> ins.imm; break;
      case C::rev: st[sp - 1] = raw::bit_reverse(st[sp - 1], width); break;
      case C::rotl: st[sp - 1] = rotate_by(st[sp - 1], ins.imm, width); break;
      case C::digit: st[sp - 1] = ins.imm >= width ? 0 : (st[sp - 1] >> ins.imm) & 1U; break;
      case C::residue: st[sp - 1] &= width_mask(static_cast<unsigned>(std::min<std::uint64_t>(ins.imm, 64))); break;
    }
  }
  return st[0];
}

Mapping to_mapping(const Expr& expr, std::uint64_t control) {
  auto compiled = std::make_shared<const CompiledExpr>(expr);
  return Mapping([compiled, control](std::uint64_t x, unsigned w) { return (*compiled)(x, w, control); },
                 expr.to_string());
}

std::string_view verdict_name(Classification::Verdict v) noexcept {
  switch (v) {
    case Classification::Verdict::compatible: return "compatible";
    case Classification::Verdict::non_compatible: return "non-compatible";
    case Classification::Verdict::unknown: return "unknown";
  }
  return "unknown";
}

Classification classify(const Expr& expr, std::uint64_t control) {
  Classification out;
  out.operator_level = expr.compatible();
  if (out.operator_level) {
    out.verdict = Classification::Verdict::compatible;
    return out;
  }
  out.checked_width = kClassifyWidth;
  try {
    auto result = is_compatible(to_mapping(expr, control), kClassifyWidth);
    if (!result.compatible) {
      out.verdict = Classification::Verdict::non_compatible;
      out.witness = result.witness;
    }
  } catch (const Error&) {
    // evaluation undefined somewhere on Z/2^10; no verdict
  }
  return out;
}

Expr build_controlled_composition(Word control, unsigned stages, const CompositionTables& tables) {
  if (stages == 0) throw Error("controlled composition needs at least one stage");
  if (tables.ops.size() != 4) throw Error("operator table must have 4 entries");
  if (tables.constants.empty()) throw Error("constant table is empty");
  const unsigned needed = 3 * stages - 2;
  if (needed > control.width()) {
    throw Error("exhausted control bits: " + std::to_string(stages) + " stages need " + std::to_string(needed) +
                " bits, control word has " + std::to_string(control.width()));
  }
  auto operand = [&](unsigned t, unsigned selector) {
    return selector ? Expr::literal(tables.constants[t % tables.constants.size()]) : Expr::variable();
  };
  Expr acc = operand(0, control.bit(0));
  for (unsigned t = 1; t < stages; ++t) {
    const unsigned base = 3 * t - 2;
    const unsigned index = control.bit(base) + 2 * control.bit(base + 1);
    acc = Expr::binary(tables.ops[index], acc, operand(t, control.bit(base + 2)));
  }
  return acc;
}

Expr random_compatible_expression(std::mt19937_64& rng, unsigned depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<std::uint64_t> small(0, 255);
  if (depth == 0 || pick(rng) < 2) {
    return pick(rng) < 6 ? Expr::variable() : Expr::literal(small(rng));
  }
  const auto a = random_compatible_expression(rng, depth - 1);
  switch (pick(rng)) {
    case 0: return Expr::unary(UnaryOp::neg, a);
    case 1: return Expr::unary(UnaryOp::bit_not, a);
    case 2: return Expr::shift(ShiftKind::mul_pow2, a, static_cast<unsigned>(small(rng) % 4));
    case 3: return Expr::binary(Op::pow, a, Expr::literal(small(rng) % 5));
    case 4: return Expr::binary(Op::div, a, Expr::literal(small(rng) | 1U));
    default: break;
  }
  static constexpr Op kOps[] = {Op::add, Op::sub, Op::mul, Op::bit_and, Op::bit_or, Op::bit_xor};
  std::uniform_int_distribution<std::size_t> op(0, std::size(kOps) - 1);
  return Expr::binary(kOps[op(rng)], a, random_compatible_expression(rng, depth - 1));
}

Expr substitute(const Expr& expr, const Expr& replacement) {
  const Node& n = expr.root();
  if (n.kind == NodeKind::variable) return replacement;
  if (n.children.empty()) return expr;
  Node copy = n;
  for (auto& child : copy.children) child = substitute(Expr(child), replacement).ptr();
  return Expr(make(std::move(copy)));
}

}  // namespace tfgen
