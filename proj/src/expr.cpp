#include "kgeom/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <unordered_map>
#include <utility>

namespace kgeom {

namespace {

Ex make(NodeKind kind, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  return Ex(std::move(n));
}

}  // namespace

Ex constant(cd value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kConstant;
  n->value = value;
  return Ex(std::move(n));
}

Ex constant(double value) { return constant(cd(value, 0.0)); }

Ex zvar(int pair_index) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kVariable;
  n->pair_index = pair_index;
  n->conjugate_slot = false;
  return Ex(std::move(n));
}

Ex wvar(int pair_index) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kVariable;
  n->pair_index = pair_index;
  n->conjugate_slot = true;
  return Ex(std::move(n));
}

Ex add(Ex a, Ex b) { return make(NodeKind::kAdd, {a.node(), b.node()}); }
Ex sub(Ex a, Ex b) { return make(NodeKind::kSub, {a.node(), b.node()}); }
Ex mul(Ex a, Ex b) { return make(NodeKind::kMul, {a.node(), b.node()}); }
Ex div(Ex a, Ex b) { return make(NodeKind::kDiv, {a.node(), b.node()}); }
Ex neg(Ex a) { return make(NodeKind::kNeg, {a.node()}); }
Ex exp(Ex a) { return make(NodeKind::kExp, {a.node()}); }
Ex log(Ex a) { return make(NodeKind::kLog, {a.node()}); }

Ex pow(Ex a, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kPow;
  n->exponent = exponent;
  n->args = {a.node()};
  return Ex(std::move(n));
}

Ex sum(std::span<const Ex> terms) {
  if (terms.empty()) return constant(0.0);
  Ex acc = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) acc = add(acc, terms[i]);
  return acc;
}

Ex substitute_variables(const Ex& e,
                        const std::function<std::optional<Ex>(const Node&)>& map) {
  std::unordered_map<const Node*, NodePtr> memo;
  std::function<NodePtr(const NodePtr&)> walk = [&](const NodePtr& n) -> NodePtr {
    auto it = memo.find(n.get());
    if (it != memo.end()) return it->second;
    NodePtr result;
    if (n->kind == NodeKind::kVariable) {
      if (auto replacement = map(*n)) {
        result = replacement->node();
      } else {
        result = n;
      }
    } else if (n->args.empty()) {
      result = n;
    } else {
      std::vector<NodePtr> args;
      args.reserve(n->args.size());
      bool changed = false;
      for (const auto& a : n->args) {
        args.push_back(walk(a));
        changed = changed || args.back() != a;
      }
      if (!changed) {
        result = n;
      } else {
        auto copy = std::make_shared<Node>(*n);
        copy->args = std::move(args);
        result = std::move(copy);
      }
    }
    memo.emplace(n.get(), result);
    return result;
  };
  return Ex(walk(e.node()));
}

Ex reindex_pairs(const Ex& e, int offset) {
  if (offset == 0) return e;
  return substitute_variables(e, [offset](const Node& n) -> std::optional<Ex> {
    return n.conjugate_slot ? wvar(n.pair_index + offset) : zvar(n.pair_index + offset);
  });
}

bool structurally_equal(const Ex& a, const Ex& b) {
  std::function<bool(const NodePtr&, const NodePtr&)> eq = [&](const NodePtr& x,
                                                               const NodePtr& y) {
    if (x.get() == y.get()) return true;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
      case NodeKind::kConstant:
        if (x->value != y->value) return false;
        break;
      case NodeKind::kVariable:
        if (x->pair_index != y->pair_index || x->conjugate_slot != y->conjugate_slot)
          return false;
        break;
      case NodeKind::kPow:
        if (x->exponent != y->exponent) return false;
        break;
      default:
        break;
    }
    if (x->args.size() != y->args.size()) return false;
    for (std::size_t i = 0; i < x->args.size(); ++i)
      if (!eq(x->args[i], y->args[i])) return false;
    return true;
  };
  return eq(a.node(), b.node());
}

int max_pair_index(const Ex& e) {
  int result = -1;
  std::function<void(const NodePtr&)> walk = [&](const NodePtr& n) {
    if (n->kind == NodeKind::kVariable && n->pair_index > result) result = n->pair_index;
    for (const auto& a : n->args) walk(a);
  };
  walk(e.node());
  return result;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Tokenizer {
  explicit Tokenizer(const std::string& text) : s(text) {}

  std::string next() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size()) return {};
    if (s[pos] == '(' || s[pos] == ')') return std::string(1, s[pos++]);
    std::size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
           s[pos] != '(' && s[pos] != ')')
      ++pos;
    return s.substr(start, pos - start);
  }

  const std::string& s;
  std::size_t pos = 0;
};

bool parse_variable(const std::string& tok, Ex& out) {
  if (tok.size() < 2 || (tok[0] != 'z' && tok[0] != 'w')) return false;
  for (std::size_t i = 1; i < tok.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
  const int index = std::atoi(tok.c_str() + 1);
  if (index < 1) return false;
  out = tok[0] == 'z' ? zvar(index - 1) : wvar(index - 1);
  return true;
}

bool parse_number(const std::string& tok, double& out) {
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end != nullptr && *end == '\0' && end != tok.c_str();
}

Ex parse_form(Tokenizer& tz);

Ex parse_atom(Tokenizer& tz, const std::string& tok) {
  if (tok.empty()) throw ParseError("unexpected end of expression");
  if (tok == "(") return parse_form(tz);
  if (tok == ")") throw ParseError("unexpected ')'");
  Ex var;
  if (parse_variable(tok, var)) return var;
  double value = 0.0;
  if (parse_number(tok, value)) return constant(value);
  throw ParseError("unrecognized token '" + tok + "'");
}

Ex parse_form(Tokenizer& tz) {
  const std::string op = tz.next();
  if (op.empty()) throw ParseError("unexpected end of expression after '('");
  std::vector<Ex> args;
  std::string tok;
  bool want_pow_exponent = (op == "pow");
  int pow_exponent = 0;
  bool have_pow_exponent = false;
  while (true) {
    tok = tz.next();
    if (tok.empty()) throw ParseError("missing ')'");
    if (tok == ")") break;
    if (want_pow_exponent && args.size() == 1) {
      double value = 0.0;
      if (!parse_number(tok, value) || value != static_cast<int>(value))
        throw ParseError("pow exponent must be a literal integer");
      pow_exponent = static_cast<int>(value);
      have_pow_exponent = true;
      continue;
    }
    args.push_back(parse_atom(tz, tok));
  }

  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw ParseError("operator '" + op + "' given " + std::to_string(args.size()) +
                       " arguments");
  };

  if (op == "add") {
    arity(2, SIZE_MAX);
    return sum(args);
  }
  if (op == "mul") {
    arity(2, SIZE_MAX);
    Ex acc = args[0];
    for (std::size_t i = 1; i < args.size(); ++i) acc = mul(acc, args[i]);
    return acc;
  }
  if (op == "sub") { arity(2, 2); return sub(args[0], args[1]); }
  if (op == "div") { arity(2, 2); return div(args[0], args[1]); }
  if (op == "neg") { arity(1, 1); return neg(args[0]); }
  if (op == "exp") { arity(1, 1); return exp(args[0]); }
  if (op == "log") { arity(1, 1); return log(args[0]); }
  if (op == "pow") {
    arity(1, 1);
    if (!have_pow_exponent) throw ParseError("pow requires a literal integer exponent");
    return pow(args[0], pow_exponent);
  }
  throw ParseError("unknown operator '" + op + "'");
}

}  // namespace

Ex parse_expr(const std::string& text) {
  Tokenizer tz(text);
  const std::string tok = tz.next();
  if (tok.empty()) throw ParseError("empty expression");
  Ex result = parse_atom(tz, tok);
  const std::string rest = tz.next();
  if (!rest.empty()) throw ParseError("trailing content '" + rest + "'");
  return result;
}

// ---------------------------------------------------------------------------
// Evaluation

PolarizedExpr::PolarizedExpr(int pairs, Ex root) : pairs_(pairs), root_(std::move(root)) {
  if (pairs < 0) throw BadParams("negative slot-pair count");
  if (!root_) throw BadParams("empty expression");
  if (max_pair_index(root_) >= pairs)
    throw BadParams("expression references a slot pair beyond the declared count");
}

Jet eval_jet(const PolarizedExpr& expr, std::span<const cd> point, int order) {
  if (order < 0 || order > kMaxJetOrder)
    throw OrderError("requested jet order " + std::to_string(order));
  const int n = expr.pairs();
  if (static_cast<int>(point.size()) != 2 * n)
    throw BadParams("evaluation point must have 2n entries");
  auto layout = JetLayout::get(2 * n, order);

  // Shared subtrees are evaluated once per call.
  std::unordered_map<const Node*, Jet> memo;
  std::function<const Jet&(const NodePtr&)> eval = [&](const NodePtr& node) -> const Jet& {
    auto it = memo.find(node.get());
    if (it != memo.end()) return it->second;
    Jet j;
    switch (node->kind) {
      case NodeKind::kConstant:
        j = Jet::constant(layout, node->value);
        break;
      case NodeKind::kVariable: {
        const int var = node->pair_index + (node->conjugate_slot ? n : 0);
        j = Jet::variable(layout, var, point[var]);
        break;
      }
      case NodeKind::kAdd:
        j = jet_add(eval(node->args[0]), eval(node->args[1]));
        break;
      case NodeKind::kSub:
        j = jet_sub(eval(node->args[0]), eval(node->args[1]));
        break;
      case NodeKind::kMul:
        j = jet_mul(eval(node->args[0]), eval(node->args[1]));
        break;
      case NodeKind::kDiv:
        j = jet_div(eval(node->args[0]), eval(node->args[1]));
        break;
      case NodeKind::kNeg:
        j = jet_neg(eval(node->args[0]));
        break;
      case NodeKind::kExp:
        j = jet_exp(eval(node->args[0]));
        break;
      case NodeKind::kLog:
        j = jet_log(eval(node->args[0]));
        break;
      case NodeKind::kPow:
        j = jet_ipow(eval(node->args[0]), node->exponent);
        break;
    }
    return memo.emplace(node.get(), std::move(j)).first->second;
  };
  return eval(expr.root().node());
}

cd eval_at_conjugate(const PolarizedExpr& expr, std::span<const cd> z) {
  const int n = expr.pairs();
  if (static_cast<int>(z.size()) != n)
    throw BadParams("point must have n entries");
  std::vector<cd> point(2 * n);
  for (int i = 0; i < n; ++i) {
    point[i] = z[i];
    point[n + i] = std::conj(z[i]);
  }
  return eval_jet(expr, point, 0).value();
}

RealPotentialReport check_real_potential(const PolarizedExpr& expr,
                                         std::span<const std::vector<cd>> samples) {
  RealPotentialReport report;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const cd value = eval_at_conjugate(expr, samples[i]);
    const double imag = std::abs(value.imag());
    if (imag > report.max_abs_imag) {
      report.max_abs_imag = imag;
      report.worst_sample = i;
    }
  }
  report.ok = report.max_abs_imag < 1e-12;
  return report;
}

}  // namespace kgeom
