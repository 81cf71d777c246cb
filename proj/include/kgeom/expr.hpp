#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgeom/jet.hpp"

namespace kgeom {

// A polarized potential is a function F(z_1..z_n, w_1..w_n) of independent
// complex arguments; the geometric potential is F(z, conj z). Expressions are
// immutable DAGs over {constant, variable, +, -, *, /, neg, exp, log,
// pow(int)} and evaluate with full mixed derivatives through truncated
// Taylor arithmetic.

enum class NodeKind {
  kConstant,
  kVariable,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kExp,
  kLog,
  kPow,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  cd value{0.0, 0.0};    // kConstant
  int pair_index = -1;   // kVariable: which slot pair
  bool conjugate_slot = false;  // kVariable: z side (false) or w side (true)
  int exponent = 0;      // kPow
  std::vector<NodePtr> args;
};

/// Lightweight expression handle used while building DAGs.
class Ex {
 public:
  Ex() = default;
  explicit Ex(NodePtr node) : node_(std::move(node)) {}
  const NodePtr& node() const { return node_; }
  explicit operator bool() const { return node_ != nullptr; }

 private:
  NodePtr node_;
};

Ex constant(cd value);
Ex constant(double value);
/// Holomorphic slot z_{i+1} (0-based index).
Ex zvar(int pair_index);
/// Conjugate slot w_{i+1} (0-based index).
Ex wvar(int pair_index);
Ex add(Ex a, Ex b);
Ex sub(Ex a, Ex b);
Ex mul(Ex a, Ex b);
Ex div(Ex a, Ex b);
Ex neg(Ex a);
Ex exp(Ex a);
Ex log(Ex a);
Ex pow(Ex a, int exponent);
/// Left-fold sum; an empty list is the constant 0, a single term is returned
/// as-is.
Ex sum(std::span<const Ex> terms);

/// Shifts every variable's pair index by `offset`.
Ex reindex_pairs(const Ex& e, int offset);

/// Replaces variables through `map`; returns the original node when the map
/// declines. Shared subtrees stay shared.
Ex substitute_variables(const Ex& e,
                        const std::function<std::optional<Ex>(const Node&)>& map);

bool structurally_equal(const Ex& a, const Ex& b);

/// Parses the prefix text format, e.g. "(neg (log (sub 1 (mul z1 w1))))".
/// Operators: add sub mul div neg exp log pow; add and mul accept two or more
/// arguments; (pow e k) takes a literal integer k; variables are z1..zN and
/// w1..wN; numeric literals are real.
Ex parse_expr(const std::string& text);

class PolarizedExpr {
 public:
  PolarizedExpr() = default;
  /// `pairs` is the number n of (z_i, w_i) slot pairs. Throws BadParams when
  /// the expression uses a pair index >= pairs.
  PolarizedExpr(int pairs, Ex root);

  int pairs() const { return pairs_; }
  const Ex& root() const { return root_; }

 private:
  int pairs_ = 0;
  Ex root_;
};

/// Evaluates the expression and all mixed derivatives up to `order` at a
/// point of length 2n (z values then w values). Derivative extraction from
/// the result is raw (not divided by factorials). Throws OrderError for
/// order > 4 and DomainError on log/division singularities.
Jet eval_jet(const PolarizedExpr& expr, std::span<const cd> point, int order);

/// Value F(z, conj z) at a holomorphic point of length n.
cd eval_at_conjugate(const PolarizedExpr& expr, std::span<const cd> z);

struct RealPotentialReport {
  bool ok = true;
  double max_abs_imag = 0.0;
  std::size_t worst_sample = 0;
};

/// True when |Im F(p, conj p)| < 1e-12 at every sample.
RealPotentialReport check_real_potential(const PolarizedExpr& expr,
                                         std::span<const std::vector<cd>> samples);

int max_pair_index(const Ex& e);

}  // namespace kgeom
