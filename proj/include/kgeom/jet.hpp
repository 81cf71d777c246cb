#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "kgeom/errors.hpp"

namespace kgeom {

using cd = std::complex<double>;

inline constexpr int kMaxJetOrder = 4;

/// Index structure for truncated multivariate Taylor polynomials: all
/// monomials in `vars` variables of total degree <= `order`, graded by degree
/// and lexicographic within a degree. Also holds the CSR pair table that
/// drives the truncated product. Layouts are immutable and cached per
/// (vars, order).
class JetLayout {
 public:
  static std::shared_ptr<const JetLayout> get(int vars, int order);

  int vars() const { return vars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(degree_offset_[order_ + 1]); }

  int degree_begin(int d) const { return static_cast<int>(degree_offset_[d]); }
  int degree_end(int d) const { return static_cast<int>(degree_offset_[d + 1]); }

  /// Exponent vector of monomial `idx` (vars() entries).
  const std::uint8_t* exponents(int idx) const {
    return exps_.data() + static_cast<std::size_t>(idx) * vars_;
  }

  int degree(int idx) const { return degrees_[idx]; }

  /// Product of per-variable factorials; converts a Taylor coefficient into
  /// the raw derivative.
  double factorial(int idx) const { return factorial_[idx]; }

  /// Monomial index for an exponent vector, or -1 when the total degree
  /// exceeds the order.
  int index_of(const std::uint8_t* exps) const;

  /// Index of monomial `idx` with `count` added to variable `var`; -1 if the
  /// shift leaves the layout.
  int shifted_index(int idx, int var, int count = 1) const;

  const std::int64_t* mul_offsets() const { return mul_offsets_.data(); }
  const std::int32_t* mul_a() const { return mul_a_.data(); }
  const std::int32_t* mul_b() const { return mul_b_.data(); }

 private:
  JetLayout(int vars, int order);

  std::uint64_t pack(const std::uint8_t* exps) const;

  int vars_ = 0;
  int order_ = 0;
  std::array<std::int64_t, kMaxJetOrder + 2> degree_offset_{};
  std::vector<std::uint8_t> exps_;
  std::vector<std::uint8_t> degrees_;
  std::vector<double> factorial_;
  std::unordered_map<std::uint64_t, std::int32_t> index_;
  std::vector<std::int64_t> mul_offsets_;
  std::vector<std::int32_t> mul_a_;
  std::vector<std::int32_t> mul_b_;
};

/// Truncated Taylor polynomial of a function at a point. Coefficients are
/// stored in Taylor normalization (derivative / multi-factorial); raw mixed
/// derivatives come out of `derivative()`.
class Jet {
 public:
  Jet() = default;
  explicit Jet(std::shared_ptr<const JetLayout> layout)
      : layout_(std::move(layout)), c_(layout_->size(), cd(0.0, 0.0)) {}

  static Jet constant(std::shared_ptr<const JetLayout> layout, cd value) {
    Jet j(std::move(layout));
    j.c_[0] = value;
    return j;
  }

  static Jet variable(std::shared_ptr<const JetLayout> layout, int var, cd value);

  const JetLayout& layout() const { return *layout_; }
  std::shared_ptr<const JetLayout> layout_ptr() const { return layout_; }

  cd value() const { return c_[0]; }
  cd taylor(int idx) const { return c_[idx]; }
  cd& taylor(int idx) { return c_[idx]; }

  /// Raw derivative for the monomial index.
  cd derivative(int idx) const { return c_[idx] * layout_->factorial(idx); }

  /// Raw derivative for an exponent vector; throws OrderError when the
  /// requested order exceeds the truncation order.
  cd derivative(std::span<const std::uint8_t> exps) const;

  const cd* data() const { return c_.data(); }
  cd* data() { return c_.data(); }

 private:
  std::shared_ptr<const JetLayout> layout_;
  std::vector<cd> c_;
};

// In-place linear operations.
void jet_add_inplace(Jet& a, const Jet& b);
void jet_sub_inplace(Jet& a, const Jet& b);
void jet_scale_inplace(Jet& a, cd s);
void jet_axpy_inplace(Jet& y, cd s, const Jet& x);

Jet jet_add(const Jet& a, const Jet& b);
Jet jet_sub(const Jet& a, const Jet& b);
Jet jet_neg(const Jet& a);

/// Truncated product (the hot path; kernel-dispatched).
Jet jet_mul(const Jet& a, const Jet& b);

/// Composition with an analytic function of one variable given by the Taylor
/// coefficients of f at the value of `u`: series[r] = f^(r)(u0) / r!.
Jet jet_compose(const Jet& u, std::span<const cd> series);

Jet jet_exp(const Jet& u);

/// Principal branch; throws DomainError when the value of `u` lies on the
/// closed negative real axis (zero included).
Jet jet_log(const Jet& u);

/// 1/u; throws DomainError when the value of `u` is zero.
Jet jet_inv(const Jet& u);

Jet jet_div(const Jet& a, const Jet& b);

/// Integer power, negative exponents via 1/u.
Jet jet_ipow(const Jet& u, int p);

/// Lower-order jet of the raw derivative d^sigma F, as a polynomial in the
/// same variables. `sigma` is an exponent vector; the result lives in
/// `target` (which must have order <= layout.order() - |sigma|).
Jet jet_derivative_jet(const Jet& f, std::span<const std::uint8_t> sigma,
                       std::shared_ptr<const JetLayout> target);

}  // namespace kgeom
