#include "kgeom/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "kgeom/kernels.hpp"

namespace kgeom {

namespace {

void enumerate_degree(int vars, std::vector<std::uint8_t>& scratch, int var,
                      int remaining, std::vector<std::uint8_t>& out) {
  if (var == vars - 1) {
    scratch[var] = static_cast<std::uint8_t>(remaining);
    out.insert(out.end(), scratch.begin(), scratch.end());
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    scratch[var] = static_cast<std::uint8_t>(e);
    enumerate_degree(vars, scratch, var + 1, remaining - e, out);
  }
}

std::mutex g_layout_mutex;
std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> g_layouts;

}  // namespace

JetLayout::JetLayout(int vars, int order) : vars_(vars), order_(order) {
  if (order < 0 || order > kMaxJetOrder)
    throw OrderError("jet order must be in [0, " + std::to_string(kMaxJetOrder) + "]");
  if (vars < 0) throw BadParams("negative variable count");

  degree_offset_[0] = 0;
  for (int d = 0; d <= order; ++d) {
    if (vars == 0) {
      if (d == 0) {
        exps_.resize(0);
        degrees_.push_back(0);
        factorial_.push_back(1.0);
      }
      degree_offset_[d + 1] = 1;
      continue;
    }
    std::vector<std::uint8_t> scratch(vars, 0);
    std::vector<std::uint8_t> block;
    enumerate_degree(vars, scratch, 0, d, block);
    const std::size_t count = block.size() / vars;
    exps_.insert(exps_.end(), block.begin(), block.end());
    for (std::size_t i = 0; i < count; ++i) degrees_.push_back(static_cast<std::uint8_t>(d));
    degree_offset_[d + 1] = degree_offset_[d] + static_cast<std::int64_t>(count);
  }
  for (int d = order + 1; d <= kMaxJetOrder; ++d)
    degree_offset_[d + 1] = degree_offset_[order + 1];

  const int n = size();
  factorial_.reserve(n);
  if (vars > 0) {
    for (int i = 0; i < n; ++i) {
      double f = 1.0;
      const std::uint8_t* e = exponents(i);
      for (int v = 0; v < vars; ++v)
        for (int r = 2; r <= e[v]; ++r) f *= r;
      factorial_.push_back(f);
    }
  }

  index_.reserve(static_cast<std::size_t>(n) * 2);
  for (int i = 0; i < n; ++i) index_.emplace(pack(exponents(i)), i);

  // CSR pair table for the truncated product, grouped by target monomial.
  std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> buckets(n);
  std::vector<std::uint8_t> sum(vars);
  for (int ia = 0; ia < n; ++ia) {
    const int da = degree(ia);
    for (int ib = 0; ib < n && da + degree(ib) <= order; ++ib) {
      const std::uint8_t* ea = exponents(ia);
      const std::uint8_t* eb = exponents(ib);
      for (int v = 0; v < vars; ++v) sum[v] = static_cast<std::uint8_t>(ea[v] + eb[v]);
      const int t = vars == 0 ? 0 : index_.at(pack(sum.data()));
      buckets[t].emplace_back(ia, ib);
    }
  }
  mul_offsets_.resize(n + 1);
  mul_offsets_[0] = 0;
  for (int t = 0; t < n; ++t)
    mul_offsets_[t + 1] = mul_offsets_[t] + static_cast<std::int64_t>(buckets[t].size());
  mul_a_.reserve(mul_offsets_[n]);
  mul_b_.reserve(mul_offsets_[n]);
  for (int t = 0; t < n; ++t) {
    for (const auto& [ia, ib] : buckets[t]) {
      mul_a_.push_back(ia);
      mul_b_.push_back(ib);
    }
  }
}

std::uint64_t JetLayout::pack(const std::uint8_t* exps) const {
  std::uint64_t key = 0;
  for (int v = 0; v < vars_; ++v) key = key * 5 + exps[v];
  return key;
}

int JetLayout::index_of(const std::uint8_t* exps) const {
  if (vars_ == 0) return 0;
  int total = 0;
  for (int v = 0; v < vars_; ++v) total += exps[v];
  if (total > order_) return -1;
  const auto it = index_.find(pack(exps));
  return it == index_.end() ? -1 : it->second;
}

int JetLayout::shifted_index(int idx, int var, int count) const {
  std::vector<std::uint8_t> e(exponents(idx), exponents(idx) + vars_);
  e[var] = static_cast<std::uint8_t>(e[var] + count);
  return index_of(e.data());
}

std::shared_ptr<const JetLayout> JetLayout::get(int vars, int order) {
  std::lock_guard<std::mutex> lock(g_layout_mutex);
  auto& slot = g_layouts[{vars, order}];
  if (!slot) slot = std::shared_ptr<const JetLayout>(new JetLayout(vars, order));
  return slot;
}

Jet Jet::variable(std::shared_ptr<const JetLayout> layout, int var, cd value) {
  Jet j(std::move(layout));
  j.c_[0] = value;
  if (j.layout().order() >= 1) {
    // Degree-1 monomials are enumerated in variable order.
    j.c_[j.layout().degree_begin(1) + var] = cd(1.0, 0.0);
  }
  return j;
}

cd Jet::derivative(std::span<const std::uint8_t> exps) const {
  int total = 0;
  for (auto e : exps) total += e;
  if (total > layout_->order())
    throw OrderError("derivative order exceeds jet truncation order");
  const int idx = layout_->index_of(exps.data());
  return c_[idx] * layout_->factorial(idx);
}

void jet_add_inplace(Jet& a, const Jet& b) {
  kernels::axpy(cd(1.0, 0.0), b.data(), a.data(), a.layout().size());
}

void jet_sub_inplace(Jet& a, const Jet& b) {
  kernels::axpy(cd(-1.0, 0.0), b.data(), a.data(), a.layout().size());
}

void jet_scale_inplace(Jet& a, cd s) {
  kernels::scale(s, a.data(), a.layout().size());
}

void jet_axpy_inplace(Jet& y, cd s, const Jet& x) {
  kernels::axpy(s, x.data(), y.data(), y.layout().size());
}

Jet jet_add(const Jet& a, const Jet& b) {
  Jet r = a;
  jet_add_inplace(r, b);
  return r;
}

Jet jet_sub(const Jet& a, const Jet& b) {
  Jet r = a;
  jet_sub_inplace(r, b);
  return r;
}

Jet jet_neg(const Jet& a) {
  Jet r = a;
  jet_scale_inplace(r, cd(-1.0, 0.0));
  return r;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  Jet r(a.layout_ptr());
  const JetLayout& L = a.layout();
  kernels::conv_mul(L.mul_offsets(), L.mul_a(), L.mul_b(), L.size(), a.data(),
                    b.data(), r.data());
  return r;
}

Jet jet_compose(const Jet& u, std::span<const cd> series) {
  // Horner on delta = u - u(0); exact for the truncation order.
  Jet delta = u;
  delta.taylor(0) = cd(0.0, 0.0);
  const int order = u.layout().order();
  Jet result = Jet::constant(u.layout_ptr(), series[order]);
  for (int r = order - 1; r >= 0; --r) {
    result = jet_mul(result, delta);
    result.taylor(0) += series[r];
  }
  return result;
}

Jet jet_exp(const Jet& u) {
  const cd u0 = u.value();
  const cd e = std::exp(u0);
  std::array<cd, kMaxJetOrder + 1> series;
  double rfact = 1.0;
  for (int r = 0; r <= u.layout().order(); ++r) {
    if (r > 0) rfact *= r;
    series[r] = e / rfact;
  }
  return jet_compose(u, std::span<const cd>(series.data(), u.layout().order() + 1));
}

Jet jet_log(const Jet& u) {
  const cd u0 = u.value();
  if (u0.imag() == 0.0 && u0.real() <= 0.0)
    throw DomainError("log argument on the closed negative real axis");
  std::array<cd, kMaxJetOrder + 1> series;
  series[0] = std::log(u0);
  cd upow = u0;
  for (int r = 1; r <= u.layout().order(); ++r) {
    const double sign = (r % 2 == 1) ? 1.0 : -1.0;
    series[r] = sign / (static_cast<double>(r) * upow);
    upow *= u0;
  }
  return jet_compose(u, std::span<const cd>(series.data(), u.layout().order() + 1));
}

Jet jet_inv(const Jet& u) {
  const cd u0 = u.value();
  if (u0 == cd(0.0, 0.0)) throw DomainError("division by zero");
  std::array<cd, kMaxJetOrder + 1> series;
  cd upow = u0;
  double sign = 1.0;
  for (int r = 0; r <= u.layout().order(); ++r) {
    series[r] = sign / upow;
    upow *= u0;
    sign = -sign;
  }
  return jet_compose(u, std::span<const cd>(series.data(), u.layout().order() + 1));
}

Jet jet_div(const Jet& a, const Jet& b) { return jet_mul(a, jet_inv(b)); }

Jet jet_ipow(const Jet& u, int p) {
  if (p < 0) return jet_inv(jet_ipow(u, -p));
  if (p == 0) return Jet::constant(u.layout_ptr(), cd(1.0, 0.0));
  Jet base = u;
  Jet result = Jet::constant(u.layout_ptr(), cd(1.0, 0.0));
  int e = p;
  while (e > 0) {
    if (e & 1) result = jet_mul(result, base);
    e >>= 1;
    if (e > 0) base = jet_mul(base, base);
  }
  return result;
}

Jet jet_derivative_jet(const Jet& f, std::span<const std::uint8_t> sigma,
                       std::shared_ptr<const JetLayout> target) {
  const JetLayout& src = f.layout();
  Jet g(std::move(target));
  const JetLayout& dst = g.layout();
  std::vector<std::uint8_t> e(src.vars());
  for (int i = 0; i < dst.size(); ++i) {
    const std::uint8_t* ge = dst.exponents(i);
    for (int v = 0; v < src.vars(); ++v)
      e[v] = static_cast<std::uint8_t>(ge[v] + sigma[v]);
    const int j = src.index_of(e.data());
    if (j < 0) throw OrderError("derivative jet leaves the source truncation order");
    // taylor_g(gamma) = taylor_f(gamma + sigma) * (gamma + sigma)! / gamma!
    g.taylor(i) = f.taylor(j) * (src.factorial(j) / dst.factorial(i));
  }
  return g;
}

}  // namespace kgeom
