#include "kgeom/checks.hpp"

#include <cmath>
#include <functional>

#include "kgeom/rng.hpp"

namespace kgeom {

namespace {

// (id, anchor, default tolerance) in report order.
const std::vector<CheckDef> kChecks = {
    {"real-potential", "§2 (polarized potentials)", 1e-12},
    {"hermitian-symmetry", "Proposition 2.4", 1e-10},
    {"kahler-symmetry", "Proposition 2.4", 1e-10},
    {"ricci-trace", "Lemma 2.3 proof", 1e-8},
    {"polarization-identity", "Eq. (Relation)", 1e-9},
    {"metric-restriction", "Lemma 2.1 proof", 1e-12},
    {"domination", "Lemma 2.1", 1e-12},
    {"closed-form-metric", "§2 metric matrix", 1e-10},
    {"closed-form-det", "§2 determinant formula", 1e-10},
    {"ricci-identity", "Lemma 2.3", 1e-8},
    {"einstein-ch", "Remark after Proposition 2.4", 1e-8},
    {"ricci-ratio", "§3 final theorem", 1e-8},
    {"hsc-formula", "Proposition 2.4 / Theorem 3.1", 1e-8},
    {"sectional-formula", "Eq. (kappa) / Proposition 2.6", 1e-8},
    {"ball-iteration", "§4", 1e-10},
    {"fiber-ray", "Lemma 2.2", 1e-10},
};

struct Worst {
  double residual = 0.0;
  std::size_t sample = 0;

  void fold(double value, std::size_t index) {
    if (value > residual) {
      residual = value;
      sample = index;
    }
  }
};

VectorXcd random_direction(Rng& rng, int n) {
  VectorXcd x(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) x(i) = rng.complex_normal();
    norm = x.norm();
  } while (!(norm > 1e-8));
  return x / norm;
}

/// True when the base has constant holomorphic sectional curvature -2 (the
/// complex-hyperbolic normalization), probed at a few samples.
bool base_is_ch_normalized(const KahlerChart& base, std::uint64_t seed) {
  if (base.m == 0) return true;
  if (!base.sampler) return false;
  for (std::size_t i = 0; i < 4; ++i) {
    Rng rng = substream(seed, {0xc4ull, i});
    const auto p = base.sampler(i, rng);
    const CurvatureTensor t = curvature_at(base, p);
    for (int reps = 0; reps < 2; ++reps) {
      const HoloDirection dir{random_direction(rng, base.m)};
      if (std::abs(hsc(t, dir) + 2.0) > 1e-9) return false;
    }
  }
  return true;
}

}  // namespace

const std::vector<CheckDef>& list_checks() { return kChecks; }

std::vector<CheckRecord> run_verify(const VerifyContext& context) {
  const KahlerChart& base = context.base;
  const bool has_bundle = context.bundle.has_value();
  const BundleChart* bundle = has_bundle ? &*context.bundle : nullptr;
  const int samples = context.samples;
  const std::uint64_t seed = context.seed;

  const KahlerChart& target =
      has_bundle ? bundle->total : base;  // the chart most checks sample
  if (!target.sampler)
    throw BadParams("verification needs a chart with a sampler");

  auto sample_point = [&](std::size_t check, std::size_t i) {
    Rng rng = substream(seed, {check, i});
    return target.sampler(i, rng);
  };
  auto sample_rng = [&](std::size_t check, std::size_t i) {
    return substream(seed, {0xd1ull, check, i});
  };

  std::vector<CheckRecord> records;
  records.reserve(kChecks.size());
  std::size_t check_index = 0;
  auto run = [&](const std::string& id, bool applicable,
                 const std::function<void(Worst&, std::size_t&)>& body) {
    const CheckDef& def = kChecks[check_index];
    if (def.id != id) throw Error("check-order", "check registry out of order at " + id);
    ++check_index;
    CheckRecord record;
    record.id = def.id;
    record.anchor = def.anchor;
    const auto it = context.tolerance_overrides.find(def.id);
    record.tolerance = it == context.tolerance_overrides.end() ? def.tolerance : it->second;
    if (!applicable) {
      record.skipped = true;
      record.pass = true;
      records.push_back(std::move(record));
      return;
    }
    Worst worst;
    std::size_t count = 0;
    body(worst, count);
    record.samples = count;
    record.max_residual = worst.residual;
    record.pass = worst.residual < record.tolerance;
    record.witness = "sample " + std::to_string(worst.sample);
    records.push_back(std::move(record));
  };

  const std::size_t n_target = static_cast<std::size_t>(target.m);
  const int k = has_bundle ? bundle->fiber_rank : 0;
  const bool rank_one = has_bundle && k == 1;

  run("real-potential", true, [&](Worst& worst, std::size_t& count) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
      const auto pt = sample_point(0, i);
      std::vector<std::vector<cd>> pts = {pt};
      const auto report =
          check_real_potential(target.potential, std::span<const std::vector<cd>>(pts));
      worst.fold(report.max_abs_imag, i);
      ++count;
    }
  });

  run("hermitian-symmetry", true, [&](Worst& worst, std::size_t& count) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
      const auto pt = sample_point(1, i);
      worst.fold(hermitian_symmetry_residual(curvature_at(target, pt)), i);
      ++count;
    }
  });

  run("kahler-symmetry", true, [&](Worst& worst, std::size_t& count) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
      const auto pt = sample_point(2, i);
      worst.fold(kahler_symmetry_residual(curvature_at(target, pt)), i);
      ++count;
    }
  });

  run("ricci-trace", true, [&](Worst& worst, std::size_t& count) {
    const std::size_t budget = std::min<std::size_t>(samples, 25);
    for (std::size_t i = 0; i < budget; ++i) {
      const auto pt = sample_point(3, i);
      worst.fold(ricci_trace_residual(target, pt), i);
      ++count;
    }
  });

  run("polarization-identity", true, [&](Worst& worst, std::size_t& count) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
      const auto pt = sample_point(4, i);
      Rng rng = sample_rng(4, i);
      const CurvatureTensor t = curvature_at(target, pt);
      const RealTwoPlane plane{random_direction(rng, n_target),
                               random_direction(rng, n_target)};
      const double direct = riemann_contraction(t, plane);
      const double six_q = riemann_contraction_six_q(t, plane);
      worst.fold(std::abs(direct - six_q) / std::max(1.0, std::abs(direct)), i);
      ++count;
    }
  });

  run("metric-restriction", has_bundle, [&](Worst& worst, std::size_t& count) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
      Rng rng = sample_rng(5, i);
      const std::vector<cd> z =
          base.m == 0 ? std::vector<cd>{} : base.sampler(i, rng);
      std::vector<cd> pt(k + base.m, cd(0.0, 0.0));
      for (int j = 0; j < base.m; ++j) pt[k + j] = z[j];
      const MatrixXcd g_total = metric_at(bundle->total, pt);
      const double inv_h = 1.0 / bundle->h_value(z);
      double residual = 0.0;
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
          residual = std::max(residual,
                              std::abs(g_total(r, c) - (r == c ? cd(inv_h, 0.0) : cd(0.0, 0.0))));
      if (base.m > 0) {
        const MatrixXcd g_base = metric_at(base, z);
        for (int r = 0; r < base.m; ++r)
          for (int c = 0; c < base.m; ++c)
            residual = std::max(residual, std::abs(g_total(k + r, k + c) - g_base(r, c)));
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < base.m; ++c)
            residual = std::max(residual, std::abs(g_total(r, k + c)));
      }
      worst.fold(residual, i);
      ++count;
    }
  });

  run("domination", has_bundle, [&](Worst& worst, std::size_t& count) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
      const auto pt = sample_point(6, i);
      worst.fold(std::max(0.0, -domination_residual(*bundle, pt)), i);
      ++count;
    }
  });

  run("closed-form-metric", rank_one, [&](Worst& worst, std::size_t& count) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
      const auto pt = sample_point(7, i);
      const auto z = bundle->base_point(pt);
      const MatrixXcd direct = closed_form_metric(*context.weight, z, pt[0]);
      const MatrixXcd ad = metric_at(bundle->total, pt);
      worst.fold(max_abs(direct - ad) / std::max(1.0, max_abs(direct)), i);
      ++count;
    }
  });

  run("closed-form-det", rank_one, [&](Worst& worst, std::size_t& count) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
      const auto pt = sample_point(8, i);
      const auto z = bundle->base_point(pt);
      const double direct = closed_form_det(*context.weight, z, pt[0]);
      const double ad = metric_at(bundle->total, pt).determinant().real();
      worst.fold(std::abs(direct - ad) / std::abs(direct), i);
      ++count;
    }
  });

  run("ricci-identity", rank_one, [&](Worst& worst, std::size_t& count) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
      const auto pt = sample_point(9, i);
      worst.fold(ricci_identity_residual(*bundle, pt), i);
      ++count;
    }
  });

  const bool einstein_applicable =
      has_bundle && base_is_ch_normalized(base, seed);
  run("einstein-ch", einstein_applicable, [&](Worst& worst, std::size_t& count) {
    const double expected = -(base.m + 2.0);
    const std::size_t budget = std::min<std::size_t>(samples, 20);
    for (std::size_t i = 0; i < budget; ++i) {
      const auto pt = sample_point(10, i);
      const auto [lo, hi] = ricci_ratio_range(bundle->total, pt);
      worst.fold(std::max(std::abs(lo - expected), std::abs(hi - expected)), i);
      ++count;
    }
  });

  run("ricci-ratio", has_bundle && base.m > 0, [&](Worst& worst, std::size_t& count) {
    // Ric(g_D)/g_D <= max{-(m+2), -1 + Ric(g_M)/g_M} pointwise.
    const std::size_t budget = std::min<std::size_t>(samples, 25);
    for (std::size_t i = 0; i < budget; ++i) {
      const auto pt = sample_point(11, i);
      const auto z = bundle->base_point(pt);
      const auto [lo_d, hi_d] = ricci_ratio_range(bundle->total, pt);
      (void)lo_d;
      const auto [lo_m, hi_m] = ricci_ratio_range(base, z);
      (void)lo_m;
      const double bound = std::max(-(base.m + 2.0), -1.0 + hi_m);
      worst.fold(std::max(0.0, hi_d - bound), i);
      ++count;
    }
  });

  run("hsc-formula", rank_one, [&](Worst& worst, std::size_t& count) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
      const auto pt = sample_point(12, i);
      Rng rng = sample_rng(12, i);
      const HoloDirection dir{random_direction(rng, n_target)};
      worst.fold(hsc_formula_residual(*bundle, pt, dir), i);
      ++count;
    }
  });

  run("sectional-formula", rank_one, [&](Worst& worst, std::size_t& count) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
      const auto pt = sample_point(13, i);
      Rng rng = sample_rng(13, i);
      const RealTwoPlane plane{random_direction(rng, n_target),
                               random_direction(rng, n_target)};
      try {
        worst.fold(sectional_formula_residual(*bundle, pt, plane, kSectionalPlaneFactor), i);
        ++count;
      } catch (const DegeneratePlane&) {
        // filtered; a random pair is degenerate with probability zero
      }
    }
  });

  const bool iteration_applicable = has_bundle && base.m + 2 <= 6;
  run("ball-iteration", iteration_applicable, [&](Worst& worst, std::size_t& count) {
    const std::size_t budget = std::min<std::size_t>(samples, 25);
    for (int rank = 2; rank <= 3 && base.m + rank <= 6; ++rank) {
      const BundleChart direct = ball_bundle_chart(*context.weight, rank);
      const BundleChart nested = iterated_chart(*context.weight, rank);
      for (std::size_t i = 0; i < budget; ++i) {
        Rng rng = substream(seed, {14ull, static_cast<std::uint64_t>(rank), i});
        const auto pt = direct.total.sampler(i, rng);
        const MatrixXcd g_direct = metric_at(direct.total, pt);
        const MatrixXcd g_nested = metric_at(nested.total, pt);
        worst.fold(max_abs(g_direct - g_nested), count);
        ++count;
      }
    }
  });

  run("fiber-ray", true, [&](Worst& worst, std::size_t& count) {
    const double unit = fiber_ray_length(std::tanh(1.0));
    worst.fold(std::abs(unit - 1.0), 0);
    const double deep = fiber_ray_length(1.0 - 1e-6);
    worst.fold(std::max(0.0, 7.0 - deep), 1);
    count = 2;
  });

  return records;
}

}  // namespace kgeom
