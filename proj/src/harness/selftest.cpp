#include "nsoc/harness/selftest.hpp"

#include "nsoc/harness/examples.hpp"
#include "nsoc/nonsmooth.hpp"
#include "nsoc/simd/kernels.hpp"
#include "nsoc/state/state_solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace nsoc::harness {

namespace {

namespace ns = nsoc::nonsmooth;

SelftestResult prox_resolvent() {
  // g in the subdifferential of max at z iff z = prox(z + gamma g). Dyadic
  // samples keep every operation exact.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> zk(-256, 256), gk(-64, 128), gexp(1, 6);
  int bad = 0;
  for (int k = 0; k < 10000; ++k) {
    const double z = zk(rng) / 128.0;
    const double g = k % 4 == 0 ? 1.0 : (k % 4 == 1 ? 0.0 : gk(rng) / 64.0);
    const double gamma = std::ldexp(1.0, -gexp(rng));
    if (ns::subdiff_max_contains(z, g) != (z == ns::prox(gamma, z + gamma * g))) ++bad;
  }
  return {"prox_resolvent", bad == 0, std::to_string(bad) + " of 10000 samples violate the identity"};
}

SelftestResult smoothing() {
  std::vector<double> grid;
  for (int k = -400; k <= 400; ++k) grid.push_back(k * 5e-3);
  const auto report = ns::verify_smoothing_assumptions(ns::spline_family(1e-2), grid, 0.5);
  return {"smoothing_assumptions", report.ok(), std::to_string(report.violations.size()) + " violations"};
}

SelftestResult kernels() {
  const auto* fast = simd::avx2_kernels();
  if (!fast) return {"simd_equivalence", true, "no vector variant on this CPU"};
  const auto& ref = simd::scalar_kernels();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const std::size_t n = 1037;
  std::vector<double> a(n), b(n), o1(n), o2(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = dist(rng);
    b[i] = dist(rng);
  }
  bool ok = true;
  ref.max0(a.data(), o1.data(), n);
  fast->max0(a.data(), o2.data(), n);
  ok = ok && o1 == o2;
  ref.prox(0.25, a.data(), o1.data(), n);
  fast->prox(0.25, a.data(), o2.data(), n);
  ok = ok && o1 == o2;
  ref.hadamard(a.data(), b.data(), o1.data(), n);
  fast->hadamard(a.data(), b.data(), o2.data(), n);
  ok = ok && o1 == o2;
  const double d1 = ref.dot(a.data(), b.data(), n), d2 = fast->dot(a.data(), b.data(), n);
  ok = ok && std::abs(d1 - d2) <= 1e-12 * n;
  return {"simd_equivalence", ok, "vector variant " + std::string(fast->name)};
}

FeFunction random_function(const std::shared_ptr<const fe::FeSpace>& space, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Vector v(static_cast<std::size_t>(space->size()));
  for (auto& x : v) x = dist(rng);
  return FeFunction(space, std::move(v));
}

SelftestResult lipschitz() {
  const auto ops = make_operators(17);
  const state::StateProblem prob(ops);
  std::mt19937_64 rng(3);
  const double bound = 1.0 / (std::sqrt(2.0) * std::numbers::pi);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20; ++k) {
    const auto u1 = random_function(ops->space, rng, 50.0);
    const auto u2 = random_function(ops->space, rng, 50.0);
    const auto y1 = state::solve_state(prob, u1).first;
    const auto y2 = state::solve_state(prob, u2).first;
    Vector dy(y1.vector()), du(u1.vector());
    for (std::size_t i = 0; i < dy.size(); ++i) {
      dy[i] -= y2.vector()[i];
      du[i] -= u2.vector()[i];
    }
    worst = std::max(worst, ops->h1_seminorm(dy) - bound * ops->l2_norm(du));
  }
  std::ostringstream s;
  s << "max excess " << worst;
  return {"state_lipschitz", worst <= 1e-12, s.str()};
}

SelftestResult finite_differences() {
  const auto ops = make_operators(17);
  const auto ex = build_example1(ops, kkt::KktConfig{});
  const state::StateProblem prob(ops, ex.data.f);
  std::mt19937_64 rng(5);
  const auto u = FeFunction::zeros(ops->space);
  const auto h = random_function(ops->space, rng, 1.0);
  const auto report = state::finite_difference_check(prob, u, h, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5});
  std::ostringstream s;
  s << "error at smallest step " << report.errors.back();
  return {"directional_derivative", report.passed(), s.str()};
}

SelftestResult small_kkt() {
  const auto ops = make_operators(17);
  const auto ex = build_example1(ops, kkt::KktConfig{});
  const auto [pt, report] = kkt::solve_kkt(ex.data, kkt::KktPoint::zeros(ops->space));
  std::ostringstream s;
  s << report.iterations << " iterations, residual " << report.final_residual();
  return {"kkt_example1_m17", report.converged, s.str()};
}

}  // namespace

std::vector<SelftestResult> run_selftest(std::ostream& out) {
  using Suite = SelftestResult (*)();
  std::vector<SelftestResult> results;
  for (Suite suite : {prox_resolvent, smoothing, kernels, lipschitz, finite_differences, small_kkt}) {
    SelftestResult r;
    try {
      r = suite();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace nsoc::harness
