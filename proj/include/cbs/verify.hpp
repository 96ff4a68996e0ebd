#pragma once

// Randomized property suites behind `cbs verify`. Trial t of a suite draws
// from the stream (seed, suite, t), so any failure is reproducible from the
// reported seed and trial index alone.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cbs/generate.hpp"
#include "cbs/integral.hpp"
#include "cbs/io.hpp"
#include "cbs/parallel.hpp"
#include "cbs/quadrature.hpp"
#include "cbs/strengthened.hpp"
#include "cbs/vector.hpp"
#include "cbs/weighted.hpp"

namespace cbs::verify {

struct Failure {
  std::string suite;
  std::string property;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  std::string inputs;
};

struct SuiteResult {
  std::string suite;
  std::size_t trials = 0;
  std::size_t checks = 0;
  std::optional<Failure> failure;
  bool passed() const noexcept { return !failure; }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"core", "weighted", "integral", "strengthened"};
  return names;
}

namespace detail {

inline std::string describe(std::span<const double> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + io::format_real(v[i]);
  return s + "]";
}

/// Records checks of one trial; keeps the first failed property.
class Trial {
 public:
  explicit Trial(std::size_t& checks) : checks_(checks) {}

  template <class Describe>
  bool check(bool ok, const char* property, Describe&& describe_inputs) {
    ++checks_;
    if (!ok && !failed_) failed_ = std::make_pair(std::string(property), describe_inputs());
    return ok;
  }
  bool check(bool ok, const char* property) {
    return check(ok, property, [] { return std::string(); });
  }

  const std::optional<std::pair<std::string, std::string>>& failed() const noexcept { return failed_; }

 private:
  std::size_t& checks_;
  std::optional<std::pair<std::string, std::string>> failed_;
};

inline double rel_err(double a, double b, double scale) {
  return scale == 0.0 ? std::abs(a - b) : std::abs(a - b) / scale;
}

inline void core_trial(Engine& eng, Trial& t) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 64)(eng);
  const double sx = std::pow(10.0, std::uniform_real_distribution<double>(-3, 3)(eng));
  const double sy = std::pow(10.0, std::uniform_real_distribution<double>(-3, 3)(eng));
  auto xs = gaussian_vector(eng, n), ys = gaussian_vector(eng, n), zs = gaussian_vector(eng, n);
  for (double& v : xs) v *= sx;
  for (double& v : ys) v *= sy;
  const RealVector x(xs), y(ys), z(zs);
  auto inputs = [&] { return "x=" + describe(x.values()) + " y=" + describe(y.values()); };

  const double scale = norm_squared(x) * norm_squared(y);
  const auto g = cbs_gap(x, y);
  t.check(g.gap >= -1e-12 * scale, "cbs_gap nonnegative", inputs);
  t.check(rel_err(lagrange_gap(x, y), 2.0 * g.gap, 2.0 * scale) <= 1e-10, "lagrange_gap equals 2 cbs_gap", inputs);

  const double yy = norm_squared(y), xy = inner_product(x, y);
  const double ts = xy / yy;
  const double disc = yy * ts * ts - 2.0 * xy * ts + norm_squared(x);
  t.check(disc * yy >= -1e-12 * scale, "discriminant quadratic nonnegative at its minimizer", inputs);

  const double th = angle(x, y);
  const bool at_pole = th <= 1e-6 || th >= std::numbers::pi - 1e-6;
  const bool near_pole = th <= 1e-5 || th >= std::numbers::pi - 1e-5;
  t.check(!at_pole || g.equality, "angle at 0 or pi implies equality", inputs);
  t.check(!g.equality || near_pole, "equality implies angle at 0 or pi", inputs);

  double lam = std::uniform_real_distribution<double>(0.1, 10.0)(eng);
  if (std::bernoulli_distribution(0.5)(eng)) lam = -lam;
  const RealVector yc = lam * x;
  const double thc = angle(x, yc);
  t.check(cbs_gap(x, yc).equality, "collinear pair detected as equality", inputs);
  t.check(lam > 0 ? thc <= 1e-6 : thc >= std::numbers::pi - 1e-6, "collinear pair angle is 0 or pi", inputs);

  t.check(inner_product(x, y) == inner_product(y, x), "inner product symmetric", inputs);
  double add_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) add_scale += std::abs(x[i] * y[i]) + std::abs(z[i] * y[i]);
  t.check(rel_err(inner_product(x + z, y), inner_product(x, y) + inner_product(z, y), add_scale) <= 1e-12,
          "inner product additive", inputs);
  t.check(inner_product(x, x) >= 0.0, "inner product positive", inputs);

  const auto tri = triangle_check(x, y);
  t.check(tri.lhs <= tri.rhs * (1.0 + 1e-12), "triangle inequality", inputs);

  std::vector<double> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[i] = std::abs(xs[i]);
  const auto mc = mean_chain(RealVector(pos));
  t.check(mc.am >= mc.gm * (1.0 - 1e-12), "am >= gm", inputs);
  t.check(!mc.hm || mc.gm >= *mc.hm * (1.0 - 1e-12), "gm >= hm", inputs);
}

inline WeightVector random_weights(Engine& eng, std::size_t n) {
  std::uniform_real_distribution<double> logw(std::log(0.1), std::log(10.0));
  std::vector<double> p(n);
  for (double& w : p) w = std::exp(logw(eng));
  return WeightVector(std::move(p));
}

inline void weighted_trial(Engine& eng, Trial& t, const RulePtr& rule) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 32)(eng);
  const auto p = random_weights(eng, n);
  const RealVector x(gaussian_vector(eng, n)), y(gaussian_vector(eng, n));
  auto inputs = [&] {
    return "p=" + describe(p.values()) + " x=" + describe(x.values()) + " y=" + describe(y.values());
  };

  const auto r = weighted_cbs_check(p, x, y);
  t.check(r.holds(), "weighted CBS inequality", inputs);
  t.check(weighted_form(p, x, x) >= -1e-12 * r.scale(), "weighted form positive semidefinite", inputs);

  const double c = std::normal_distribution<double>(0.0, 3.0)(eng);
  const RealVector xc = x + RealVector::constant(n, c);
  double sp = 0.0, shift_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sp += p[i];
    shift_scale += p[i] * (std::abs(x[i]) + std::abs(c)) * std::abs(y[i]);
  }
  shift_scale *= sp;
  t.check(rel_err(weighted_form(p, xc, y), weighted_form(p, x, y), shift_scale) <= 1e-10, "shift invariance", inputs);
  t.check(std::abs(weighted_form(p, RealVector::constant(n, c), y)) <= 1e-12 * shift_scale + 1e-300,
          "constant vector has zero form", inputs);

  double sxy = 0, sx = 0, sy = 0, abs_scale = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += x[i] * y[i];
    sx += x[i];
    sy += y[i];
    abs_scale += std::abs(x[i] * y[i]);
  }
  const double cov = static_cast<double>(n) * sxy - sx * sy;
  t.check(rel_err(weighted_form(WeightVector::uniform(n), x, y), cov, static_cast<double>(n) * abs_scale) <= 1e-12,
          "uniform weights reduce to covariance form", inputs);

  std::normal_distribution<double> normal;
  double a = normal(eng), b = normal(eng);
  if (std::abs(b) < 0.1) b = b < 0 ? -0.1 : 0.1;
  const double cc = normal(eng);
  std::vector<double> ye(n);
  for (std::size_t i = 0; i < n; ++i) ye[i] = (cc - a * x[i]) / b;
  const auto eq = weighted_cbs_check(p, x, RealVector(ye));
  t.check(eq.equality, "constructed equality case detected", inputs);
  t.check(eq.combo && eq.combo->residual < 1e-9, "equality combination recovered", inputs);

  // integral form against the discrete form with weights p(t_i) w_i
  const auto dens = random_polynomial(eng, 2, 0.5, 2.0);
  const auto fc = random_polynomial(eng, 5, -1.0, 1.0);
  const auto gc = random_polynomial(eng, 5, -1.0, 1.0);
  const auto ps = SampledFunction::sample(rule, [&](double s) { return eval_polynomial(dens, s); });
  const auto fs = SampledFunction::sample(rule, [&](double s) { return eval_polynomial(fc, s); });
  const auto gs = SampledFunction::sample(rule, [&](double s) { return eval_polynomial(gc, s); });
  std::vector<double> pw(rule->size());
  for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = ps[i] * rule->weights()[i];
  const auto ir = integral_weighted_cbs_check(ps, fs, gs);
  const double discrete = weighted_form(WeightVector(pw), RealVector({fs.values().begin(), fs.values().end()}),
                                        RealVector({gs.values().begin(), gs.values().end()}));
  t.check(rel_err(ir.lhs, discrete, ir.scale()) <= 1e-12, "quadrature form matches discrete form", inputs);
  t.check(ir.holds(), "integral weighted CBS inequality", inputs);
}

inline void integral_trial(Engine& eng, Trial& t, std::size_t index, const RulePtr& rule, const RulePtr& fine) {
  static constexpr double kExponents[] = {1.5, 2.0, 3.0};
  const double p = kExponents[index % 3];
  const auto c = ConjugatePair::from_p(p);
  const auto fc = random_polynomial(eng, 4, 0.0, 1.0);
  const auto gc = random_polynomial(eng, 4, 0.0, 1.0);
  auto inputs = [&] { return "p=" + io::format_real(p) + " f=" + describe(fc) + " g=" + describe(gc); };
  auto sample = [&](const RulePtr& r, const std::vector<double>& coef) {
    return SampledFunction::sample(r, [&](double s) { return eval_polynomial(coef, s); });
  };
  const auto f = sample(rule, fc), g = sample(rule, gc);

  t.check(std::abs(1.0 / c.p() + 1.0 / c.q() - 1.0) <= 1e-15, "conjugate exponent", inputs);
  t.check(holder_check(f, g, c).holds(), "Hoelder inequality", inputs);
  t.check(minkowski_check(f, g, p).holds(), "Minkowski inequality", inputs);

  const double sum_p = integrate_with(*rule, [&](std::size_t i) { return nonneg_pow(f[i] + g[i], p); });
  const double fp = integrate_with(*rule, [&](std::size_t i) { return nonneg_pow(f[i], p); });
  const double gp = integrate_with(*rule, [&](std::size_t i) { return nonneg_pow(g[i], p); });
  t.check(sum_p <= std::pow(2.0, p) * (fp + gp), "crude power bound", inputs);

  const auto h2 = holder_check(f, g, ConjugatePair(2.0, 2.0));
  const auto ic = integral_cbs_check(f, g);
  t.check(rel_err(h2.lhs, ic.lhs, ic.rhs) <= 1e-12 && rel_err(h2.rhs, ic.rhs, ic.rhs) <= 1e-12,
          "Hoelder p=q=2 matches integral CBS", inputs);

  const auto ff = sample(fine, fc), gf = sample(fine, gc);
  const auto hf = holder_check(ff, gf, ConjugatePair(2.0, 2.0));
  const auto m2 = minkowski_check(f, g, 2.0), mf = minkowski_check(ff, gf, 2.0);
  t.check(rel_err(h2.lhs, hf.lhs, hf.lhs) < 1e-10 && rel_err(h2.rhs, hf.rhs, hf.rhs) < 1e-10 &&
              rel_err(m2.lhs, mf.lhs, mf.lhs) < 1e-10 && rel_err(m2.rhs, mf.rhs, mf.rhs) < 1e-10,
          "quadrature order doubling stable", inputs);

  std::uniform_real_distribution<double> pos(0.0, 3.0);
  const double yx = pos(eng), yy = pos(eng);
  const auto yc = young_check(yx, yy, c);
  t.check(yc.lhs <= yc.rhs * (1.0 + 1e-12), "Young inequality", inputs);
  const double ym = std::pow(yx, p / c.q());  // x^p = y^q
  const auto ye = young_check(yx, ym, c);
  t.check(ye.equality && std::abs(ye.rhs - ye.lhs) <= 1e-10 * std::max(ye.rhs, 1.0), "Young equality case", inputs);
}

inline void strengthened_trial(Engine& eng, Trial& t, std::uint64_t trial_seed) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(eng);
  const auto a = random_spd(eng, n);
  const auto part = random_partition(eng, n);
  auto inputs = [&] { return io::to_json(a, part).dump(); };

  const auto ex = gamma_exact(a, part);
  const auto alt = gamma_alternating(a, part, 200000, 1e-14, trial_seed);
  const auto smp = gamma_sampling(a, part, 2000, trial_seed);
  t.check(ex.gamma2 >= 0.0 && ex.gamma2 <= 1.0 + 1e-10, "gamma2 in [0, 1]", inputs);
  t.check(std::abs(alt.gamma2 - ex.gamma2) <= 1e-8, "alternating agrees with exact", inputs);
  t.check(smp.gamma2 <= alt.gamma2 + 1e-10 && alt.gamma2 <= ex.gamma2 + 1e-10, "sampling <= alternating <= exact",
          inputs);
  t.check(std::abs(gamma_exact(a, part.swapped()).gamma2 - ex.gamma2) <= 1e-10, "U/V swap symmetry", inputs);

  // S = diag(S_U, S_V), each block I + E with |E| well below 1
  Matrix s = Matrix::identity(n);
  for (const auto* set : {&part.u(), &part.v()}) {
    std::normal_distribution<double> normal(0.0, 0.15 / std::sqrt(static_cast<double>(set->size())));
    for (std::size_t i : *set)
      for (std::size_t j : *set) s(i, j) += normal(eng);
  }
  const auto scaled = gamma_exact(congruence(a, s), part);
  t.check(rel_err(scaled.gamma2, ex.gamma2, std::max(ex.gamma2, 1e-3)) <= 1e-8, "block-scaling invariance", inputs);

  const auto q = BlockedMatrix(a, part).quotient(ex.u_star.values(), ex.v_star.values());
  t.check(q.uu <= 0.0 || q.vv <= 0.0 || rel_err(q.ratio(0.0), ex.gamma2, std::max(ex.gamma2, 1e-300)) <= 1e-8,
          "extremal pair attains gamma2", inputs);
  t.check(strengthened_check(a, part, ex, 200, trial_seed), "strengthened inequality holds with exact gamma", inputs);
  GammaResult one = ex;
  one.gamma = one.gamma2 = 1.0;
  t.check(strengthened_check(a, part, one, 200, trial_seed), "classical CBS (gamma = 1) holds", inputs);
  if (ex.gamma2 > 1e-6) {
    GammaResult half = ex;
    half.gamma = 0.5 * ex.gamma;
    half.gamma2 = half.gamma * half.gamma;
    t.check(!strengthened_check(a, part, half, 200, trial_seed), "halved gamma is rejected", inputs);
  }
}

}  // namespace detail

/// Runs one named suite. Trials may execute in parallel; the reported failure
/// is the one with the lowest trial index.
inline SuiteResult run_suite(const std::string& suite, std::size_t trials, std::uint64_t seed) {
  std::size_t suite_id = 0;
  while (suite_id < suite_names().size() && suite_names()[suite_id] != suite) ++suite_id;
  if (suite_id == suite_names().size()) throw InputError("unknown suite '" + suite + "'");

  const auto rule = make_gauss_legendre(16);
  const auto fine = make_gauss_legendre(32);
  std::vector<std::size_t> checks(trials, 0);
  std::vector<std::optional<std::pair<std::string, std::string>>> failures(trials);
  parallel_for(trials, [&](std::size_t i) {
    auto eng = make_engine(seed, suite_id + 1, i);
    detail::Trial t(checks[i]);
    try {
      switch (suite_id) {
        case 0: detail::core_trial(eng, t); break;
        case 1: detail::weighted_trial(eng, t, rule); break;
        case 2: detail::integral_trial(eng, t, i, rule, fine); break;
        default: detail::strengthened_trial(eng, t, stream_seed(seed, 0x57, i)); break;
      }
    } catch (const std::exception& e) {
      t.check(false, "no exception", [&] { return std::string(e.what()); });
    }
    failures[i] = t.failed();
  });

  SuiteResult r{suite, trials, 0, std::nullopt};
  for (std::size_t i = 0; i < trials; ++i) {
    r.checks += checks[i];
    if (!r.failure && failures[i]) r.failure = Failure{suite, failures[i]->first, seed, i, failures[i]->second};
  }
  return r;
}

/// `all` expands to every suite in order.
inline std::vector<SuiteResult> run(const std::string& suite, std::size_t trials, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  if (suite == "all") {
    for (const auto& name : suite_names()) out.push_back(run_suite(name, trials, seed));
  } else {
    out.push_back(run_suite(suite, trials, seed));
  }
  return out;
}

}  // namespace cbs::verify
