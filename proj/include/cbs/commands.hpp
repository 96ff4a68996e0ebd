#pragma once

// Implementations of the `cbs` subcommands. Argument parsing lives in
// tools/cbs.cpp; everything here takes resolved options and output streams.
//
// Exit codes: 0 success, 1 bound or invariant violation, 2 usage or input error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cbs/elasticity.hpp"
#include "cbs/error.hpp"
#include "cbs/generate.hpp"
#include "cbs/io.hpp"
#include "cbs/parallel.hpp"
#include "cbs/strengthened.hpp"
#include "cbs/verify.hpp"

namespace cbs::commands {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2 };

/// Inclusive sweep "start:stop:step".
inline std::vector<double> parse_sweep(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("sweep '" + text + "' must be start:stop:step");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw InputError("sweep '" + text + "' must be start:stop:step with step > 0 and stop >= start");
  const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = parts[0] + static_cast<double>(k) * parts[2];
  return out;
}

inline constexpr const char* kDefaultSweep = "0:0.45:0.05";

struct MaterialCase {
  std::optional<double> nu;
  Material material;
};

/// Material choice shared by gamma-element and gamma-mesh. Precedence:
/// lambda/mu, then a single nu, then an explicit sweep; with none of them
/// form a1 uses lambda = mu = 1 and forms a, a2 the default nu sweep.
struct MaterialOptions {
  std::optional<double> nu;
  std::optional<double> lambda, mu;
  std::optional<std::string> nu_sweep;
  double young = 1.0;

  std::vector<MaterialCase> resolve(Form form) const {
    try {
      return resolve_unchecked(form);
    } catch (const DomainError& e) {
      throw InputError(e.what());
    }
  }

 private:
  std::vector<MaterialCase> resolve_unchecked(Form form) const {
    if (lambda || mu) {
      if (!lambda || !mu) throw InputError("--lambda and --mu must be given together");
      return {{std::nullopt, Material(*lambda, *mu)}};
    }
    if (nu) return {{nu, Material::from_young(young, *nu)}};
    if (!nu_sweep && form == Form::a1) return {{std::nullopt, Material(1.0, 1.0)}};
    std::vector<MaterialCase> out;
    for (double v : parse_sweep(nu_sweep.value_or(kDefaultSweep))) out.push_back({v, Material::from_young(young, v)});
    return out;
  }
};

/// Writes PREFIX.csv and PREFIX.json, or both to `out` when no prefix is set.
inline void emit(const io::Report& report, const io::Summary& summary, const std::optional<std::string>& prefix,
                 std::ostream& out) {
  if (!prefix) {
    report.write_csv(out);
    io::write_summary(out, summary);
    return;
  }
  std::ofstream csv(*prefix + ".csv", std::ios::binary);
  std::ofstream js(*prefix + ".json", std::ios::binary);
  if (!csv || !js) throw InputError("cannot write report to '" + *prefix + ".{csv,json}'");
  report.write_csv(csv);
  io::write_summary(js, summary);
}

inline io::ReportRow make_row(std::string case_name, const std::string& form, const MaterialCase* mc,
                              const GammaResult& g) {
  io::ReportRow r;
  r.case_name = std::move(case_name);
  r.form = form;
  if (mc) {
    r.nu = mc->nu;
    r.lambda = mc->material.lambda;
    r.mu = mc->material.mu;
  }
  r.gamma2 = g.gamma2;
  r.gamma = g.gamma;
  r.kernel_u = g.kernel_dim_u;
  r.kernel_v = g.kernel_dim_v;
  r.method = to_string(g.method);
  return r;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
  std::string suite = "all";
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
};

inline int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  if (o.trials < 1) {
    err << "verify: --trials must be >= 1\n";
    return kUsage;
  }
  int code = kOk;
  for (const auto& r : verify::run(o.suite, o.trials, o.seed)) {
    out << "suite " << r.suite << ": " << (r.passed() ? "PASS" : "FAIL") << " (" << r.trials << " trials, "
        << r.checks << " checks)\n";
    if (!r.passed()) {
      const auto& f = *r.failure;
      err << "FAIL suite=" << f.suite << " property=\"" << f.property << "\" seed=" << f.seed
          << " trial=" << f.trial << " inputs=" << f.inputs << '\n';
      code = kViolation;
    }
  }
  return code;
}

// ---------------------------------------------------------------- gamma-matrix

struct MatrixOptions {
  std::string input;
  GammaMethod method = GammaMethod::eigen;
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
};

inline int cmd_gamma_matrix(const MatrixOptions& o, std::ostream& out, std::ostream& err) {
  const auto in = io::parse_matrix_input(io::read_json_file(o.input));
  const auto exact = gamma_exact(in.matrix, in.partition);
  io::Report report;
  report.add(make_row("matrix", "", nullptr, exact));
  int code = kOk;
  if (o.method != GammaMethod::eigen) {
    const auto other = o.method == GammaMethod::alternating
                           ? gamma_alternating(in.matrix, in.partition, 200000, 1e-14, o.seed)
                           : gamma_sampling(in.matrix, in.partition, o.trials, o.seed);
    report.add(make_row("matrix", "", nullptr, other));
    const bool ordered = o.method == GammaMethod::alternating ? std::abs(other.gamma2 - exact.gamma2) <= 1e-8
                                                              : other.gamma2 <= exact.gamma2 + 1e-10;
    if (!ordered) {
      err << "gamma-matrix: " << to_string(o.method) << " estimate " << io::format_real(other.gamma2)
          << " inconsistent with exact " << io::format_real(exact.gamma2) << '\n';
      code = kViolation;
    }
  }
  emit(report, report.summarize(std::nullopt, o.seed), o.out, out);
  return code;
}

// ---------------------------------------------------------------- gamma-element

struct ElementOptions {
  int dim = 2;
  Form form = Form::a;
  MaterialOptions material;
  std::string vertices = "reference";  ///< reference | random | inline "x,y;..." | JSON file
  std::size_t draws = 1;
  int diagonal = 0;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
};

namespace detail {

template <int Dim>
Simplex<Dim> simplex_from(const std::vector<std::vector<double>>& pts) {
  if (pts.size() != static_cast<std::size_t>(Dim + 1))
    throw InputError("expected " + std::to_string(Dim + 1) + " vertices, got " + std::to_string(pts.size()));
  Simplex<Dim> s;
  for (int k = 0; k <= Dim; ++k) {
    if (pts[static_cast<std::size_t>(k)].size() != static_cast<std::size_t>(Dim))
      throw InputError("vertex " + std::to_string(k) + " must have " + std::to_string(Dim) + " coordinates");
    for (int c = 0; c < Dim; ++c) s[k][c] = pts[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
  }
  if (is_degenerate<Dim>(s)) throw InputError("degenerate simplex");
  return s;
}

inline std::vector<std::vector<double>> parse_inline_vertices(const std::string& text) {
  std::vector<std::vector<double>> pts;
  std::stringstream ss(text);
  std::string point;
  while (std::getline(ss, point, ';')) {
    std::vector<double> p;
    std::stringstream ps(point);
    std::string c;
    while (std::getline(ps, c, ',')) {
      try {
        p.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw InputError("cannot parse vertex coordinate '" + c + "'");
      }
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

inline std::vector<std::vector<double>> load_vertices(const std::string& text) {
  if (text.find(';') != std::string::npos) return parse_inline_vertices(text);
  const auto j = io::read_json_file(text);
  if (!j.is_array()) throw InputError(text + ": expected an array of points");
  try {
    return j.get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(text + ": " + e.what());
  }
}

template <int Dim>
int run_element(const ElementOptions& o, std::ostream& out) {
  std::vector<std::pair<std::string, Simplex<Dim>>> shapes;
  if (o.vertices == "reference") {
    shapes.emplace_back("reference", reference_simplex<Dim>());
  } else if (o.vertices == "random") {
    for (std::size_t k = 0; k < o.draws; ++k) {
      auto eng = make_engine(o.seed, 0xe1e, k);
      shapes.emplace_back("draw" + std::to_string(k), random_simplex<Dim>(eng));
    }
  } else {
    shapes.emplace_back("element", simplex_from<Dim>(load_vertices(o.vertices)));
  }
  const auto mats = o.material.resolve(o.form);
  const std::size_t cases = shapes.size() * mats.size();
  std::vector<std::optional<GammaResult>> results(cases);
  parallel_for(cases, [&](std::size_t c) {
    results[c] = gamma_element<Dim>(shapes[c / mats.size()].second, mats[c % mats.size()].material, o.form,
                                    o.diagonal)
                     .result;
  });
  io::Report report;
  for (std::size_t c = 0; c < cases; ++c)
    report.add(make_row(shapes[c / mats.size()].first, to_string(o.form), &mats[c % mats.size()], *results[c]));
  const auto summary = report.summarize(io::bound_for(Dim, o.form), o.seed);
  emit(report, summary, o.out, out);
  return summary.bound_satisfied.value_or(true) ? kOk : kViolation;
}

}  // namespace detail

inline int cmd_gamma_element(const ElementOptions& o, std::ostream& out, std::ostream& err) {
  if (o.dim != 2 && o.dim != 3) {
    err << "gamma-element: --dim must be 2 or 3\n";
    return kUsage;
  }
  if (o.diagonal < 0 || o.diagonal > 2) {
    err << "gamma-element: --diagonal must be 0, 1 or 2\n";
    return kUsage;
  }
  return o.dim == 2 ? detail::run_element<2>(o, out) : detail::run_element<3>(o, out);
}

// ---------------------------------------------------------------- gamma-mesh

struct MeshOptions {
  std::string mesh;
  Form form = Form::a;
  MaterialOptions material;
  int diagonal = 0;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
};

inline int cmd_gamma_mesh(const MeshOptions& o, std::ostream& out, std::ostream& /*err*/) {
  Mesh mesh = [&] {
    try {
      return io::parse_mesh_input(io::read_json_file(o.mesh));
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError(o.mesh + ": " + e.what());
    }
  }();
  const auto mats = o.material.resolve(o.form);
  io::Report report;
  std::vector<MeshGamma> per_material;
  for (const auto& mc : mats) per_material.push_back(gamma_mesh(mesh, mc.material, o.form, o.diagonal));
  for (std::size_t e = 0; e < mesh.element_count(); ++e)
    for (std::size_t k = 0; k < mats.size(); ++k)
      report.add(make_row("e" + std::to_string(e), to_string(o.form), &mats[k], per_material[k].elements[e].result));
  const auto summary = report.summarize(io::bound_for(mesh.dim(), o.form), o.seed);
  emit(report, summary, o.out, out);
  return summary.bound_satisfied.value_or(true) ? kOk : kViolation;
}

}  // namespace cbs::commands
