#pragma once

// File schemas of the command-line front end.
//
// Matrix input:  { "n": 4, "entries": [row-major n*n], "u_indices": [...], "v_indices": [...] }
// Mesh input:    { "dim": 2|3, "vertices": [[x, y(, z)], ...], "elements": [[i, j, k(, l)], ...] }
// Report:        CSV `case,form,nu,lambda,mu,gamma2,gamma,kernel_u,kernel_v,method`
//                plus a JSON summary { "max_gamma2", "bound", "bound_satisfied", "seed" }.
// Reals are written with 17 significant digits.

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cbs/elasticity.hpp"
#include "cbs/error.hpp"
#include "cbs/strengthened.hpp"
#include "cbs/symlin.hpp"

namespace cbs::io {

using nlohmann::json;

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

namespace detail {

inline const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw InputError("expected a JSON object at top level");
  const auto it = j.find(name);
  if (it == j.end()) throw InputError(std::string("missing field '") + name + "'");
  return *it;
}

inline std::vector<std::size_t> index_array(const json& j, const char* name) {
  const json& a = field(j, name);
  if (!a.is_array()) throw InputError(std::string("field '") + name + "' must be an array");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!a[k].is_number_integer() || a[k].get<long long>() < 0)
      throw InputError(std::string("field '") + name + "[" + std::to_string(k) + "]' must be a nonnegative integer");
    out.push_back(a[k].get<std::size_t>());
  }
  return out;
}

inline double real_at(const json& a, std::size_t k, const std::string& where) {
  if (!a[k].is_number()) throw InputError("field '" + where + "[" + std::to_string(k) + "]' must be a number");
  return a[k].get<double>();
}

}  // namespace detail

struct MatrixInput {
  SymMatrix matrix;
  BlockPartition partition;
};

inline MatrixInput parse_matrix_input(const json& j) {
  const json& nj = detail::field(j, "n");
  if (!nj.is_number_integer() || nj.get<long long>() < 1) throw InputError("field 'n' must be a positive integer");
  const auto n = nj.get<std::size_t>();
  const json& e = detail::field(j, "entries");
  if (!e.is_array() || e.size() != n * n)
    throw InputError("field 'entries' must be an array of n*n = " + std::to_string(n * n) + " numbers");
  std::vector<double> entries(n * n);
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] = detail::real_at(e, k, "entries");
  auto u = detail::index_array(j, "u_indices");
  auto v = detail::index_array(j, "v_indices");
  try {
    SymMatrix m(n, std::move(entries));
    BlockPartition p(std::move(u), std::move(v), n);
    return {std::move(m), std::move(p)};
  } catch (const InputError&) {
    throw;
  } catch (const Error& err) {
    throw InputError(err.what());
  }
}

inline json to_json(const SymMatrix& a, const BlockPartition& p) {
  std::vector<double> entries(a.matrix().data().begin(), a.matrix().data().end());
  return json{{"n", a.size()}, {"entries", entries}, {"u_indices", p.u()}, {"v_indices", p.v()}};
}

inline Mesh parse_mesh_input(const json& j) {
  const json& dj = detail::field(j, "dim");
  if (!dj.is_number_integer() || (dj.get<int>() != 2 && dj.get<int>() != 3))
    throw InputError("field 'dim' must be 2 or 3");
  const int dim = dj.get<int>();
  const json& vj = detail::field(j, "vertices");
  if (!vj.is_array() || vj.empty()) throw InputError("field 'vertices' must be a nonempty array");
  std::vector<std::array<double, 3>> vertices;
  for (std::size_t k = 0; k < vj.size(); ++k) {
    const std::string where = "vertices[" + std::to_string(k) + "]";
    if (!vj[k].is_array() || vj[k].size() != static_cast<std::size_t>(dim))
      throw InputError("field '" + where + "' must hold " + std::to_string(dim) + " coordinates");
    std::array<double, 3> p{};
    for (std::size_t c = 0; c < static_cast<std::size_t>(dim); ++c) p[c] = detail::real_at(vj[k], c, where);
    vertices.push_back(p);
  }
  const json& ej = detail::field(j, "elements");
  if (!ej.is_array() || ej.empty()) throw InputError("field 'elements' must be a nonempty array");
  std::vector<std::vector<std::size_t>> elements;
  for (std::size_t k = 0; k < ej.size(); ++k) {
    const std::string where = "elements[" + std::to_string(k) + "]";
    if (!ej[k].is_array()) throw InputError("field '" + where + "' must be an array");
    std::vector<std::size_t> el;
    for (const auto& x : ej[k]) {
      if (!x.is_number_integer() || x.get<long long>() < 0)
        throw InputError("field '" + where + "' must hold nonnegative integers");
      el.push_back(x.get<std::size_t>());
    }
    elements.push_back(std::move(el));
  }
  return Mesh(dim, std::move(vertices), std::move(elements));
}

/// Known upper bounds on gamma^2: 3/4 for 2D form a, 9/10 for 3D forms a1 and a2.
/// No bound is asserted for the other (dim, form) pairs.
inline std::optional<double> bound_for(int dim, Form form) {
  if (dim == 2 && form == Form::a) return 0.75;
  if (dim == 3 && (form == Form::a1 || form == Form::a2)) return 0.9;
  return std::nullopt;
}

/// Slack allowed above a bound before it counts as violated.
inline constexpr double kBoundSlack = 1e-8;

struct ReportRow {
  std::string case_name;
  std::string form;
  std::optional<double> nu, lambda, mu;
  double gamma2 = 0.0;
  double gamma = 0.0;
  std::size_t kernel_u = 0, kernel_v = 0;
  std::string method;
};

struct Summary {
  double max_gamma2 = 0.0;
  std::optional<double> bound;
  std::optional<bool> bound_satisfied;
  std::uint64_t seed = 0;
};

class Report {
 public:
  void add(ReportRow row) { rows_.push_back(std::move(row)); }
  const std::vector<ReportRow>& rows() const noexcept { return rows_; }

  Summary summarize(std::optional<double> bound, std::uint64_t seed) const {
    Summary s{0.0, bound, std::nullopt, seed};
    for (const auto& r : rows_) s.max_gamma2 = std::max(s.max_gamma2, r.gamma2);
    if (bound) s.bound_satisfied = s.max_gamma2 <= *bound + kBoundSlack;
    return s;
  }

  void write_csv(std::ostream& os) const {
    os << "case,form,nu,lambda,mu,gamma2,gamma,kernel_u,kernel_v,method\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
    for (const auto& r : rows_)
      os << r.case_name << ',' << r.form << ',' << opt(r.nu) << ',' << opt(r.lambda) << ',' << opt(r.mu) << ','
         << format_real(r.gamma2) << ',' << format_real(r.gamma) << ',' << r.kernel_u << ',' << r.kernel_v << ','
         << r.method << '\n';
  }

 private:
  std::vector<ReportRow> rows_;
};

inline void write_summary(std::ostream& os, const Summary& s) {
  os << "{\"max_gamma2\": " << format_real(s.max_gamma2)
     << ", \"bound\": " << (s.bound ? format_real(*s.bound) : "null")
     << ", \"bound_satisfied\": " << (s.bound_satisfied ? (*s.bound_satisfied ? "true" : "false") : "null")
     << ", \"seed\": " << s.seed << "}\n";
}

/// Lines of a CSV text (header included) split on commas; no quoting.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace cbs::io
