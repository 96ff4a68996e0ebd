#pragma once

// Linear P1 elasticity on simplices (triangles, tetrahedra):
//
//   a(u, v)  = lambda int div u div v + 2 mu int sum_ij eps_ij(u) eps_ij(v)
//   a1(u, v) = int div u div v
//   a2(u, v) = int sum_ij c_ij(u) c_ij(v),  c = lambda tr(eps) I + 2 mu eps
//
// Strains of P1 fields are constant per element, so element matrices are
// volume times a constant Gram matrix. DOFs are node-major, component-minor.
//
// A parent simplex is red-refined (4 or 8 children). The fine stiffness of
// the macro-element is changed to the two-level hierarchical basis (parent
// vertex functions + midpoint functions) and the strengthened CBS constant
// between the two groups is evaluated with gamma_exact.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbs/error.hpp"
#include "cbs/parallel.hpp"
#include "cbs/strengthened.hpp"
#include "cbs/symlin.hpp"

namespace cbs {

struct Material {
  double lambda;
  double mu;

  Material(double lambda_, double mu_) : lambda(lambda_), mu(mu_) {
    if (!std::isfinite(lambda) || !(lambda >= 0.0)) throw DomainError("Material: lambda must be >= 0");
    if (!std::isfinite(mu) || !(mu > 0.0)) throw DomainError("Material: mu must be > 0");
  }

  /// From Young's modulus and Poisson ratio, 0 <= nu < 1/2.
  static Material from_young(double young, double nu) {
    if (!(young > 0.0)) throw DomainError("Material: Young's modulus must be > 0");
    if (!(nu >= 0.0 && nu < 0.5)) throw DomainError("Material: Poisson ratio must lie in [0, 0.5)");
    return Material(young * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), young / (2.0 * (1.0 + nu)));
  }
};

enum class Form { a, a1, a2 };

inline const char* to_string(Form f) {
  switch (f) {
    case Form::a: return "a";
    case Form::a1: return "a1";
    case Form::a2: return "a2";
  }
  return "?";
}

inline Form parse_form(const std::string& s) {
  if (s == "a") return Form::a;
  if (s == "a1") return Form::a1;
  if (s == "a2") return Form::a2;
  throw InputError("unknown form '" + s + "' (expected a, a1 or a2)");
}

template <int Dim>
using Point = std::array<double, Dim>;

template <int Dim>
using Simplex = std::array<Point<Dim>, Dim + 1>;

/// Reference simplex: origin plus the unit axis points.
template <int Dim>
Simplex<Dim> reference_simplex() {
  Simplex<Dim> s{};
  for (int k = 0; k < Dim; ++k) s[k + 1][k] = 1.0;
  return s;
}

namespace detail {

template <int Dim>
double determinant(const std::array<std::array<double, Dim>, Dim>& m) {
  if constexpr (Dim == 2) {
    return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  } else {
    static_assert(Dim == 3);
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
}

template <int Dim>
constexpr double factorial() {
  return Dim == 2 ? 2.0 : 6.0;
}

template <int Dim>
double max_edge(const Simplex<Dim>& s) {
  double h = 0.0;
  for (int i = 0; i <= Dim; ++i)
    for (int j = i + 1; j <= Dim; ++j) {
      double d = 0.0;
      for (int k = 0; k < Dim; ++k) d += (s[i][k] - s[j][k]) * (s[i][k] - s[j][k]);
      h = std::max(h, std::sqrt(d));
    }
  return h;
}

}  // namespace detail

/// Signed volume (area in 2D); positive for counter-clockwise / right-handed order.
template <int Dim>
double signed_volume(const Simplex<Dim>& s) {
  std::array<std::array<double, Dim>, Dim> m{};
  for (int r = 0; r < Dim; ++r)
    for (int c = 0; c < Dim; ++c) m[r][c] = s[c + 1][r] - s[0][r];
  return detail::determinant<Dim>(m) / detail::factorial<Dim>();
}

template <int Dim>
bool is_degenerate(const Simplex<Dim>& s) {
  const double h = detail::max_edge<Dim>(s);
  return !(std::abs(signed_volume<Dim>(s)) > 1e-12 * std::pow(h, Dim));
}

template <int Dim>
void require_nondegenerate(const Simplex<Dim>& s) {
  if (is_degenerate<Dim>(s)) throw DomainError("degenerate simplex");
}

/// Gradients of the barycentric coordinates, one per vertex.
template <int Dim>
std::array<Point<Dim>, Dim + 1> barycentric_gradients(const Simplex<Dim>& s) {
  require_nondegenerate<Dim>(s);
  // Jacobian columns are edge vectors; the gradients of lambda_1..lambda_Dim
  // are the rows of its inverse.
  std::array<std::array<double, Dim>, Dim> jac{};
  for (int r = 0; r < Dim; ++r)
    for (int c = 0; c < Dim; ++c) jac[r][c] = s[c + 1][r] - s[0][r];
  const double det = detail::determinant<Dim>(jac);
  std::array<Point<Dim>, Dim + 1> g{};
  if constexpr (Dim == 2) {
    g[1] = {jac[1][1] / det, -jac[0][1] / det};
    g[2] = {-jac[1][0] / det, jac[0][0] / det};
  } else {
    for (int i = 0; i < 3; ++i) {
      const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
      for (int j = 0; j < 3; ++j) {
        const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
        // inverse(i, j) = cofactor(j, i) / det
        g[i + 1][j] = (jac[j1][i1] * jac[j2][i2] - jac[j1][i2] * jac[j2][i1]) / det;
      }
    }
  }
  for (int k = 0; k < Dim; ++k) {
    double sum = 0.0;
    for (int i = 1; i <= Dim; ++i) sum += g[i][k];
    g[0][k] = -sum;
  }
  return g;
}

struct ElementStiffness {
  SymMatrix matrix;
  Form form;
};

/// Exact P1 element matrix of the given form.
template <int Dim>
ElementStiffness element_stiffness(const Simplex<Dim>& s, const Material& m, Form form) {
  using Tensor = std::array<std::array<double, Dim>, Dim>;
  constexpr std::size_t ndof = static_cast<std::size_t>(Dim * (Dim + 1));
  const auto grads = barycentric_gradients<Dim>(s);
  const double vol = std::abs(signed_volume<Dim>(s));

  std::vector<Tensor> eps(ndof);
  std::vector<double> div(ndof);
  for (int a = 0; a <= Dim; ++a)
    for (int i = 0; i < Dim; ++i) {
      const std::size_t dof = static_cast<std::size_t>(a * Dim + i);
      Tensor e{};
      // displacement phi_a e_i: du_i/dx_k = grad_a[k]
      for (int k = 0; k < Dim; ++k) {
        e[i][k] += 0.5 * grads[a][k];
        e[k][i] += 0.5 * grads[a][k];
      }
      eps[dof] = e;
      div[dof] = grads[a][i];
    }

  auto contract = [](const Tensor& x, const Tensor& y) {
    double s = 0.0;
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j) s += x[i][j] * y[i][j];
    return s;
  };
  auto stress = [&](std::size_t dof) {
    Tensor c{};
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j) c[i][j] = 2.0 * m.mu * eps[dof][i][j] + (i == j ? m.lambda * div[dof] : 0.0);
    return c;
  };

  Matrix k(ndof, ndof);
  for (std::size_t p = 0; p < ndof; ++p)
    for (std::size_t q = p; q < ndof; ++q) {
      double v = 0.0;
      switch (form) {
        case Form::a:
          v = m.lambda * div[p] * div[q] + 2.0 * m.mu * contract(eps[p], eps[q]);
          break;
        case Form::a1:
          v = div[p] * div[q];
          break;
        case Form::a2:
          v = contract(stress(p), stress(q));
          break;
      }
      k(p, q) = k(q, p) = vol * v;
    }
  return {SymMatrix(std::move(k)), form};
}

/// int sum_ij eps_ij(u) eps_ij(v) in closed form:
/// entry (a,k; b,l) = |T| (delta_kl g_a.g_b + g_a[l] g_b[k]) / 2.
template <int Dim>
SymMatrix strain_gram(const Simplex<Dim>& s) {
  constexpr std::size_t ndof = static_cast<std::size_t>(Dim * (Dim + 1));
  const auto g = barycentric_gradients<Dim>(s);
  const double vol = std::abs(signed_volume<Dim>(s));
  Matrix k(ndof, ndof);
  for (int a = 0; a <= Dim; ++a)
    for (int b = 0; b <= Dim; ++b) {
      double gg = 0.0;
      for (int d = 0; d < Dim; ++d) gg += g[a][d] * g[b][d];
      for (int kk = 0; kk < Dim; ++kk)
        for (int l = 0; l < Dim; ++l)
          k(static_cast<std::size_t>(a * Dim + kk), static_cast<std::size_t>(b * Dim + l)) =
              0.5 * vol * ((kk == l ? gg : 0.0) + g[a][l] * g[b][kk]);
    }
  return SymMatrix(std::move(k));
}

/// Red refinement of one simplex. Nodes are the parent vertices followed by
/// the edge midpoints in lexicographic edge order (01, 02, 12 in 2D;
/// 01, 02, 03, 12, 13, 23 in 3D). Children are positively oriented.
template <int Dim>
struct RedRefinement {
  static constexpr int kEdges = Dim * (Dim + 1) / 2;
  static constexpr int kChildren = Dim == 2 ? 4 : 8;

  std::vector<Point<Dim>> nodes;
  std::array<std::array<int, 2>, kEdges> edges;  ///< parent vertex pair of midpoint node Dim + 1 + e
  std::array<std::array<int, Dim + 1>, kChildren> children;

  Simplex<Dim> child(int c) const {
    Simplex<Dim> s;
    for (int k = 0; k <= Dim; ++k) s[k] = nodes[static_cast<std::size_t>(children[c][k])];
    return s;
  }
};

/// Octahedron diagonal used for the four interior tetrahedra in 3D:
/// 0 = mid(v0 v2)-mid(v1 v3), 1 = mid(v0 v1)-mid(v2 v3), 2 = mid(v0 v3)-mid(v1 v2).
/// Ignored in 2D.
template <int Dim>
RedRefinement<Dim> red_refine(const Simplex<Dim>& s, int diagonal = 0) {
  require_nondegenerate<Dim>(s);
  if (diagonal < 0 || diagonal > 2) throw DomainError("red_refine: diagonal must be 0, 1 or 2");
  RedRefinement<Dim> r;
  r.nodes.assign(s.begin(), s.end());
  int e = 0;
  for (int i = 0; i <= Dim; ++i)
    for (int j = i + 1; j <= Dim; ++j) {
      Point<Dim> mid;
      for (int k = 0; k < Dim; ++k) mid[k] = 0.5 * (s[i][k] + s[j][k]);
      r.nodes.push_back(mid);
      r.edges[e++] = {i, j};
    }
  if constexpr (Dim == 2) {
    constexpr int m01 = 3, m02 = 4, m12 = 5;
    r.children = {{{0, m01, m02}, {m01, 1, m12}, {m02, m12, 2}, {m01, m12, m02}}};
  } else {
    constexpr int m01 = 4, m02 = 5, m03 = 6, m12 = 7, m13 = 8, m23 = 9;
    r.children[0] = {0, m01, m02, m03};
    r.children[1] = {m01, 1, m12, m13};
    r.children[2] = {m02, m12, 2, m23};
    r.children[3] = {m03, m13, m23, 3};
    // Diagonal (p, q); the remaining two opposite pairs (a, a'), (b, b') form
    // the equator cycle a, b, a', b'.
    std::array<int, 6> d{};
    switch (diagonal) {
      case 0: d = {m02, m13, m01, m03, m23, m12}; break;
      case 1: d = {m01, m23, m02, m03, m13, m12}; break;
      default: d = {m03, m12, m01, m02, m23, m13}; break;
    }
    for (int k = 0; k < 4; ++k) r.children[4 + k] = {d[0], d[1], d[2 + k], d[2 + (k + 1) % 4]};
  }
  for (auto& c : r.children) {
    Simplex<Dim> cs;
    for (int k = 0; k <= Dim; ++k) cs[k] = r.nodes[static_cast<std::size_t>(c[k])];
    if (signed_volume<Dim>(cs) < 0.0) std::swap(c[Dim - 1], c[Dim]);
  }
  return r;
}

/// Macro-element stiffness in the two-level hierarchical basis.
struct HierarchicalSplit {
  SymMatrix fine;       ///< assembled on the refined macro-element, nodal basis
  Matrix transform;     ///< J: nodal coefficients = J * hierarchical coefficients
  SymMatrix hb;         ///< J^T fine J
  BlockPartition part;  ///< U = parent vertex DOFs, V = midpoint DOFs
};

template <int Dim>
HierarchicalSplit hierarchical_split(const Simplex<Dim>& parent, const Material& m, Form form, int diagonal = 0) {
  const auto ref = red_refine<Dim>(parent, diagonal);
  const std::size_t nodes = ref.nodes.size();
  const std::size_t n = nodes * Dim;
  Matrix fine(n, n);
  for (int c = 0; c < RedRefinement<Dim>::kChildren; ++c) {
    const auto ke = element_stiffness<Dim>(ref.child(c), m, form);
    for (int a = 0; a <= Dim; ++a)
      for (int i = 0; i < Dim; ++i)
        for (int b = 0; b <= Dim; ++b)
          for (int j = 0; j < Dim; ++j) {
            const auto gp = static_cast<std::size_t>(ref.children[c][a] * Dim + i);
            const auto gq = static_cast<std::size_t>(ref.children[c][b] * Dim + j);
            fine(gp, gq) += ke.matrix(static_cast<std::size_t>(a * Dim + i), static_cast<std::size_t>(b * Dim + j));
          }
  }

  Matrix j = Matrix::identity(n);
  for (int e = 0; e < RedRefinement<Dim>::kEdges; ++e) {
    const int mid = Dim + 1 + e;
    for (int comp = 0; comp < Dim; ++comp)
      for (int end : ref.edges[e]) j(static_cast<std::size_t>(mid * Dim + comp), static_cast<std::size_t>(end * Dim + comp)) = 0.5;
  }

  SymMatrix fine_sym(std::move(fine));
  SymMatrix hb = congruence(fine_sym, j);
  auto part = BlockPartition::leading(static_cast<std::size_t>((Dim + 1) * Dim), n);
  return {std::move(fine_sym), std::move(j), std::move(hb), std::move(part)};
}

/// FNV-1a over the coordinate bit patterns.
template <int Dim>
std::uint64_t geometry_hash(const Simplex<Dim>& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& p : s)
    for (double c : p) {
      std::uint64_t bits;
      std::memcpy(&bits, &c, sizeof bits);
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xffU;
        h *= 0x100000001b3ULL;
      }
    }
  return h;
}

struct ElementGamma {
  GammaResult result;
  Form form;
  Material material;
  int diagonal;
  std::uint64_t geometry;
};

template <int Dim>
ElementGamma gamma_element(const Simplex<Dim>& parent, const Material& m, Form form, int diagonal = 0) {
  const auto split = hierarchical_split<Dim>(parent, m, form, diagonal);
  return {gamma_exact(split.hb, split.part), form, m, diagonal, geometry_hash<Dim>(parent)};
}

/// Simplicial mesh in 2D or 3D. Elements are reoriented on ingest to positive
/// volume; degenerate elements are rejected with their index.
class Mesh {
 public:
  Mesh(int dim, std::vector<std::array<double, 3>> vertices, std::vector<std::vector<std::size_t>> elements)
      : dim_(dim), vertices_(std::move(vertices)), elements_(std::move(elements)) {
    if (dim_ != 2 && dim_ != 3) throw InputError("Mesh: dim must be 2 or 3");
    if (elements_.empty()) throw InputError("Mesh: no elements");
    for (std::size_t e = 0; e < elements_.size(); ++e) {
      auto& el = elements_[e];
      if (el.size() != static_cast<std::size_t>(dim_ + 1))
        throw InputError("Mesh: element " + std::to_string(e) + " must have " + std::to_string(dim_ + 1) + " vertices");
      for (std::size_t v : el)
        if (v >= vertices_.size())
          throw InputError("Mesh: element " + std::to_string(e) + " references vertex " + std::to_string(v) +
                           " out of range");
      const bool degenerate = dim_ == 2 ? is_degenerate<2>(simplex<2>(e)) : is_degenerate<3>(simplex<3>(e));
      if (degenerate) throw DomainError("Mesh: element " + std::to_string(e) + " is degenerate");
      const double vol = dim_ == 2 ? signed_volume<2>(simplex<2>(e)) : signed_volume<3>(simplex<3>(e));
      if (vol < 0.0) std::swap(el[el.size() - 2], el[el.size() - 1]);
    }
  }

  int dim() const noexcept { return dim_; }
  std::size_t element_count() const noexcept { return elements_.size(); }
  const std::vector<std::array<double, 3>>& vertices() const noexcept { return vertices_; }
  const std::vector<std::vector<std::size_t>>& elements() const noexcept { return elements_; }

  template <int Dim>
  Simplex<Dim> simplex(std::size_t e) const {
    Simplex<Dim> s;
    for (int k = 0; k <= Dim; ++k)
      for (int c = 0; c < Dim; ++c) s[k][c] = vertices_[elements_[e][static_cast<std::size_t>(k)]][c];
    return s;
  }

 private:
  int dim_;
  std::vector<std::array<double, 3>> vertices_;
  std::vector<std::vector<std::size_t>> elements_;
};

struct MeshGamma {
  std::vector<ElementGamma> elements;  ///< in element index order
  double max_gamma2 = 0.0;
  std::size_t argmax = 0;
};

/// Element-by-element macro analysis; elements may run in parallel, results
/// are stored by element index.
inline MeshGamma gamma_mesh(const Mesh& mesh, const Material& m, Form form, int diagonal = 0) {
  std::vector<std::optional<ElementGamma>> slots(mesh.element_count());
  parallel_for(mesh.element_count(), [&](std::size_t e) {
    try {
      slots[e] = mesh.dim() == 2 ? gamma_element<2>(mesh.simplex<2>(e), m, form, diagonal)
                                 : gamma_element<3>(mesh.simplex<3>(e), m, form, diagonal);
    } catch (const Error& err) {
      throw DomainError("element " + std::to_string(e) + ": " + err.what());
    }
  });
  MeshGamma out;
  for (std::size_t e = 0; e < slots.size(); ++e) {
    out.elements.push_back(std::move(*slots[e]));
    if (e == 0 || out.elements[e].result.gamma2 > out.max_gamma2) {
      out.max_gamma2 = out.elements[e].result.gamma2;
      out.argmax = e;
    }
  }
  return out;
}

}  // namespace cbs
