#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "cergm/errors.hpp"
#include "cergm/graph.hpp"

namespace cergm {

/// Edge-probability matrix x on N vertices: symmetric, zero diagonal, entries
/// in [0, 1]. The n = C(N, 2) free coordinates are the pairs i < j; writing
/// one coordinate moves its symmetric partner with it.
template <typename Scalar>
class EdgeVars {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit EdgeVars(int vertex_count, Scalar fill = Scalar(0)) : x_(Matrix::Constant(vertex_count, vertex_count, fill)) {
    if (vertex_count < 1) throw DomainError("EdgeVars needs N >= 1");
    if (!(fill >= Scalar(0) && fill <= Scalar(1))) throw DomainError("edge variable outside [0, 1]");
    x_.diagonal().setZero();
  }

  static EdgeVars from_matrix(Matrix x) {
    if (x.rows() != x.cols() || x.rows() < 1) throw DomainError("EdgeVars matrix must be square");
    EdgeVars out(static_cast<int>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (x(i, i) != Scalar(0)) throw DomainError("EdgeVars diagonal must be zero");
      for (Eigen::Index j = i + 1; j < x.cols(); ++j) {
        if (x(i, j) != x(j, i)) throw DomainError("EdgeVars matrix must be symmetric");
        out.set({static_cast<int>(i), static_cast<int>(j)}, x(i, j));
      }
    }
    return out;
  }

  static EdgeVars from_graph(const SimpleGraph& g) {
    EdgeVars out(g.vertex_count());
    for (int u = 0; u < g.vertex_count(); ++u)
      for (int v = u + 1; v < g.vertex_count(); ++v)
        if (g.has_edge(u, v)) out.set({u, v}, Scalar(1));
    return out;
  }

  int vertex_count() const { return static_cast<int>(x_.rows()); }
  int free_count() const { return pair_count(vertex_count()); }
  Scalar operator()(int i, int j) const { return x_(i, j); }
  Scalar operator[](VertexPair p) const { return x_(p.u, p.v); }
  const Matrix& matrix() const { return x_; }

  void set(VertexPair p, Scalar value) {
    if (p.u == p.v) throw DomainError("diagonal edge variables are fixed at zero");
    if (!(value >= Scalar(0) && value <= Scalar(1))) throw DomainError("edge variable outside [0, 1]");
    x_(p.u, p.v) = value;
    x_(p.v, p.u) = value;
  }

  // Sets a coordinate without the [0, 1] check; finite-difference stencils
  // step slightly outside the cube at the faces.
  void set_unchecked(VertexPair p, Scalar value) {
    x_(p.u, p.v) = value;
    x_(p.v, p.u) = value;
  }

  template <typename Other>
  EdgeVars<Other> cast() const {
    EdgeVars<Other> out(vertex_count());
    for (int i = 0; i < vertex_count(); ++i)
      for (int j = i + 1; j < vertex_count(); ++j) out.set_unchecked({i, j}, static_cast<Other>(x_(i, j)));
    return out;
  }

 private:
  Matrix x_;
};

namespace detail {

// Sum over maps q: V(H) -> [N] of the product of x over motif edges, with some
// motif vertices pinned and some motif edges left out of the product.
template <typename Scalar>
class Contraction {
 public:
  Contraction(const GraphMotif& h, const EdgeVars<Scalar>& x) : h_(h), x_(x) {}

  Scalar operator()(const std::vector<int>& pins, const std::vector<bool>& skipped) {
    const int k = h_.vertex_count();
    order_.clear();
    back_.clear();
    std::vector<int> slot_of(static_cast<std::size_t>(k), -1);
    auto place = [&](int v) {
      std::vector<std::pair<int, int>> back;
      for (int e = 0; e < h_.edge_count(); ++e) {
        if (skipped[static_cast<std::size_t>(e)]) continue;
        const auto [a, b] = h_.edges()[static_cast<std::size_t>(e)];
        const int other = a == v ? b : (b == v ? a : -1);
        if (other >= 0 && slot_of[static_cast<std::size_t>(other)] >= 0)
          back.emplace_back(slot_of[static_cast<std::size_t>(other)], e);
      }
      slot_of[static_cast<std::size_t>(v)] = static_cast<int>(order_.size());
      order_.push_back(v);
      back_.push_back(std::move(back));
    };
    for (int v = 0; v < k; ++v)
      if (pins[static_cast<std::size_t>(v)] >= 0) place(v);
    for (int v = 0; v < k; ++v)
      if (pins[static_cast<std::size_t>(v)] < 0) place(v);
    image_.assign(order_.size(), 0);
    pins_ = &pins;
    return sum_from(0);
  }

 private:
  Scalar sum_from(std::size_t pos) {
    if (pos == order_.size()) return Scalar(1);
    const int v = order_[pos];
    const int pin = (*pins_)[static_cast<std::size_t>(v)];
    const int lo = pin >= 0 ? pin : 0;
    const int hi = pin >= 0 ? pin + 1 : x_.vertex_count();
    Scalar total(0);
    for (int g = lo; g < hi; ++g) {
      Scalar factor(1);
      for (const auto& [slot, e] : back_[pos]) factor *= x_(g, image_[static_cast<std::size_t>(slot)]);
      if (factor == Scalar(0)) continue;
      image_[pos] = g;
      total += factor * sum_from(pos + 1);
    }
    return total;
  }

  const GraphMotif& h_;
  const EdgeVars<Scalar>& x_;
  std::vector<int> order_;
  std::vector<std::vector<std::pair<int, int>>> back_;
  std::vector<int> image_;
  const std::vector<int>* pins_ = nullptr;
};

template <typename Scalar>
Scalar motif_scale(const GraphMotif& h, int vertex_count) {
  using std::pow;
  return pow(Scalar(vertex_count), Scalar(2 - h.vertex_count()));
}

template <typename Scalar>
Scalar t_eval_generic(const GraphMotif& h, const EdgeVars<Scalar>& x) {
  Contraction<Scalar> sum(h, x);
  const std::vector<int> pins(static_cast<std::size_t>(h.vertex_count()), -1);
  const std::vector<bool> skipped(static_cast<std::size_t>(h.edge_count()), false);
  return motif_scale<Scalar>(h, x.vertex_count()) * sum(pins, skipped);
}

// Product rule over motif edges: d/dx_p of prod_l x_{q_l} where each factor
// mapped onto the pair p contributes 1.
template <typename Scalar>
Scalar t_grad_generic(const GraphMotif& h, const EdgeVars<Scalar>& x, VertexPair p) {
  Contraction<Scalar> sum(h, x);
  std::vector<int> pins(static_cast<std::size_t>(h.vertex_count()), -1);
  std::vector<bool> skipped(static_cast<std::size_t>(h.edge_count()), false);
  Scalar total(0);
  for (int l = 0; l < h.edge_count(); ++l) {
    const auto [a, b] = h.edges()[static_cast<std::size_t>(l)];
    skipped[static_cast<std::size_t>(l)] = true;
    for (const auto& [ia, ib] : {std::pair{p.u, p.v}, std::pair{p.v, p.u}}) {
      pins[static_cast<std::size_t>(a)] = ia;
      pins[static_cast<std::size_t>(b)] = ib;
      total += sum(pins, skipped);
    }
    pins[static_cast<std::size_t>(a)] = pins[static_cast<std::size_t>(b)] = -1;
    skipped[static_cast<std::size_t>(l)] = false;
  }
  return motif_scale<Scalar>(h, x.vertex_count()) * total;
}

}  // namespace detail

/// T(x) = N^{-(k-2)} sum_{q in [N]^k} prod_{{l,l'} in E(H)} x_{q_l q_l'}.
/// On a 0/1 matrix this is N^2 times the homomorphism density of the graph.
template <typename Scalar>
Scalar t_eval(const GraphMotif& h, const EdgeVars<Scalar>& x) {
  if (h.vertex_count() < 2) throw DomainError("t_eval needs a motif with k >= 2");
  const auto& m = x.matrix();
  const Scalar n = Scalar(x.vertex_count());
  using std::pow;
  switch (h.kind()) {
    case MotifKind::Edge:
      return m.sum();
    case MotifKind::Triangle:
      return (m * m * m).trace() / n;
    case MotifKind::Star: {
      const auto rows = m.rowwise().sum();
      Scalar total(0);
      for (Eigen::Index v = 0; v < rows.size(); ++v) total += pow(rows(v), h.star_degree());
      return total / pow(n, h.star_degree() - 1);
    }
    case MotifKind::Generic:
      break;
  }
  return detail::t_eval_generic(h, x);
}

/// Partial derivative of T with respect to the free coordinate x_{ij}, i < j.
template <typename Scalar>
Scalar t_grad(const GraphMotif& h, const EdgeVars<Scalar>& x, VertexPair p) {
  if (p.u == p.v) throw DomainError("t_grad needs a pair of distinct vertices");
  p = p.normalized();
  const auto& m = x.matrix();
  const Scalar n = Scalar(x.vertex_count());
  using std::pow;
  switch (h.kind()) {
    case MotifKind::Edge:
      return Scalar(2);
    case MotifKind::Triangle:
      return Scalar(6) * m.row(p.u).dot(m.row(p.v)) / n;
    case MotifKind::Star: {
      const int s = h.star_degree();
      const Scalar ru = m.row(p.u).sum(), rv = m.row(p.v).sum();
      return Scalar(s) * (pow(ru, s - 1) + pow(rv, s - 1)) / pow(n, s - 1);
    }
    case MotifKind::Generic:
      break;
  }
  return detail::t_grad_generic(h, x, p);
}

/// Second partial derivative of T with respect to free coordinates p and r.
/// For p == r this is the diagonal entry, nonzero only when two motif edges
/// can land on the same pair (stars and paths, not the triangle).
template <typename Scalar>
Scalar t_hess(const GraphMotif& h, const EdgeVars<Scalar>& x, VertexPair p, VertexPair r) {
  if (p.u == p.v || r.u == r.v) throw DomainError("t_hess needs pairs of distinct vertices");
  detail::Contraction<Scalar> sum(h, x);
  std::vector<int> pins(static_cast<std::size_t>(h.vertex_count()), -1);
  std::vector<bool> skipped(static_cast<std::size_t>(h.edge_count()), false);
  Scalar total(0);
  const auto& edges = h.edges();
  for (int l = 0; l < h.edge_count(); ++l) {
    for (int l2 = 0; l2 < h.edge_count(); ++l2) {
      if (l2 == l) continue;
      const auto [a, b] = edges[static_cast<std::size_t>(l)];
      const auto [c, d] = edges[static_cast<std::size_t>(l2)];
      skipped[static_cast<std::size_t>(l)] = skipped[static_cast<std::size_t>(l2)] = true;
      for (const auto& [ia, ib] : {std::pair{p.u, p.v}, std::pair{p.v, p.u}}) {
        for (const auto& [ic, id] : {std::pair{r.u, r.v}, std::pair{r.v, r.u}}) {
          std::fill(pins.begin(), pins.end(), -1);
          bool consistent = true;
          auto pin = [&](int vtx, int img) {
            int& slot = pins[static_cast<std::size_t>(vtx)];
            if (slot >= 0 && slot != img) consistent = false;
            slot = img;
          };
          pin(a, ia);
          pin(b, ib);
          pin(c, ic);
          pin(d, id);
          if (consistent) total += sum(pins, skipped);
        }
      }
      skipped[static_cast<std::size_t>(l)] = skipped[static_cast<std::size_t>(l2)] = false;
    }
  }
  return detail::motif_scale<Scalar>(h, x.vertex_count()) * total;
}

struct CoveringConstants {
  double c = 1.0;
  double C = 1.0;
};

/// Closed-form supremum-norm bounds on T and its derivatives, plus the log of
/// the gradient covering-set cardinality bound as a function of epsilon. The
/// covering constants are caller-supplied and carry no rigorous value.
struct TDerivativeBounds {
  int vertex_count = 0;
  int motif_vertices = 0;
  int motif_edges = 0;
  CoveringConstants covering;
  double sup_T = 0.0;
  double sup_grad = 0.0;
  double sup_hess_overlap = 0.0;   // |{i,j,i',j'}| = 2 or 3
  double sup_hess_disjoint = 0.0;  // |{i,j,i',j'}| = 4

  // (c m^4 k^4 N / eps^4) log(C m^4 k^4 / eps^4)
  double covering_log_cardinality(double eps) const;
  // Case bound for the pair of free coordinates (p, r).
  double hess_bound(VertexPair p, VertexPair r) const;
};

TDerivativeBounds t_derivative_bounds(const GraphMotif& h, int vertex_count, CoveringConstants covering = {});

// Number of distinct vertices among the two pairs (2, 3 or 4).
int distinct_vertices(VertexPair p, VertexPair r);

}  // namespace cergm
