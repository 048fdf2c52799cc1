#include "lavlab/mollify.hpp"

#include <algorithm>
#include <cmath>

#include "lavlab/common.hpp"
#include "lavlab/parallel.hpp"

namespace lavlab {

ShrinkParams::ShrinkParams(double delta_, double R_, double domain_diameter)
    : delta(delta_), R(R_) {
  if (!(delta > 0.0)) throw ConfigError("shrink: delta > 0 required");
  if (!(R > 0.0)) throw ConfigError("shrink: R > 0 required");
  if (!(delta < R / 4.0))
    throw ConfigError("shrink: delta < R/4 required for compact support in U");
  kappa = 1.0 - delta / R;
  tau = 2.0 * (domain_diameter / R + 1.0);
}

ShrinkParams::ShrinkParams(double delta_, const StarDomain& U)
    : ShrinkParams(delta_, U.star_radius(), U.diameter()) {}

namespace {

// Kernel footprint lattice: tensor midpoint offsets over [-delta, delta]^d
// with precomputed quadrature weights (the kernel argument x - y depends only
// on the offset).
struct Footprint {
  int d = 0;
  std::vector<Vec> offset;         // y = x + offset
  std::vector<Vec> offset_shrunk;  // offset / kappa, for the read point
  std::vector<double> weight;      // rho_delta(-offset) * cell volume
  std::vector<Vec> grad_weight;    // grad rho_delta(-offset) * cell volume
};

int footprint_points(const Grid& g, double delta) {
  const double h = g.min_spacing();
  if (h > delta / 4.0)
    warn("mollify: grid spacing " + std::to_string(h) + " coarser than delta/4 (delta=" +
         std::to_string(delta) + "); field resolution limits the quadrature");
  const int raw = static_cast<int>(std::ceil(2.0 * delta / h));
  return std::clamp(raw, 12, 48);
}

Footprint make_footprint(const Grid& g, double delta, double kappa, const Kernel& ker,
                         bool with_grad) {
  Footprint fp;
  fp.d = g.dim();
  const int nq = footprint_points(g, delta);
  const double hq = 2.0 * delta / nq;
  const double w = std::pow(hq, fp.d);
  std::size_t total = 1;
  for (int a = 0; a < fp.d; ++a) total *= static_cast<std::size_t>(nq);
  fp.offset.reserve(total);
  fp.weight.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t r = k;
    Vec off(fp.d);
    for (int a = 0; a < fp.d; ++a) {
      off[a] = -delta + (static_cast<double>(r % nq) + 0.5) * hq;
      r /= nq;
    }
    const double rho = ker.scaled(-off, delta);
    Vec grho = with_grad ? ker.scaled_grad(-off, delta) : Vec(fp.d);
    if (rho == 0.0 && (!with_grad || grho.norm2() == 0.0)) continue;
    fp.offset.push_back(off);
    fp.offset_shrunk.push_back(off * (1.0 / kappa));
    fp.weight.push_back(rho * w);
    if (with_grad) fp.grad_weight.push_back(grho * w);
  }
  return fp;
}

void check_compat(const Grid& g, const StarDomain& U, const Kernel& ker) {
  if (g.dim() != U.dim() || g.dim() != ker.dim())
    throw ConfigError("mollify: dimension mismatch between field, domain and kernel");
}

}  // namespace

ScalarField mollify_shrink(const ScalarField& xi, const StarDomain& U, const ShrinkParams& prm,
                           const Kernel& kernel) {
  check_compat(xi.grid, U, kernel);
  const Footprint fp = make_footprint(xi.grid, prm.delta, prm.kappa, kernel, false);
  const Point x0 = U.star_center();
  const double inv_kappa = 1.0 / prm.kappa;
  ScalarField out = ScalarField::zeros(xi.grid);
  out.zero_outside = true;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(xi.grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Point x = xi.grid.node(static_cast<std::size_t>(i));
    const Point base = x0 + (x - x0) * inv_kappa;
    double acc = 0.0;
    for (std::size_t k = 0; k < fp.offset.size(); ++k) {
      const Point y = x + fp.offset[k];
      if (!U.contains(y)) continue;
      const double v = xi.at(base + fp.offset_shrunk[k]);
      if (v != 0.0) acc += fp.weight[k] * v;
    }
    out.values[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

VectorField mollify_shrink(const VectorField& xi, const StarDomain& U, const ShrinkParams& prm,
                           const Kernel& kernel) {
  check_compat(xi.grid, U, kernel);
  const Footprint fp = make_footprint(xi.grid, prm.delta, prm.kappa, kernel, false);
  const Point x0 = U.star_center();
  const double inv_kappa = 1.0 / prm.kappa;
  VectorField out = VectorField::zeros(xi.grid, xi.ncomp);
  out.zero_outside = true;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(xi.grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Point x = xi.grid.node(static_cast<std::size_t>(i));
    const Point base = x0 + (x - x0) * inv_kappa;
    Grad acc(xi.ncomp);
    for (std::size_t k = 0; k < fp.offset.size(); ++k) {
      const Point y = x + fp.offset[k];
      if (!U.contains(y)) continue;
      const Grad v = xi.at(base + fp.offset_shrunk[k]);
      for (int c = 0; c < xi.ncomp; ++c) acc[c] += fp.weight[k] * v[c];
    }
    out.set_vec(static_cast<std::size_t>(i), acc);
  }
  return out;
}

GradientRoutes mollify_gradient(const ScalarField& phi, const StarDomain& U,
                                const ShrinkParams& prm, const Kernel& kernel) {
  check_compat(phi.grid, U, kernel);
  GradientRoutes out;
  // route (a): (1/kappa) S_delta(grad phi)
  VectorField g = gradient(phi);
  g.zero_outside = true;
  out.primary = mollify_shrink(g, U, prm, kernel);
  const double inv_kappa = 1.0 / prm.kappa;
  for (double& v : out.primary.values) v *= inv_kappa;

  // route (b): convolution with grad rho_delta of the shrunk field
  const Footprint fp = make_footprint(phi.grid, prm.delta, prm.kappa, kernel, true);
  const Point x0 = U.star_center();
  out.convolution = VectorField::zeros(phi.grid, phi.grid.dim());
  out.convolution.zero_outside = true;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(phi.grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Point x = phi.grid.node(static_cast<std::size_t>(i));
    const Point base = x0 + (x - x0) * inv_kappa;
    Grad acc(phi.grid.dim());
    for (std::size_t k = 0; k < fp.offset.size(); ++k) {
      const Point y = x + fp.offset[k];
      if (!U.contains(y)) continue;
      const double v = phi.at(base + fp.offset_shrunk[k]);
      if (v != 0.0)
        // grad_x rho_delta(x - y) at offset y - x: chain rule sign already in
        // grad_weight (kernel is even, its gradient odd)
        for (int c = 0; c < phi.grid.dim(); ++c) acc[c] += fp.grad_weight[k][c] * v;
    }
    out.convolution.set_vec(static_cast<std::size_t>(i), acc);
  }
  out.l1_discrepancy = l1_distance(out.primary, out.convolution);
  const double denom = std::max(l1_norm(out.primary), 1e-300);
  out.rel_l1_discrepancy = out.l1_discrepancy / denom;
  return out;
}

double linf_gradient_bound_defect(const ScalarField& phi, const StarDomain& U,
                                  const ShrinkParams& prm, const Kernel& kernel) {
  const GradientRoutes gr = mollify_gradient(phi, U, prm, kernel);
  const double lhs = gr.primary.max_norm();
  const double rhs = phi.max_abs() * kernel.grad_l1() / prm.delta;
  return std::max(0.0, lhs - rhs);
}

double holder_gradient_bound_defect(const ScalarField& phi, double gamma, const StarDomain& U,
                                    const ShrinkParams& prm, const Kernel& kernel) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("holder bound: gamma in (0,1]");
  const GradientRoutes gr = mollify_gradient(phi, U, prm, kernel);
  const double lhs = gr.primary.max_norm();
  const double sem = holder_seminorm(phi, gamma);
  const double rhs =
      std::pow(prm.delta, gamma - 1.0) / std::pow(prm.kappa, gamma) * sem * kernel.grad_l1();
  return std::max(0.0, lhs - rhs);
}

ScalarField global_smooth(const ScalarField& phi, const DomainDecomposition& decomp,
                          double delta, const Kernel& kernel) {
  if (decomp.pieces.empty()) throw ConfigError("global_smooth: empty decomposition");
  const double Rmin = decomp.min_star_radius();
  if (!(delta < Rmin / 4.0))
    throw ConfigError("global_smooth: delta < min_i R_i / 4 required");
  ScalarField out = ScalarField::zeros(phi.grid);
  out.zero_outside = true;
  for (const auto& piece : decomp.pieces) {
    ScalarField weighted = phi;
    weighted.zero_outside = true;
    for (std::size_t i = 0; i < weighted.values.size(); ++i)
      weighted.values[i] *= piece.theta.values[i];
    // kappa from the global minimum radius, as in the covering argument
    double diam = piece.domain.diameter();
    const ShrinkParams prm(delta, Rmin, diam);
    const ScalarField s = mollify_shrink(weighted, piece.domain, prm, kernel);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += s.values[i];
  }
  return out;
}

ScalarField truncate(const ScalarField& phi, double k) {
  if (!(k > 0.0)) throw ConfigError("truncate: k > 0 required");
  ScalarField out = phi;
  for (double& v : out.values) v = std::min(k, std::max(-k, v));
  return out;
}

bool outside_support_bound(const Point& x, const StarDomain& U, const ShrinkParams& prm) {
  const Point z = U.star_center() + (x - U.star_center()) * (1.0 / prm.kappa);
  return U.distance_outside(z) > prm.delta / prm.kappa + 1e-12;
}

namespace {

// Midpoint quadrature over the grid box of |f| at cell centers.
template <class AbsAt>
double cell_quadrature(const Grid& g, AbsAt&& f) {
  const int d = g.dim();
  std::size_t cells = 1;
  for (int a = 0; a < d; ++a) cells *= static_cast<std::size_t>(g.shape[a] - 1);
  std::vector<double> buf(cells);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(cells); ++k) {
    std::size_t r = static_cast<std::size_t>(k);
    Point c(d);
    for (int a = 0; a < d; ++a) {
      const std::size_t m = static_cast<std::size_t>(g.shape[a] - 1);
      c[a] = g.origin[a] + (static_cast<double>(r % m) + 0.5) * g.spacing[a];
      r /= m;
    }
    buf[static_cast<std::size_t>(k)] = f(c);
  }
  return ordered_sum(buf) * g.cell_volume();
}

}  // namespace

double l1_norm(const ScalarField& f) {
  return cell_quadrature(f.grid, [&](const Point& c) { return std::abs(f.at(c)); });
}

double l1_norm(const VectorField& f) {
  return cell_quadrature(f.grid, [&](const Point& c) { return f.at(c).norm(); });
}

double l1_distance(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid == b.grid)) throw ConfigError("l1_distance: grid mismatch");
  return cell_quadrature(a.grid, [&](const Point& c) { return std::abs(a.at(c) - b.at(c)); });
}

double l1_distance(const VectorField& a, const VectorField& b) {
  if (!(a.grid == b.grid) || a.ncomp != b.ncomp)
    throw ConfigError("l1_distance: field mismatch");
  return cell_quadrature(a.grid, [&](const Point& c) { return (a.at(c) - b.at(c)).norm(); });
}

}  // namespace lavlab
