#pragma once

#include "lavlab/domain.hpp"
#include "lavlab/grid.hpp"
#include "lavlab/kernel.hpp"

namespace lavlab {

// Parameters of the shrinking convolution S_{U,delta} on a domain star-shaped
// with respect to B(x0, R): kappa = 1 - delta/R is the shrink factor and
// tau = 2(diam/R + 1) the ball-inflation factor used by the balance-condition
// bookkeeping.  Requires delta < R/4 (then kappa >= 3/4 and the output is
// compactly supported in U).
struct ShrinkParams {
  double delta = 0.0;
  double R = 0.0;
  double kappa = 0.0;
  double tau = 0.0;

  ShrinkParams(double delta, double R, double domain_diameter);
  ShrinkParams(double delta, const StarDomain& U);
};

// S_{U,delta} xi (x) = int_U rho_delta(x-y) xi(x0 + (y-x0)/kappa) dy.
// Tensor midpoint quadrature over the kernel footprint, at least 12 points
// per axis and never coarser than the field grid; off-grid reads of xi use
// multilinear interpolation with zero extension.  Parallel over output nodes
// with a fixed per-node summation order (bit-stable across thread counts).
ScalarField mollify_shrink(const ScalarField& xi, const StarDomain& U, const ShrinkParams& prm,
                           const Kernel& kernel);
VectorField mollify_shrink(const VectorField& xi, const StarDomain& U, const ShrinkParams& prm,
                           const Kernel& kernel);

// Gradient of the smoothed field by both algebraic routes:
//   primary      (1/kappa) S_{U,delta}(grad phi)
//   convolution  (grad rho_delta) * phi(x0 + (.-x0)/kappa)
// The routes coincide in the continuum; their discrete L1 discrepancy is a
// quadrature diagnostic.
struct GradientRoutes {
  VectorField primary;
  VectorField convolution;
  double l1_discrepancy = 0.0;
  double rel_l1_discrepancy = 0.0;
};
GradientRoutes mollify_gradient(const ScalarField& phi, const StarDomain& U,
                                const ShrinkParams& prm, const Kernel& kernel);

// Positive part of ||grad S_delta phi||_inf - delta^{-1} ||phi||_inf ||grad rho||_1.
double linf_gradient_bound_defect(const ScalarField& phi, const StarDomain& U,
                                  const ShrinkParams& prm, const Kernel& kernel);

// Positive part of
// ||grad S_delta phi||_inf - delta^{gamma-1} kappa^{-gamma} [phi]_{0,gamma} ||grad rho||_1.
double holder_gradient_bound_defect(const ScalarField& phi, double gamma, const StarDomain& U,
                                    const ShrinkParams& prm, const Kernel& kernel);

// Global smoother over a star-shaped cover with partition of unity:
// S_delta(phi) = sum_i S_{Omega_i, delta}(theta_i phi), with the shrink factor
// taken from the minimal piece radius.
ScalarField global_smooth(const ScalarField& phi, const DomainDecomposition& decomp,
                          double delta, const Kernel& kernel);

// Nodewise clamp T_k.
ScalarField truncate(const ScalarField& phi, double k);

// True when the node must be exactly zero in S_{U,delta}(xi) for any xi
// supported in U: the inverse shrink point lies farther than delta/kappa
// from U.
bool outside_support_bound(const Point& x, const StarDomain& U, const ShrinkParams& prm);

// L1 norm (midpoint quadrature over the grid box) used by the convergence
// diagnostics.
double l1_norm(const ScalarField& f);
double l1_norm(const VectorField& f);
double l1_distance(const VectorField& a, const VectorField& b);
double l1_distance(const ScalarField& a, const ScalarField& b);

}  // namespace lavlab
