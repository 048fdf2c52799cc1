#pragma once

#include "lavlab/vec.hpp"

namespace lavlab {

// Radial mollifier profile on B(0,1), normalized to unit mass at
// construction.  The classical C^infinity bump is the production kernel; the
// piecewise-linear tent profile exists for tests (closed-form gradient mass).
class Kernel {
 public:
  enum class Profile { Bump, Tent };

  static Kernel bump(int dim);
  static Kernel tent(int dim);

  int dim() const { return dim_; }
  Profile profile() const { return profile_; }
  // Mass of the unnormalized profile; rho = profile / normalization.
  double normalization() const { return Z_; }

  double operator()(const Vec& x) const;
  Vec grad(const Vec& x) const;
  // rho_delta(x) = rho(x/delta) / delta^n and its gradient
  double scaled(const Vec& x, double delta) const;
  Vec scaled_grad(const Vec& x, double delta) const;

  // Quadrature of |grad rho| over B(0,1); adaptive doubling, cached.
  double grad_l1() const { return grad_l1_; }
  // Midpoint quadrature of rho over [-1,1]^n at the given resolution
  // (invariant check: converges to 1).
  double mass(int points_per_axis) const;
  // Quadrature of |grad rho_delta|; equals grad_l1() / delta analytically.
  double grad_l1_scaled(double delta, int points_per_axis = 512) const;

 private:
  Kernel(Profile p, int dim);
  double profile_value(double r) const;   // unnormalized
  double profile_deriv(double r) const;

  Profile profile_ = Profile::Bump;
  int dim_ = 1;
  double Z_ = 1.0;
  double grad_l1_ = 0.0;
};

}  // namespace lavlab
