#include "lavlab/kernel.hpp"

#include <cmath>

#include "lavlab/common.hpp"

namespace lavlab {

namespace {

// Midpoint tensor quadrature of f over [-1,1]^dim.
template <class F>
double box_quadrature(int dim, int n, F&& f) {
  const double h = 2.0 / n;
  double acc = 0.0;
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t r = k;
    Vec x(dim);
    for (int a = 0; a < dim; ++a) {
      x[a] = -1.0 + (static_cast<double>(r % n) + 0.5) * h;
      r /= n;
    }
    acc += f(x);
  }
  return acc * std::pow(h, dim);
}

template <class F>
double adaptive_box_quadrature(int dim, F&& f, double tol, int n0, int nmax) {
  double prev = box_quadrature(dim, n0, f);
  for (int n = 2 * n0; n <= nmax; n *= 2) {
    const double cur = box_quadrature(dim, n, f);
    if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

double Kernel::profile_value(double r) const {
  if (r >= 1.0) return 0.0;
  switch (profile_) {
    case Profile::Bump:
      return std::exp(-1.0 / (1.0 - r * r));
    case Profile::Tent:
      return 1.0 - r;
  }
  return 0.0;
}

double Kernel::profile_deriv(double r) const {
  if (r >= 1.0) return 0.0;
  switch (profile_) {
    case Profile::Bump: {
      const double s = 1.0 - r * r;
      return profile_value(r) * (-2.0 * r / (s * s));
    }
    case Profile::Tent:
      return -1.0;
  }
  return 0.0;
}

Kernel::Kernel(Profile p, int dim) : profile_(p), dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw ConfigError("kernel: unsupported dimension");
  Z_ = adaptive_box_quadrature(
      dim, [this](const Vec& x) { return profile_value(x.norm()); }, 1e-11, 64,
      dim == 1 ? 1 << 16 : 1 << 11);
  grad_l1_ = adaptive_box_quadrature(
      dim, [this](const Vec& x) { return std::abs(profile_deriv(x.norm())); }, 1e-8, 64,
      dim == 1 ? 1 << 16 : 1 << 11);
  grad_l1_ /= Z_;
}

Kernel Kernel::bump(int dim) { return Kernel(Profile::Bump, dim); }
Kernel Kernel::tent(int dim) { return Kernel(Profile::Tent, dim); }

double Kernel::operator()(const Vec& x) const { return profile_value(x.norm()) / Z_; }

Vec Kernel::grad(const Vec& x) const {
  const double r = x.norm();
  if (r == 0.0 || r >= 1.0) return Vec(dim_);
  return x * (profile_deriv(r) / (Z_ * r));
}

double Kernel::scaled(const Vec& x, double delta) const {
  return (*this)(x * (1.0 / delta)) / std::pow(delta, dim_);
}

Vec Kernel::scaled_grad(const Vec& x, double delta) const {
  return grad(x * (1.0 / delta)) * (1.0 / std::pow(delta, dim_ + 1));
}

double Kernel::mass(int points_per_axis) const {
  return box_quadrature(dim_, points_per_axis,
                        [this](const Vec& x) { return (*this)(x); });
}

double Kernel::grad_l1_scaled(double delta, int points_per_axis) const {
  // integrate over [-delta, delta]^n by rescaling the unit lattice
  const double h = 2.0 * delta / points_per_axis;
  double acc = 0.0;
  std::size_t total = 1;
  for (int a = 0; a < dim_; ++a) total *= static_cast<std::size_t>(points_per_axis);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t r = k;
    Vec x(dim_);
    for (int a = 0; a < dim_; ++a) {
      x[a] = -delta + (static_cast<double>(r % points_per_axis) + 0.5) * h;
      r /= points_per_axis;
    }
    acc += scaled_grad(x, delta).norm();
  }
  return acc * std::pow(h, dim_);
}

}  // namespace lavlab
