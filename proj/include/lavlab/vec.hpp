#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>

namespace lavlab {

inline constexpr int kMaxDim = 4;

// Small fixed-capacity vector.  Used both for spatial points x in the domain
// and for gradient values xi; dimension is runtime but capped at kMaxDim
// (desk scale is n <= 2, builders ship for n <= 2).
class Vec {
 public:
  Vec() = default;
  explicit Vec(int dim) : dim_(dim) { assert(dim >= 0 && dim <= kMaxDim); }
  Vec(std::initializer_list<double> xs) : dim_(static_cast<int>(xs.size())) {
    assert(dim_ <= kMaxDim);
    int i = 0;
    for (double v : xs) x_[i++] = v;
  }

  static Vec zero(int dim) { return Vec(dim); }

  int dim() const { return dim_; }
  double operator[](int i) const { return x_[i]; }
  double& operator[](int i) { return x_[i]; }

  double dot(const Vec& o) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += x_[i] * o.x_[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  double max_abs() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s = std::max(s, std::abs(x_[i]));
    return s;
  }
  bool finite() const {
    for (int i = 0; i < dim_; ++i)
      if (!std::isfinite(x_[i])) return false;
    return true;
  }

  Vec operator+(const Vec& o) const {
    Vec r(dim_);
    for (int i = 0; i < dim_; ++i) r.x_[i] = x_[i] + o.x_[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r(dim_);
    for (int i = 0; i < dim_; ++i) r.x_[i] = x_[i] - o.x_[i];
    return r;
  }
  Vec operator*(double c) const {
    Vec r(dim_);
    for (int i = 0; i < dim_; ++i) r.x_[i] = c * x_[i];
    return r;
  }
  Vec operator-() const { return *this * -1.0; }
  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) x_[i] += o.x_[i];
    return *this;
  }
  bool operator==(const Vec& o) const {
    if (dim_ != o.dim_) return false;
    for (int i = 0; i < dim_; ++i)
      if (x_[i] != o.x_[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim> x_{};
  int dim_ = 0;
};

inline Vec operator*(double c, const Vec& v) { return v * c; }

using Point = Vec;  // spatial location x
using Grad = Vec;   // gradient value xi

}  // namespace lavlab
