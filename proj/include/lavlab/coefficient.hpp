#pragma once

#include <json.hpp>

#include "lavlab/grid.hpp"
#include "lavlab/vec.hpp"

namespace lavlab {

// Scalar coefficient field a(x) / p(x) built from a small expression set or a
// grid-sampled table.  All kinds are continuous; regularity is probed
// numerically (discrete Hölder / log-Hölder estimates) where a checker
// needs it.
class Coefficient {
 public:
  enum class Kind { Constant, Affine, AxisPower, DistPower, LogPower, Bump, Table };

  static Coefficient constant(double c);
  // c0 + slope . x
  static Coefficient affine(double c0, const Vec& slope);
  // c0 + scale * |x_axis - shift|^alpha
  static Coefficient axis_power(double scale, int axis, double alpha, double shift = 0.0,
                                double c0 = 0.0);
  // c0 + scale * |x - z|^alpha
  static Coefficient dist_power(double scale, const Point& z, double alpha, double c0 = 0.0);
  // c0 + scale / log^s(e + 1/|x_axis - shift|); continuous, log-Hölder iff s >= 1
  static Coefficient log_power(double scale, int axis, double s, double shift = 0.0,
                               double c0 = 0.0);
  // height * exp(1 - 1/(1 - |x-z|^2/r^2)) inside B(z,r), 0 outside
  static Coefficient bump(double height, const Point& z, double radius);
  static Coefficient table(ScalarField f);

  Kind kind() const { return kind_; }
  double operator()(const Point& x) const;

  // Extremes over a sampled box (inclusive lattice, `samples` per axis).
  double min_on(const Point& lo, const Point& hi, int samples = 33) const;
  double max_on(const Point& lo, const Point& hi, int samples = 33) const;

  // Discrete Hölder-alpha seminorm estimate over a sampled box.
  double holder_seminorm_on(const Point& lo, const Point& hi, double alpha,
                            int samples = 65) const;
  // Log-Hölder diagnostics: sup |f(x)-f(y)| * log(1/|x-y|) per dyadic pair
  // distance 2^-k.  `log_holder_constant` is the overall sup; the predicate
  // fails when the dyadic sequence keeps growing.
  double log_holder_constant_on(const Point& lo, const Point& hi, int levels = 8) const;
  bool is_log_holder_on(const Point& lo, const Point& hi, int levels = 8) const;

  nlohmann::json to_json() const;
  static Coefficient from_json(const nlohmann::json& j);

 private:
  Coefficient() = default;
  std::vector<double> dyadic_oscillations(const Point& lo, const Point& hi, int levels) const;

  Kind kind_ = Kind::Constant;
  double c0_ = 0.0;       // additive offset / constant value
  double scale_ = 0.0;
  double alpha_ = 1.0;    // power / log exponent
  int axis_ = 0;
  double shift_ = 0.0;
  Vec slope_;             // affine
  Point z_;               // dist_power / bump center
  double radius_ = 1.0;   // bump
  ScalarField table_;     // table
};

}  // namespace lavlab
