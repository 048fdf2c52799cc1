#include "lavlab/coefficient.hpp"

#include <algorithm>
#include <cmath>

#include "lavlab/common.hpp"

using nlohmann::json;

namespace lavlab {

Coefficient Coefficient::constant(double c) {
  Coefficient f;
  f.kind_ = Kind::Constant;
  f.c0_ = c;
  return f;
}

Coefficient Coefficient::affine(double c0, const Vec& slope) {
  Coefficient f;
  f.kind_ = Kind::Affine;
  f.c0_ = c0;
  f.slope_ = slope;
  return f;
}

Coefficient Coefficient::axis_power(double scale, int axis, double alpha, double shift,
                                    double c0) {
  if (!(alpha > 0.0)) throw ConfigError("axis_power: alpha > 0");
  Coefficient f;
  f.kind_ = Kind::AxisPower;
  f.scale_ = scale;
  f.axis_ = axis;
  f.alpha_ = alpha;
  f.shift_ = shift;
  f.c0_ = c0;
  return f;
}

Coefficient Coefficient::dist_power(double scale, const Point& z, double alpha, double c0) {
  if (!(alpha > 0.0)) throw ConfigError("dist_power: alpha > 0");
  Coefficient f;
  f.kind_ = Kind::DistPower;
  f.scale_ = scale;
  f.z_ = z;
  f.alpha_ = alpha;
  f.c0_ = c0;
  return f;
}

Coefficient Coefficient::log_power(double scale, int axis, double s, double shift, double c0) {
  if (!(s > 0.0)) throw ConfigError("log_power: exponent > 0");
  Coefficient f;
  f.kind_ = Kind::LogPower;
  f.scale_ = scale;
  f.axis_ = axis;
  f.alpha_ = s;
  f.shift_ = shift;
  f.c0_ = c0;
  return f;
}

Coefficient Coefficient::bump(double height, const Point& z, double radius) {
  if (!(radius > 0.0)) throw ConfigError("bump: radius > 0");
  Coefficient f;
  f.kind_ = Kind::Bump;
  f.scale_ = height;
  f.z_ = z;
  f.radius_ = radius;
  return f;
}

Coefficient Coefficient::table(ScalarField field) {
  Coefficient f;
  f.kind_ = Kind::Table;
  f.table_ = std::move(field);
  f.table_.zero_outside = false;  // clamp: coefficients stay defined off-grid
  return f;
}

double Coefficient::operator()(const Point& x) const {
  switch (kind_) {
    case Kind::Constant:
      return c0_;
    case Kind::Affine:
      return c0_ + slope_.dot(x);
    case Kind::AxisPower:
      return c0_ + scale_ * std::pow(std::abs(x[axis_] - shift_), alpha_);
    case Kind::DistPower:
      return c0_ + scale_ * std::pow((x - z_).norm(), alpha_);
    case Kind::LogPower: {
      const double t = std::abs(x[axis_] - shift_);
      if (t == 0.0) return c0_;
      return c0_ + scale_ / std::pow(std::log(M_E + 1.0 / t), alpha_);
    }
    case Kind::Bump: {
      const double q = (x - z_).norm2() / (radius_ * radius_);
      if (q >= 1.0) return 0.0;
      return scale_ * std::exp(1.0 - 1.0 / (1.0 - q));
    }
    case Kind::Table:
      return table_.at(x);
  }
  return 0.0;
}

namespace {

template <class F>
void for_lattice(const Point& lo, const Point& hi, int samples, F&& f) {
  const int d = lo.dim();
  std::vector<int> idx(d, 0);
  const std::size_t total = [&] {
    std::size_t t = 1;
    for (int a = 0; a < d; ++a) t *= static_cast<std::size_t>(samples);
    return t;
  }();
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t r = k;
    Point x(d);
    for (int a = 0; a < d; ++a) {
      const int i = static_cast<int>(r % samples);
      r /= samples;
      x[a] = samples == 1 ? lo[a] : lo[a] + (hi[a] - lo[a]) * i / (samples - 1);
    }
    f(x);
  }
}

}  // namespace

double Coefficient::min_on(const Point& lo, const Point& hi, int samples) const {
  double m = std::numeric_limits<double>::infinity();
  for_lattice(lo, hi, samples, [&](const Point& x) { m = std::min(m, (*this)(x)); });
  return m;
}

double Coefficient::max_on(const Point& lo, const Point& hi, int samples) const {
  double m = -std::numeric_limits<double>::infinity();
  for_lattice(lo, hi, samples, [&](const Point& x) { m = std::max(m, (*this)(x)); });
  return m;
}

double Coefficient::holder_seminorm_on(const Point& lo, const Point& hi, double alpha,
                                       int samples) const {
  std::vector<Point> pts;
  std::vector<double> vals;
  for_lattice(lo, hi, std::min(samples, 65), [&](const Point& x) {
    pts.push_back(x);
    vals.push_back((*this)(x));
  });
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = (pts[i] - pts[j]).norm();
      if (d <= 0.0) continue;
      best = std::max(best, std::abs(vals[i] - vals[j]) / std::pow(d, alpha));
    }
  return best;
}

std::vector<double> Coefficient::dyadic_oscillations(const Point& lo, const Point& hi,
                                                     int levels) const {
  // For each pair distance d = 2^-k (k = 2..levels+1), sample point pairs at
  // that separation along each axis and record sup |f(x)-f(y)| log(1/d).
  std::vector<double> out;
  const int d = lo.dim();
  for (int k = 2; k < levels + 2; ++k) {
    const double dist = std::pow(2.0, -k);
    double sup = 0.0;
    for (int a = 0; a < d; ++a) {
      if (hi[a] - lo[a] < dist) continue;
      const int n = 64;
      for (int i = 0; i < n; ++i) {
        Point x = lo;
        for (int b = 0; b < d; ++b) x[b] = lo[b];
        x[a] = lo[a] + (hi[a] - lo[a] - dist) * i / (n - 1);
        Point y = x;
        y[a] += dist;
        sup = std::max(sup, std::abs((*this)(x) - (*this)(y)));
      }
    }
    out.push_back(sup * std::log(1.0 / dist));
  }
  return out;
}

double Coefficient::log_holder_constant_on(const Point& lo, const Point& hi, int levels) const {
  double best = 0.0;
  for (double v : dyadic_oscillations(lo, hi, levels)) best = std::max(best, v);
  return best;
}

bool Coefficient::is_log_holder_on(const Point& lo, const Point& hi, int levels) const {
  const std::vector<double> osc = dyadic_oscillations(lo, hi, levels);
  if (osc.size() < 4) return true;
  // growing tail across dyadic levels means |f(x)-f(y)| log(1/|x-y|) is
  // unbounded, i.e. not log-Hölder
  const std::size_t n = osc.size();
  const double head = *std::max_element(osc.begin(), osc.begin() + n / 2);
  const double tail = *std::max_element(osc.begin() + n / 2, osc.end());
  return tail <= std::max(1.2 * head, head + 1e-9);
}

json Coefficient::to_json() const {
  json j;
  switch (kind_) {
    case Kind::Constant:
      j["kind"] = "constant";
      j["value"] = c0_;
      break;
    case Kind::Affine: {
      j["kind"] = "affine";
      j["c0"] = c0_;
      json s = json::array();
      for (int i = 0; i < slope_.dim(); ++i) s.push_back(slope_[i]);
      j["slope"] = s;
      break;
    }
    case Kind::AxisPower:
      j["kind"] = "axis_power";
      j["scale"] = scale_;
      j["axis"] = axis_;
      j["alpha"] = alpha_;
      j["shift"] = shift_;
      j["c0"] = c0_;
      break;
    case Kind::DistPower: {
      j["kind"] = "dist_power";
      j["scale"] = scale_;
      j["alpha"] = alpha_;
      j["c0"] = c0_;
      json z = json::array();
      for (int i = 0; i < z_.dim(); ++i) z.push_back(z_[i]);
      j["center"] = z;
      break;
    }
    case Kind::LogPower:
      j["kind"] = "log_power";
      j["scale"] = scale_;
      j["axis"] = axis_;
      j["exponent"] = alpha_;
      j["shift"] = shift_;
      j["c0"] = c0_;
      break;
    case Kind::Bump: {
      j["kind"] = "bump";
      j["height"] = scale_;
      j["radius"] = radius_;
      json z = json::array();
      for (int i = 0; i < z_.dim(); ++i) z.push_back(z_[i]);
      j["center"] = z;
      break;
    }
    case Kind::Table: {
      j["kind"] = "table";
      j["shape"] = table_.grid.shape;
      json o = json::array(), s = json::array();
      for (int a = 0; a < table_.grid.dim(); ++a) {
        o.push_back(table_.grid.origin[a]);
        s.push_back(table_.grid.spacing[a]);
      }
      j["origin"] = o;
      j["spacing"] = s;
      j["values"] = table_.values;
      break;
    }
  }
  return j;
}

namespace {
Vec json_vec(const json& a) {
  Vec v(static_cast<int>(a.size()));
  for (int i = 0; i < v.dim(); ++i) v[i] = a[i].get<double>();
  return v;
}
}  // namespace

Coefficient Coefficient::from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return constant(j.at("value").get<double>());
  if (kind == "affine") return affine(j.at("c0").get<double>(), json_vec(j.at("slope")));
  if (kind == "axis_power")
    return axis_power(j.at("scale").get<double>(), j.at("axis").get<int>(),
                      j.at("alpha").get<double>(), j.value("shift", 0.0), j.value("c0", 0.0));
  if (kind == "dist_power")
    return dist_power(j.at("scale").get<double>(), json_vec(j.at("center")),
                      j.at("alpha").get<double>(), j.value("c0", 0.0));
  if (kind == "log_power")
    return log_power(j.at("scale").get<double>(), j.at("axis").get<int>(),
                     j.at("exponent").get<double>(), j.value("shift", 0.0), j.value("c0", 0.0));
  if (kind == "bump")
    return bump(j.at("height").get<double>(), json_vec(j.at("center")),
                j.at("radius").get<double>());
  if (kind == "table") {
    ScalarField f;
    f.grid.shape = j.at("shape").get<std::vector<int>>();
    f.grid.origin = json_vec(j.at("origin"));
    f.grid.spacing = json_vec(j.at("spacing"));
    f.values = j.at("values").get<std::vector<double>>();
    if (f.values.size() != f.grid.size()) throw ConfigError("coefficient table: size mismatch");
    return table(std::move(f));
  }
  throw ConfigError("coefficient json: unknown kind " + kind);
}

}  // namespace lavlab
