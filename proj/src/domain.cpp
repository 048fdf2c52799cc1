#include "lavlab/domain.hpp"

#include <algorithm>
#include <cmath>

#include "lavlab/common.hpp"

using nlohmann::json;

namespace lavlab {

namespace {

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& a) {
  if (!a.is_array() || a.size() == 0 || a.size() > kMaxDim)
    throw ConfigError("domain json: bad vector");
  Vec v(static_cast<int>(a.size()));
  for (int i = 0; i < v.dim(); ++i) v[i] = a[i].get<double>();
  return v;
}

}  // namespace

StarDomain StarDomain::interval(double a, double b) {
  if (!(b > a)) throw ConfigError("interval: need a < b");
  StarDomain d;
  d.kind_ = ShapeKind::Interval;
  d.bbox_lo_ = {a};
  d.bbox_hi_ = {b};
  d.star_center_ = {0.5 * (a + b)};
  d.star_radius_ = 0.45 * (b - a);
  return d;
}

StarDomain StarDomain::rectangle(const Point& lo, const Point& hi) {
  if (lo.dim() != hi.dim() || lo.dim() < 1) throw ConfigError("rectangle: dimension mismatch");
  StarDomain d;
  d.kind_ = ShapeKind::Rectangle;
  d.bbox_lo_ = lo;
  d.bbox_hi_ = hi;
  d.star_center_ = Point(lo.dim());
  double half = std::numeric_limits<double>::infinity();
  for (int a = 0; a < lo.dim(); ++a) {
    if (!(hi[a] > lo[a])) throw ConfigError("rectangle: empty extent");
    d.star_center_[a] = 0.5 * (lo[a] + hi[a]);
    half = std::min(half, 0.5 * (hi[a] - lo[a]));
  }
  d.star_radius_ = 0.9 * half;
  return d;
}

StarDomain StarDomain::ball(const Point& center, double radius) {
  if (!(radius > 0.0)) throw ConfigError("ball: radius > 0 required");
  StarDomain d;
  d.kind_ = ShapeKind::Ball;
  d.ball_center_ = center;
  d.ball_radius_ = radius;
  d.bbox_lo_ = center;
  d.bbox_hi_ = center;
  for (int a = 0; a < center.dim(); ++a) {
    d.bbox_lo_[a] -= radius;
    d.bbox_hi_[a] += radius;
  }
  d.star_center_ = center;
  d.star_radius_ = 0.9 * radius;
  return d;
}

StarDomain StarDomain::polygon(std::vector<Point> vertices, const Point& star_center,
                               double star_radius) {
  if (vertices.size() < 3) throw ConfigError("polygon: need >= 3 vertices");
  for (const Point& v : vertices)
    if (v.dim() != 2) throw ConfigError("polygon: 2-D only");
  StarDomain d;
  d.kind_ = ShapeKind::Polygon;
  d.vertices_ = std::move(vertices);
  d.bbox_lo_ = d.vertices_[0];
  d.bbox_hi_ = d.vertices_[0];
  for (const Point& v : d.vertices_) {
    for (int a = 0; a < 2; ++a) {
      d.bbox_lo_[a] = std::min(d.bbox_lo_[a], v[a]);
      d.bbox_hi_[a] = std::max(d.bbox_hi_[a], v[a]);
    }
  }
  d.star_center_ = star_center;
  d.star_radius_ = star_radius;
  d.check_star_ball();
  return d;
}

StarDomain StarDomain::with_star(const Point& center, double radius) const {
  StarDomain d = *this;
  d.star_center_ = center;
  d.star_radius_ = radius;
  d.check_star_ball();
  return d;
}

void StarDomain::check_star_ball() const {
  if (!(star_radius_ > 0.0)) throw ConfigError("star ball: radius > 0 required");
  // sampled containment check of B(x0,R) in the domain
  const int probes = 16;
  for (int k = 0; k < probes; ++k) {
    Point p = star_center_;
    if (dim() == 1) {
      p[0] += star_radius_ * (k % 2 == 0 ? 1.0 : -1.0) * (0.25 + 0.75 * k / probes);
    } else {
      const double ang = 2.0 * M_PI * k / probes;
      p[0] += star_radius_ * std::cos(ang);
      p[1] += star_radius_ * std::sin(ang);
    }
    if (!contains(p)) throw ConfigError("star ball: B(x0,R) not inside the domain");
  }
}

double StarDomain::diameter() const {
  if (kind_ == ShapeKind::Ball) return 2.0 * ball_radius_;
  if (kind_ == ShapeKind::Polygon) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      for (std::size_t j = i + 1; j < vertices_.size(); ++j)
        d2 = std::max(d2, (vertices_[i] - vertices_[j]).norm2());
    return std::sqrt(d2);
  }
  return (bbox_hi_ - bbox_lo_).norm();
}

bool StarDomain::contains(const Point& x) const {
  if (x.dim() != dim()) return false;
  switch (kind_) {
    case ShapeKind::Interval:
    case ShapeKind::Rectangle:
      for (int a = 0; a < dim(); ++a)
        if (x[a] < bbox_lo_[a] || x[a] > bbox_hi_[a]) return false;
      return true;
    case ShapeKind::Ball:
      return (x - ball_center_).norm2() <= ball_radius_ * ball_radius_ + 1e-15;
    case ShapeKind::Polygon: {
      // even-odd crossing test; boundary points count as inside (with slack)
      bool inside = false;
      const std::size_t n = vertices_.size();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& vi = vertices_[i];
        const Point& vj = vertices_[j];
        // on-segment check
        const double cross =
            (vj[0] - vi[0]) * (x[1] - vi[1]) - (vj[1] - vi[1]) * (x[0] - vi[0]);
        const double dot = (x[0] - vi[0]) * (x[0] - vj[0]) + (x[1] - vi[1]) * (x[1] - vj[1]);
        if (std::abs(cross) < 1e-12 && dot <= 1e-12) return true;
        if ((vi[1] > x[1]) != (vj[1] > x[1])) {
          const double t = (x[1] - vi[1]) / (vj[1] - vi[1]);
          if (x[0] < vi[0] + t * (vj[0] - vi[0])) inside = !inside;
        }
      }
      return inside;
    }
  }
  return false;
}

double StarDomain::distance_outside(const Point& x) const {
  switch (kind_) {
    case ShapeKind::Interval:
    case ShapeKind::Rectangle: {
      double d2 = 0.0;
      for (int a = 0; a < dim(); ++a) {
        const double d = std::max({bbox_lo_[a] - x[a], x[a] - bbox_hi_[a], 0.0});
        d2 += d * d;
      }
      return std::sqrt(d2);
    }
    case ShapeKind::Ball:
      return std::max(0.0, (x - ball_center_).norm() - ball_radius_);
    case ShapeKind::Polygon: {
      if (contains(x)) return 0.0;
      double best = std::numeric_limits<double>::infinity();
      const std::size_t n = vertices_.size();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = vertices_[j];
        const Point& b = vertices_[i];
        const Vec ab = b - a;
        const double len2 = ab.norm2();
        double t = len2 > 0.0 ? (x - a).dot(ab) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, (x - (a + ab * t)).norm());
      }
      return best;
    }
  }
  return 0.0;
}

json StarDomain::to_json() const {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["star_center"] = vec_to_json(star_center_);
  j["star_radius"] = star_radius_;
  switch (kind_) {
    case ShapeKind::Interval:
      j["shape"] = "interval";
      j["lo"] = bbox_lo_[0];
      j["hi"] = bbox_hi_[0];
      break;
    case ShapeKind::Rectangle:
      j["shape"] = "rectangle";
      j["lo"] = vec_to_json(bbox_lo_);
      j["hi"] = vec_to_json(bbox_hi_);
      break;
    case ShapeKind::Ball:
      j["shape"] = "ball";
      j["center"] = vec_to_json(ball_center_);
      j["radius"] = ball_radius_;
      break;
    case ShapeKind::Polygon: {
      j["shape"] = "polygon";
      json verts = json::array();
      for (const Point& v : vertices_) verts.push_back(vec_to_json(v));
      j["vertices"] = verts;
      break;
    }
  }
  return j;
}

StarDomain StarDomain::from_json(const json& j) {
  const std::string shape = j.at("shape").get<std::string>();
  StarDomain d;
  if (shape == "interval") {
    d = interval(j.at("lo").get<double>(), j.at("hi").get<double>());
  } else if (shape == "rectangle") {
    d = rectangle(vec_from_json(j.at("lo")), vec_from_json(j.at("hi")));
  } else if (shape == "ball") {
    d = ball(vec_from_json(j.at("center")), j.at("radius").get<double>());
  } else if (shape == "polygon") {
    std::vector<Point> verts;
    for (const auto& v : j.at("vertices")) verts.push_back(vec_from_json(v));
    d = polygon(std::move(verts), vec_from_json(j.at("star_center")),
                j.at("star_radius").get<double>());
    return d;
  } else {
    throw ConfigError("domain json: unknown shape " + shape);
  }
  if (j.contains("star_center"))
    d = d.with_star(vec_from_json(j.at("star_center")), j.at("star_radius").get<double>());
  return d;
}

double DomainDecomposition::min_star_radius() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) r = std::min(r, p.domain.star_radius());
  return r;
}

void DomainDecomposition::validate(const StarDomain& dom, double sum_tol) const {
  if (pieces.empty()) throw NumericError("decomposition: empty");
  const Grid& g = pieces.front().theta.grid;
  for (const auto& p : pieces)
    if (!(p.theta.grid == g)) throw NumericError("decomposition: theta grids differ");
  const std::size_t n = g.size();
  std::vector<int> idx;
  for (std::size_t i = 0; i < n; ++i) {
    const Point x = g.node(i);
    double sum = 0.0;
    for (const auto& p : pieces) {
      const double t = p.theta.values[i];
      if (t < -1e-12 || t > 1.0 + 1e-12)
        throw NumericError("decomposition: theta out of [0,1]");
      // support inside the declared star-shaped piece
      if (t > 1e-12 && dom.contains(x) && !p.domain.contains(x))
        throw NumericError("decomposition: theta supported outside its piece");
      sum += t;
    }
    if (dom.contains(x) && std::abs(sum - 1.0) > sum_tol)
      throw NumericError("decomposition: partition does not sum to 1");
  }
}

json DomainDecomposition::to_json() const {
  json j;
  j["schema_version"] = kSchemaVersion;
  json arr = json::array();
  for (const auto& p : pieces) {
    json pj;
    pj["domain"] = p.domain.to_json();
    json theta;
    theta["shape"] = p.theta.grid.shape;
    theta["origin"] = vec_to_json(p.theta.grid.origin);
    theta["spacing"] = vec_to_json(p.theta.grid.spacing);
    theta["values"] = p.theta.values;
    pj["theta"] = theta;
    arr.push_back(pj);
  }
  j["pieces"] = arr;
  return j;
}

DomainDecomposition DomainDecomposition::from_json(const json& j) {
  DomainDecomposition d;
  for (const auto& pj : j.at("pieces")) {
    DecompPiece p{StarDomain::from_json(pj.at("domain")), ScalarField{}};
    const auto& tj = pj.at("theta");
    p.theta.grid.shape = tj.at("shape").get<std::vector<int>>();
    p.theta.grid.origin = vec_from_json(tj.at("origin"));
    p.theta.grid.spacing = vec_from_json(tj.at("spacing"));
    p.theta.values = tj.at("values").get<std::vector<double>>();
    p.theta.zero_outside = true;
    if (p.theta.values.size() != p.theta.grid.size())
      throw ConfigError("decomposition json: theta size mismatch");
    d.pieces.push_back(std::move(p));
  }
  return d;
}

namespace {

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

struct LShapeDims {
  double W, H, Ws, Hs;
};

// Recognizes the axis-aligned L: six vertices, one re-entrant corner.
bool match_lshape(const StarDomain& d, LShapeDims& out) {
  if (d.kind() != ShapeKind::Polygon || d.vertices().size() != 6) return false;
  const auto& v = d.vertices();
  // canonical order starting at the origin corner
  // (0,0),(W,0),(W,Hs),(Ws,Hs),(Ws,H),(0,H)
  const double W = d.bbox_hi()[0] - d.bbox_lo()[0];
  const double H = d.bbox_hi()[1] - d.bbox_lo()[1];
  double Ws = -1, Hs = -1;
  for (const Point& p : v) {
    const double x = p[0] - d.bbox_lo()[0];
    const double y = p[1] - d.bbox_lo()[1];
    const bool on_x_edge = x < 1e-12 || std::abs(x - W) < 1e-12;
    const bool on_y_edge = y < 1e-12 || std::abs(y - H) < 1e-12;
    if (!on_x_edge && !on_y_edge) {
      if (Ws >= 0) return false;  // more than one interior corner
      Ws = x;
      Hs = y;
    }
  }
  if (Ws <= 0 || Hs <= 0 || Ws >= W || Hs >= H) return false;
  out = {W, H, Ws, Hs};
  return true;
}

}  // namespace

StarDomain lshape_demo(double W, double H, double Ws, double Hs) {
  if (!(0 < Ws && Ws < W && 0 < Hs && Hs < H)) throw ConfigError("lshape: bad dimensions");
  std::vector<Point> verts = {{0, 0}, {W, 0}, {W, Hs}, {Ws, Hs}, {Ws, H}, {0, H}};
  const double R = 0.35 * std::min(Ws, Hs);
  return StarDomain::polygon(std::move(verts), Point{0.5 * Ws, 0.5 * Hs}, R);
}

DomainDecomposition decompose(const StarDomain& dom, const Grid& grid, double overlap) {
  if (!(overlap > 0.0 && overlap < 0.5)) throw ConfigError("decompose: overlap in (0, 0.5)");
  DomainDecomposition out;
  if (dom.kind() == ShapeKind::Interval || dom.kind() == ShapeKind::Rectangle ||
      dom.kind() == ShapeKind::Ball) {
    // convex: star-shaped with respect to any interior ball, K = 1
    DecompPiece p{dom, ScalarField::sample(grid, [&](const Point& x) {
                    return dom.contains(x) ? 1.0 : 0.0;
                  })};
    out.pieces.push_back(std::move(p));
    return out;
  }
  LShapeDims L;
  if (!match_lshape(dom, L))
    throw ConfigError(
        "decompose: only convex built-ins and the L-shaped demo polygon are supported; "
        "supply a decomposition file for other shapes");

  const double ox = dom.bbox_lo()[0], oy = dom.bbox_lo()[1];
  // Pieces are the L truncated just above / right of the notch; the exact
  // rectangles admit no smooth partition because the two single-coverage
  // regions meet at the re-entrant corner.
  const double m = std::min({L.Ws, L.Hs, L.W - L.Ws, L.H - L.Hs});
  const double w = 0.1 * m;             // truncation margin past the notch
  const double b = 2.0 * overlap * w;   // transition band half-width, <= w
  const double R = 0.35 * std::min(L.Ws, L.Hs);
  const Point star = {ox + 0.5 * L.Ws, oy + 0.5 * L.Hs};

  std::vector<Point> v1 = {{ox, oy},
                           {ox + L.W, oy},
                           {ox + L.W, oy + L.Hs},
                           {ox + L.Ws, oy + L.Hs},
                           {ox + L.Ws, oy + L.Hs + w},
                           {ox, oy + L.Hs + w}};
  std::vector<Point> v2 = {{ox, oy},
                           {ox + L.Ws + w, oy},
                           {ox + L.Ws + w, oy + L.Hs},
                           {ox + L.Ws, oy + L.Hs},
                           {ox + L.Ws, oy + L.H},
                           {ox, oy + L.H}};
  StarDomain omega1 = StarDomain::polygon(std::move(v1), star, R);
  StarDomain omega2 = StarDomain::polygon(std::move(v2), star, R);

  // theta2 ramps across the diagonal band |(y-Hs)-(x-Ws)| < b at the notch;
  // outside the band it is exactly 0 (right arm) or 1 (upper arm).
  auto theta2_fn = [&](const Point& p) {
    if (!dom.contains(p)) return 0.0;
    const double s = (p[1] - (oy + L.Hs)) - (p[0] - (ox + L.Ws));
    return smooth_step((s + b) / (2.0 * b));
  };
  ScalarField theta2 = ScalarField::sample(grid, theta2_fn);
  ScalarField theta1 = ScalarField::sample(grid, [&](const Point& p) {
    return dom.contains(p) ? 1.0 - theta2_fn(p) : 0.0;
  });
  out.pieces.push_back({std::move(omega1), std::move(theta1)});
  out.pieces.push_back({std::move(omega2), std::move(theta2)});
  out.validate(dom);
  return out;
}

}  // namespace lavlab
