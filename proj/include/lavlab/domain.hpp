#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lavlab/grid.hpp"
#include "lavlab/vec.hpp"

namespace lavlab {

enum class ShapeKind { Interval, Rectangle, Ball, Polygon };

// Bounded domain star-shaped with respect to a declared ball B(x0, R).
// Built-in shapes certify star-shapedness by construction; polygons carry a
// user-declared star center which is spot-checked at construction.
class StarDomain {
 public:
  static StarDomain interval(double a, double b);
  static StarDomain rectangle(const Point& lo, const Point& hi);
  static StarDomain ball(const Point& center, double radius);
  static StarDomain polygon(std::vector<Point> vertices, const Point& star_center,
                            double star_radius);

  // Overrides the default star ball (must stay inside the domain).
  StarDomain with_star(const Point& center, double radius) const;

  ShapeKind kind() const { return kind_; }
  const Point& star_center() const { return star_center_; }
  double star_radius() const { return star_radius_; }
  int dim() const { return bbox_lo_.dim(); }
  const Point& bbox_lo() const { return bbox_lo_; }
  const Point& bbox_hi() const { return bbox_hi_; }
  double diameter() const;
  bool contains(const Point& x) const;
  // 0 inside; Euclidean distance to the domain for outside points.
  double distance_outside(const Point& x) const;
  const std::vector<Point>& vertices() const { return vertices_; }

  nlohmann::json to_json() const;
  static StarDomain from_json(const nlohmann::json& j);

 private:
  StarDomain() = default;
  void check_star_ball() const;

  ShapeKind kind_ = ShapeKind::Interval;
  Point bbox_lo_, bbox_hi_;
  Point star_center_;
  double star_radius_ = 0.0;
  Point ball_center_;          // Ball shape
  double ball_radius_ = 0.0;   // Ball shape
  std::vector<Point> vertices_;  // Polygon shape (counterclockwise)
};

// Star-shaped cover {Omega_i} of a domain with a smooth partition of unity
// {theta_i}: 0 <= theta_i <= 1, sum theta_i = 1 on the domain, and
// supp(theta_i) inside Omega_i so that theta_i * phi is admissible input for
// the per-piece shrinking mollifier.
struct DecompPiece {
  StarDomain domain;
  ScalarField theta;
};

struct DomainDecomposition {
  std::vector<DecompPiece> pieces;

  int count() const { return static_cast<int>(pieces.size()); }
  double min_star_radius() const;
  // Checks the invariants at the nodes of `grid` restricted to `dom`;
  // throws NumericError on violation.
  void validate(const StarDomain& dom, double sum_tol = 1e-10) const;

  nlohmann::json to_json() const;
  static DomainDecomposition from_json(const nlohmann::json& j);
};

// Trivial K=1 decomposition for the convex built-ins; two-piece construction
// for the axis-aligned L-shaped demo polygon.  Other shapes are rejected with
// a pointer to user-supplied decomposition files.
DomainDecomposition decompose(const StarDomain& dom, const Grid& grid, double overlap);

// The demo polygon [0,W]x[0,Hs] union [0,Ws]x[0,H] with re-entrant corner at
// (Ws, Hs); the spec's L-shape is lshape_demo(2, 2, 1, 1).
StarDomain lshape_demo(double W, double H, double Ws, double Hs);

}  // namespace lavlab
