#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "lavlab/vec.hpp"

namespace lavlab {

// Uniform tensor grid.  Flat node index runs with axis 0 fastest:
// flat = i0 + shape[0] * (i1 + shape[1] * i2 ...).
struct Grid {
  std::vector<int> shape;  // nodes per axis, each >= 2
  Point origin;
  Vec spacing;  // per-axis node spacing, > 0

  static Grid uniform(const Point& lo, const Point& hi, const std::vector<int>& shape);

  int dim() const { return static_cast<int>(shape.size()); }
  std::size_t size() const;
  double min_spacing() const;
  double cell_volume() const;  // product of spacings
  Point node(std::size_t flat) const;
  std::size_t flat_index(const std::vector<int>& idx) const;
  void unflatten(std::size_t flat, std::vector<int>& idx) const;
  Point lo() const { return origin; }
  Point hi() const;

  bool operator==(const Grid& o) const;
};

// Nodal scalar field.  `zero_outside` selects the W^{1,1}_0 convention for
// off-grid reads (zero extension); otherwise reads clamp to the box.
struct ScalarField {
  Grid grid;
  std::vector<double> values;
  bool zero_outside = true;

  static ScalarField zeros(const Grid& g);
  // Fills from a callable double(Point).
  template <class F>
  static ScalarField sample(const Grid& g, F&& f, bool zero_outside = true) {
    ScalarField out = zeros(g);
    out.zero_outside = zero_outside;
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) out.values[i] = f(g.node(i));
    return out;
  }

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  // Multilinear interpolation; zero or clamped outside the grid box.
  double at(const Point& x) const;
  double max_abs() const;
  bool boundary_node(std::size_t flat) const;
};

// Nodal vector field with `ncomp` components stored node-major:
// values[flat * ncomp + c].
struct VectorField {
  Grid grid;
  int ncomp = 0;
  std::vector<double> values;
  bool zero_outside = true;

  static VectorField zeros(const Grid& g, int ncomp);

  double comp(std::size_t flat, int c) const { return values[flat * ncomp + c]; }
  double& comp(std::size_t flat, int c) { return values[flat * ncomp + c]; }
  Grad vec(std::size_t flat) const;
  void set_vec(std::size_t flat, const Grad& v);
  Grad at(const Point& x) const;  // componentwise multilinear interpolation
  double max_norm() const;
};

// One-dimensional finite-difference stencil table for a line of m nodes:
// second-order central differences in the interior, one-sided (4-point where
// the line allows) at the ends.  `rows[i]` lists (j, c) with
// (d/dx u)_i = sum c * u_j; `cols` is the exact transpose, used by the
// energy-gradient adjoint.
struct LineStencil {
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<std::vector<std::pair<int, double>>> cols;

  static LineStencil gradient(int m, double h);
};

VectorField gradient(const ScalarField& u);
// Adjoint of `gradient` as a linear map (same stencils, transposed).
ScalarField gradient_adjoint(const VectorField& w);

// Discrete Hölder seminorm sup |u(x)-u(y)| / |x-y|^gamma over node pairs.
// Beyond `max_nodes` nodes the grid is subsampled with a deterministic
// stride (every k-th node in flat order, k minimal so the count fits).
double holder_seminorm(const ScalarField& u, double gamma, std::size_t max_nodes = 10000);

// CSV field I/O: `# key value` header lines (dim/shape/origin/spacing/
// zero_outside) followed by one value per line in flat order.
void write_field_csv(std::ostream& os, const ScalarField& f);
ScalarField read_field_csv(std::istream& is);
void write_field_csv_file(const std::string& path, const ScalarField& f);
ScalarField read_field_csv_file(const std::string& path);

}  // namespace lavlab
