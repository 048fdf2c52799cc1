#include "lavlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lavlab/common.hpp"

namespace lavlab {

Grid Grid::uniform(const Point& lo, const Point& hi, const std::vector<int>& shape) {
  if (shape.empty() || static_cast<int>(shape.size()) != lo.dim() || lo.dim() != hi.dim())
    throw ConfigError("grid: dimension mismatch");
  Grid g;
  g.shape = shape;
  g.origin = lo;
  g.spacing = Vec(lo.dim());
  for (int a = 0; a < lo.dim(); ++a) {
    if (shape[a] < 2) throw ConfigError("grid: need >= 2 nodes per axis");
    if (!(hi[a] > lo[a])) throw ConfigError("grid: empty extent");
    g.spacing[a] = (hi[a] - lo[a]) / (shape[a] - 1);
  }
  return g;
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  return n;
}

double Grid::min_spacing() const {
  double h = spacing[0];
  for (int a = 1; a < dim(); ++a) h = std::min(h, spacing[a]);
  return h;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= spacing[a];
  return v;
}

Point Grid::node(std::size_t flat) const {
  Point x(dim());
  for (int a = 0; a < dim(); ++a) {
    const std::size_t s = static_cast<std::size_t>(shape[a]);
    x[a] = origin[a] + spacing[a] * static_cast<double>(flat % s);
    flat /= s;
  }
  return x;
}

std::size_t Grid::flat_index(const std::vector<int>& idx) const {
  std::size_t f = 0;
  for (int a = dim() - 1; a >= 0; --a) f = f * shape[a] + idx[a];
  return f;
}

void Grid::unflatten(std::size_t flat, std::vector<int>& idx) const {
  idx.resize(shape.size());
  for (int a = 0; a < dim(); ++a) {
    idx[a] = static_cast<int>(flat % shape[a]);
    flat /= shape[a];
  }
}

Point Grid::hi() const {
  Point h(dim());
  for (int a = 0; a < dim(); ++a) h[a] = origin[a] + spacing[a] * (shape[a] - 1);
  return h;
}

bool Grid::operator==(const Grid& o) const {
  return shape == o.shape && origin == o.origin && spacing == o.spacing;
}

ScalarField ScalarField::zeros(const Grid& g) {
  ScalarField f;
  f.grid = g;
  f.values.assign(g.size(), 0.0);
  return f;
}

namespace {

// Shared multilinear interpolation core.  Returns false when x is outside the
// grid box and zero extension applies.
struct InterpWeights {
  std::size_t base = 0;
  // corner offsets and weights, 2^dim entries
  int n = 0;
  std::array<std::size_t, 1 << kMaxDim> offset;
  std::array<double, 1 << kMaxDim> weight;
};

bool interp_weights(const Grid& g, const Point& x, bool zero_outside, InterpWeights& w) {
  const int d = g.dim();
  std::array<int, kMaxDim> i0;
  std::array<double, kMaxDim> t;
  for (int a = 0; a < d; ++a) {
    double s = (x[a] - g.origin[a]) / g.spacing[a];
    const double last = static_cast<double>(g.shape[a] - 1);
    if (s < 0.0 || s > last) {
      if (zero_outside) {
        // tolerate roundoff at the box faces
        if (s < -1e-12 || s > last + 1e-12) return false;
      }
      s = std::clamp(s, 0.0, last);
    }
    int i = static_cast<int>(s);
    if (i >= g.shape[a] - 1) i = g.shape[a] - 2;
    i0[a] = i;
    t[a] = s - i;
  }
  const int corners = 1 << d;
  w.n = corners;
  std::array<std::size_t, kMaxDim> stride;
  std::size_t acc = 1;
  for (int a = 0; a < d; ++a) {
    stride[a] = acc;
    acc *= static_cast<std::size_t>(g.shape[a]);
  }
  std::size_t base = 0;
  for (int a = 0; a < d; ++a) base += stride[a] * static_cast<std::size_t>(i0[a]);
  w.base = base;
  for (int c = 0; c < corners; ++c) {
    double wt = 1.0;
    std::size_t off = 0;
    for (int a = 0; a < d; ++a) {
      if (c & (1 << a)) {
        wt *= t[a];
        off += stride[a];
      } else {
        wt *= 1.0 - t[a];
      }
    }
    w.offset[c] = off;
    w.weight[c] = wt;
  }
  return true;
}

}  // namespace

double ScalarField::at(const Point& x) const {
  InterpWeights w;
  if (!interp_weights(grid, x, zero_outside, w)) return 0.0;
  double v = 0.0;
  for (int c = 0; c < w.n; ++c) v += w.weight[c] * values[w.base + w.offset[c]];
  return v;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::boundary_node(std::size_t flat) const {
  for (int a = 0; a < grid.dim(); ++a) {
    const std::size_t s = static_cast<std::size_t>(grid.shape[a]);
    const int i = static_cast<int>(flat % s);
    if (i == 0 || i == grid.shape[a] - 1) return true;
    flat /= s;
  }
  return false;
}

VectorField VectorField::zeros(const Grid& g, int ncomp) {
  VectorField f;
  f.grid = g;
  f.ncomp = ncomp;
  f.values.assign(g.size() * static_cast<std::size_t>(ncomp), 0.0);
  return f;
}

Grad VectorField::vec(std::size_t flat) const {
  Grad v(ncomp);
  for (int c = 0; c < ncomp; ++c) v[c] = comp(flat, c);
  return v;
}

void VectorField::set_vec(std::size_t flat, const Grad& v) {
  for (int c = 0; c < ncomp; ++c) comp(flat, c) = v[c];
}

Grad VectorField::at(const Point& x) const {
  InterpWeights w;
  Grad v(ncomp);
  if (!interp_weights(grid, x, zero_outside, w)) return v;
  for (int k = 0; k < w.n; ++k) {
    const std::size_t f = w.base + w.offset[k];
    for (int c = 0; c < ncomp; ++c) v[c] += w.weight[k] * values[f * ncomp + c];
  }
  return v;
}

double VectorField::max_norm() const {
  double m = 0.0;
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, vec(i).norm());
  return m;
}

LineStencil LineStencil::gradient(int m, double h) {
  if (m < 3) throw ConfigError("gradient: need >= 3 nodes per axis");
  LineStencil s;
  s.rows.resize(m);
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      if (m >= 4)
        s.rows[i] = {{0, -11.0 / (6 * h)}, {1, 18.0 / (6 * h)}, {2, -9.0 / (6 * h)}, {3, 2.0 / (6 * h)}};
      else
        s.rows[i] = {{0, -3.0 / (2 * h)}, {1, 4.0 / (2 * h)}, {2, -1.0 / (2 * h)}};
    } else if (i == m - 1) {
      if (m >= 4)
        s.rows[i] = {{m - 1, 11.0 / (6 * h)}, {m - 2, -18.0 / (6 * h)}, {m - 3, 9.0 / (6 * h)}, {m - 4, -2.0 / (6 * h)}};
      else
        s.rows[i] = {{m - 1, 3.0 / (2 * h)}, {m - 2, -4.0 / (2 * h)}, {m - 3, 1.0 / (2 * h)}};
    } else {
      s.rows[i] = {{i - 1, -1.0 / (2 * h)}, {i + 1, 1.0 / (2 * h)}};
    }
  }
  s.cols.resize(m);
  for (int i = 0; i < m; ++i)
    for (auto [j, c] : s.rows[i]) s.cols[j].push_back({i, c});
  return s;
}

namespace {

// Applies the per-axis stencil along every grid line of axis `a`.
template <bool Transpose>
void apply_axis_stencil(const Grid& g, int a, const LineStencil& st,
                        const double* in, double* out) {
  const int m = g.shape[a];
  std::size_t stride = 1;
  for (int b = 0; b < a; ++b) stride *= static_cast<std::size_t>(g.shape[b]);
  const std::size_t total = g.size();
  const std::size_t line_count = total / static_cast<std::size_t>(m);
  // Enumerate line base indices: all flat indices with axis-a component 0.
  std::vector<std::size_t> idx;
  for (std::size_t line = 0; line < line_count; ++line) {
    // decompose `line` over the remaining axes
    std::size_t rem = line;
    std::size_t base = 0, acc = 1;
    for (int b = 0; b < g.dim(); ++b) {
      const std::size_t sb = static_cast<std::size_t>(g.shape[b]);
      if (b == a) {
        acc *= sb;
        continue;
      }
      base += (rem % sb) * acc;
      rem /= sb;
      acc *= sb;
    }
    const auto& table = Transpose ? st.cols : st.rows;
    for (int i = 0; i < m; ++i) {
      double v = 0.0;
      for (auto [j, c] : table[i]) v += c * in[base + stride * static_cast<std::size_t>(j)];
      out[base + stride * static_cast<std::size_t>(i)] = v;
    }
  }
}

}  // namespace

VectorField gradient(const ScalarField& u) {
  const Grid& g = u.grid;
  const int d = g.dim();
  VectorField out = VectorField::zeros(g, d);
  std::vector<double> comp(g.size());
  for (int a = 0; a < d; ++a) {
    const LineStencil st = LineStencil::gradient(g.shape[a], g.spacing[a]);
    apply_axis_stencil<false>(g, a, st, u.values.data(), comp.data());
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) out.comp(i, a) = comp[i];
  }
  return out;
}

ScalarField gradient_adjoint(const VectorField& w) {
  const Grid& g = w.grid;
  const int d = g.dim();
  ScalarField out = ScalarField::zeros(g);
  std::vector<double> comp(g.size()), acc(g.size());
  for (int a = 0; a < d; ++a) {
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) comp[i] = w.comp(i, a);
    const LineStencil st = LineStencil::gradient(g.shape[a], g.spacing[a]);
    apply_axis_stencil<true>(g, a, st, comp.data(), acc.data());
    for (std::size_t i = 0; i < n; ++i) out.values[i] += acc[i];
  }
  return out;
}

double holder_seminorm(const ScalarField& u, double gamma, std::size_t max_nodes) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("holder_seminorm: gamma in (0,1]");
  const std::size_t n = u.grid.size();
  std::size_t stride = 1;
  while ((n + stride - 1) / stride > max_nodes) ++stride;
  std::vector<std::size_t> nodes;
  nodes.reserve(n / stride + 1);
  for (std::size_t i = 0; i < n; i += stride) nodes.push_back(i);
  const std::size_t m = nodes.size();
  double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(m); ++ii) {
    const std::size_t i = nodes[static_cast<std::size_t>(ii)];
    const Point xi = u.grid.node(i);
    const double ui = u.values[i];
    double local = 0.0;
    for (std::size_t jj = static_cast<std::size_t>(ii) + 1; jj < m; ++jj) {
      const std::size_t j = nodes[jj];
      const Point xj = u.grid.node(j);
      const double d = (xi - xj).norm();
      if (d <= 0.0) continue;
      const double q = std::abs(ui - u.values[j]) / std::pow(d, gamma);
      local = std::max(local, q);
    }
    best = std::max(best, local);
  }
  return best;
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
  char buf[64];
  os << "# lavlab-field " << kSchemaVersion << "\n";
  os << "# dim " << f.grid.dim() << "\n";
  os << "# shape";
  for (int s : f.grid.shape) os << ' ' << s;
  os << "\n# origin";
  for (int a = 0; a < f.grid.dim(); ++a) {
    std::snprintf(buf, sizeof buf, "%.17g", f.grid.origin[a]);
    os << ' ' << buf;
  }
  os << "\n# spacing";
  for (int a = 0; a < f.grid.dim(); ++a) {
    std::snprintf(buf, sizeof buf, "%.17g", f.grid.spacing[a]);
    os << ' ' << buf;
  }
  os << "\n# zero_outside " << (f.zero_outside ? 1 : 0) << "\n";
  for (double v : f.values) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << "\n";
  }
}

ScalarField read_field_csv(std::istream& is) {
  ScalarField f;
  std::vector<int> shape;
  std::vector<double> origin, spacing;
  int dim = -1, zero_outside = 1;
  std::string line;
  std::vector<double> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      if (key == "lavlab-field") {
        int ver = 0;
        ss >> ver;
        if (ver != kSchemaVersion) throw ConfigError("field csv: unsupported schema version");
      } else if (key == "dim") {
        ss >> dim;
      } else if (key == "shape") {
        int s;
        while (ss >> s) shape.push_back(s);
      } else if (key == "origin") {
        double v;
        while (ss >> v) origin.push_back(v);
      } else if (key == "spacing") {
        double v;
        while (ss >> v) spacing.push_back(v);
      } else if (key == "zero_outside") {
        ss >> zero_outside;
      }
      continue;
    }
    vals.push_back(std::stod(line));
  }
  if (dim <= 0 || static_cast<int>(shape.size()) != dim || origin.size() != shape.size() ||
      spacing.size() != shape.size())
    throw ConfigError("field csv: missing or inconsistent header");
  if (dim > kMaxDim) throw ConfigError("field csv: dimension too large");
  f.grid.shape = shape;
  f.grid.origin = Point(dim);
  f.grid.spacing = Vec(dim);
  for (int a = 0; a < dim; ++a) {
    f.grid.origin[a] = origin[a];
    f.grid.spacing[a] = spacing[a];
    if (!(spacing[a] > 0.0) || shape[a] < 2) throw ConfigError("field csv: bad grid");
  }
  if (vals.size() != f.grid.size()) throw ConfigError("field csv: value count mismatch");
  f.values = std::move(vals);
  f.zero_outside = zero_outside != 0;
  return f;
}

void write_field_csv_file(const std::string& path, const ScalarField& f) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for write: " + path);
  write_field_csv(os, f);
}

ScalarField read_field_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open: " + path);
  return read_field_csv(is);
}

}  // namespace lavlab
