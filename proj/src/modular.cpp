#include "lavlab/modular.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "lavlab/common.hpp"
#include "lavlab/mollify.hpp"
#include "lavlab/parallel.hpp"

namespace lavlab {

std::string trace_kind_name(TraceKind k) {
  switch (k) {
    case TraceKind::Modular:
      return "modular";
    case TraceKind::L1:
      return "l1";
    case TraceKind::Measure:
      return "measure";
    case TraceKind::Energy:
      return "energy";
  }
  return "?";
}

void ConvergenceTrace::push(double delta, double value) {
  if (!entries.empty() && !(delta < entries.back().first))
    throw ConfigError("trace: deltas must be strictly decreasing");
  if (value < 0.0) throw NumericError("trace: negative value");
  entries.push_back({delta, value});
}

bool ConvergenceTrace::nonincreasing_tail(int span) const {
  if (static_cast<int>(entries.size()) < span) return false;
  for (std::size_t i = entries.size() - span + 1; i < entries.size(); ++i)
    if (entries[i].second > entries[i - 1].second) return false;
  return true;
}

double ConvergenceTrace::final_value() const {
  if (entries.empty()) throw ConfigError("trace: empty");
  return entries.back().second;
}

void write_trace_csv(std::ostream& os, const std::vector<ConvergenceTrace>& traces) {
  os << "delta,value,lambda,kind\n";
  char buf[96];
  for (const auto& t : traces)
    for (const auto& [d, v] : t.entries) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s", d, v, t.lambda,
                    trace_kind_name(t.kind).c_str());
      os << buf << "\n";
    }
}

double modular(const NFunction& M, const VectorField& xi, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("modular: lambda > 0 required");
  if (M.xidim() != xi.ncomp || M.xdim() != xi.grid.dim())
    throw ConfigError("modular: dimension mismatch");
  const Grid& g = xi.grid;
  const int d = g.dim();
  std::size_t cells = 1;
  for (int a = 0; a < d; ++a) cells *= static_cast<std::size_t>(g.shape[a] - 1);
  std::vector<double> buf(cells);
  const double inv_lambda = 1.0 / lambda;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(cells); ++k) {
    std::size_t r = static_cast<std::size_t>(k);
    Point c(d);
    for (int a = 0; a < d; ++a) {
      const std::size_t m = static_cast<std::size_t>(g.shape[a] - 1);
      c[a] = g.origin[a] + (static_cast<double>(r % m) + 0.5) * g.spacing[a];
      r /= m;
    }
    buf[static_cast<std::size_t>(k)] = M(c, xi.at(c) * inv_lambda);
  }
  return ordered_sum(buf) * g.cell_volume();
}

double luxemburg_norm(const NFunction& M, const VectorField& xi, double tol) {
  if (!(tol > 0.0)) throw ConfigError("luxemburg_norm: tol > 0 required");
  bool zero = true;
  for (double v : xi.values)
    if (v != 0.0) {
      zero = false;
      break;
    }
  if (zero) return 0.0;
  double lam = 1.0;
  double rho = modular(M, xi, lam);
  double lo, hi;
  int guard = 0;
  if (rho <= 1.0) {
    hi = lam;
    lo = lam;
    do {
      lo *= 0.5;
      rho = modular(M, xi, lo);
      if (++guard > 60) return 0.0;  // modular stays <= 1 at any lambda: norm ~ 0
    } while (rho <= 1.0);
  } else {
    lo = lam;
    hi = lam;
    do {
      hi *= 2.0;
      rho = modular(M, xi, hi);
      if (++guard > 60)
        throw NumericError("luxemburg_norm: no bracket after 60 expansions");
    } while (rho > 1.0);
  }
  // invariant: rho(xi/hi) <= 1 < rho(xi/lo)
  while ((hi - lo) > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (modular(M, xi, mid) <= 1.0 ? hi : lo) = mid;
  }
  return hi;
}

ModularConvergenceResult modular_convergence(
    const NFunction& M, const VectorField& target,
    const std::vector<std::pair<double, VectorField>>& approximants, double lambda) {
  if (approximants.empty()) throw ConfigError("modular_convergence: empty approximant list");
  for (const auto& [d, f] : approximants)
    if (!(f.grid == target.grid) || f.ncomp != target.ncomp)
      throw ConfigError("modular_convergence: fields must share one grid");

  auto diff_field = [&](const VectorField& a) {
    VectorField d = a;
    for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= target.values[i];
    return d;
  };

  auto run_trace = [&](double lam) {
    ConvergenceTrace t;
    t.kind = TraceKind::Modular;
    t.lambda = lam;
    for (const auto& [delta, f] : approximants) t.push(delta, modular(M, diff_field(f), lam));
    return t;
  };

  ModularConvergenceResult out;
  if (lambda > 0.0) {
    out.lambda = lambda;
    out.trace = run_trace(lambda);
  } else {
    // auto: smallest power of two with final-entry modular <= 0.1
    out.lambda_auto = true;
    double lam = 1.0;
    ConvergenceTrace t = run_trace(lam);
    int guard = 0;
    while (t.final_value() > 0.1 && guard++ < 24) {
      lam *= 2.0;
      t = run_trace(lam);
    }
    out.lambda = lam;
    out.trace = t;
  }
  const int span = std::min<int>(3, static_cast<int>(out.trace.entries.size()));
  out.converging = out.trace.nonincreasing_tail(span) && out.trace.final_value() <= 1e-2;
  return out;
}

DistanceRecord l1_and_measure_distance(const VectorField& xi, const VectorField& eta,
                                       double threshold) {
  if (!(threshold > 0.0)) throw ConfigError("l1_and_measure_distance: threshold > 0");
  if (!(xi.grid == eta.grid) || xi.ncomp != eta.ncomp)
    throw ConfigError("l1_and_measure_distance: field mismatch");
  DistanceRecord rec;
  rec.l1 = l1_distance(xi, eta);
  const std::size_t n = xi.grid.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i)
    if ((xi.vec(i) - eta.vec(i)).norm() > threshold) ++count;
  rec.measure_excess = static_cast<double>(count) / static_cast<double>(n);
  return rec;
}

}  // namespace lavlab
