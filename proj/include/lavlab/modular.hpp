#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lavlab/grid.hpp"
#include "lavlab/nfunc.hpp"

namespace lavlab {

enum class TraceKind { Modular, L1, Measure, Energy };

std::string trace_kind_name(TraceKind k);

// Sequence of (delta, value) diagnostics; deltas strictly decreasing.
struct ConvergenceTrace {
  TraceKind kind = TraceKind::Modular;
  double lambda = 1.0;  // meaningful for the modular kind
  std::vector<std::pair<double, double>> entries;

  void push(double delta, double value);
  bool nonincreasing_tail(int span) const;
  double final_value() const;
};

// CSV with columns delta,value,lambda,kind.
void write_trace_csv(std::ostream& os, const std::vector<ConvergenceTrace>& traces);

// Modular rho_{M}(xi / lambda): midpoint quadrature of M(x, xi(x)/lambda)
// over the field grid box (cell centers, multilinear reads).
double modular(const NFunction& M, const VectorField& xi, double lambda);

// Luxemburg norm inf{ lambda > 0 : rho(xi/lambda) <= 1 } by bracketed
// bisection to relative tolerance; the returned lambda satisfies
// rho(xi/lambda) <= 1.  Zero fields give 0.
double luxemburg_norm(const NFunction& M, const VectorField& xi, double tol = 1e-9);

struct ModularConvergenceResult {
  ConvergenceTrace trace;
  bool converging = false;
  double lambda = 1.0;
  bool lambda_auto = false;
};

// Trace of rho_M((xi_delta - xi)/lambda) over a decreasing delta family.
// lambda <= 0 requests auto mode: the smallest power of two whose final
// entry is <= 0.1.  Verdict `converging` when the last three entries are
// nonincreasing and the final one is <= 1e-2.
ModularConvergenceResult modular_convergence(const NFunction& M, const VectorField& target,
                                             const std::vector<std::pair<double, VectorField>>& approximants,
                                             double lambda);

struct DistanceRecord {
  double l1 = 0.0;
  double measure_excess = 0.0;  // fraction of nodes with |xi-eta| > threshold
};

DistanceRecord l1_and_measure_distance(const VectorField& xi, const VectorField& eta,
                                       double threshold);

}  // namespace lavlab
