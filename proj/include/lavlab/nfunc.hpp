#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "lavlab/coefficient.hpp"
#include "lavlab/vec.hpp"

namespace lavlab {

// 1-D convex Young function, Y(0) = 0, nondecreasing.
struct YoungFunction {
  enum class Kind { Power, PowerLog, ExpM1 };
  // Power:    t^p
  // PowerLog: t^p * log^beta(e + t)   (beta may be negative)
  // ExpM1:    e^t - 1 - t             (non-doubling)
  Kind kind = Kind::Power;
  double p = 2.0;
  double beta = 0.0;

  static YoungFunction power(double p) { return {Kind::Power, p, 0.0}; }
  static YoungFunction power_log(double p, double beta) { return {Kind::PowerLog, p, beta}; }
  static YoungFunction exp_m1() { return {Kind::ExpM1, 0.0, 0.0}; }

  double operator()(double t) const;
  double derivative(double t) const;

  nlohmann::json to_json() const;
  static YoungFunction from_json(const nlohmann::json& j);
};

// Modulus of continuity omega(t): nondecreasing, omega(0)=0.
struct Modulus {
  enum class Kind { Power, LogPow };
  // Power:  c * t^alpha
  // LogPow: c * log^{-kappa}(e + 1/t)
  Kind kind = Kind::Power;
  double c = 1.0;
  double alpha = 1.0;
  double kappa = 1.0;

  static Modulus power(double c, double alpha) { return {Kind::Power, c, alpha, 0.0}; }
  static Modulus log_pow(double c, double kappa) { return {Kind::LogPow, c, 0.0, kappa}; }

  double operator()(double t) const;

  nlohmann::json to_json() const;
  static Modulus from_json(const nlohmann::json& j);
};

enum class Family {
  VariableExponent,
  MildDoublePhase,
  DoublePhase,
  VariableExponentDoublePhase,
  MultiPhase,
  OrliczDoublePhase,
  Orthotropic,
  XIndependent,
  Custom,
};

std::string family_name(Family f);

// One q-phase of a multi-phase integrand.
struct PhaseTerm {
  Coefficient a;
  double q = 2.0;
  double alpha = 1.0;  // declared Hölder exponent of a
};

// Weak N-function M(x, xi): convex and even in xi, M(x,0)=0, continuous in
// both variables, sandwiched between the 1-D envelopes m1(|xi|) <= M(x,xi)
// <= m2(|xi|).  Immutable after construction; evaluation is pure and safe to
// call concurrently.
class NFunction {
 public:
  // --- built-in families (lo/hi declare the domain bounding box used for
  //     coefficient extremes and validation sampling) ---
  static NFunction variable_exponent(Coefficient p, const Point& lo, const Point& hi);
  static NFunction mild_double_phase(double p, Coefficient a, const Point& lo, const Point& hi);
  static NFunction double_phase(double p, double q, Coefficient a, double alpha,
                                const Point& lo, const Point& hi);
  static NFunction varexp_double_phase(Coefficient p, Coefficient q, Coefficient a, double alpha,
                                       const Point& lo, const Point& hi);
  static NFunction multi_phase(double p, std::vector<PhaseTerm> phases, const Point& lo,
                               const Point& hi);
  static NFunction orlicz_double_phase(YoungFunction phi, YoungFunction psi, Coefficient a,
                                       Modulus omega_a, const Point& lo, const Point& hi);
  // components are 1-D-in-xi weak N-functions M_i(x, t); one per coordinate
  static NFunction orthotropic(std::vector<NFunction> components, const Point& lo,
                               const Point& hi);
  static NFunction x_independent_power(int dim, double p, const Point& lo, const Point& hi);
  static NFunction x_independent_sum_power(std::vector<double> powers, const Point& lo,
                                           const Point& hi);
  static NFunction x_independent_exp(int dim, const Point& lo, const Point& hi);
  static NFunction custom(int xdim, int xidim, std::function<double(const Point&, const Grad&)> f,
                          std::function<double(double)> m1, std::function<double(double)> m2,
                          const Point& lo, const Point& hi);

  Family family() const { return family_; }
  int xdim() const { return xdim_; }
  int xidim() const { return xidim_; }
  const Point& box_lo() const { return box_lo_; }
  const Point& box_hi() const { return box_hi_; }

  // M(x, xi); throws NumericError for non-finite inputs.
  double operator()(const Point& x, const Grad& xi) const;
  // d/dxi M(x, xi); analytic for built-ins, central differences for Custom.
  Grad grad_xi(const Point& x, const Grad& xi) const;

  // Convexity envelopes and their inverses (monotone bisection).
  double m1(double t) const;
  double m2(double t) const;
  double m1_inv(double y) const;
  double m2_inv(double y) const;

  bool x_independent() const;

  // Orthotropic component access (throws for other families).
  int component_count() const;
  const NFunction& component(int i) const;

  // --- parameter access for the closed-form balance checker ---
  struct VariableExponentParams {
    Coefficient p;
  };
  struct MildDoublePhaseParams {
    double p;
    Coefficient a;
  };
  struct DoublePhaseParams {
    double p, q;
    Coefficient a;
    double alpha;
  };
  struct VarExpDoublePhaseParams {
    Coefficient p, q, a;
    double alpha;
  };
  struct MultiPhaseParams {
    double p;
    std::vector<PhaseTerm> phases;
  };
  struct OrliczDoublePhaseParams {
    YoungFunction phi, psi;
    Coefficient a;
    Modulus omega;
  };
  struct XIndependentParams {
    enum class Sub { Power, SumPower, ExpM1 };
    Sub sub = Sub::Power;
    double p = 2.0;
    std::vector<double> powers;
  };

  const VariableExponentParams& varexp_params() const;
  const MildDoublePhaseParams& mild_params() const;
  const DoublePhaseParams& double_phase_params() const;
  const VarExpDoublePhaseParams& varexp_dp_params() const;
  const MultiPhaseParams& multi_phase_params() const;
  const OrliczDoublePhaseParams& orlicz_params() const;
  const XIndependentParams& x_independent_params() const;

  nlohmann::json to_json() const;  // lossless for built-ins; throws for Custom
  static NFunction from_json(const nlohmann::json& j);

 private:
  NFunction() = default;
  void init_envelopes();
  void validate_sampled() const;

  Family family_ = Family::XIndependent;
  int xdim_ = 1, xidim_ = 1;
  Point box_lo_, box_hi_;

  std::unique_ptr<VariableExponentParams> varexp_;
  std::unique_ptr<MildDoublePhaseParams> mild_;
  std::unique_ptr<DoublePhaseParams> dp_;
  std::unique_ptr<VarExpDoublePhaseParams> vedp_;
  std::unique_ptr<MultiPhaseParams> mp_;
  std::unique_ptr<OrliczDoublePhaseParams> odp_;
  std::vector<NFunction> components_;  // orthotropic
  std::unique_ptr<XIndependentParams> xind_;
  std::function<double(const Point&, const Grad&)> custom_;
  std::function<double(double)> custom_m1_, custom_m2_;

  std::function<double(double)> m1_fn_, m2_fn_;

 public:
  NFunction(const NFunction& o);
  NFunction& operator=(const NFunction& o);
  NFunction(NFunction&&) = default;
  NFunction& operator=(NFunction&&) = default;
  ~NFunction() = default;
};

// Numerical Young conjugate M*(x, eta) = sup_xi (xi.eta - M(x,xi)),
// approximated over |xi|_inf <= search_radius by coarse-to-fine search
// (nested inclusive lattices, 3 refinements shrinking by factor 8).
// Always a lower bound of the true conjugate and never negative.
double conjugate(const NFunction& M, const Point& x, const Grad& eta, double search_radius,
                 int base_points = 25);

// Analytic conjugate of t -> t^p for testing (value at |eta| = s).
double power_conjugate(double p, double s);

struct Delta2Report {
  bool holds = false;
  double c_fit = 0.0;  // fitted doubling constant on the largest window
  double h_const = 0.0;  // max sampled defect below the |xi| > C regime
  std::vector<double> c_by_window;  // c fitted at C_max, 2 C_max, 4 C_max
};

// Samples the Delta_2 inequality M(x, 2 xi) <= c M(x, xi) + h on
// |xi| in (C, C_max] and doubles C_max twice; `holds` when the fitted c
// stabilizes across the doublings.
Delta2Report delta2_estimate(const NFunction& M, const Point& lo, const Point& hi, double C,
                             double C_max = 0.0);

}  // namespace lavlab
