#include "lavlab/nfunc.hpp"

#include <algorithm>
#include <cmath>

#include "lavlab/common.hpp"

using nlohmann::json;

namespace lavlab {

double YoungFunction::operator()(double t) const {
  switch (kind) {
    case Kind::Power:
      return std::pow(t, p);
    case Kind::PowerLog:
      return t == 0.0 ? 0.0 : std::pow(t, p) * std::pow(std::log(M_E + t), beta);
    case Kind::ExpM1:
      return std::expm1(t) - t;
  }
  return 0.0;
}

double YoungFunction::derivative(double t) const {
  switch (kind) {
    case Kind::Power:
      if (t == 0.0) return p > 1.0 ? 0.0 : 1.0;
      return p * std::pow(t, p - 1.0);
    case Kind::PowerLog: {
      if (t == 0.0) return 0.0;
      const double lg = std::log(M_E + t);
      return p * std::pow(t, p - 1.0) * std::pow(lg, beta) +
             std::pow(t, p) * beta * std::pow(lg, beta - 1.0) / (M_E + t);
    }
    case Kind::ExpM1:
      return std::expm1(t);
  }
  return 0.0;
}

json YoungFunction::to_json() const {
  json j;
  switch (kind) {
    case Kind::Power:
      j["kind"] = "power";
      j["p"] = p;
      break;
    case Kind::PowerLog:
      j["kind"] = "power_log";
      j["p"] = p;
      j["beta"] = beta;
      break;
    case Kind::ExpM1:
      j["kind"] = "exp_m1";
      break;
  }
  return j;
}

YoungFunction YoungFunction::from_json(const json& j) {
  const std::string k = j.at("kind").get<std::string>();
  if (k == "power") return power(j.at("p").get<double>());
  if (k == "power_log") return power_log(j.at("p").get<double>(), j.at("beta").get<double>());
  if (k == "exp_m1") return exp_m1();
  throw ConfigError("young function: unknown kind " + k);
}

double Modulus::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  switch (kind) {
    case Kind::Power:
      return c * std::pow(t, alpha);
    case Kind::LogPow:
      return c * std::pow(std::log(M_E + 1.0 / t), -kappa);
  }
  return 0.0;
}

json Modulus::to_json() const {
  json j;
  if (kind == Kind::Power) {
    j["kind"] = "power";
    j["c"] = c;
    j["alpha"] = alpha;
  } else {
    j["kind"] = "log_pow";
    j["c"] = c;
    j["kappa"] = kappa;
  }
  return j;
}

Modulus Modulus::from_json(const json& j) {
  const std::string k = j.at("kind").get<std::string>();
  if (k == "power") return power(j.at("c").get<double>(), j.at("alpha").get<double>());
  if (k == "log_pow") return log_pow(j.at("c").get<double>(), j.at("kappa").get<double>());
  throw ConfigError("modulus: unknown kind " + k);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::VariableExponent:
      return "variable_exponent";
    case Family::MildDoublePhase:
      return "mild_double_phase";
    case Family::DoublePhase:
      return "double_phase";
    case Family::VariableExponentDoublePhase:
      return "varexp_double_phase";
    case Family::MultiPhase:
      return "multi_phase";
    case Family::OrliczDoublePhase:
      return "orlicz_double_phase";
    case Family::Orthotropic:
      return "orthotropic";
    case Family::XIndependent:
      return "x_independent";
    case Family::Custom:
      return "custom";
  }
  return "?";
}

NFunction::NFunction(const NFunction& o)
    : family_(o.family_),
      xdim_(o.xdim_),
      xidim_(o.xidim_),
      box_lo_(o.box_lo_),
      box_hi_(o.box_hi_),
      components_(o.components_),
      custom_(o.custom_),
      custom_m1_(o.custom_m1_),
      custom_m2_(o.custom_m2_),
      m1_fn_(o.m1_fn_),
      m2_fn_(o.m2_fn_) {
  auto clone = [](const auto& p) {
    using T = std::decay_t<decltype(*p)>;
    return p ? std::make_unique<T>(*p) : nullptr;
  };
  varexp_ = clone(o.varexp_);
  mild_ = clone(o.mild_);
  dp_ = clone(o.dp_);
  vedp_ = clone(o.vedp_);
  mp_ = clone(o.mp_);
  odp_ = clone(o.odp_);
  xind_ = clone(o.xind_);
  // envelope closures capture `this`-free copies of parameters, so the
  // copied std::functions remain valid; rebuild anyway for safety
  if (family_ != Family::Custom) init_envelopes();
}

NFunction& NFunction::operator=(const NFunction& o) {
  if (this != &o) {
    NFunction tmp(o);
    *this = std::move(tmp);
  }
  return *this;
}

namespace {

double checked_pow(double t, double e) { return std::pow(t, e); }

// min/max over the box of a coefficient, cached at construction
struct PowEnvelope {
  // piecewise power: below t=1 uses `lo_exp`, above uses `hi_exp`
  double lo_exp, hi_exp;
  double operator()(double t) const {
    return t < 1.0 ? checked_pow(t, lo_exp) : checked_pow(t, hi_exp);
  }
};

void require_finite(const Point& x, const Grad& xi) {
  if (!x.finite() || !xi.finite()) throw NumericError("N-function: non-finite input");
}

Grad power_grad(double q, const Grad& xi) {
  const double t = xi.norm();
  if (t == 0.0) return Grad(xi.dim());
  return xi * (q * std::pow(t, q - 2.0));
}

}  // namespace

void NFunction::init_envelopes() {
  const Point lo = box_lo_, hi = box_hi_;
  switch (family_) {
    case Family::VariableExponent: {
      const double pmin = varexp_->p.min_on(lo, hi), pmax = varexp_->p.max_on(lo, hi);
      if (pmin < 1.0) throw ConfigError("variable_exponent: p(x) >= 1 required");
      m1_fn_ = [=](double t) { return PowEnvelope{pmax, pmin}(t); };
      m2_fn_ = [=](double t) { return PowEnvelope{pmin, pmax}(t); };
      break;
    }
    case Family::MildDoublePhase: {
      const double p = mild_->p;
      const double amin = mild_->a.min_on(lo, hi), amax = mild_->a.max_on(lo, hi);
      if (amin < -1e-12) throw ConfigError("mild_double_phase: a(x) >= 0 required");
      m1_fn_ = [=](double t) { return checked_pow(t, p); };
      m2_fn_ = [=](double t) {
        return checked_pow(t, p) * (1.0 + amax * std::log(M_E + t));
      };
      break;
    }
    case Family::DoublePhase: {
      const double p = dp_->p, q = dp_->q;
      const double amin = dp_->a.min_on(lo, hi), amax = dp_->a.max_on(lo, hi);
      if (amin < -1e-12) throw ConfigError("double_phase: a(x) >= 0 required");
      if (!(p >= 1.0 && q >= p)) throw ConfigError("double_phase: 1 <= p <= q required");
      const double am = std::max(amin, 0.0);
      m1_fn_ = [=](double t) { return checked_pow(t, p) + am * checked_pow(t, q); };
      m2_fn_ = [=](double t) { return checked_pow(t, p) + amax * checked_pow(t, q); };
      break;
    }
    case Family::VariableExponentDoublePhase: {
      const double pmin = vedp_->p.min_on(lo, hi), pmax = vedp_->p.max_on(lo, hi);
      const double qmin = vedp_->q.min_on(lo, hi), qmax = vedp_->q.max_on(lo, hi);
      const double amin = std::max(vedp_->a.min_on(lo, hi), 0.0);
      const double amax = vedp_->a.max_on(lo, hi);
      if (pmin < 1.0) throw ConfigError("varexp_double_phase: p(x) >= 1 required");
      if (vedp_->a.min_on(lo, hi) < -1e-12)
        throw ConfigError("varexp_double_phase: a(x) >= 0 required");
      m1_fn_ = [=](double t) {
        return PowEnvelope{pmax, pmin}(t) + amin * PowEnvelope{qmax, qmin}(t);
      };
      m2_fn_ = [=](double t) {
        return PowEnvelope{pmin, pmax}(t) + amax * PowEnvelope{qmin, qmax}(t);
      };
      break;
    }
    case Family::MultiPhase: {
      const double p = mp_->p;
      std::vector<std::pair<double, double>> mins, maxs;  // (coef, q)
      for (const auto& ph : mp_->phases) {
        const double amin = ph.a.min_on(lo, hi);
        if (amin < -1e-12) throw ConfigError("multi_phase: a_i(x) >= 0 required");
        if (!(ph.q >= p)) throw ConfigError("multi_phase: q_i >= p required");
        mins.push_back({std::max(amin, 0.0), ph.q});
        maxs.push_back({ph.a.max_on(lo, hi), ph.q});
      }
      m1_fn_ = [=](double t) {
        double v = checked_pow(t, p);
        for (auto [c, q] : mins) v += c * checked_pow(t, q);
        return v;
      };
      m2_fn_ = [=](double t) {
        double v = checked_pow(t, p);
        for (auto [c, q] : maxs) v += c * checked_pow(t, q);
        return v;
      };
      break;
    }
    case Family::OrliczDoublePhase: {
      const double amin = std::max(odp_->a.min_on(lo, hi), 0.0);
      const double amax = odp_->a.max_on(lo, hi);
      if (odp_->a.min_on(lo, hi) < -1e-12)
        throw ConfigError("orlicz_double_phase: a(x) >= 0 required");
      const YoungFunction phi = odp_->phi, psi = odp_->psi;
      m1_fn_ = [=](double t) { return phi(t) + amin * psi(t); };
      m2_fn_ = [=](double t) { return phi(t) + amax * psi(t); };
      break;
    }
    case Family::Orthotropic: {
      const double root_n = std::sqrt(static_cast<double>(xidim_));
      // copy components by value so the closures stay self-contained
      auto comps = std::make_shared<std::vector<NFunction>>(components_);
      m1_fn_ = [comps, root_n](double t) {
        double v = std::numeric_limits<double>::infinity();
        for (const auto& c : *comps) v = std::min(v, c.m1(t / root_n));
        return v;
      };
      m2_fn_ = [comps](double t) {
        double v = 0.0;
        for (const auto& c : *comps) v += c.m2(t);
        return v;
      };
      break;
    }
    case Family::XIndependent: {
      if (xind_->sub == XIndependentParams::Sub::Power) {
        const double p = xind_->p;
        m1_fn_ = m2_fn_ = [=](double t) { return checked_pow(t, p); };
      } else if (xind_->sub == XIndependentParams::Sub::SumPower) {
        const auto powers = xind_->powers;
        const double root_n = std::sqrt(static_cast<double>(xidim_));
        double pmin = powers[0], pmax = powers[0];
        for (double p : powers) {
          pmin = std::min(pmin, p);
          pmax = std::max(pmax, p);
        }
        m1_fn_ = [=](double t) { return PowEnvelope{pmax, pmin}(t / root_n); };
        m2_fn_ = [=](double t) {
          double v = 0.0;
          for (double p : powers) v += checked_pow(t, p);
          return v;
        };
      } else {
        m1_fn_ = m2_fn_ = [](double t) { return std::expm1(t) - t; };
      }
      break;
    }
    case Family::Custom:
      m1_fn_ = custom_m1_;
      m2_fn_ = custom_m2_;
      break;
  }
}

void NFunction::validate_sampled() const {
  // sampled structural checks; exact for built-ins, a smoke test for Custom
  const int nx = 4, nxi = 6;
  for (int k = 0; k < nx; ++k) {
    Point x(xdim_);
    for (int a = 0; a < xdim_; ++a)
      x[a] = box_lo_[a] + (box_hi_[a] - box_lo_[a]) * (k + 0.5) / nx;
    if (std::abs((*this)(x, Grad(xidim_))) > 1e-12)
      throw ConfigError("N-function: M(x,0) != 0");
    for (int i = 0; i < nxi; ++i) {
      Grad xi(xidim_);
      const double mag = std::pow(10.0, -2.0 + i);
      for (int c = 0; c < xidim_; ++c) xi[c] = mag * ((c + k) % 2 == 0 ? 1.0 : -0.7);
      const double v = (*this)(x, xi);
      const double scale = 1.0 + std::abs(v);
      if (std::abs(v - (*this)(x, -xi)) > 1e-9 * scale)
        throw ConfigError("N-function: not even in xi");
      const Grad half = xi * 0.5;
      if ((*this)(x, half) > 0.5 * v + 1e-9 * scale)
        throw ConfigError("N-function: midpoint convexity fails");
      if (m1(xi.norm()) > v + 1e-9 * scale || v > m2(xi.norm()) * (1.0 + 1e-9) + 1e-12)
        throw ConfigError("N-function: envelope sandwich fails");
    }
  }
}

NFunction NFunction::variable_exponent(Coefficient p, const Point& lo, const Point& hi) {
  NFunction f;
  f.family_ = Family::VariableExponent;
  f.xdim_ = f.xidim_ = lo.dim();
  f.box_lo_ = lo;
  f.box_hi_ = hi;
  f.varexp_ = std::make_unique<VariableExponentParams>(VariableExponentParams{std::move(p)});
  f.init_envelopes();
  f.validate_sampled();
  return f;
}

NFunction NFunction::mild_double_phase(double p, Coefficient a, const Point& lo,
                                       const Point& hi) {
  if (!(p >= 1.0)) throw ConfigError("mild_double_phase: p >= 1 required");
  NFunction f;
  f.family_ = Family::MildDoublePhase;
  f.xdim_ = f.xidim_ = lo.dim();
  f.box_lo_ = lo;
  f.box_hi_ = hi;
  f.mild_ = std::make_unique<MildDoublePhaseParams>(MildDoublePhaseParams{p, std::move(a)});
  f.init_envelopes();
  f.validate_sampled();
  return f;
}

NFunction NFunction::double_phase(double p, double q, Coefficient a, double alpha,
                                  const Point& lo, const Point& hi) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("double_phase: alpha in (0,1]");
  NFunction f;
  f.family_ = Family::DoublePhase;
  f.xdim_ = f.xidim_ = lo.dim();
  f.box_lo_ = lo;
  f.box_hi_ = hi;
  f.dp_ = std::make_unique<DoublePhaseParams>(DoublePhaseParams{p, q, std::move(a), alpha});
  f.init_envelopes();
  f.validate_sampled();
  // declared Hölder exponent vs a discrete seminorm estimate of a: the
  // alpha-seminorm of a genuinely rougher coefficient grows under lattice
  // refinement (warning only)
  const double s33 = f.dp_->a.holder_seminorm_on(lo, hi, alpha, 33);
  const double s65 = f.dp_->a.holder_seminorm_on(lo, hi, alpha, 65);
  if (s65 > 1.35 * s33 + 1e-12)
    warn("double_phase: declared alpha=" + std::to_string(alpha) +
         " looks inconsistent with coefficient a (discrete seminorm grows under refinement)");
  return f;
}

NFunction NFunction::varexp_double_phase(Coefficient p, Coefficient q, Coefficient a,
                                         double alpha, const Point& lo, const Point& hi) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("varexp_double_phase: alpha in (0,1]");
  NFunction f;
  f.family_ = Family::VariableExponentDoublePhase;
  f.xdim_ = f.xidim_ = lo.dim();
  f.box_lo_ = lo;
  f.box_hi_ = hi;
  f.vedp_ = std::make_unique<VarExpDoublePhaseParams>(
      VarExpDoublePhaseParams{std::move(p), std::move(q), std::move(a), alpha});
  f.init_envelopes();
  f.validate_sampled();
  return f;
}

NFunction NFunction::multi_phase(double p, std::vector<PhaseTerm> phases, const Point& lo,
                                 const Point& hi) {
  if (!(p >= 1.0)) throw ConfigError("multi_phase: p >= 1 required");
  if (phases.empty()) throw ConfigError("multi_phase: need at least one phase");
  NFunction f;
  f.family_ = Family::MultiPhase;
  f.xdim_ = f.xidim_ = lo.dim();
  f.box_lo_ = lo;
  f.box_hi_ = hi;
  f.mp_ = std::make_unique<MultiPhaseParams>(MultiPhaseParams{p, std::move(phases)});
  f.init_envelopes();
  f.validate_sampled();
  return f;
}

NFunction NFunction::orlicz_double_phase(YoungFunction phi, YoungFunction psi, Coefficient a,
                                         Modulus omega_a, const Point& lo, const Point& hi) {
  NFunction f;
  f.family_ = Family::OrliczDoublePhase;
  f.xdim_ = f.xidim_ = lo.dim();
  f.box_lo_ = lo;
  f.box_hi_ = hi;
  f.odp_ = std::make_unique<OrliczDoublePhaseParams>(
      OrliczDoublePhaseParams{phi, psi, std::move(a), omega_a});
  f.init_envelopes();
  f.validate_sampled();
  return f;
}

NFunction NFunction::orthotropic(std::vector<NFunction> components, const Point& lo,
                                 const Point& hi) {
  if (components.empty() || static_cast<int>(components.size()) != lo.dim())
    throw ConfigError("orthotropic: one component per coordinate required");
  for (const auto& c : components)
    if (c.xidim() != 1) throw ConfigError("orthotropic: components must be 1-D in xi");
  NFunction f;
  f.family_ = Family::Orthotropic;
  f.xdim_ = lo.dim();
  f.xidim_ = lo.dim();
  f.box_lo_ = lo;
  f.box_hi_ = hi;
  f.components_ = std::move(components);
  f.init_envelopes();
  f.validate_sampled();
  return f;
}

NFunction NFunction::x_independent_power(int dim, double p, const Point& lo, const Point& hi) {
  if (!(p >= 1.0)) throw ConfigError("x_independent_power: p >= 1 required");
  NFunction f;
  f.family_ = Family::XIndependent;
  f.xdim_ = lo.dim();
  f.xidim_ = dim;
  f.box_lo_ = lo;
  f.box_hi_ = hi;
  f.xind_ = std::make_unique<XIndependentParams>();
  f.xind_->sub = XIndependentParams::Sub::Power;
  f.xind_->p = p;
  f.init_envelopes();
  return f;
}

NFunction NFunction::x_independent_sum_power(std::vector<double> powers, const Point& lo,
                                             const Point& hi) {
  if (powers.empty()) throw ConfigError("x_independent_sum_power: empty powers");
  for (double p : powers)
    if (!(p >= 1.0)) throw ConfigError("x_independent_sum_power: p_i >= 1 required");
  NFunction f;
  f.family_ = Family::XIndependent;
  f.xdim_ = lo.dim();
  f.xidim_ = static_cast<int>(powers.size());
  f.box_lo_ = lo;
  f.box_hi_ = hi;
  f.xind_ = std::make_unique<XIndependentParams>();
  f.xind_->sub = XIndependentParams::Sub::SumPower;
  f.xind_->powers = std::move(powers);
  f.init_envelopes();
  return f;
}

NFunction NFunction::x_independent_exp(int dim, const Point& lo, const Point& hi) {
  NFunction f;
  f.family_ = Family::XIndependent;
  f.xdim_ = lo.dim();
  f.xidim_ = dim;
  f.box_lo_ = lo;
  f.box_hi_ = hi;
  f.xind_ = std::make_unique<XIndependentParams>();
  f.xind_->sub = XIndependentParams::Sub::ExpM1;
  f.init_envelopes();
  return f;
}

NFunction NFunction::custom(int xdim, int xidim,
                            std::function<double(const Point&, const Grad&)> fn,
                            std::function<double(double)> m1, std::function<double(double)> m2,
                            const Point& lo, const Point& hi) {
  NFunction f;
  f.family_ = Family::Custom;
  f.xdim_ = xdim;
  f.xidim_ = xidim;
  f.box_lo_ = lo;
  f.box_hi_ = hi;
  f.custom_ = std::move(fn);
  f.custom_m1_ = std::move(m1);
  f.custom_m2_ = std::move(m2);
  f.init_envelopes();
  f.validate_sampled();
  return f;
}

double NFunction::operator()(const Point& x, const Grad& xi) const {
  require_finite(x, xi);
  switch (family_) {
    case Family::VariableExponent:
      return checked_pow(xi.norm(), varexp_->p(x));
    case Family::MildDoublePhase: {
      const double t = xi.norm();
      if (t == 0.0) return 0.0;
      return checked_pow(t, mild_->p) * (1.0 + mild_->a(x) * std::log(M_E + t));
    }
    case Family::DoublePhase: {
      const double t = xi.norm();
      return checked_pow(t, dp_->p) + dp_->a(x) * checked_pow(t, dp_->q);
    }
    case Family::VariableExponentDoublePhase: {
      const double t = xi.norm();
      return checked_pow(t, vedp_->p(x)) + vedp_->a(x) * checked_pow(t, vedp_->q(x));
    }
    case Family::MultiPhase: {
      const double t = xi.norm();
      double v = checked_pow(t, mp_->p);
      for (const auto& ph : mp_->phases) v += ph.a(x) * checked_pow(t, ph.q);
      return v;
    }
    case Family::OrliczDoublePhase: {
      const double t = xi.norm();
      return odp_->phi(t) + odp_->a(x) * odp_->psi(t);
    }
    case Family::Orthotropic: {
      double v = 0.0;
      for (int i = 0; i < xidim_; ++i) v += components_[i](x, Grad{std::abs(xi[i])});
      return v;
    }
    case Family::XIndependent: {
      if (xind_->sub == XIndependentParams::Sub::Power) return checked_pow(xi.norm(), xind_->p);
      if (xind_->sub == XIndependentParams::Sub::SumPower) {
        double v = 0.0;
        for (int i = 0; i < xidim_; ++i) v += checked_pow(std::abs(xi[i]), xind_->powers[i]);
        return v;
      }
      const double t = xi.norm();
      return std::expm1(t) - t;
    }
    case Family::Custom:
      return custom_(x, xi);
  }
  return 0.0;
}

Grad NFunction::grad_xi(const Point& x, const Grad& xi) const {
  require_finite(x, xi);
  switch (family_) {
    case Family::VariableExponent:
      return power_grad(varexp_->p(x), xi);
    case Family::MildDoublePhase: {
      const double t = xi.norm();
      if (t == 0.0) return Grad(xidim_);
      const double a = mild_->a(x), p = mild_->p;
      const double dphi =
          p * std::pow(t, p - 1.0) * (1.0 + a * std::log(M_E + t)) +
          std::pow(t, p) * a / (M_E + t);
      return xi * (dphi / t);
    }
    case Family::DoublePhase:
      return power_grad(dp_->p, xi) + power_grad(dp_->q, xi) * dp_->a(x);
    case Family::VariableExponentDoublePhase:
      return power_grad(vedp_->p(x), xi) + power_grad(vedp_->q(x), xi) * vedp_->a(x);
    case Family::MultiPhase: {
      Grad g = power_grad(mp_->p, xi);
      for (const auto& ph : mp_->phases) g += power_grad(ph.q, xi) * ph.a(x);
      return g;
    }
    case Family::OrliczDoublePhase: {
      const double t = xi.norm();
      if (t == 0.0) return Grad(xidim_);
      const double d = odp_->phi.derivative(t) + odp_->a(x) * odp_->psi.derivative(t);
      return xi * (d / t);
    }
    case Family::Orthotropic: {
      Grad g(xidim_);
      for (int i = 0; i < xidim_; ++i) {
        const double s = xi[i] >= 0.0 ? 1.0 : -1.0;
        g[i] = s * components_[i].grad_xi(x, Grad{std::abs(xi[i])})[0];
      }
      return g;
    }
    case Family::XIndependent: {
      if (xind_->sub == XIndependentParams::Sub::Power) return power_grad(xind_->p, xi);
      if (xind_->sub == XIndependentParams::Sub::SumPower) {
        Grad g(xidim_);
        for (int i = 0; i < xidim_; ++i) {
          const double t = std::abs(xi[i]);
          if (t > 0.0)
            g[i] = (xi[i] >= 0 ? 1.0 : -1.0) * xind_->powers[i] * std::pow(t, xind_->powers[i] - 1.0);
        }
        return g;
      }
      const double t = xi.norm();
      if (t == 0.0) return Grad(xidim_);
      return xi * (std::expm1(t) / t);
    }
    case Family::Custom: {
      // central differences
      Grad g(xidim_);
      const double h = 1e-6 * (1.0 + xi.norm());
      for (int i = 0; i < xidim_; ++i) {
        Grad a = xi, b = xi;
        a[i] += h;
        b[i] -= h;
        g[i] = (custom_(x, a) - custom_(x, b)) / (2.0 * h);
      }
      return g;
    }
  }
  return Grad(xidim_);
}

double NFunction::m1(double t) const { return m1_fn_(t); }
double NFunction::m2(double t) const { return m2_fn_(t); }

namespace {
double monotone_inverse(const std::function<double(double)>& f, double y) {
  if (y <= 0.0) return 0.0;
  double hi = 1.0;
  int guard = 0;
  while (f(hi) < y && guard++ < 200) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}
}  // namespace

double NFunction::m1_inv(double y) const { return monotone_inverse(m1_fn_, y); }
double NFunction::m2_inv(double y) const { return monotone_inverse(m2_fn_, y); }

bool NFunction::x_independent() const { return family_ == Family::XIndependent; }

int NFunction::component_count() const {
  if (family_ != Family::Orthotropic) throw ConfigError("component access: not orthotropic");
  return static_cast<int>(components_.size());
}

const NFunction& NFunction::component(int i) const {
  if (family_ != Family::Orthotropic) throw ConfigError("component access: not orthotropic");
  return components_.at(static_cast<std::size_t>(i));
}

const NFunction::VariableExponentParams& NFunction::varexp_params() const {
  if (family_ != Family::VariableExponent || !varexp_)
    throw ConfigError("parameter access: wrong family");
  return *varexp_;
}

const NFunction::MildDoublePhaseParams& NFunction::mild_params() const {
  if (family_ != Family::MildDoublePhase || !mild_)
    throw ConfigError("parameter access: wrong family");
  return *mild_;
}

const NFunction::DoublePhaseParams& NFunction::double_phase_params() const {
  if (family_ != Family::DoublePhase || !dp_) throw ConfigError("parameter access: wrong family");
  return *dp_;
}

const NFunction::VarExpDoublePhaseParams& NFunction::varexp_dp_params() const {
  if (family_ != Family::VariableExponentDoublePhase || !vedp_)
    throw ConfigError("parameter access: wrong family");
  return *vedp_;
}

const NFunction::MultiPhaseParams& NFunction::multi_phase_params() const {
  if (family_ != Family::MultiPhase || !mp_) throw ConfigError("parameter access: wrong family");
  return *mp_;
}

const NFunction::OrliczDoublePhaseParams& NFunction::orlicz_params() const {
  if (family_ != Family::OrliczDoublePhase || !odp_)
    throw ConfigError("parameter access: wrong family");
  return *odp_;
}

const NFunction::XIndependentParams& NFunction::x_independent_params() const {
  if (family_ != Family::XIndependent || !xind_)
    throw ConfigError("parameter access: wrong family");
  return *xind_;
}

namespace {
json box_json(const Point& lo, const Point& hi) {
  json j;
  json a = json::array(), b = json::array();
  for (int i = 0; i < lo.dim(); ++i) {
    a.push_back(lo[i]);
    b.push_back(hi[i]);
  }
  j["lo"] = a;
  j["hi"] = b;
  return j;
}
Point json_point(const json& a) {
  Point v(static_cast<int>(a.size()));
  for (int i = 0; i < v.dim(); ++i) v[i] = a[i].get<double>();
  return v;
}
}  // namespace

json NFunction::to_json() const {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["family"] = family_name(family_);
  j["dim"] = xidim_;
  j["box"] = box_json(box_lo_, box_hi_);
  json p;
  switch (family_) {
    case Family::VariableExponent:
      p["p"] = varexp_->p.to_json();
      break;
    case Family::MildDoublePhase:
      p["p"] = mild_->p;
      p["a"] = mild_->a.to_json();
      break;
    case Family::DoublePhase:
      p["p"] = dp_->p;
      p["q"] = dp_->q;
      p["a"] = dp_->a.to_json();
      p["alpha"] = dp_->alpha;
      break;
    case Family::VariableExponentDoublePhase:
      p["p"] = vedp_->p.to_json();
      p["q"] = vedp_->q.to_json();
      p["a"] = vedp_->a.to_json();
      p["alpha"] = vedp_->alpha;
      break;
    case Family::MultiPhase: {
      p["p"] = mp_->p;
      json phases = json::array();
      for (const auto& ph : mp_->phases) {
        json pj;
        pj["a"] = ph.a.to_json();
        pj["q"] = ph.q;
        pj["alpha"] = ph.alpha;
        phases.push_back(pj);
      }
      p["phases"] = phases;
      break;
    }
    case Family::OrliczDoublePhase:
      p["phi"] = odp_->phi.to_json();
      p["psi"] = odp_->psi.to_json();
      p["a"] = odp_->a.to_json();
      p["omega_a"] = odp_->omega.to_json();
      break;
    case Family::Orthotropic: {
      json comps = json::array();
      for (const auto& c : components_) comps.push_back(c.to_json());
      p["components"] = comps;
      break;
    }
    case Family::XIndependent:
      if (xind_->sub == XIndependentParams::Sub::Power) {
        p["sub"] = "power";
        p["p"] = xind_->p;
      } else if (xind_->sub == XIndependentParams::Sub::SumPower) {
        p["sub"] = "sum_power";
        p["powers"] = xind_->powers;
      } else {
        p["sub"] = "exp_m1";
      }
      break;
    case Family::Custom:
      throw ConfigError("custom N-function cannot be serialized");
  }
  j["params"] = p;
  return j;
}

NFunction NFunction::from_json(const json& j) {
  const std::string fam = j.at("family").get<std::string>();
  const json& p = j.at("params");
  const Point lo = json_point(j.at("box").at("lo"));
  const Point hi = json_point(j.at("box").at("hi"));
  if (fam == "variable_exponent")
    return variable_exponent(Coefficient::from_json(p.at("p")), lo, hi);
  if (fam == "mild_double_phase")
    return mild_double_phase(p.at("p").get<double>(), Coefficient::from_json(p.at("a")), lo, hi);
  if (fam == "double_phase")
    return double_phase(p.at("p").get<double>(), p.at("q").get<double>(),
                        Coefficient::from_json(p.at("a")), p.at("alpha").get<double>(), lo, hi);
  if (fam == "varexp_double_phase")
    return varexp_double_phase(Coefficient::from_json(p.at("p")),
                               Coefficient::from_json(p.at("q")),
                               Coefficient::from_json(p.at("a")), p.at("alpha").get<double>(),
                               lo, hi);
  if (fam == "multi_phase") {
    std::vector<PhaseTerm> phases;
    for (const auto& ph : p.at("phases"))
      phases.push_back(PhaseTerm{Coefficient::from_json(ph.at("a")), ph.at("q").get<double>(),
                                 ph.at("alpha").get<double>()});
    return multi_phase(p.at("p").get<double>(), std::move(phases), lo, hi);
  }
  if (fam == "orlicz_double_phase")
    return orlicz_double_phase(YoungFunction::from_json(p.at("phi")),
                               YoungFunction::from_json(p.at("psi")),
                               Coefficient::from_json(p.at("a")),
                               Modulus::from_json(p.at("omega_a")), lo, hi);
  if (fam == "orthotropic") {
    std::vector<NFunction> comps;
    for (const auto& c : p.at("components")) comps.push_back(from_json(c));
    return orthotropic(std::move(comps), lo, hi);
  }
  if (fam == "x_independent") {
    const std::string sub = p.at("sub").get<std::string>();
    const int dim = j.at("dim").get<int>();
    if (sub == "power") return x_independent_power(dim, p.at("p").get<double>(), lo, hi);
    if (sub == "sum_power")
      return x_independent_sum_power(p.at("powers").get<std::vector<double>>(), lo, hi);
    if (sub == "exp_m1") return x_independent_exp(dim, lo, hi);
    throw ConfigError("x_independent: unknown sub " + sub);
  }
  throw ConfigError("N-function json: unknown family " + fam);
}

double conjugate(const NFunction& M, const Point& x, const Grad& eta, double search_radius,
                 int base_points) {
  if (!(search_radius > 0.0)) throw ConfigError("conjugate: search_radius > 0 required");
  if (!x.finite() || !eta.finite()) throw NumericError("conjugate: non-finite input");
  const int d = M.xidim();
  const int n = std::max(base_points | 1, 5);  // odd, so the lattice contains 0
  double best = 0.0;                           // xi = 0 always in the search set
  Grad arg(d);
  Grad center(d);
  double width = search_radius;
  for (int level = 0; level < 4; ++level) {
    // inclusive lattice center +- width
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(n);
    Grad local_arg = arg;
    for (std::size_t k = 0; k < total; ++k) {
      std::size_t r = k;
      Grad xi(d);
      for (int a = 0; a < d; ++a) {
        const int i = static_cast<int>(r % n);
        r /= n;
        xi[a] = center[a] - width + 2.0 * width * i / (n - 1);
      }
      const double g = xi.dot(eta) - M(x, xi);
      if (g > best) {
        best = g;
        local_arg = xi;
      }
    }
    arg = local_arg;
    center = arg;
    width /= 8.0;
  }
  return best;
}

double power_conjugate(double p, double s) {
  if (s <= 0.0) return 0.0;
  if (p <= 1.0) return std::numeric_limits<double>::infinity();  // |eta|>1 unbounded
  const double pc = p / (p - 1.0);
  return std::pow(s, pc) * std::pow(p, -1.0 / (p - 1.0)) * (p - 1.0) / p;
}

Delta2Report delta2_estimate(const NFunction& M, const Point& lo, const Point& hi, double C,
                             double C_max) {
  if (!(C > 0.0)) throw ConfigError("delta2_estimate: C > 0 required");
  if (C_max <= 0.0) C_max = 8.0 * C;
  Delta2Report rep;
  const int d = M.xidim();
  std::vector<Grad> dirs;
  for (int a = 0; a < d; ++a) {
    Grad e(d);
    e[a] = 1.0;
    dirs.push_back(e);
  }
  if (d > 1) {
    Grad diag(d);
    for (int a = 0; a < d; ++a) diag[a] = 1.0 / std::sqrt(static_cast<double>(d));
    dirs.push_back(diag);
  }
  std::vector<Point> xs;
  const int nx = 7;
  for (int k = 0; k < nx; ++k) {
    Point x(M.xdim());
    for (int a = 0; a < M.xdim(); ++a)
      x[a] = lo[a] + (hi[a] - lo[a]) * (k + 0.5) / nx;
    xs.push_back(x);
  }
  auto fit_c = [&](double window) {
    double c = 0.0;
    const int nm = 24;
    for (const Point& x : xs)
      for (const Grad& dir : dirs)
        for (int i = 0; i < nm; ++i) {
          const double t = C * std::pow(window / C, (i + 1.0) / nm);
          const Grad xi = dir * t;
          const double denom = M(x, xi);
          if (denom < 1e-300) continue;
          c = std::max(c, M(x, xi * 2.0) / denom);
        }
    return c;
  };
  for (int w = 0; w < 3; ++w) rep.c_by_window.push_back(fit_c(C_max * std::pow(2.0, w)));
  rep.c_fit = rep.c_by_window.back();
  rep.holds = rep.c_by_window[2] <= 1.1 * rep.c_by_window[0] + 1e-12;
  // defect below the large-|xi| regime, folded into the additive h
  double hdef = 0.0;
  for (const Point& x : xs)
    for (const Grad& dir : dirs)
      for (int i = 1; i <= 8; ++i) {
        const Grad xi = dir * (C * i / 8.0);
        hdef = std::max(hdef, M(x, xi * 2.0) - rep.c_fit * M(x, xi));
      }
  rep.h_const = std::max(hdef, 0.0);
  return rep;
}

}  // namespace lavlab
