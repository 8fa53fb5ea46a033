#include "eaw/scenario.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace eaw {

namespace {
const double kPi = std::acos(-1.0);
}

double Factor1D::operator()(double s) const {
  double v = coef;
  for (int i = 0; i < power; ++i) v *= s;
  switch (kind) {
    case One: return v;
    case Sin: return v * std::sin(freq * s + phase);
    case Cos: return v * std::cos(freq * s + phase);
  }
  return v;
}

std::vector<Factor1D> derivative(const Factor1D& f) {
  std::vector<Factor1D> out;
  if (f.power > 0) {
    Factor1D g = f;
    g.coef *= f.power;
    g.power = f.power - 1;
    out.push_back(g);
  }
  if (f.kind == Factor1D::Sin) {
    Factor1D g = f;
    g.coef *= f.freq;
    g.kind = Factor1D::Cos;
    out.push_back(g);
  } else if (f.kind == Factor1D::Cos) {
    Factor1D g = f;
    g.coef *= -f.freq;
    g.kind = Factor1D::Sin;
    out.push_back(g);
  }
  return out;
}

double PolyTrigField::eval(double x, double y) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.eval(x, y);
  return v;
}

PolyTrigField PolyTrigField::dx() const {
  std::vector<Term2D> out;
  for (const auto& t : terms_)
    for (const auto& d : derivative(t.fx)) out.push_back({d, t.fy});
  return PolyTrigField(out);
}

PolyTrigField PolyTrigField::dy() const {
  std::vector<Term2D> out;
  for (const auto& t : terms_)
    for (const auto& d : derivative(t.fy)) out.push_back({t.fx, d});
  return PolyTrigField(out);
}

PolyTrigField PolyTrigField::scaled(double s) const {
  std::vector<Term2D> out = terms_;
  for (auto& t : out) t.fx.coef *= s;
  return PolyTrigField(out);
}

PolyTrigField PolyTrigField::operator+(const PolyTrigField& o) const {
  std::vector<Term2D> out = terms_;
  out.insert(out.end(), o.terms_.begin(), o.terms_.end());
  return PolyTrigField(out);
}

double PolyTrigTime::eval(double t) const {
  double v = 0.0;
  for (const auto& f : terms_) v += f(t);
  return v;
}

PolyTrigTime PolyTrigTime::dt() const {
  std::vector<Factor1D> out;
  for (const auto& f : terms_)
    for (const auto& d : derivative(f)) out.push_back(d);
  return PolyTrigTime(out);
}

double PointSource::time_factor(double t) const {
  const double s = t - t0;
  const double q = kPi * a * s * s;
  return -2.0 * kPi * a * (1.0 - 2.0 * q) * std::exp(-q);
}

double PointSource::spatial(double x, double y) const {
  const double dx = x - x0.x;
  const double dy = y - x0.y;
  return std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma)) / (2.0 * kPi * sigma * sigma);
}

double PointSource::mass_inside(const Rect& r) const {
  const double s = sigma * std::sqrt(2.0);
  const double mx = 0.5 * (std::erf((r.xmax - x0.x) / s) - std::erf((r.xmin - x0.x) / s));
  const double my = 0.5 * (std::erf((r.ymax - x0.y) / s) - std::erf((r.ymin - x0.y) / s));
  return mx * my;
}

namespace {

struct ManufacturedData {
  std::vector<VectorTermSpec> u_terms;
  std::vector<ScalarTermSpec> phi_terms;
  // per-term spatial derivative fields, precomputed
};

Vec2 eval_u(const std::vector<VectorTermSpec>& terms, double x, double y, double t, int tderiv) {
  Vec2 v;
  for (const auto& k : terms) {
    PolyTrigTime tau = k.tau;
    for (int d = 0; d < tderiv; ++d) tau = tau.dt();
    const double f = tau.eval(t);
    v.x += k.sx.eval(x, y) * f;
    v.y += k.sy.eval(x, y) * f;
  }
  return v;
}

double eval_phi(const std::vector<ScalarTermSpec>& terms, double x, double y, double t,
                int tderiv) {
  double v = 0.0;
  for (const auto& k : terms) {
    PolyTrigTime tau = k.tau;
    for (int d = 0; d < tderiv; ++d) tau = tau.dt();
    v += k.s.eval(x, y) * tau.eval(t);
  }
  return v;
}

// Central finite differences of the strong operator applied to the exact
// closures; guards the analytic forcing derivation against typos in the term
// lists' derivative handling.
void self_check(const Scenario& sc) {
  const double hs = 1e-4;  // balances truncation against roundoff for second derivatives
  Rng rng(0x5eedULL);
  double max_resid = 0.0;
  double scale = 1.0;

  auto fe_at = [&](double x, double y, double t) {
    Vec2 f;
    for (const auto& term : sc.forcing_e) {
      const double tf = term.time(t);
      const Vec2 s = term.space(x, y);
      f.x += tf * s.x;
      f.y += tf * s.y;
    }
    return f;
  };
  auto fa_at = [&](double x, double y, double t) {
    double f = 0.0;
    for (const auto& term : sc.forcing_a) f += term.time(t) * term.space(x, y);
    return f;
  };

  const Material& m = sc.material;
  for (int s = 0; s < 20; ++s) {
    const double t = rng.uniform(0.05, std::max(0.1, sc.T));
    {
      const double x = rng.uniform(sc.domain.xmin + 2 * hs, sc.interface_x - 2 * hs);
      const double y = rng.uniform(sc.domain.ymin + 2 * hs, sc.domain.ymax - 2 * hs);
      auto u = [&](double xx, double yy, double tt) { return sc.exact_u(xx, yy, tt); };
      const Vec2 u0 = u(x, y, t);
      const Vec2 utt = (u(x, y, t + hs) - 2.0 * u0 + u(x, y, t - hs)) / (hs * hs);
      const Vec2 ut = (u(x, y, t + hs) - u(x, y, t - hs)) / (2.0 * hs);
      const Vec2 uxx = (u(x + hs, y, t) - 2.0 * u0 + u(x - hs, y, t)) / (hs * hs);
      const Vec2 uyy = (u(x, y + hs, t) - 2.0 * u0 + u(x, y - hs, t)) / (hs * hs);
      const Vec2 uxy = (u(x + hs, y + hs, t) - u(x + hs, y - hs, t) - u(x - hs, y + hs, t) +
                        u(x - hs, y - hs, t)) /
                       (4.0 * hs * hs);
      // div sigma for isotropic materials
      const double dsx = (2 * m.mu + m.lambda) * uxx.x + m.mu * uyy.x + (m.mu + m.lambda) * uxy.y;
      const double dsy = (m.mu + m.lambda) * uxy.x + m.mu * uxx.y + (2 * m.mu + m.lambda) * uyy.y;
      const Vec2 fe = fe_at(x, y, t);
      const double rx = m.rho_e * (utt.x + 2 * m.zeta * ut.x + m.zeta * m.zeta * u0.x) - dsx - fe.x;
      const double ry = m.rho_e * (utt.y + 2 * m.zeta * ut.y + m.zeta * m.zeta * u0.y) - dsy - fe.y;
      max_resid = std::max({max_resid, std::abs(rx), std::abs(ry)});
      scale = std::max({scale, std::abs(fe.x), std::abs(fe.y), m.rho_e * std::abs(utt.x)});
    }
    {
      const double x = rng.uniform(sc.interface_x + 2 * hs, sc.domain.xmax - 2 * hs);
      const double y = rng.uniform(sc.domain.ymin + 2 * hs, sc.domain.ymax - 2 * hs);
      auto p = [&](double xx, double yy, double tt) { return sc.exact_phi(xx, yy, tt); };
      const double p0 = p(x, y, t);
      const double ptt = (p(x, y, t + hs) - 2.0 * p0 + p(x, y, t - hs)) / (hs * hs);
      const double lap = (p(x + hs, y, t) + p(x - hs, y, t) + p(x, y + hs, t) + p(x, y - hs, t) -
                          4.0 * p0) /
                         (hs * hs);
      const double fa = fa_at(x, y, t);
      const double r = ptt / (m.c * m.c) - lap - fa;
      max_resid = std::max(max_resid, std::abs(r));
      scale = std::max({scale, std::abs(fa), std::abs(ptt) / (m.c * m.c)});
    }
  }
  // The FD noise floor for second derivatives is ~1e-8 * scale at this step.
  if (max_resid > 1e-6 * scale)
    throw std::runtime_error("scenario '" + sc.name +
                             "': strong-form residual self-check failed (residual " +
                             std::to_string(max_resid) + ", scale " + std::to_string(scale) + ")");
}

}  // namespace

Scenario make_manufactured(const std::string& name, const Material& material,
                           std::vector<VectorTermSpec> u_terms,
                           std::vector<ScalarTermSpec> phi_terms, double T, double dt) {
  material.validate();
  Scenario sc;
  sc.name = name;
  sc.material = material;
  sc.T = T;
  sc.dt = dt;
  sc.domain = {-1.0, 1.0, 0.0, 1.0};
  sc.interface_x = 0.0;
  sc.has_exact = true;

  const Material m = material;

  sc.exact_u = [u_terms](double x, double y, double t) { return eval_u(u_terms, x, y, t, 0); };
  sc.exact_du = [u_terms](double x, double y, double t) { return eval_u(u_terms, x, y, t, 1); };
  sc.exact_phi = [phi_terms](double x, double y, double t) {
    return eval_phi(phi_terms, x, y, t, 0);
  };
  sc.exact_dphi = [phi_terms](double x, double y, double t) {
    return eval_phi(phi_terms, x, y, t, 1);
  };

  {
    std::vector<VectorTermSpec> gx, gy;
    for (const auto& k : u_terms) {
      gx.push_back({k.sx.dx(), k.sy.dx(), k.tau});
      gy.push_back({k.sx.dy(), k.sy.dy(), k.tau});
    }
    sc.exact_grad_u = [gx, gy](double x, double y, double t) {
      return std::array<Vec2, 2>{eval_u(gx, x, y, t, 0), eval_u(gy, x, y, t, 0)};
    };
  }
  {
    std::vector<ScalarTermSpec> px, py;
    for (const auto& k : phi_terms) {
      px.push_back({k.s.dx(), k.tau});
      py.push_back({k.s.dy(), k.tau});
    }
    sc.exact_grad_phi = [px, py](double x, double y, double t) {
      return Vec2{eval_phi(px, x, y, t, 0), eval_phi(py, x, y, t, 0)};
    };
  }

  // f_e = rho_e (u'' + 2 zeta u' + zeta^2 u) - div sigma(u), per term
  for (const auto& k : u_terms) {
    auto push = [&sc](PolyTrigField sx, PolyTrigField sy, PolyTrigTime tau) {
      sc.forcing_e.push_back(
          {[tau](double t) { return tau.eval(t); },
           [sx, sy](double x, double y) { return Vec2{sx.eval(x, y), sy.eval(x, y)}; }});
    };
    push(k.sx.scaled(m.rho_e), k.sy.scaled(m.rho_e), k.tau.dt().dt());
    if (m.zeta > 0.0) {
      push(k.sx.scaled(2 * m.rho_e * m.zeta), k.sy.scaled(2 * m.rho_e * m.zeta), k.tau.dt());
      push(k.sx.scaled(m.rho_e * m.zeta * m.zeta), k.sy.scaled(m.rho_e * m.zeta * m.zeta), k.tau);
    }
    const PolyTrigField dsx = k.sx.dx().dx().scaled(2 * m.mu + m.lambda) +
                              k.sx.dy().dy().scaled(m.mu) +
                              k.sy.dx().dy().scaled(m.mu + m.lambda);
    const PolyTrigField dsy = k.sx.dx().dy().scaled(m.mu + m.lambda) +
                              k.sy.dx().dx().scaled(m.mu) +
                              k.sy.dy().dy().scaled(2 * m.mu + m.lambda);
    push(dsx.scaled(-1.0), dsy.scaled(-1.0), k.tau);
    sc.dirichlet_e.push_back(
        {[tau = k.tau](double t) { return tau.eval(t); },
         [sx = k.sx, sy = k.sy](double x, double y) { return Vec2{sx.eval(x, y), sy.eval(x, y)}; }});
  }

  // f_a = c^-2 phi'' - lap phi, per term
  for (const auto& k : phi_terms) {
    auto push = [&sc](PolyTrigField s, PolyTrigTime tau) {
      sc.forcing_a.push_back({[tau](double t) { return tau.eval(t); },
                              [s](double x, double y) { return s.eval(x, y); }});
    };
    push(k.s.scaled(1.0 / (m.c * m.c)), k.tau.dt().dt());
    push((k.s.dx().dx() + k.s.dy().dy()).scaled(-1.0), k.tau);
    sc.dirichlet_a.push_back({[tau = k.tau](double t) { return tau.eval(t); },
                              [s = k.s](double x, double y) { return s.eval(x, y); }});
  }

  sc.u0 = [f = sc.exact_u](double x, double y) { return f(x, y, 0.0); };
  sc.u1 = [f = sc.exact_du](double x, double y) { return f(x, y, 0.0); };
  sc.phi0 = [f = sc.exact_phi](double x, double y) { return f(x, y, 0.0); };
  sc.phi1 = [f = sc.exact_dphi](double x, double y) { return f(x, y, 0.0); };

  self_check(sc);
  return sc;
}

Scenario make_zero_scenario(const Material& material) {
  material.validate();
  Scenario sc;
  sc.name = "zero";
  sc.material = material;
  sc.domain = {-1.0, 1.0, 0.0, 1.0};
  sc.interface_x = 0.0;
  sc.u0 = [](double, double) { return Vec2{}; };
  sc.u1 = sc.u0;
  sc.phi0 = [](double, double) { return 0.0; };
  sc.phi1 = sc.phi0;
  return sc;
}

Scenario test_case_1() {
  Material m;
  m.mu = 26.29;
  m.lambda = 51.20;
  m.rho_e = 2.7;
  m.rho_a = 1.0;
  m.c = 1.0;
  m.zeta = 0.0;

  // u = x^2 cos(sqrt(2) pi t) cos(pi x / 2) sin(pi y) (1, 1)
  const Factor1D fx{1.0, 2, Factor1D::Cos, kPi / 2.0, 0.0};
  const Factor1D fy{1.0, 0, Factor1D::Sin, kPi, 0.0};
  const PolyTrigField s({{fx, fy}});
  const PolyTrigTime tau({Factor1D{1.0, 0, Factor1D::Cos, std::sqrt(2.0) * kPi, 0.0}});

  // phi = x^2 sin(sqrt(2) pi t) sin(pi x) sin(pi y)
  const Factor1D gx{1.0, 2, Factor1D::Sin, kPi, 0.0};
  const PolyTrigField q({{gx, fy}});
  const PolyTrigTime theta({Factor1D{1.0, 0, Factor1D::Sin, std::sqrt(2.0) * kPi, 0.0}});

  return make_manufactured("test1", m, {{s, s, tau}}, {{q, theta}}, 1.0, 1e-4);
}

Scenario test_case_2() {
  Material m;
  m.mu = 26.29;
  m.lambda = 51.20;
  m.rho_e = 2.7;
  m.rho_a = 1.0;
  m.c = 1.0;
  m.zeta = 0.0;

  // u = (cos(4 pi x / c_p), cos(4 pi x / c_s)) cos(4 pi t), plane P/S waves
  const Factor1D one_y{1.0, 0, Factor1D::One, 0.0, 0.0};
  const PolyTrigField sx({{Factor1D{1.0, 0, Factor1D::Cos, 4.0 * kPi / m.cp(), 0.0}, one_y}});
  const PolyTrigField sy({{Factor1D{1.0, 0, Factor1D::Cos, 4.0 * kPi / m.cs(), 0.0}, one_y}});
  const PolyTrigTime tau({Factor1D{1.0, 0, Factor1D::Cos, 4.0 * kPi, 0.0}});

  // phi = sin(4 pi x) sin(4 pi t)
  const PolyTrigField q({{Factor1D{1.0, 0, Factor1D::Sin, 4.0 * kPi, 0.0}, one_y}});
  const PolyTrigTime theta({Factor1D{1.0, 0, Factor1D::Sin, 4.0 * kPi, 0.0}});

  return make_manufactured("test2", m, {{sx, sy, tau}}, {{q, theta}}, 0.8, 1e-4);
}

Scenario test_case_3(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("test_case_3: sigma must be positive");
  Material m;
  m.rho_e = 2.5;
  m.rho_a = 1.0;
  m.mu = 10.0;
  m.lambda = 20.0;
  m.c = 1.5;
  m.zeta = 0.0;

  Scenario sc = make_zero_scenario(m);
  sc.name = "test3";
  sc.T = 1.0;
  sc.dt = 1e-5;

  PointSource src;
  src.x0 = {0.2, 0.5};
  src.t0 = 0.1;
  src.a = 576.0;
  src.sigma = sigma;
  if (!(src.x0.x > sc.interface_x && src.x0.x < sc.domain.xmax && src.x0.y > sc.domain.ymin &&
        src.x0.y < sc.domain.ymax))
    throw std::invalid_argument("test_case_3: source must lie strictly inside the acoustic domain");
  const Rect acoustic{sc.interface_x, sc.domain.xmax, sc.domain.ymin, sc.domain.ymax};
  if (src.mass_inside(acoustic) < 0.999)
    std::cerr << "warning: test3 source width sigma=" << sigma
              << " leaves more than 0.1% of the Gaussian mass outside the acoustic domain\n";
  sc.point_sources.push_back(src);
  return sc;
}

}  // namespace eaw
