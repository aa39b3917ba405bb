#include "rsgame/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace rsg {
namespace {

double get(const CatalogParams& params, const CatalogParams& defaults, const std::string& key) {
  if (auto it = params.find(key); it != params.end()) return it->second;
  return defaults.at(key);
}

void reject_unknown(const CatalogParams& params, const CatalogParams& defaults,
                    const std::string& name) {
  for (const auto& [key, value] : params) {
    (void)value;
    if (defaults.find(key) == defaults.end())
      throw std::invalid_argument("catalog '" + name + "': unknown parameter '" + key + "'");
  }
}

GameSpec base_spec() {
  GameSpec spec;
  spec.state_dim = 1;
  spec.noise_dim = 1;
  const auto zero_cost = [](double, const Vec&, double, const Vec&, const Vec&, const Vec&) {
    return 0.0;
  };
  spec.running_cost = {zero_cost, zero_cost};
  const auto no_barrier = [](double, const Vec&) { return kNoObstacle; };
  spec.obstacle = {no_barrier, no_barrier};
  return spec;
}

}  // namespace

std::vector<CatalogEntry> catalog_list() {
  return {
      {"constant-drift", "b = mu, sigma = s, singleton controls, Phi = x",
       {{"mu", 1.0}, {"s", 0.0}}},
      {"additive-control", "b = u + v, sigma = s, f = 0, Phi = |x|, obstacle optional",
       {{"s", 1.0}, {"obstacle", kNoObstacle}}},
      {"multiplicative-coupled", "b = 0, sigma = 1, f_j = c u v z (Isaacs fails for c != 0)",
       {{"c", 1.0}}},
      {"decoupled-quadratic-costs", "f1 = -u^2, f2 = -v^2, Phi = 0, h = -1, b = u + v",
       {{"s", 1.0}}},
      {"american-put", "GBM dynamics, driver -r y, obstacle (K - x)^+",
       {{"rate", 0.05}, {"sigma", 0.2}, {"strike", 100.0}}},
      {"zero-sum-absolute-terminal", "b = u + v, sigma = 1, f = 0, Phi1 = |x|, Phi2 = -|x|",
       {{"s", 1.0}}},
      {"heat", "singleton controls, b = 0, sigma = sqrt(2), Phi = cos(x)", {}},
  };
}

GameSpec make_catalog_spec(const std::string& name, const CatalogParams& params) {
  CatalogParams defaults;
  for (const auto& entry : catalog_list())
    if (entry.name == name) defaults = entry.defaults;

  GameSpec spec = base_spec();
  spec.name = name;

  if (name == "constant-drift") {
    reject_unknown(params, defaults, name);
    const double mu = get(params, defaults, "mu");
    const double s = get(params, defaults, "s");
    spec.u_set = ControlSet::singleton("U");
    spec.v_set = ControlSet::singleton("V");
    spec.drift = [mu](double, const Vec& x, const Vec&, const Vec&) {
      return Vec::Constant(x.size(), mu);
    };
    spec.diffusion = [s](double, const Vec& x, const Vec&, const Vec&) {
      return Mat::Constant(x.size(), x.size(), s);
    };
    const auto phi = [](const Vec& x) { return x[0]; };
    spec.terminal_payoff = {phi, phi};
    spec.bounds.sup_drift = std::abs(mu);
    spec.bounds.sup_diffusion = std::abs(s);
    spec.bounds.lip_terminal = 1.0;
    return spec;
  }

  if (name == "additive-control" || name == "zero-sum-absolute-terminal") {
    reject_unknown(params, defaults, name);
    const double s = get(params, defaults, "s");
    spec.u_set = ControlSet::scalar("U", {-1.0, 1.0});
    spec.v_set = ControlSet::scalar("V", {-1.0, 1.0});
    spec.drift = [](double, const Vec&, const Vec& u, const Vec& v) {
      Vec b(1);
      b[0] = u[0] + v[0];
      return b;
    };
    spec.diffusion = [s](double, const Vec&, const Vec&, const Vec&) {
      return Mat::Constant(1, 1, s);
    };
    const auto abs_phi = [](const Vec& x) { return std::abs(x[0]); };
    if (name == "zero-sum-absolute-terminal") {
      const auto neg_phi = [](const Vec& x) { return -std::abs(x[0]); };
      spec.terminal_payoff = {abs_phi, neg_phi};
    } else {
      spec.terminal_payoff = {abs_phi, abs_phi};
      const double barrier = get(params, defaults, "obstacle");
      spec.obstacle = {[barrier](double, const Vec&) { return barrier; },
                       [barrier](double, const Vec&) { return barrier; }};
    }
    spec.bounds.sup_drift = 2.0;
    spec.bounds.sup_diffusion = std::abs(s);
    spec.bounds.lip_terminal = 1.0;
    return spec;
  }

  if (name == "multiplicative-coupled") {
    reject_unknown(params, defaults, name);
    const double c = get(params, defaults, "c");
    spec.u_set = ControlSet::scalar("U", {-1.0, 1.0});
    spec.v_set = ControlSet::scalar("V", {-1.0, 1.0});
    spec.drift = [](double, const Vec&, const Vec&, const Vec&) { return Vec::Zero(1); };
    spec.diffusion = [](double, const Vec&, const Vec&, const Vec&) {
      return Mat::Constant(1, 1, 1.0);
    };
    const auto coupled = [c](double, const Vec&, double, const Vec& z, const Vec& u,
                             const Vec& v) { return c * u[0] * v[0] * z[0]; };
    spec.running_cost = {coupled, coupled};
    const auto phi = [](const Vec&) { return 0.0; };
    spec.terminal_payoff = {phi, phi};
    spec.bounds.sup_diffusion = 1.0;
    spec.bounds.lip_running_cost_yz = std::abs(c);
    spec.bounds.sup_running_cost = 1e9;  // linear in z, no sup-bound in play
    return spec;
  }

  if (name == "decoupled-quadratic-costs") {
    reject_unknown(params, defaults, name);
    const double s = get(params, defaults, "s");
    spec.u_set = ControlSet::scalar("U", {-1.0, 0.0, 1.0});
    spec.v_set = ControlSet::scalar("V", {-1.0, 0.0, 1.0});
    spec.drift = [](double, const Vec&, const Vec& u, const Vec& v) {
      Vec b(1);
      b[0] = u[0] + v[0];
      return b;
    };
    spec.diffusion = [s](double, const Vec&, const Vec&, const Vec&) {
      return Mat::Constant(1, 1, s);
    };
    spec.running_cost = {[](double, const Vec&, double, const Vec&, const Vec& u, const Vec&) {
                           return -u[0] * u[0];
                         },
                         [](double, const Vec&, double, const Vec&, const Vec&, const Vec& v) {
                           return -v[0] * v[0];
                         }};
    const auto phi = [](const Vec&) { return 0.0; };
    spec.terminal_payoff = {phi, phi};
    spec.obstacle = {[](double, const Vec&) { return -1.0; },
                     [](double, const Vec&) { return -1.0; }};
    spec.bounds.sup_drift = 2.0;
    spec.bounds.sup_diffusion = std::abs(s);
    spec.bounds.sup_running_cost = 1.0;
    return spec;
  }

  if (name == "american-put") {
    reject_unknown(params, defaults, name);
    const double rate = get(params, defaults, "rate");
    const double sigma = get(params, defaults, "sigma");
    const double strike = get(params, defaults, "strike");
    spec.u_set = ControlSet::singleton("U");
    spec.v_set = ControlSet::singleton("V");
    spec.drift = [rate](double, const Vec& x, const Vec&, const Vec&) {
      Vec b(1);
      b[0] = rate * x[0];
      return b;
    };
    spec.diffusion = [sigma](double, const Vec& x, const Vec&, const Vec&) {
      return Mat::Constant(1, 1, sigma * x[0]);
    };
    const auto discount = [rate](double, const Vec&, double y, const Vec&, const Vec&,
                                 const Vec&) { return -rate * y; };
    spec.running_cost = {discount, discount};
    const auto payoff = [strike](const Vec& x) { return std::max(strike - x[0], 0.0); };
    spec.terminal_payoff = {payoff, payoff};
    spec.obstacle = {[strike](double, const Vec& x) { return std::max(strike - x[0], 0.0); },
                     [strike](double, const Vec& x) { return std::max(strike - x[0], 0.0); }};
    // coefficients grow linearly in x; declared over the 0..4*strike region
    spec.bounds.sup_drift = rate * 4.0 * strike;
    spec.bounds.sup_diffusion = sigma * 4.0 * strike;
    spec.bounds.sup_running_cost = rate * 4.0 * strike;
    spec.bounds.lip_drift = rate;
    spec.bounds.lip_diffusion = sigma;
    spec.bounds.lip_running_cost_yz = rate;
    spec.bounds.lip_terminal = 1.0;
    spec.bounds.lip_obstacle = 1.0;
    return spec;
  }

  if (name == "heat") {
    reject_unknown(params, defaults, name);
    spec.u_set = ControlSet::singleton("U");
    spec.v_set = ControlSet::singleton("V");
    spec.drift = [](double, const Vec&, const Vec&, const Vec&) { return Vec::Zero(1); };
    spec.diffusion = [](double, const Vec&, const Vec&, const Vec&) {
      return Mat::Constant(1, 1, std::sqrt(2.0));
    };
    const auto phi = [](const Vec& x) { return std::cos(x[0]); };
    spec.terminal_payoff = {phi, phi};
    spec.bounds.sup_diffusion = std::sqrt(2.0);
    spec.bounds.lip_terminal = 1.0;
    return spec;
  }

  throw std::invalid_argument("unknown catalog spec '" + name + "'");
}

}  // namespace rsg
