#include "rsgame/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsg {

LatticeModel LatticeModel::binomial_crr(double x0, double sigma, double rate, TimeGrid grid) {
  LatticeModel m;
  m.kind_ = Kind::BinomialCRR;
  m.grid_ = std::move(grid);
  const double dt = m.grid_.mesh();
  m.sigma_ = sigma;
  m.up_ = std::exp(sigma * std::sqrt(dt));
  m.down_ = 1.0 / m.up_;
  m.p_up_ = (std::exp(rate * dt) - m.down_) / (m.up_ - m.down_);
  if (m.p_up_ < 0.0 || m.p_up_ > 1.0)
    throw std::invalid_argument("binomial_crr: risk-neutral probability outside [0,1]");

  const std::size_t n = m.grid_.num_steps();
  m.states_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    m.states_[i].resize(i + 1);
    for (std::size_t k = 0; k <= i; ++k)
      m.states_[i][k] = x0 * std::pow(m.up_, static_cast<double>(k)) *
                        std::pow(m.down_, static_cast<double>(i - k));
  }
  return m;
}

double LatticeModel::default_spacing(const GameSpec& spec, const TimeGrid& grid) {
  const double sig = std::max(spec.bounds.sup_diffusion, 1e-8);
  return std::sqrt(3.0) * sig * std::sqrt(grid.mesh());
}

LatticeModel LatticeModel::trinomial(const GameSpec& spec, double x0, TimeGrid grid, double dx) {
  if (dx <= 0.0) throw std::invalid_argument("trinomial: dx must be positive");
  LatticeModel m;
  m.kind_ = Kind::Trinomial;
  m.grid_ = std::move(grid);
  m.dx_ = dx;
  m.spec_ = &spec;

  const std::size_t n = m.grid_.num_steps();
  m.states_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    m.states_[i].resize(2 * i + 1);
    for (std::size_t k = 0; k < 2 * i + 1; ++k)
      m.states_[i][k] = x0 + (static_cast<double>(k) - static_cast<double>(i)) * dx;
  }
  return m;
}

LatticeTransition LatticeModel::transition(std::size_t level, std::size_t node,
                                           const Vec& u, const Vec& v) const {
  LatticeTransition tr;
  if (kind_ == Kind::BinomialCRR) {
    const double x = states_[level][node];
    const double dt = grid_.dt(level);
    tr.count = 2;
    tr.child[0] = static_cast<int>(node);      // down
    tr.child[1] = static_cast<int>(node) + 1;  // up
    tr.prob[0] = 1.0 - p_up_;
    tr.prob[1] = p_up_;
    // Brownian increment implied by the branch under GBM dynamics
    if (sigma_ > 0.0) {
      tr.db[0] = -std::sqrt(dt);
      tr.db[1] = std::sqrt(dt);
      (void)x;
    }
    return tr;
  }

  const double t = grid_.point(level);
  const double x = states_[level][node];
  const double dt = grid_.dt(level);
  Vec xv(1);
  xv[0] = x;
  const double b = spec_->drift(t, xv, u, v)(0);
  const double sig = spec_->diffusion(t, xv, u, v)(0, 0);
  const double mean = b * dt;
  const double var = sig * sig * dt;

  const int base = static_cast<int>(node);  // children base, base+1, base+2
  if (var < 1e-14) {
    // drift-only step: split the mass over the two nodes bracketing x + mean
    const double shift = mean / dx_;
    int lo = static_cast<int>(std::floor(shift));
    lo = std::max(-1, std::min(1, lo));
    int hi = lo + 1;
    if (hi > 1) { hi = 1; lo = 0; }
    const double w = std::min(1.0, std::max(0.0, shift - static_cast<double>(lo)));
    tr.count = 2;
    tr.child[0] = base + lo + 1;
    tr.child[1] = base + hi + 1;
    tr.prob[0] = 1.0 - w;
    tr.prob[1] = w;
    return tr;
  }

  const double m2 = var + mean * mean;
  double pu = (m2 + mean * dx_) / (2.0 * dx_ * dx_);
  double pd = (m2 - mean * dx_) / (2.0 * dx_ * dx_);
  double pm = 1.0 - pu - pd;
  if (pu < -1e-12 || pd < -1e-12 || pm < -1e-12)
    throw std::runtime_error("trinomial: negative branch probability at level " +
                             std::to_string(level) + " (dx too small or too large for dt)");
  pu = std::max(0.0, pu);
  pd = std::max(0.0, pd);
  pm = std::max(0.0, 1.0 - pu - pd);

  tr.count = 3;
  tr.child[0] = base;      // down
  tr.child[1] = base + 1;  // middle
  tr.child[2] = base + 2;  // up
  tr.prob[0] = pd;
  tr.prob[1] = pm;
  tr.prob[2] = pu;
  if (sig > 1e-10) {
    tr.db[0] = (-dx_ - mean) / sig;
    tr.db[1] = (0.0 - mean) / sig;
    tr.db[2] = (dx_ - mean) / sig;
  }
  return tr;
}

double LatticeModel::expectation(const std::vector<double>& terminal_values,
                                 const ControlPath& u, const ControlPath& v,
                                 const GameSpec& spec) const {
  const std::size_t n = depth();
  if (terminal_values.size() != num_nodes(n))
    throw std::invalid_argument("expectation: terminal size mismatch");
  std::vector<double> cur = terminal_values;
  for (std::size_t i = n; i-- > 0;) {
    std::vector<double> prev(num_nodes(i));
    const Vec& uu = spec.u_set[static_cast<std::size_t>(u[i])];
    const Vec& vv = spec.v_set[static_cast<std::size_t>(v[i])];
    for (std::size_t k = 0; k < prev.size(); ++k) {
      const LatticeTransition tr = transition(i, k, uu, vv);
      double acc = 0.0;
      for (int c = 0; c < tr.count; ++c)
        acc += tr.prob[c] * cur[static_cast<std::size_t>(tr.child[c])];
      prev[k] = acc;
    }
    cur.swap(prev);
  }
  return cur[0];
}

}  // namespace rsg
