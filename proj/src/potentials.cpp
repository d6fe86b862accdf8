#include "lghmc/potentials.hpp"

#include <cmath>
#include <cstddef>

#include "lghmc/errors.hpp"
#include "lghmc/matexp.hpp"

namespace lghmc {

namespace {

using Vec = std::vector<double>;

Vec pad3(const Vec& y, double gx, double gy, double gz) {
  Vec g(y.size(), 0.0);
  g[0] = gx;
  g[1] = gy;
  g[2] = gz;
  return g;
}

Potential make_none() {
  Potential p;
  p.name = "none";
  p.description = "U = 0";
  p.value = [](const Vec&) { return 0.0; };
  p.gradient = [](const Vec& y) { return Vec(y.size(), 0.0); };
  return p;
}

Potential make_yz2expx2() {
  Potential p;
  p.name = "yz2expx2";
  p.description = "U = y z^2 exp(x^2)";
  p.value = [](const Vec& y) { return y[1] * y[2] * y[2] * std::exp(y[0] * y[0]); };
  p.gradient = [](const Vec& y) {
    const double e = std::exp(y[0] * y[0]);
    return pad3(y, 2.0 * y[0] * y[1] * y[2] * y[2] * e, y[2] * y[2] * e, 2.0 * y[1] * y[2] * e);
  };
  return p;
}

Potential make_y3expz2x2() {
  Potential p;
  p.name = "y3expz2x2";
  p.description = "U = y^3 exp(z^2 + x^2)";
  p.value = [](const Vec& y) {
    return y[1] * y[1] * y[1] * std::exp(y[2] * y[2] + y[0] * y[0]);
  };
  p.gradient = [](const Vec& y) {
    const double e = std::exp(y[2] * y[2] + y[0] * y[0]);
    const double y3 = y[1] * y[1] * y[1];
    return pad3(y, 2.0 * y[0] * y3 * e, 3.0 * y[1] * y[1] * e, 2.0 * y[2] * y3 * e);
  };
  return p;
}

Potential make_y_z2_expx2() {
  Potential p;
  p.name = "y_z2_expx2";
  p.description = "U = y + z^2 + exp(x^2)";
  p.value = [](const Vec& y) { return y[1] + y[2] * y[2] + std::exp(y[0] * y[0]); };
  p.gradient = [](const Vec& y) {
    return pad3(y, 2.0 * y[0] * std::exp(y[0] * y[0]), 1.0, 2.0 * y[2]);
  };
  return p;
}

Potential make_yexpz2_2x2() {
  Potential p;
  p.name = "yexpz2_2x2";
  p.description = "U = y exp(z^2 + 2 x^2)";
  p.value = [](const Vec& y) {
    return y[1] * std::exp(y[2] * y[2] + 2.0 * y[0] * y[0]);
  };
  p.gradient = [](const Vec& y) {
    const double e = std::exp(y[2] * y[2] + 2.0 * y[0] * y[0]);
    return pad3(y, 4.0 * y[0] * y[1] * e, e, 2.0 * y[2] * y[1] * e);
  };
  return p;
}

Potential make_h2fig() {
  Potential p;
  p.name = "h2fig";
  p.description = "U = (y^2 + 4) z^2 exp(x^3)";
  p.value = [](const Vec& y) {
    return (y[1] * y[1] + 4.0) * y[2] * y[2] * std::exp(y[0] * y[0] * y[0]);
  };
  p.gradient = [](const Vec& y) {
    const double e = std::exp(y[0] * y[0] * y[0]);
    const double y24 = y[1] * y[1] + 4.0;
    return pad3(y, 3.0 * y[0] * y[0] * y24 * y[2] * y[2] * e, 2.0 * y[1] * y[2] * y[2] * e,
                2.0 * y[2] * y24 * e);
  };
  return p;
}

}  // namespace

Potential find_potential(const std::string& name) {
  if (name == "none") return make_none();
  if (name == "yz2expx2") return make_yz2expx2();
  if (name == "y3expz2x2") return make_y3expz2x2();
  if (name == "y_z2_expx2") return make_y_z2_expx2();
  if (name == "yexpz2_2x2") return make_yexpz2_2x2();
  if (name == "h2fig") return make_h2fig();
  throw ConfigError("unknown potential '" + name + "'");
}

std::vector<std::string> potential_names() {
  return {"none", "yz2expx2", "y3expz2x2", "y_z2_expx2", "yexpz2_2x2", "h2fig"};
}

double validate_gradient(const Potential& pot, const HomogeneousSpaceSpec& spec, Rng& rng,
                         int points) {
  ExpConfig cfg;
  cfg.epsilon = 1e-13;
  double worst = 0.0;
  for (int t = 0; t < points; ++t) {
    SquareMatrix px(spec.n);
    for (const SquareMatrix& b : spec.p_generators) px += b * rng.normal();
    const double norm = px.frobenius_norm();
    if (norm > 1.5) px *= 1.5 / norm;
    const Vec y = exp_dispatch(px, cfg, spec.momentum_structure).apply(spec.base_point);
    const Vec grad = pot.gradient(y);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double h = 1e-6;
      Vec hi = y, lo = y;
      hi[i] += h;
      lo[i] -= h;
      const double fd = (pot.value(hi) - pot.value(lo)) / (2.0 * h);
      const double scale = std::max(1.0, std::fabs(grad[i]));
      worst = std::max(worst, std::fabs(fd - grad[i]) / scale);
    }
  }
  return worst;
}

}  // namespace lghmc
