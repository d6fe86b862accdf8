#include "lghmc/rng.hpp"

#include <cmath>

namespace lghmc {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  have_spare_ = true;
  return u * f;
}

long Rng::uniform_int(long lo, long hi) {
  const long span = hi - lo + 1;
  long k = static_cast<long>(uniform() * static_cast<double>(span));
  if (k >= span) k = span - 1;
  return lo + k;
}

}  // namespace lghmc
