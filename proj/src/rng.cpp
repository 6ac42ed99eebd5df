#include "floorgnn/rng.hpp"

#include <cmath>

namespace floorgnn {

double Rng::normal(double mean, double sd) {
  // Box-Muller; exactly two draws per call keeps the stream predictable.
  double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
  double u2 = next_double();
  double z = std::sqrt(-2.0 * std::log(u1)) *
             std::cos(2.0 * 3.14159265358979323846 * u2);
  return mean + sd * z;
}

}  // namespace floorgnn
