#include "chaosclt/hermite.hpp"

#include "chaosclt/errors.hpp"

namespace chaosclt {

double hermite(int q, double x) {
  if (q < 0) throw DomainError("hermite: order must be nonnegative");
  if (q == 0) return 1.0;
  double previous = 1.0;
  double current = x;
  for (int k = 1; k < q; ++k) {
    const double next = x * current - k * previous;
    previous = current;
    current = next;
  }
  return current;
}

}  // namespace chaosclt
