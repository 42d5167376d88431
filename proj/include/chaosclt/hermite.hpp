#pragma once

namespace chaosclt {

// Probabilists' Hermite polynomial H_q(x): H_0 = 1, H_1 = x,
// H_{q+1}(x) = x H_q(x) - q H_{q-1}(x). Throws DomainError for q < 0.
double hermite(int q, double x);

}  // namespace chaosclt
