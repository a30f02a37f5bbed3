#pragma once

#include "tentkit/coefficients.hpp"

namespace tentkit {

// e^Z by scaling and squaring with the degree-13 Pade approximant.
Mat expm(const Mat& Z);

// e^Z together with phi1(Z) = (e^Z - I) Z^{-1}, phi2(Z) = (e^Z - I - Z) Z^{-2}
// and phi3(Z) = (e^Z - I - Z - Z^2/2) Z^{-3}: Taylor series at Z / 2^s with
// ||Z / 2^s||_1 <= 1/2, then s doubling steps.
struct PhiFunctions {
    Mat e, phi1, phi2, phi3;
};
PhiFunctions phi_functions(const Mat& Z);

// Scalar versions, accurate for every z <= 0 including z -> 0.
double phi1(double z);
double phi2(double z);
double phi3(double z);

} // namespace tentkit
