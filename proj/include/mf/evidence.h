#ifndef MF_EVIDENCE_H_
#define MF_EVIDENCE_H_

#include <span>

namespace mf {

// Dempster-Shafer style accumulation of two evidence scores in [0,1]:
// v (+) w = 1 - (1 - v)(1 - w). Commutative, associative, 0 is the identity
// and 1 is absorbing.
constexpr double Oplus(double v, double w) { return 1.0 - (1.0 - v) * (1.0 - w); }

// Left fold of Oplus; 0 for an empty list. Throws OutOfRange for values
// outside [0,1].
double DsCombine(std::span<const double> values);

}  // namespace mf

#endif  // MF_EVIDENCE_H_
