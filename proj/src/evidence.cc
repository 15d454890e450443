#include "mf/evidence.h"

#include <string>

#include "mf/errors.h"

namespace mf {

double DsCombine(std::span<const double> values) {
  double acc = 0.0;
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kOutOfRange,
                  "evidence value " + std::to_string(v) + " outside [0,1]");
    }
    acc = Oplus(acc, v);
  }
  return acc;
}

}  // namespace mf
