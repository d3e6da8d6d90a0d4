#pragma once

#include "nfield/model.hpp"

namespace nfield::fixtures {

inline ModelParams hopf_params() { return ModelParams(1.0, 1.0, 4.220214885988226, {{3.0, 0.5}, {-5.5, 1.0}}); }

inline ModelParams double_hopf_params() {
  return ModelParams(1.0, 1.0, 4.828749714457348, {{3.0, 0.0}, {-5.5, 0.999592391420082}});
}

// r = 4 makes S'(0) = 1, so c_hat equals the effective coefficients.
inline ModelParams comb_params() { return ModelParams(1.0, 1.0, 4.0, {{-5.0, 2.0}, {2.0, 0.0}}); }

inline constexpr double kHopfOmega = 1.644003102046893;
inline constexpr double kOmega1 = 2.030930500644927;
inline constexpr double kOmega2 = 1.299147304907829;

inline const cplx kHopfRho1{0.321607348361597, -0.880461478656249};
inline const cplx kHopfRho2{0.110838003673357, -2.312123026384049};
inline const cplx kGamma1{-0.191821747840362, -0.172140605861736};
inline const cplx kGamma2{-0.080160108888561, 0.0};

inline const cplx kOmega1Rho1{0.454550410967142, -1.057267648955222};
inline const cplx kOmega1Rho2{0.054136932895367, -3.495632804443535};

}  // namespace nfield::fixtures
