#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nfield/discretize.hpp"
#include "nfield/normalform.hpp"
#include "nfield/spectrum.hpp"

namespace nfield {

// "%.17g": enough digits to round-trip a double, fixed so reruns are byte-identical.
std::string format_double(double v);

nlohmann::json complex_json(cplx z);
nlohmann::json complex_json(const std::vector<cplx>& v);
nlohmann::json complex_json(const CVector& v);

nlohmann::json to_json(const EigenData& e);
nlohmann::json to_json(const ContourSpec& c);
nlohmann::json to_json(const HopfNF& nf);
nlohmann::json to_json(const DoubleHopfNF& nf);
nlohmann::json to_json(const AttractorInfo& a);

// Columns: re_lambda, im_lambda, status, reason, smin, residual.
void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumPoint>& pts);

// Columns: t, V0 .. Vm.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);

}  // namespace nfield
