#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "optokerr/linear_dynamics.hpp"
#include "optokerr/spectrum.hpp"
#include "optokerr/verification.hpp"

namespace optokerr {

// full round-trip of double precision
std::string fmt17(double x);

const char* to_string(Normalization mode);
const char* to_string(DeltaEtaConvention conv);

// Raw parameter set as a config object (re-ingestable by make_params).
nlohmann::json params_to_config(const SystemParams& p);

nlohmann::json to_json(const SteadyState& s);
nlohmann::json to_json(const DerivedQuantities& d);
nlohmann::json to_json(const NmsReport& r);
nlohmann::json to_json(const Peak& pk);
nlohmann::json to_json(const TemperatureResult& t);
nlohmann::json to_json(const AuditReport& a);

using HeaderLines = std::vector<std::pair<std::string, std::string>>;

void write_text_file(const std::string& path, const std::string& content);

std::string render_csv_header(const HeaderLines& header);

std::string spectrum_csv(const SpectrumResult& r, const HeaderLines& header,
                         double omega_scale = 1.0);
std::string sde_periodogram_csv(const SdeResult& r, const HeaderLines& header);
std::string trajectory_csv(const SdeTrajectory& t, const HeaderLines& header);

}  // namespace optokerr
