#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spectrace/estimators.hpp"
#include "spectrace/recoverability.hpp"
#include "spectrace/systems.hpp"

namespace spectrace {

using Json = nlohmann::ordered_json;

/// Jordan spec plus initial state and drive, as stored in a spec file.
struct SystemFile {
  JordanSpec spec;
  CVector b;
  CVector c;
};

/// Accepts a number, {"re": .., "im": ..}, or a string such as "1-2j".
Complex complex_from_json(const Json& j);
Json complex_to_json(Complex z);
Json spectrum_to_json(const std::vector<Complex>& values);

/// Schema: eigenvalues, blocks, U required; b required; c optional (zeros).
SystemFile system_from_json(const Json& j);
Json system_to_json(const SystemFile& sys);
SystemFile load_system_file(const std::string& path);

Json load_json_file(const std::string& path);

Json rank_to_json(const RankEstimate& rank);

/// Result object; rmse and ine are null when no reference was available.
Json estimate_to_json(const SpectrumEstimate& est, std::optional<double> rmse = std::nullopt,
                      std::optional<double> ine = std::nullopt);

Json report_to_json(const RecoverabilityReport& rep);
Json certificate_to_json(const UniversalityCertificate& cert);

Json error_to_json(ErrorCode code, const std::string& message);

}  // namespace spectrace
