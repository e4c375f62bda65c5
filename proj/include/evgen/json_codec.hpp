#pragma once

#include <json.hpp>

#include "evgen/config.hpp"
#include "evgen/model.hpp"
#include "evgen/screening.hpp"
#include "evgen/verifier.hpp"

namespace evgen {

using json = nlohmann::ordered_json;

json config_to_json(const GeneratorConfig& config);

/// Reads a (possibly partial) config over the defaults. Type errors, unknown
/// enum names and range violations are all reported as ConfigError with the
/// dotted field name ("time_windows.phi", ...). When phi is given without a
/// regime the regime becomes custom.
GeneratorConfig config_from_json(const json& document, const GeneratorConfig& defaults = {});

json instance_to_json(const Instance& instance);
json screening_to_json(const ScreeningReport& report);
ScreeningReport screening_from_json(const json& document);
json verification_to_json(const VerificationResult& result, bool include_timing);

}  // namespace evgen
