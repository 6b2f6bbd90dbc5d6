#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "fuzzysweep/sweep.hpp"

namespace fuzzysweep {

enum class Format { Json, Table };

// Finite doubles as numbers, anything else as null.
nlohmann::json json_number(std::optional<double> value);

nlohmann::json config_to_json(const AlgorithmConfig& cfg);
nlohmann::json to_json(const IndexValue& value);
nlohmann::json to_json(const CviReport& report);
nlohmann::json to_json(const Tally& tally);

std::string render_table(const CviReport& report);
std::string render_table(const Tally& tally);

// Writes `text` to `path`, or to stdout when no path is given. Throws Error if the file
// cannot be written.
void emit_text(const std::string& text, const std::optional<std::filesystem::path>& path,
               std::ostream& stdout_stream);

// Serializes a sweep (or several, plus their tally) in the requested format.
std::string format_sweep(std::span<const CviReport> reports, Format format);

}  // namespace fuzzysweep
