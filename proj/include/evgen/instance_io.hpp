#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "evgen/json_codec.hpp"
#include "evgen/model.hpp"
#include "evgen/pipeline.hpp"

namespace evgen {

inline constexpr int kMetadataSchemaVersion = 1;
inline constexpr std::string_view kGeneratorVersion = "1.0.0";

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// 12 significant digits, always with a decimal point or exponent
/// ("0.5", "2.0", "0.123456789012").
std::string format_number(double value);

/// Text layout, one node row per line after a header:
///
///   StringID Type x y demand ReadyTime DueDate ServiceTime
///   D0 d 0.5 0.5 0.0 0.0 2.0 0.0
///   C1 c ...                 (customers 1..N)
///   S6 f ...                 (stations N+1..N+|S|)
///
/// then a blank line and one parameter line each for Q, B, r, g, H and phi in
/// the form `<key> <description> /<value>/`.
std::string write_instance_text(const Instance& instance);

/// Inverse of write_instance_text. Throws ParseError naming the offending line
/// (or the last line read when the text ends early).
Instance parse_instance_text(std::string_view text);

Instance read_instance_file(const std::filesystem::path& path);

/// "<N>C<S>S_<family>_<regime>_seed<seed, 5 digits>", e.g. 20C4S_RC_tight_seed00042.
std::string instance_name(const GenerationOutcome& outcome);

/// feasible: Stage 2 proved it; unverified: accepted on Stage 1 alone or
/// Stage 2 ran out of budget; infeasible: rejected by either stage.
std::string_view feasibility_status(const GenerationOutcome& outcome);

struct MetadataOptions {
    bool include_timing = false;  // timing makes repeated runs differ byte-wise
};

json metadata_json(const GenerationOutcome& outcome, const MetadataOptions& options = {});

/// Throws std::invalid_argument when required keys are missing or the status
/// disagrees with the embedded outcome and reports.
void validate_metadata(const json& metadata);

json read_metadata_file(const std::filesystem::path& path);

struct PersistOptions {
    bool persist_rejects = true;
    MetadataOptions metadata;
};

struct PersistedFiles {
    std::filesystem::path instance;
    std::filesystem::path metadata;
    bool renamed = false;  // a file with the plain name already existed
};

/// accepted -> root/feasible/<name>.txt and <name>.meta.json; rejected ->
/// root/infeasible/... or nothing when rejects are not persisted. A name
/// collision appends _1, _2, ... and logs a warning to stderr. I/O failures
/// throw std::runtime_error with the path.
std::optional<PersistedFiles> persist_outcome(const GenerationOutcome& outcome, const std::filesystem::path& root,
                                              const PersistOptions& options = {});

}  // namespace evgen
