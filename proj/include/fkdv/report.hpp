#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "fkdv/diagnostics.hpp"
#include "fkdv/solitary.hpp"
#include "fkdv/steady.hpp"

namespace fkdv::report {

inline constexpr const char* kToolVersion = "fkdv 0.1.0";
inline constexpr int kSchemaVersion = 1;

// One sampled profile plus the parameters that produced it. The x array is
// strictly increasing and pairs elementwise with value.
struct ProfileMetadata {
    double s = 0.0;
    double lambda = 0.0;
    double P = 0.0;
    double mu = 0.0;
    std::string kind;  // "periodic" or "solitary"
    double residual_norm = 0.0;
    std::string timestamp;
    std::string tool_version = kToolVersion;
};

struct ProfileRecord {
    std::vector<double> x;
    std::vector<double> value;
    ProfileMetadata metadata;

    // Throws std::invalid_argument when the array invariants are broken.
    void validate() const;
};

ProfileRecord make_record(const steady::WaveSolution& w);
ProfileRecord make_record(const solitary::SolitaryWave& w, double s);

nlohmann::ordered_json to_json(const ProfileRecord& rec);
ProfileRecord record_from_json(const std::string& text);

// Serialises the measured diagnostic quantities (no run parameters; callers
// compose those around it).
nlohmann::ordered_json to_json(const diag::DiagnosticsReport& rep);

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// ISO-8601 UTC, seconds precision.
std::string timestamp_utc_now();

// Removes every line holding a "timestamp" field, so two reports from
// different runs can be compared byte-for-byte.
std::string strip_timestamp_lines(const std::string& text);

// Write-temp-then-rename so readers (and concurrent writers targeting
// distinct names) never observe a partial file.
void write_text_atomic(const std::filesystem::path& target, const std::string& text);

// Two-column CSV ("x,value") with round-trip formatting.
void write_profile_csv(const std::filesystem::path& target, const ProfileRecord& rec);

}  // namespace fkdv::report
