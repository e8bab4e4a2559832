#pragma once

#include "snstf/simulate.hpp"
#include "snstf/types.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace snstf {

/// Parse failure with file/line location.
struct ParseError : std::runtime_error {
    ParseError(const std::string& where, int line, const std::string& what)
        : std::runtime_error(where + ":" + std::to_string(line) + ": " + what) {}
};

/// Flat key = value document grouped in [section] headers. Order-preserving;
/// duplicate keys within a section are rejected.
struct IniDoc {
    struct Entry {
        std::string key;
        std::string value;
        int line = 0;
    };
    struct Section {
        std::string name;
        int line = 0;
        std::vector<Entry> entries;
    };
    std::vector<Section> sections;

    const Section* find(const std::string& name) const;
};

IniDoc parse_ini(const std::string& text, const std::string& where);

/// One experiment record file: counts plus optional source, security and
/// realized post-AOPP blocks.
struct RecordFile {
    ExperimentRecord record;
    std::optional<SourceParams> source;
    std::optional<SecurityParams> security;
};

/// Parses a record document; unknown sections or keys are rejected with
/// location info.
RecordFile parse_record_file(const std::string& text, const std::string& where);

/// Canonical serialization; parse_record_file followed by serialize_record
/// reproduces the input byte for byte when the input was itself canonical.
std::string serialize_record(const RecordFile& rf);

RecordFile load_record(const std::string& path);
void save_record(const std::string& path, const RecordFile& rf);

/// Simulator configuration document ([source], [link], [sim] sections).
SimConfig parse_sim_config(const std::string& text, const std::string& where);
SimConfig load_sim_config(const std::string& path);

/// Synthetic drift scenario for the phase-compensation demo.
struct DriftConfig {
    double drift_deg_per_window = 20.0;  // linear drift across 40 us windows
    int n_windows = 12500;               // 0.5 s at 40 us
    double noise_sigma_deg = 0.0;        // detection-phase jitter
    double ref_counts_per_window = 40.0; // strong reference detections
    double dim_rate_hz = 1000.0;         // dim reference detections
    double lambda1_nm = 1548.51;
    double lambda2_nm = 1550.12;
    double offset_deg = 123.0;
    std::uint64_t seed = 1;

    void validate() const;
};

DriftConfig parse_drift_config(const std::string& text, const std::string& where);
DriftConfig load_drift_config(const std::string& path);

/// Full-precision numeric formatting used in all emitted files: shortest
/// round-trip representation via %.17g.
std::string format_full(double v);

/// FNV-1a 64-bit digest of raw file bytes, lowercase hex; embedded in reports
/// for input provenance.
std::string fnv1a_hex(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// CSV emission: header row, '.' decimal separator, LF endings.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows);

/// Key = value report of every pipeline intermediate plus the input digest.
std::string serialize_report(const KeyRateReport& rep, const std::string& input_digest);

} // namespace snstf
