#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwalk/experiments.hpp"
#include "cwalk/pipeline.hpp"

namespace cwalk::cli {

enum class SweepKind { flat, curved, amplitude };

struct SweepConfig {
    SweepKind kind = SweepKind::flat;
    std::optional<std::vector<Real>> eps_list;
    std::vector<Real> eta_list{1.0};
    std::vector<Real> amplitudes;
    Real mass = 0;
    Real length = 8;
    Real horizon = 1;
    Real eps = 1.0 / 256;  // fixed eps of the amplitude sweep
    Real bump_width = 0.5;
    Real bump_center = 0;
    bool record_wallclock = false;
};

struct MetricWindowConfig {
    Real t_begin = 0;
    Real t_end = 0;
    int t_samples = 1;
};

/// Parsed run configuration. Sections absent from the document stay empty and
/// the subcommand that needs them reports a config error.
struct RunConfig {
    nlohmann::json source;  // the document as read, echoed into manifests

    std::optional<Grid> grid;
    std::optional<int> steps;
    Real mass = 0;
    Real eta = 1;
    Real t_start = 0;
    std::optional<nlohmann::json> metric_spec;  // resolved lazily so Omega <= 0 maps to a numerical failure
    std::string base_dir;                       // for relative table paths
    PacketParams initial;
    AncillaInit ancilla_init = AncillaInit::zero;
    Sector sector = Sector::psi;
    int snapshot_every = 0;
    std::string output_dir = "out";
    std::optional<SweepConfig> sweep;
    std::optional<MetricWindowConfig> metric_window;

    /// Builds the conformal field; PreconditionError for nonpositive values.
    ConformalField metric() const;
    /// Requires grid and steps.
    PipelineConfig pipeline() const;
};

/// Strict parse: unknown keys and out-of-range values raise ConfigError.
RunConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

ConformalField metric_from_json(const nlohmann::json& spec, const std::string& base_dir);

}  // namespace cwalk::cli
