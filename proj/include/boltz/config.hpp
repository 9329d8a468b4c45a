#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "boltz/dsmc.hpp"
#include "boltz/integrator.hpp"
#include "boltz/kernel.hpp"
#include "boltz/reference.hpp"
#include "boltz/transport.hpp"

namespace boltz {

enum class SolverKind { homog, inhomog, dsmc };
SolverKind parse_solver(const std::string& s);
const char* to_string(SolverKind k);

enum class Profile { desk, paper };
Profile parse_profile(const std::string& s);
const char* to_string(Profile p);

struct RunConfig {
    SolverKind solver = SolverKind::homog;
    Profile profile = Profile::desk;
    int d = 2;
    int n_v = 32;
    double T_dom = 8.0;
    int n_x = 32;
    double L = 6.283185307179586;
    Method method = Method::fast;
    int M1 = 4, M2 = 4;
    VHSKernel kernel = maxwell_2d();
    double knudsen = 1.0;
    double dt = 0.01;
    double t_end = 1.0;
    int output_every = 10;
    int cell_output_every = 0;
    InitialCondition ic;
    std::size_t N_p = 10000;
    int runs = 50;
    bool check_conservation = false;
    bool bkw_reference = false;
    bool snapshot = false;
    std::string out_dir = "out";
    std::string cache_dir;
    std::uint64_t seed = 1;
};

// Defaults of a profile: desk keeps runs at seconds to minutes, paper uses
// the published resolutions and particle budgets.
RunConfig profile_defaults(Profile p);

// Parses "[section]" headers and "key = value" lines; '#' and ';' start
// comments. Returns section.key -> value. Duplicate keys are rejected.
std::map<std::string, std::string> parse_ini(const std::string& text, const std::string& origin);

// Applies parsed keys onto cfg; unknown keys and malformed values throw ConfigError.
void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& kv);

// Cross-field checks (throws ConfigError).
void validate(const RunConfig& cfg);

// Reads the file (ConfigError when missing) on top of the profile defaults.
// A "profile" key in [run] selects the base profile.
RunConfig load_config(const std::string& path, const std::string& profile_override = "");

// Config for a CLI subcommand: profile defaults, then the file (optional),
// with solver forced to `solver`. A file naming another solver is rejected.
RunConfig resolve_config(const std::string& path, const std::string& solver, const std::string& profile_override);

// Every resolved field as section.key = value lines.
std::vector<std::pair<std::string, std::string>> resolved_settings(const RunConfig& cfg);
void write_run_meta(const RunConfig& cfg, const std::string& dir, const std::string& command);

HomogeneousConfig to_homogeneous(const RunConfig& cfg);
InhomogeneousConfig to_inhomogeneous(const RunConfig& cfg);
DsmcConfig to_dsmc(const RunConfig& cfg);

const char* version_string();

}  // namespace boltz
