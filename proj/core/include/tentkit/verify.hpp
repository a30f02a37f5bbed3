#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tentkit/cauchy.hpp"
#include "tentkit/coefficients.hpp"
#include "tentkit/families.hpp"

namespace tentkit {

// All budgets are artifact choices; the theory supplies no numeric constants.
struct Budgets {
    double band = 16.0;           // max/min of a ratio band
    double stability = 0.5;       // relative drift of band endpoints under one refinement
    double constant = 64.0;       // implied inequality constants
    double embedding = 32.0;      // embedding hop ratios
    double scale_stability = 0.2; // spread of atom ratios over radii
    double cross_check = 0.1;     // Besov vs Hardy-Sobolev at p = 2
    double lipschitz = 8.0;       // Lipschitz endpoint ratio lies in [1/b, b]
};

struct ExperimentSpec {
    std::string name = "experiment";
    std::string preset = "identity";
    PresetParams preset_params;
    GridSpec grid;
    ExponentProfile profile = ExponentProfile::laplacian(1);

    double s = -1.0;                      // heat / besov
    std::string variant = "extension";    // heat / besov: extension | gradient
    double beta = -0.5;                   // parabolic / molecular / global
    Exponent p = Exponent::finite(2.0);
    double gamma = -0.5;                  // global: f in T^q_gamma
    Exponent q = Exponent::finite(2.0);
    std::vector<std::pair<double, Exponent>> chain; // embeddings: (beta_i, p_i), i = 0, 1, 2

    Family family = Family::bandlimited;
    FamilyParams family_params;
    int samples = 20;
    std::uint64_t seed = 7;

    double atom_radius = 0.0; // molecular: 0 means max(2h, sqrt(t_min))
    int j_min = 4;
    int j_max = 7;
    int levels_per_octave = 4; // ladder rho = 2^(1/levels_per_octave) where a runner builds its own ladder

    bool refine = true;      // one refinement step for stability
    bool sensitivity = true; // t_min halving, t_max doubling, points doubling
    Budgets budgets;
};

// Canonical, sorted-key JSON of the spec and its 64-bit FNV-1a hash.
std::string spec_json(const ExperimentSpec& spec);
std::string spec_hash(const ExperimentSpec& spec);

// One refinement step: twice the points, twice as many ladder intervals.
GridSpec refine_grid(const GridSpec& grid);

enum class Verdict { pass, fail, out_of_theory };
std::string to_string(Verdict v);

struct BandSummary {
    std::vector<double> ratios;
    double min = 0.0, max = 0.0, band = 0.0;
    static BandSummary of(std::vector<double> ratios);
};

struct SensitivityRecord {
    std::string perturbation; // "t_min/2", "t_max*2", "points*2"
    double headline = 0.0;
    double relative_change = 0.0;
    bool skipped = false;
    std::string note;
};

struct EquivalenceReport {
    std::string name;
    std::string kind;
    Verdict verdict = Verdict::fail;
    std::string label;
    BandSummary base;
    BandSummary refined;
    double stability = 0.0; // max relative drift of min and max
    std::map<std::string, BandSummary> extra;
    std::map<std::string, BandSummary> extra_refined;
    std::map<std::string, double> metrics;
    std::vector<SensitivityRecord> sensitivity;
};

EquivalenceReport run_heat_characterization(const ExperimentSpec& spec);
EquivalenceReport run_parabolic_equivalence(const ExperimentSpec& spec);
EquivalenceReport run_besov_suite(const ExperimentSpec& spec);

struct DecayProfile {
    std::string name;
    Verdict verdict = Verdict::fail;
    std::string label;
    std::vector<int> j;
    // region i = 0, 1, 2: ||u||_{L^2_{beta+1}(M_j^{(i+1)})} |2^{j+1} B|^{[p,2]}
    std::vector<std::vector<double>> profile;
    std::vector<bool> monotone;
    bool region1_log_convex = false; // -log profile convex in j
    double region1_gaussian_rate = 0.0; // slope of log profile against 4^j
    std::vector<double> power_rates;    // slope of log2 profile against j, regions 2 and 3
    double radius = 0.0;
    std::string route_region1, route_main;
    std::vector<SensitivityRecord> sensitivity;
};

DecayProfile run_molecular_decay(const ExperimentSpec& spec);

struct EmbeddingRow {
    std::string input; // "random" or "atom"
    int index = 0;
    double radius = 0.0;
    double hop1 = 0.0; // ||F||_{Z^{p1}_{beta1}} / ||F||_{T^{p0}_{beta0}}
    double hop2 = 0.0; // ||F||_{T^{p2}_{beta2}} / ||F||_{Z^{p1}_{beta1}}
};

struct EmbeddingTable {
    std::string name;
    Verdict verdict = Verdict::fail;
    std::string label;
    std::vector<EmbeddingRow> rows;
    double max_hop1 = 0.0, max_hop2 = 0.0;
    double atom_spread_hop1 = 0.0, atom_spread_hop2 = 0.0; // max/min - 1 over radii
    std::vector<SensitivityRecord> sensitivity;
};

EmbeddingTable run_embedding_sweep(const ExperimentSpec& spec);

struct GlobalRecord {
    std::string name;
    Verdict verdict = Verdict::fail;
    std::string label;
    std::vector<double> constants; // per sample
    double max_constant = 0.0;
    std::vector<double> remainder_tent; // ||u - E_L u0||_{T^p_{beta+1}}
    bool remainder_finite = false;
    std::vector<SensitivityRecord> sensitivity;
};

GlobalRecord run_global_estimate(const ExperimentSpec& spec);

std::string report_json(const EquivalenceReport& r, const ExperimentSpec& spec);
std::string report_json(const DecayProfile& r, const ExperimentSpec& spec);
std::string report_json(const EmbeddingTable& r, const ExperimentSpec& spec);
std::string report_json(const GlobalRecord& r, const ExperimentSpec& spec);
std::string decay_csv(const DecayProfile& r);
std::string embedding_csv(const EmbeddingTable& r);
std::string band_csv(const EquivalenceReport& r);

// Worker count: TENTKIT_THREADS if set (>= 1), else the hardware count.
int thread_count();

} // namespace tentkit
