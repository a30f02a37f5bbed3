#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tentkit/cauchy.hpp"
#include "tentkit/coefficients.hpp"
#include "tentkit/error.hpp"
#include "tentkit/exponents.hpp"
#include "tentkit/families.hpp"
#include "tentkit/probes.hpp"
#include "tentkit/verify.hpp"

namespace tentkit::cli {

using nlohmann::json;

namespace {

using Values = std::map<std::string, std::string>;

std::string trim(std::string s)
{
    const auto ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
}

double to_double(const Values& v, const std::string& key, double fallback)
{
    const auto it = v.find(key);
    if (it == v.end()) return fallback;
    try {
        std::size_t used = 0;
        const double d = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        fail("config.invalid", key + ": not a number: " + it->second);
    }
}

int to_int(const Values& v, const std::string& key, int fallback)
{
    const double d = to_double(v, key, fallback);
    if (d != std::floor(d)) fail("config.invalid", key + ": not an integer");
    return static_cast<int>(d);
}

bool to_bool(const Values& v, const std::string& key, bool fallback)
{
    const auto it = v.find(key);
    if (it == v.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    fail("config.invalid", key + ": expected true or false");
}

std::string to_str(const Values& v, const std::string& key, const std::string& fallback)
{
    const auto it = v.find(key);
    return it == v.end() ? fallback : it->second;
}

Exponent to_exponent(const Values& v, const std::string& key, Exponent fallback)
{
    const auto it = v.find(key);
    if (it == v.end()) return fallback;
    try {
        return Exponent::parse(it->second);
    } catch (const Error& e) {
        fail("config.invalid", key + ": " + e.what());
    }
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

// "laplacian" or "p_minus_L,q_plus_L,p_minus_Lstar,q_plus_Lstar"
ExponentProfile to_profile(const Values& v, int n)
{
    const std::string text = to_str(v, "profile", "laplacian");
    if (text == "laplacian") return ExponentProfile::laplacian(n);
    const auto parts = split(text, ',');
    if (parts.size() != 4) fail("config.invalid", "profile: 'laplacian' or four comma-separated exponents");
    return ExponentProfile::hypothetical(n, Exponent::parse(parts[0]), Exponent::parse(parts[1]),
                                         Exponent::parse(parts[2]), Exponent::parse(parts[3]));
}

// "beta:p,beta:p,beta:p"
std::vector<std::pair<double, Exponent>> to_chain(const std::string& text)
{
    std::vector<std::pair<double, Exponent>> out;
    for (const auto& item : split(text, ',')) {
        const auto bp = split(item, ':');
        if (bp.size() != 2) fail("config.invalid", "chain: entries are beta:p");
        out.emplace_back(std::stod(bp[0]), Exponent::parse(bp[1]));
    }
    return out;
}

bool randomized(const std::string& command)
{
    static const std::set<std::string> r{"heat", "parabolic", "lions", "embeddings", "global", "besov", "probe"};
    return r.count(command) > 0;
}

struct Defaults {
    int points;
    int levels;
    std::string preset;
    int samples;
};

Defaults defaults_for(const std::string& command, int n)
{
    if (command == "molecular") return {2048, 0, "checkerboard", 1};
    if (command == "embeddings") return {n == 1 ? 256 : 64, 33, "identity", 50};
    if (command == "parabolic" || command == "global" || command == "lions")
        return {n == 1 ? 256 : 64, 33, "checkerboard", command == "parabolic" ? 20 : 4};
    return {n == 1 ? 256 : 64, 33, "identity", 20};
}

ExperimentSpec build_spec(const std::string& command, const Values& v, std::optional<std::uint64_t> seed)
{
    ExperimentSpec s;
    const int n = to_int(v, "n", 1);
    if (n != 1 && n != 2) fail("config.invalid", "n must be 1 or 2");
    const Defaults d = defaults_for(command, n);
    s.name = to_str(v, "name", command);
    s.preset = to_str(v, "preset", d.preset);
    s.preset_params.block = to_double(v, "block", 0.0);
    s.preset_params.contrast = to_double(v, "contrast", 4.0);
    s.preset_params.kappa = to_double(v, "kappa", 0.5);
    s.preset_params.seed = static_cast<std::uint64_t>(to_int(v, "preset_seed", 1));

    const double period = to_double(v, "period", 1.0);
    const int points = to_int(v, "points", d.points);
    const double h = period / points;
    const double t_min = to_double(v, "t_min", 4.0 * h * h);
    const double t_max = to_double(v, "t_max", period * period / 16.0);
    const int levels = to_int(v, "levels", d.levels > 0 ? d.levels : 33);
    s.grid = GridSpec::make(n, period, points, t_min, t_max, levels);
    s.profile = to_profile(v, n);

    s.s = to_double(v, "s", -1.0);
    s.variant = to_str(v, "variant", "extension");
    s.beta = to_double(v, "beta", command == "molecular" ? 0.0 : command == "global" ? -0.25 : -0.5);
    s.p = to_exponent(v, "p", Exponent::finite(2.0));
    s.gamma = to_double(v, "gamma", s.beta);
    s.q = to_exponent(v, "q", s.p);
    s.chain = to_chain(to_str(v, "chain", n == 1 ? "0:1,-0.25:2,-0.375:4" : "0:1,-0.5:2,-0.75:4"));
    s.family = family_from_string(to_str(v, "family", "bandlimited"));
    s.family_params.k_lo = to_int(v, "k_lo", 4);
    s.family_params.k_hi = to_int(v, "k_hi", std::min(64, points / 4));
    s.family_params.modes = to_int(v, "modes", 24);
    s.samples = to_int(v, "samples", d.samples);
    if (s.samples < 1) fail("config.invalid", "samples must be positive");
    s.seed = seed.value_or(static_cast<std::uint64_t>(to_int(v, "seed", 0)));
    s.atom_radius = to_double(v, "atom_radius", 0.0);
    s.j_min = to_int(v, "j_min", 4);
    s.j_max = to_int(v, "j_max", 7);
    s.levels_per_octave = to_int(v, "levels_per_octave", 4);
    s.refine = to_bool(v, "refine", true);
    s.sensitivity = to_bool(v, "sensitivity", true);

    Budgets& b = s.budgets;
    b.band = to_double(v, "budget.band", b.band);
    b.stability = to_double(v, "budget.stability", b.stability);
    b.constant = to_double(v, "budget.constant", b.constant);
    b.embedding = to_double(v, "budget.embedding", b.embedding);
    b.scale_stability = to_double(v, "budget.scale_stability", b.scale_stability);
    b.cross_check = to_double(v, "budget.cross_check", b.cross_check);
    b.lipschitz = to_double(v, "budget.lipschitz", b.lipschitz);
    if (v.count("budget")) {
        const double headline = to_double(v, "budget", 0.0);
        if (command == "heat" || command == "parabolic" || command == "besov") b.band = headline;
        else if (command == "embeddings") b.embedding = headline;
        else b.constant = headline;
    }
    return s;
}

class Output {
public:
    Output(const std::optional<std::string>& dir) : dir_(dir)
    {
        if (dir_) std::filesystem::create_directories(*dir_);
    }
    void write(const std::string& name, const std::string& content) const
    {
        if (!dir_) return;
        // names are fixed by the dispatcher; no path components leak in
        std::ofstream f(std::filesystem::path(*dir_) / std::filesystem::path(name).filename(), std::ios::binary);
        if (!f) fail("io.write", "cannot write " + name);
        f << content;
    }

private:
    std::optional<std::string> dir_;
};

int verdict_exit(Verdict v, const std::string& command, const std::string& label, const std::string& headline,
                 std::ostream& out, std::ostream& err)
{
    out << command << ": " << to_string(v) << " [" << label << "]";
    if (!headline.empty()) out << " " << headline;
    out << "\n";
    if (v == Verdict::out_of_theory) err << "warning: " << command << ": " << label << "\n";
    return v == Verdict::fail ? kExitBudget : kExitPass;
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

json exponent_json(Exponent p) { return p.str(); }

int cmd_exponents(const Values& v, const RunManifest& m, const Output& o, std::ostream& out)
{
    const int n = to_int(v, "n", 1);
    const ExponentProfile prof = to_profile(v, n);
    const double beta = to_double(v, "beta", -0.5);
    const Exponent p = to_exponent(v, "p", Exponent::finite(2.0));
    json j;
    j["n"] = n;
    j["profile"] = {{"p_minus_L", exponent_json(prof.p_minus_L)},
                    {"q_plus_L", exponent_json(prof.q_plus_L)},
                    {"p_minus_Lstar", exponent_json(prof.p_minus_Lstar)},
                    {"q_plus_Lstar", exponent_json(prof.q_plus_Lstar)}};
    j["beta_L"] = beta_L(prof);
    j["beta"] = beta;
    j["p"] = exponent_json(p);
    const double s = 2.0 * beta + 1.0;
    if (s >= -1.0 && s <= 1.0) {
        j["p_minus_s"] = exponent_json(p_minus_s(prof, s));
        j["p_plus_s"] = exponent_json(p_plus_s(prof, s));
    }
    if (beta > -1.0) j["p_tilde"] = exponent_json(p_tilde(prof, beta));
    if (beta > -0.5) j["p_flat"] = exponent_json(p_flat(prof, beta));
    json regions = json::object();
    for (Region r : {Region::wellposed_hc, Region::identification, Region::lions}) {
        const auto rec = region_membership(prof, SpaceParams::from_beta(beta, p), r);
        regions[to_string(r)] = {{"member", rec.member}, {"reason", rec.reason}};
    }
    j["regions"] = regions;
    const std::string text = j.dump(2) + "\n";
    o.write("exponents.json", text);
    if (m.json) out << text;
    out << "exponents: pass [arithmetic] beta_L=" << fmt(beta_L(prof)) << "\n";
    return kExitPass;
}

int cmd_regions(const Values& v, const RunManifest& m, const Output& o, std::ostream& out)
{
    const int n = to_int(v, "n", 1);
    const ExponentProfile prof = to_profile(v, n);
    const Region region = region_from_string(to_str(v, "region", "wellposed_hc"));
    const int resolution = to_int(v, "resolution", 64);
    const std::string csv = polyline_csv(region_boundary_polyline(prof, region, resolution));
    o.write("regions_" + to_string(region) + ".csv", csv);
    out << csv;
    out << "regions: pass [arithmetic] " << to_string(region) << "\n";
    return kExitPass;
}

int cmd_presets(bool as_json, std::ostream& out)
{
    const auto presets = coefficient_presets();
    const auto families = test_families();
    if (as_json) {
        auto list = [](const std::vector<PresetInfo>& items) {
            json a = json::array();
            for (const auto& p : items) {
                json params = json::object();
                for (const auto& [k, schema] : p.parameters) params[k] = schema;
                a.push_back({{"name", p.name}, {"description", p.description}, {"parameters", params}});
            }
            return a;
        };
        out << json{{"presets", list(presets)}, {"families", list(families)}}.dump(2) << "\n";
        return kExitPass;
    }
    auto print = [&](const char* title, const std::vector<PresetInfo>& items) {
        out << title << ":\n";
        for (const auto& p : items) {
            out << "  " << p.name << "  " << p.description << "\n";
            for (const auto& [k, schema] : p.parameters) out << "      " << k << ": " << schema << "\n";
        }
    };
    print("coefficient presets", presets);
    print("test families", families);
    return kExitPass;
}

Semigroup semigroup_for(const ExperimentSpec& s)
{
    return Semigroup(DiscreteGenerator(make_preset(s.preset, s.grid, s.preset_params)));
}

int cmd_lions(const ExperimentSpec& s, const Output& o, const RunManifest& m, std::ostream& out,
              std::ostream& err)
{
    const Semigroup sg = semigroup_for(s);
    const int n = s.grid.n;
    json rows = json::array();
    double worst = 0.0;
    for (int i = 0; i < s.samples; ++i) {
        const SpaceTimeBumps bumps = SpaceTimeBumps::random(s.grid, s.seed + static_cast<std::uint64_t>(i), n);
        const GridSpec g = s.grid;
        CauchyProblem prob;
        prob.F = TimeSource::from_function(g, n, [bumps, g, n](double t) { return bumps.at(g, n, t); });
        const SpaceTimeField u = lions_op(sg, *prob.F);
        const double c = l2_estimate_constant(sg, u, prob);
        worst = std::max(worst, c);
        rows.push_back(c);
    }
    const Verdict v = worst <= s.budgets.constant ? Verdict::pass : Verdict::fail;
    json j = {{"schema", "tentkit.report/1"},
              {"kind", "lions"},
              {"spec_hash", spec_hash(s)},
              {"spec", json::parse(spec_json(s))},
              {"route", to_string(sg.method())},
              {"l2_constants", rows},
              {"max_constant", worst},
              {"verdict", to_string(v)},
              {"label", "in-theory"}};
    const std::string text = j.dump(2) + "\n";
    o.write("lions.json", text);
    if (m.json) out << text;
    return verdict_exit(v, "lions", "in-theory", "max_constant=" + fmt(worst), out, err);
}

int cmd_probe(const ExperimentSpec& s, const Values& v, const Output& o, const RunManifest& m, std::ostream& out,
              std::ostream& err)
{
    const Semigroup sg = semigroup_for(s);
    const double h = s.grid.h();
    const int trials = to_int(v, "trials", 8);
    std::vector<double> p_grid;
    for (double p = 1.25; p <= 8.0 + 1e-12; p *= 1.25) p_grid.push_back(p);
    const ExponentEstimate est = estimate_exponents(sg, p_grid, {16 * h * h, 64 * h * h}, trials, s.seed);
    const DecayRecord decay = offdiagonal_probe(sg, to_double(v, "t", 16 * h * h),
                                                to_double(v, "separation", s.grid.period / 8.0), trials, s.seed);
    json samples = json::array();
    for (const auto& d : decay.samples) samples.push_back({{"distance", d.distance}, {"t", d.t}, {"norm", d.norm}});
    json j = {{"schema", "tentkit.report/1"},
              {"kind", "probe"},
              {"spec_hash", spec_hash(s)},
              {"spec", json::parse(spec_json(s))},
              {"label", est.label},
              {"note", est.note},
              {"p_grid", est.p_grid},
              {"semigroup_sup", est.semigroup_sup},
              {"gradient_sup", est.gradient_sup},
              {"p_range", {est.p_lo, est.p_hi}},
              {"q_range", {est.q_lo, est.q_hi}},
              {"offdiagonal", {{"samples", samples}, {"fitted_c", decay.fitted_c}, {"residual", decay.residual}}},
              {"verdict", "pass"}};
    const std::string text = j.dump(2) + "\n";
    o.write("probe.json", text);
    if (m.json) out << text;
    return verdict_exit(Verdict::pass, "probe", est.label,
                        "p in [" + fmt(est.p_lo) + ", " + fmt(est.p_hi) + "] c=" + fmt(decay.fitted_c), out, err);
}

// Cheap theory checks so that out-of-theory runs need no seed.
bool samples_randomly(const std::string& command, const ExperimentSpec& s)
{
    if (!randomized(command)) return false;
    if (command == "heat" || command == "besov")
        return s.variant == "extension" ? s.s < 0.0 : s.variant == "gradient" ? s.s < 1.0 : true;
    return true;
}

int run_experiment(const std::string& command, const Values& v, const RunManifest& m, const Output& o,
                   std::ostream& out, std::ostream& err)
{
    const ExperimentSpec s = build_spec(command, v, m.seed);
    if (samples_randomly(command, s) && !m.seed && !v.count("seed"))
        fail("config.missing_seed", command + " samples random fields and needs --seed");

    auto emit = [&](const std::string& text) {
        o.write(command + ".json", text);
        if (m.json) out << text;
    };
    if (command == "heat" || command == "besov" || command == "parabolic") {
        const EquivalenceReport r = command == "heat"        ? run_heat_characterization(s)
                                    : command == "besov"     ? run_besov_suite(s)
                                                             : run_parabolic_equivalence(s);
        emit(report_json(r, s));
        if (r.verdict != Verdict::out_of_theory) o.write(command + "_bands.csv", band_csv(r));
        const std::string head = r.verdict == Verdict::out_of_theory
                                     ? ""
                                     : "band=" + fmt(r.base.band) + " stability=" + fmt(r.stability);
        return verdict_exit(r.verdict, command, r.label, head, out, err);
    }
    if (command == "molecular") {
        const DecayProfile r = run_molecular_decay(s);
        emit(report_json(r, s));
        if (r.verdict != Verdict::out_of_theory) o.write("molecular_decay.csv", decay_csv(r));
        return verdict_exit(r.verdict, command, r.label, "", out, err);
    }
    if (command == "embeddings") {
        const EmbeddingTable r = run_embedding_sweep(s);
        emit(report_json(r, s));
        o.write("embeddings.csv", embedding_csv(r));
        return verdict_exit(r.verdict, command, r.label,
                            "hop1=" + fmt(r.max_hop1) + " hop2=" + fmt(r.max_hop2), out, err);
    }
    if (command == "global") {
        const GlobalRecord r = run_global_estimate(s);
        emit(report_json(r, s));
        return verdict_exit(r.verdict, command, r.label, "max_constant=" + fmt(r.max_constant), out, err);
    }
    if (command == "lions") return cmd_lions(s, o, m, out, err);
    if (command == "probe") return cmd_probe(s, v, o, m, out, err);
    fail("config.unknown_command", command);
}

} // namespace

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> c{"exponents", "regions", "heat",   "parabolic", "lions", "molecular",
                                            "embeddings", "global", "besov", "probe",     "presets"};
    return c;
}

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> k{
        "name",       "preset",        "block",      "contrast",   "kappa",          "preset_seed",
        "n",          "period",        "points",     "t_min",      "t_max",          "levels",
        "profile",    "s",             "variant",    "beta",       "p",              "gamma",
        "q",          "chain",         "family",     "k_lo",       "k_hi",           "modes",
        "samples",    "seed",          "atom_radius", "j_min",     "j_max",          "levels_per_octave",
        "refine",     "sensitivity",   "region",     "resolution", "trials",         "t",
        "separation", "budget",        "budget.band", "budget.stability", "budget.constant", "budget.embedding",
        "budget.scale_stability", "budget.cross_check", "budget.lipschitz"};
    return k;
}

std::map<std::string, std::string> parse_config(const std::string& text)
{
    std::map<std::string, std::string> out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("config.syntax", "line " + std::to_string(lineno) + ": expected key=value");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

int dispatch(const RunManifest& m, std::ostream& out, std::ostream& err)
{
    try {
        const auto& cmds = commands();
        if (std::find(cmds.begin(), cmds.end(), m.command) == cmds.end())
            fail("config.unknown_command", "unknown command '" + m.command + "'");
        Values v;
        if (m.config_path) {
            std::ifstream f(*m.config_path);
            if (!f) fail("config.unreadable", "cannot read " + *m.config_path);
            std::stringstream buf;
            buf << f.rdbuf();
            v = parse_config(buf.str());
        }
        for (const auto& [k, val] : m.overrides) v[k] = val;
        const auto& keys = known_keys();
        for (const auto& [k, val] : v)
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail("config.unknown_key", "unknown key '" + k + "'");
        if (m.command == "presets") return cmd_presets(m.json, out);
        const Output o(m.out_dir);
        if (m.command == "exponents") return cmd_exponents(v, m, o, out);
        if (m.command == "regions") return cmd_regions(v, m, o, out);
        return run_experiment(m.command, v, m, o, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: io.write: " << e.what() << "\n";
        return kExitConfig;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"tentkit: tent-space experiments for divergence-form parabolic problems"};
    RunManifest m;
    std::string config, out_dir;
    std::uint64_t seed = 0;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;
    app.add_option("command", m.command, "exponents|regions|heat|parabolic|lions|molecular|embeddings|global|besov|probe|presets")
        ->required();
    auto* config_opt = app.add_option("--config", config, "flat key=value config file");
    auto* seed_opt = app.add_option("--seed", seed, "seed for randomized families");
    auto* out_opt = app.add_option("--out", out_dir, "output directory; nothing is written without it");
    app.add_option("--set", sets, "key=value override (repeatable)");
    for (const char* key : {"profile", "n", "s", "p", "beta", "family", "preset", "budget"})
        app.add_option(std::string("--") + key, flags[key], std::string("shorthand for --set ") + key + "=...");
    app.add_flag("--json", m.json, "print the JSON report (or catalog) on stdout");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error: config.arguments: " << e.what() << "\n";
        return kExitConfig;
    }
    if (*config_opt) m.config_path = config;
    if (*seed_opt) m.seed = seed;
    if (*out_opt) m.out_dir = out_dir;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            err << "error: config.syntax: --set expects key=value\n";
            return kExitConfig;
        }
        m.overrides[trim(s.substr(0, eq))] = trim(s.substr(eq + 1));
    }
    for (const auto& [k, val] : flags)
        if (app.count("--" + k)) m.overrides[k] = val;
    return dispatch(m, out, err);
}

} // namespace tentkit::cli
