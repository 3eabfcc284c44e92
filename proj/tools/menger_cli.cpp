// menger: curvature energies, tangent reports and the reproduction suite.
//
// Exit codes: 0 success, 1 bad input or I/O error, 2 energy diverged,
// 3 energy not converged within budget or at least one verify claim failed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "menger/menger.hpp"

namespace {

using nlohmann::json;
using namespace menger;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitIncomplete = 3;

struct Common {
    std::string budget = "default";
    std::string config_file;
    std::vector<std::string> settings;  // key=value overrides
    std::uint64_t seed = 1;
    std::string out;

    QuadratureConfig quadrature() const {
        QuadratureConfig c = budget_config(parse_budget(budget));
        c.seed = seed;
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) throw std::runtime_error("cannot open config file '" + config_file + "'");
            apply_config_text(c, in);
        }
        for (const auto& s : settings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("--set-option expects key=value, got '" + s + "'");
            apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
        }
        c.validate();
        return c;
    }
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

bool is_set_E(const std::string& source) { return source == "E" || source == "builtin:E"; }

// Closed-form reference for energies of E when p lies in the bound's window.
std::optional<std::pair<std::string, double>> reference_for(const std::string& source, EnergyFamily fam, double p) {
    if (!is_set_E(source)) return std::nullopt;
    const ClosedFormBound b = fam == EnergyFamily::U   ? ClosedFormBound::U_of_E
                              : fam == EnergyFamily::I ? ClosedFormBound::I_of_E
                                                       : ClosedFormBound::M_of_E;
    try {
        return std::make_pair(to_string(b), closed_form_bound(b, BoundArgs{.p = p}));
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

template <std::size_t N>
EnergyEstimate run_energy(const json& set, EnergyFamily fam, double p, const QuadratureConfig& cfg, bool monte_carlo) {
    const auto X = segment_set_from_json<N>(set);
    const EnergyParams params{1.0, p};
    return monte_carlo ? energy_monte_carlo(X, fam, params, cfg) : energy(X, fam, params, cfg);
}

std::size_t checked_dimension(const json& set) {
    const std::size_t d = json_dimension(set);
    if (d != 2 && d != 3) throw std::invalid_argument("sets must be in dimension 2 or 3");
    return d;
}

EnergyEstimate energy_of(const json& set, EnergyFamily fam, double p, const QuadratureConfig& cfg, bool mc) {
    return checked_dimension(set) == 3 ? run_energy<3>(set, fam, p, cfg, mc) : run_energy<2>(set, fam, p, cfg, mc);
}

void check_alpha(double alpha) {
    if (alpha != 1.0) throw std::invalid_argument("energies are implemented for alpha = 1 only");
}

int cmd_energy(const Common& common, const std::string& source, const std::string& family, double p, double alpha,
               const std::string& method) {
    check_alpha(alpha);
    if (method != "quadrature" && method != "mc") throw std::invalid_argument("--method must be quadrature or mc");
    const auto cfg = common.quadrature();
    const auto fam = parse_family(family);
    const json set = load_set_json(source);
    const auto e = energy_of(set, fam, p, cfg, method == "mc");
    json rep = {{"tool", "menger"},
                {"version", kVersion},
                {"command", "energy"},
                {"config", {{"set", source}, {"family", family}, {"p", p}, {"alpha", alpha}, {"method", method},
                            {"budget", common.budget}, {"quadrature", to_json(cfg)}}},
                {"estimate", to_json(e)}};
    if (const auto ref = reference_for(source, fam, p)) {
        rep["reference"] = ref->second;
        rep["reference_kind"] = "closed_form_bound";
        rep["reference_label"] = ref->first;
        rep["pass"] = e.converged && !e.diverged && e.value <= ref->second;
    }
    write_text(common.out, dump(rep));
    if (e.diverged) return kExitDiverged;
    return e.converged ? kExitOk : kExitIncomplete;
}

template <std::size_t N>
TangentReport tangent_on_set(const json& set, const std::vector<double>& pt, double alpha, const RadiusLadder& ladder,
                             const TangentThresholds& th) {
    const auto X = segment_set_from_json<N>(set);
    Point<N> x{};
    for (std::size_t i = 0; i < N; ++i) x[i] = pt[i];
    return detect_strong_tangent(X, x, alpha, ladder, th);
}

int cmd_tangent(const Common& common, const std::string& source, const std::string& point, double alpha, bool scaled,
                const std::string& ladder_spec, double delta, const std::string& csv) {
    TangentThresholds th;
    th.delta = delta;
    th.validate();
    const auto pt = parse_point(point);
    const json set = load_set_json(source);
    TangentReport rep;
    std::string ladder_label;
    if (scaled) {
        const auto X = segment_set_from_json<2>(set);
        if (X.scaled_blocks().empty()) throw std::invalid_argument("--scaled needs a set with scaled blocks (F)");
        if (pt.size() != 2 || pt[0] != 0.0 || pt[1] != 0.0) throw std::invalid_argument("--scaled analyses the point 0,0");
        const int n_max = static_cast<int>(X.scaled_blocks().size());
        const auto R = RadialSet<2>::from_blocks(X.scaled_blocks());
        rep = detect_strong_tangent(density_profile(R, alpha, set_F_ladder(n_max), th), th.delta);
        ladder_label = "F:" + std::to_string(n_max);
    } else {
        const auto v = parse_number_list(ladder_spec);
        if (v.size() != 3) throw std::invalid_argument("--ladder expects r0,ratio,length");
        const auto ladder = RadiusLadder::geometric_ladder(v[0], v[1], static_cast<int>(v[2]));
        const std::size_t dim = checked_dimension(set);
        if (pt.size() != dim) throw std::invalid_argument("--point dimension does not match the set");
        rep = dim == 3 ? tangent_on_set<3>(set, pt, alpha, ladder, th) : tangent_on_set<2>(set, pt, alpha, ladder, th);
        ladder_label = ladder_spec;
    }
    json out = {{"tool", "menger"},
                {"version", kVersion},
                {"command", "tangent"},
                {"config", {{"set", source}, {"point", pt}, {"alpha", alpha}, {"scaled", scaled}, {"ladder", ladder_label},
                            {"delta", th.delta}, {"eps_list", th.eps_list}, {"dir_grid", th.dir_grid}}},
                {"report", to_json(rep)}};
    write_text(common.out, dump(out));
    if (!csv.empty()) write_text(csv, tangent_csv(rep));
    return kExitOk;
}

int cmd_verify(const Common& common, const std::vector<std::string>& only, const std::string& csv) {
    VerifyOptions opt;
    opt.budget = parse_budget(common.budget);
    opt.cfg = common.quadrature();
    opt.seed = common.seed;
    for (const auto& o : only) {
        std::stringstream ss(o);
        std::string id;
        while (std::getline(ss, id, ','))
            if (!id.empty()) opt.only.push_back(id);
    }
    const auto rep = run_verify(opt);
    write_text(common.out, dump(to_json(rep)));
    if (!csv.empty()) write_text(csv, claims_csv(rep));
    for (const auto& id : rep.failing()) std::cerr << "FAIL " << id << "\n";
    return rep.all_pass() ? kExitOk : kExitIncomplete;
}

int cmd_table(const Common& common, const std::string& source, const std::string& family, const std::string& sweep,
              double alpha) {
    check_alpha(alpha);
    const auto cfg = common.quadrature();
    const auto fam = parse_family(family);
    const auto ps = parse_sweep(sweep);
    std::ostringstream os;
    os.precision(17);
    os << "p,estimate,error_bound,converged,diverged,bound\n";
    if (!ps.empty()) {
        const json set = load_set_json(source);
        for (double p : ps) {
            const auto e = energy_of(set, fam, p, cfg, false);
            os << p << ',' << e.value << ',' << e.error_bound << ',' << (e.converged ? 1 : 0) << ','
               << (e.diverged ? 1 : 0) << ',';
            if (const auto ref = reference_for(source, fam, p)) os << ref->second;
            os << '\n';
        }
    }
    write_text(common.out, os.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature energies and tangent analysis of finite unions of segments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Common common;
    auto add_common = [&](CLI::App* sc) {
        sc->add_option("--budget", common.budget, "Quadrature preset: low, default, high")
            ->check(CLI::IsMember({"low", "default", "high"}));
        sc->add_option("--config", common.config_file, "File of key=value quadrature settings");
        sc->add_option("--set-option", common.settings, "Single key=value quadrature setting (repeatable)");
        sc->add_option("--seed", common.seed, "Seed for sampling");
        sc->add_option("--out", common.out, "Output file (default stdout)");
    };

    std::string source = "E", family = "M", method = "quadrature", point = "0,0", ladder = "0.5,0.5,16", csv;
    std::string sweep;
    double p = 2.0, alpha = 1.0, delta = TangentThresholds{}.delta;
    bool scaled = false;
    std::vector<std::string> only;

    auto* energy_cmd = app.add_subcommand("energy", "Energy U, I or M of a set");
    energy_cmd->add_option("--set", source, "Registry name (E, F:<n>, S:<res>, L, polygon:<k>, segment) or JSON file");
    energy_cmd->add_option("--family", family, "U, I or M")->check(CLI::IsMember({"U", "I", "M"}));
    energy_cmd->add_option("--p", p, "Exponent p > 0");
    energy_cmd->add_option("--alpha", alpha, "Measure dimension (1)");
    energy_cmd->add_option("--method", method, "quadrature or mc");
    add_common(energy_cmd);

    auto* tangent_cmd = app.add_subcommand("tangent", "Approximate tangent report at a point");
    tangent_cmd->add_option("--set", source, "Registry name or JSON file");
    tangent_cmd->add_option("--point", point, "Point as x,y or x,y,z");
    tangent_cmd->add_option("--alpha", alpha, "Density exponent");
    tangent_cmd->add_flag("--scaled", scaled, "Exact scaled-block analysis of F at the origin");
    tangent_cmd->add_option("--ladder", ladder, "Geometric radius ladder r0,ratio,length");
    tangent_cmd->add_option("--delta", delta, "Out-of-cone density threshold");
    tangent_cmd->add_option("--csv", csv, "Per-radius CSV output");
    add_common(tangent_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "Run the reproduction claims");
    verify_cmd->alias("verify-paper");
    verify_cmd->add_option("--only", only, "Claim ids or groups, comma separated");
    verify_cmd->add_option("--csv", csv, "CSV summary output");
    add_common(verify_cmd);

    auto* table_cmd = app.add_subcommand("table", "CSV sweep of an energy over p");
    table_cmd->add_option("--set", source, "Registry name or JSON file");
    table_cmd->add_option("--family", family, "U, I or M")->check(CLI::IsMember({"U", "I", "M"}));
    table_cmd->add_option("--p", sweep, "start:stop:step or comma list (empty gives a header only)");
    table_cmd->add_option("--alpha", alpha, "Measure dimension (1)");
    add_common(table_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*energy_cmd) return cmd_energy(common, source, family, p, alpha, method);
        if (*tangent_cmd) return cmd_tangent(common, source, point, alpha, scaled, ladder, delta, csv);
        if (*verify_cmd) return cmd_verify(common, only, csv);
        if (*table_cmd) return cmd_table(common, source, family, sweep, alpha);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
