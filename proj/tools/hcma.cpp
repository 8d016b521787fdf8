#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hcma/error.hpp"
#include "hcma/geodesic_envelope.hpp"
#include "hcma/grid_io.hpp"
#include "hcma/obstruction.hpp"
#include "hcma/regularity_probe.hpp"
#include "hcma/sharp_family.hpp"
#include "hcma/strip_harmonic.hpp"
#include "hcma/version.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace hcma;

namespace {

struct Globals {
    std::string out;
    std::string format;
    std::uint64_t seed = 0;
    int threads = 1;
};

std::string resolve_output(const std::string& path) {
    if (path.empty() || path == "-") return path;
    fs::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("HCMA_OUTPUT_DIR"); dir && *dir) p = fs::path(dir) / p;
    }
    return p.string();
}

void emit(const std::string& path, const std::string& text) {
    const std::string where = resolve_output(path);
    if (where.empty() || where == "-") {
        std::cout << text;
        return;
    }
    const fs::path parent = fs::path(where).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    write_file_atomic(where, text);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(what + ": " + e.what());
    }
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(parse_double(item));
        } catch (const Error&) {
            throw ValidationError(std::string(what) + ": not a number: '" + item + "'");
        }
    }
    if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
    return out;
}

std::vector<int> parse_levels(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_list(s, "--levels")) {
        if (v != std::floor(v) || v < 8) throw ValidationError("--levels: expected integers >= 8");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

// number, {"re":..,"im":..} or [re, im]
std::complex<double> complex_entry(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_object() && j.contains("re")) return {j.at("re").get<double>(), j.value("im", 0.0)};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ValidationError("matrix entry must be a number, [re, im] or {re, im}");
}

Eigen::MatrixXcd parse_matrix(const std::string& text, const char* what) {
    const json j = parse_json(text, what);
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        Eigen::MatrixXcd m(1, 1);
        m(0, 0) = complex_entry(j);
        return m;
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
            throw ValidationError(std::string(what) + ": ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_entry(j[r][c]);
    }
    return m;
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Eigen::MatrixXcd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        out.push_back(row);
    }
    return out;
}

std::string csv_with_header(const json& header, const std::vector<std::string>& cols,
                            const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    os << "# " << header.dump() << "\n";
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
        os << "\n";
    }
    return os.str();
}

std::string fd(double v) { return format_double(v); }

json provenance(const std::string& command, const json& config) {
    return json{{"command", command}, {"version", version}, {"config", config}};
}

// ---------------------------------------------------------------- strip

struct StripArgs {
    std::string lambdas = "5,10,20,40";
    double tol = 1e-10;
    double truncation = 40.0;
};

int run_strip(const StripArgs& a, const Globals& g) {
    const std::vector<double> lambdas = parse_list(a.lambdas, "--lambdas");
    for (double l : lambdas)
        if (!(l > 0.0)) throw DomainError("--lambdas: lambda must be positive");
    if (!(a.tol > 0.0)) throw ValidationError("--tol must be positive");
    QuadratureSpec quad;
    quad.tolerance = a.tol;
    quad.truncation = a.truncation;

    const json config{{"lambdas", lambdas}, {"tol", a.tol}, {"truncation", a.truncation}};
    const std::vector<std::string> cols{"lambda", "I", "J", "K", "I_over_2lambda_err",
                                        "J_over_2lambda_err", "K_over_minus_2lambda_err",
                                        "abs_K_le_J", "err_I", "err_J", "err_K"};
    std::vector<std::vector<std::string>> rows;
    json table = json::array();
    for (double l : lambdas) {
        const IJKValues v = ijk_functionals(l, quad);
        const double ri = std::abs(v.I / (2 * l) - 1), rj = std::abs(v.J / (2 * l) - 1),
                     rk = std::abs(v.K / (-2 * l) - 1);
        const bool kj = std::abs(v.K) <= v.J;
        rows.push_back({fd(l), fd(v.I), fd(v.J), fd(v.K), fd(ri), fd(rj), fd(rk), kj ? "1" : "0",
                        fd(v.err_I), fd(v.err_J), fd(v.err_K)});
        table.push_back({{"lambda", l}, {"I", v.I}, {"J", v.J}, {"K", v.K},
                         {"I_over_2lambda_err", ri}, {"J_over_2lambda_err", rj},
                         {"K_over_minus_2lambda_err", rk}, {"abs_K_le_J", kj},
                         {"err_I", v.err_I}, {"err_J", v.err_J}, {"err_K", v.err_K}});
    }
    const json prov = provenance("strip-asymptotics", config);
    if (g.format == "json") {
        json out = prov;
        out["rows"] = table;
        emit(g.out, out.dump(2) + "\n");
    } else {
        emit(g.out, csv_with_header(prov, cols, rows));
    }
    return 0;
}

// ---------------------------------------------------------------- obstruction

struct ObstructionArgs {
    std::string omega = "1";
    std::string p = "0";
    std::string q = "0";
    bool sampled = false;
    std::int64_t samples = 10000;
};

int run_obstruction(const ObstructionArgs& a, const Globals& g) {
    ObstructionInstance inst;
    inst.Omega = parse_matrix(a.omega, "--omega");
    inst.P = parse_matrix(a.p, "--p");
    inst.Q = parse_matrix(a.q, "--q");
    // a plain number next to an m x m omega means a multiple of the identity
    const auto m = inst.Omega.rows();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(m, m);
    if (m > 1 && inst.P.size() == 1) inst.P = inst.P(0, 0) * I;
    if (m > 1 && inst.Q.size() == 1) inst.Q = inst.Q(0, 0) * I;
    const ObstructionVerdict v = a.sampled ? check_obstruction_sampled(inst, a.samples, g.seed)
                                           : check_obstruction(inst);
    json config{{"omega", matrix_json(inst.Omega)}, {"p", matrix_json(inst.P)},
                {"q", matrix_json(inst.Q)}, {"sampled", a.sampled}};
    if (a.sampled) {
        config["samples"] = a.samples;
        config["seed"] = g.seed;
    }
    json out = provenance("check-obstruction", config);
    out["satisfied"] = v.satisfied;
    out["margin"] = v.margin;
    out["sigma_max"] = v.sigma_max;
    json w = json::array();
    for (Eigen::Index k = 0; k < v.witness.size(); ++k) w.push_back(complex_json(v.witness(k)));
    out["witness"] = w;
    if (g.format == "csv") {
        emit(g.out, csv_with_header(provenance("check-obstruction", config),
                                    {"satisfied", "margin", "sigma_max"},
                                    {{v.satisfied ? "1" : "0", fd(v.margin), fd(v.sigma_max)}}));
    } else {
        emit(g.out, out.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------- sharp family

struct FamilyArgs {
    double epsilon = 1.0;
    int grid = 64;
    std::string limit = "1,0.1,0.01,0.001,1e-4,1e-6,1e-8";
};

int run_family(const FamilyArgs& a, const Globals& g) {
    const std::vector<double> eps = parse_list(a.limit, "--limit");
    const FamilyCheck c = verify_family(SharpFamilyParams{a.epsilon}, a.grid);
    const std::vector<SharpnessRow> limit = sharpness_limit(eps);
    const json config{{"epsilon", a.epsilon}, {"grid", a.grid}, {"limit", eps}};
    json out = provenance("verify-sharp-family", config);
    out["check"] = {{"n", c.n},
                    {"h", c.h},
                    {"max_abs_det", c.max_abs_det},
                    {"max_abs_det_interior", c.max_abs_det_interior},
                    {"det_over_h2", c.max_abs_det / (c.h * c.h)},
                    {"min_c", c.min_c},
                    {"expected_min_c", c.expected_min_c},
                    {"max_hessian_error", c.max_hessian_error},
                    {"boundary_t0", c.boundary_t0},
                    {"boundary_axis", c.boundary_axis},
                    {"min_eig", c.min_eig}};
    json table = json::array();
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : limit) {
        table.push_back({{"epsilon", r.epsilon}, {"two_plus_vzzbar", r.two_plus_vzzbar},
                         {"abs_vzz", r.abs_vzz}, {"margin", r.margin}});
        rows.push_back({fd(r.epsilon), fd(r.two_plus_vzzbar), fd(r.abs_vzz), fd(r.margin)});
    }
    out["sharpness_limit"] = table;
    if (g.format == "csv") {
        json header = provenance("verify-sharp-family", config);
        header["check"] = out["check"];
        emit(g.out, csv_with_header(header, {"epsilon", "two_plus_vzzbar", "abs_vzz", "margin"}, rows));
    } else {
        emit(g.out, out.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------- solve

const std::set<std::string> kConfigKeys{
    "n",          "nt",          "omega11",         "v",
    "directions", "tol_sweep",   "max_sweeps",      "max_multiple",
    "phases",     "max_denominator", "kernel_candidates", "mode",
    "threads",    "consistency_factor"};

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw ValidationError(where + ": unknown key '" + key + "'");
}

template <class T>
T get_as(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config key '") + key + "': " + e.what());
    }
}

std::complex<double> q_of(const json& b) {
    if (!b.contains("q")) return {};
    try {
        return complex_entry(b.at("q"));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config key 'q': ") + e.what());
    }
}

CutoffSpec profile_of(const json& b) {
    CutoffSpec s;
    if (b.contains("rho")) s.rho = get_as<double>(b, "rho");
    if (b.contains("slope")) s.slope = get_as<double>(b, "slope");
    if (b.contains("mollify")) s.mollify = get_as<double>(b, "mollify");
    if (b.contains("search")) s.search = get_as<bool>(b, "search");
    if (b.contains("psh_tol")) s.psh_tol = get_as<double>(b, "psh_tol");
    return s;
}

json profile_json(const CutoffSpec& s) {
    return {{"rho", s.rho}, {"slope", s.slope}, {"mollify", s.mollify}, {"search", s.search},
            {"psh_tol", s.psh_tol}};
}

struct SolveOverrides {
    int n = 0, nt = 0, phases = -1, threads = 0;
    double tol = 0.0;
    long max_sweeps = 0;
    std::string mode;
};

struct Resolved {
    EnvelopeProblem problem;
    json config;  // fully resolved, with the source of v
};

Resolved resolve_problem(json cfg, const SolveOverrides& o, const Globals& g) {
    reject_unknown(cfg, kConfigKeys, "config");
    if (o.n) cfg["n"] = o.n;
    if (o.nt) cfg["nt"] = o.nt;
    if (o.phases >= 0) cfg["phases"] = o.phases;
    if (o.tol > 0) cfg["tol_sweep"] = o.tol;
    if (o.max_sweeps) cfg["max_sweeps"] = o.max_sweeps;
    if (!o.mode.empty()) cfg["mode"] = o.mode;
    if (o.threads) cfg["threads"] = o.threads;
    else if (!cfg.contains("threads")) cfg["threads"] = g.threads;

    Resolved r;
    EnvelopeProblem& pb = r.problem;
    json& rc = r.config;
    pb.omega11 = cfg.contains("omega11") ? get_as<double>(cfg, "omega11") : 1.0;
    if (!cfg.contains("v")) throw ValidationError("config: missing 'v'");
    const json& v = cfg.at("v");
    reject_unknown(v, {"csv", "constant", "builder", "sharp_family"}, "config.v");
    if (v.size() != 1) throw ValidationError("config.v: give exactly one source");

    const int n_req = cfg.contains("n") ? get_as<int>(cfg, "n") : 0;
    if (n_req < 0) throw ValidationError("config: n must be positive");
    json vsrc;
    if (v.contains("csv")) {
        const std::string path = get_as<std::string>(v, "csv");
        const GridFunction f = load_grid_csv(path);
        if (f.grid.nt != 1) throw ValidationError("config.v.csv: expected a single time slice");
        if (n_req && n_req != f.grid.n) throw ValidationError("config: n disagrees with the csv grid");
        pb.v = f;
        pb.grid = f.grid;
        pb.omega11 = cfg.contains("omega11") ? pb.omega11 : f.omega11;
        pb.v.omega11 = pb.omega11;
        vsrc = {{"csv", path}};
    } else {
        if (!n_req) throw ValidationError("config: missing 'n'");
        if (v.contains("constant")) {
            const double c = get_as<double>(v, "constant");
            pb.grid = GridSpec::torus(n_req, 1);
            pb.v = GridFunction(pb.grid, pb.omega11, c);
            pb.v.symmetric = true;
            vsrc = {{"constant", c}};
        } else if (v.contains("builder")) {
            const json& b = v.at("builder");
            reject_unknown(b, {"p", "q", "rho", "slope", "mollify", "search", "psh_tol"}, "config.v.builder");
            const double p = b.contains("p") ? get_as<double>(b, "p") : 0.0;
            const std::complex<double> q = q_of(b);
            pb.grid = GridSpec::torus(n_req, 1);
            const BuiltPotential bp = build_symmetric_potential(pb.grid, pb.omega11, p, q, profile_of(b));
            pb.v = bp.v;
            vsrc = {{"builder", {{"p", p}, {"q", complex_json(q)}}}};
            const json requested = profile_json(profile_of(b));
            for (const auto& [key, value] : requested.items()) vsrc["builder"][key] = value;
            vsrc["builder"]["chosen"] = profile_json(bp.profile);
            vsrc["builder"]["min_c"] = bp.min_c;
        } else {
            const json& s = v.at("sharp_family");
            reject_unknown(s, {"epsilon"}, "config.v.sharp_family");
            const double eps = s.contains("epsilon") ? get_as<double>(s, "epsilon") : 1.0;
            if (pb.omega11 != 1.0) throw ValidationError("config: the sharp family needs omega11 = 1");
            pb.grid = family_patch(n_req);
            if (cfg.contains("nt")) pb.grid.nt = get_as<int>(cfg, "nt");
            const GridFunction ex = sample_family(SharpFamilyParams{eps}, pb.grid);
            pb.boundary = ex;
            pb.v = ex.slice(pb.grid.nt - 1);
            vsrc = {{"sharp_family", {{"epsilon", eps}}}};
        }
    }
    pb.grid.nt = cfg.contains("nt") ? get_as<int>(cfg, "nt") : pb.grid.n + 1;

    if (cfg.contains("directions")) {
        pb.directions.clear();
        for (const json& d : cfg.at("directions")) {
            if (!d.is_array() || d.size() != 4) throw ValidationError("config.directions: expected [s_re, s_im, z_re, z_im]");
            pb.directions.push_back({d[0].get<int>(), d[1].get<int>(), d[2].get<int>(), d[3].get<int>()});
        }
    }
    if (cfg.contains("tol_sweep")) pb.tol_sweep = get_as<double>(cfg, "tol_sweep");
    if (cfg.contains("max_sweeps")) pb.max_sweeps = get_as<long>(cfg, "max_sweeps");
    if (cfg.contains("max_multiple")) pb.max_multiple = get_as<int>(cfg, "max_multiple");
    if (cfg.contains("phases")) pb.phases = get_as<int>(cfg, "phases");
    if (cfg.contains("max_denominator")) pb.max_denominator = get_as<int>(cfg, "max_denominator");
    if (cfg.contains("kernel_candidates")) pb.kernel_candidates = get_as<int>(cfg, "kernel_candidates");
    if (cfg.contains("consistency_factor")) pb.consistency_factor = get_as<double>(cfg, "consistency_factor");
    pb.threads = get_as<int>(cfg, "threads");
    const std::string mode = cfg.contains("mode") ? get_as<std::string>(cfg, "mode") : "gauss-seidel";
    if (mode == "gauss-seidel") pb.mode = SweepMode::GaussSeidel;
    else if (mode == "jacobi") pb.mode = SweepMode::Jacobi;
    else throw ValidationError("config.mode: expected gauss-seidel or jacobi");

    json dirs = json::array();
    for (const auto& d : pb.directions) dirs.push_back({d.s_re, d.s_im, d.z_re, d.z_im});
    rc = {{"n", pb.grid.n},
          {"nt", pb.grid.nt},
          {"topology", to_string(pb.grid.topology)},
          {"omega11", pb.omega11},
          {"v", vsrc},
          {"directions", dirs},
          {"tol_sweep", pb.resolved_tol()},
          {"max_sweeps", pb.max_sweeps},
          {"max_multiple", pb.max_multiple},
          {"phases", pb.phases},
          {"max_denominator", pb.max_denominator},
          {"kernel_candidates", pb.kernel_candidates},
          {"mode", mode},
          {"threads", pb.threads},
          {"consistency_factor", pb.consistency_factor}};
    return r;
}

struct SolveArgs {
    std::string config;
    std::string grid_out;
    SolveOverrides over;
};

int run_solve(const SolveArgs& a, const Globals& g) {
    const json cfg = a.config.empty() ? json::object() : parse_json(read_text(a.config), a.config);
    Resolved rs = resolve_problem(cfg, a.over, g);
    rs.problem.validate();
    const EnvelopeResult r = solve_envelope(rs.problem);

    json out = provenance("solve-geodesic", rs.config);
    json phases = json::array();
    for (long s : r.phase_sweeps) phases.push_back(s);
    out["summary"] = {{"sweeps_used", r.sweeps_used},
                      {"phase_sweeps", phases},
                      {"final_update", r.final_update},
                      {"barrier_violation", r.barrier_violation},
                      {"hessian_min_eig", r.hessian_min_eig},
                      {"max_abs_det", r.max_abs_det},
                      {"lower_constant", r.lower_constant},
                      {"symmetry_residual", r.u.symmetry_residual()}};
    if (!a.grid_out.empty()) {
        std::ostringstream os;
        write_grid_csv(os, r.u);
        emit(a.grid_out, os.str());
        out["grid_csv"] = resolve_output(a.grid_out);
    } else {
        out["u"] = parse_json(grid_to_json(r.u), "grid");
    }
    emit(g.out, out.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------- probe

struct ProbeArgs {
    std::string solution;
    std::string grid;
    std::string levels;
    std::string radii = "0.05,0.1,0.2";
};

int run_probe(const ProbeArgs& a, const Globals& g) {
    if (a.solution.empty() && a.grid.empty()) throw ValidationError("give --solution or --grid");
    json sol = a.solution.empty() ? json::object() : parse_json(read_text(a.solution), a.solution);
    const std::vector<double> radii = parse_list(a.radii, "--radii");

    EnvelopeResult res;
    if (!a.grid.empty()) res.u = load_grid_csv(a.grid);
    else if (sol.contains("u")) res.u = grid_from_json(sol.at("u").dump());
    else if (sol.contains("grid_csv")) res.u = load_grid_csv(sol.at("grid_csv").get<std::string>());
    else throw ValidationError(a.solution + ": no solution grid");

    const TraceDiagnostics tr = linear_trace_test(res);
    const LambdaProbe lp = lambda_subharmonicity_probe(res);
    std::vector<BlowupRow> rows = blowup_rows(res.u, radii);
    std::vector<std::string> origin(rows.size(), "solution");

    json config{{"solution", a.solution}, {"grid", a.grid}, {"radii", radii}};
    if (!a.levels.empty()) {
        const std::vector<int> levels = parse_levels(a.levels);
        config["levels"] = levels;
        const json src = sol.contains("config") ? sol["config"].value("v", json::object()) : json::object();
        const json& sc = sol.contains("config") ? sol["config"] : json::object();
        std::vector<BlowupRow> scan;
        if (src.contains("builder")) {
            const json& b = src.at("builder");
            ScanTemplate tmpl;
            tmpl.omega11 = sc.value("omega11", 1.0);
            tmpl.p = b.value("p", 0.0);
            tmpl.q = q_of(b);
            tmpl.profile = profile_of(b.contains("chosen") ? b.at("chosen") : b);
            tmpl.profile.search = false;
            tmpl.phases = sc.value("phases", 3);
            tmpl.max_sweeps = sc.value("max_sweeps", 100000L);
            scan = blowup_scan(tmpl, levels, radii);
        } else if (src.contains("sharp_family")) {
            const SharpFamilyParams fp{src["sharp_family"].value("epsilon", 1.0)};
            for (int n : levels) {
                EnvelopeProblem pb;
                pb.grid = family_patch(n);
                const GridFunction ex = sample_family(fp, pb.grid);
                pb.boundary = ex;
                pb.v = ex.slice(n);
                pb.phases = sc.value("phases", 3);
                pb.max_sweeps = sc.value("max_sweeps", 100000L);
                for (const BlowupRow& row : blowup_rows(solve_envelope(pb).u, radii)) scan.push_back(row);
            }
        } else {
            throw ValidationError("--levels needs a solution built from a builder or sharp_family source");
        }
        for (const BlowupRow& row : scan) {
            rows.push_back(row);
            origin.push_back("scan");
        }
    }

    json header = provenance("probe-regularity", config);
    header["trace"] = {{"a_fit", tr.a_fit}, {"linear_residual", tr.linear_residual},
                       {"chord_slope", tr.chord_slope}, {"chord_residual", tr.chord_residual}};
    header["lambda"] = {{"min_second_diff", lp.min_second_diff}, {"flagged", lp.flagged}};

    if (g.format == "json") {
        json out = header;
        out["trace"]["values"] = tr.trace;
        json lam = json::array(), sd = json::array();
        for (double l : lp.lambda) lam.push_back(std::isfinite(l) ? json(l) : json(nullptr));
        for (double d : lp.second_diff) sd.push_back(std::isfinite(d) ? json(d) : json(nullptr));
        out["lambda"]["values"] = lam;
        out["lambda"]["second_diff"] = sd;
        json br = json::array();
        for (std::size_t k = 0; k < rows.size(); ++k)
            br.push_back({{"source", origin[k]}, {"n", rows[k].n}, {"h", rows[k].h},
                          {"radius", rows[k].radius}, {"max_abs", rows[k].max_abs},
                          {"oscillation", rows[k].oscillation}, {"ok", rows[k].ok},
                          {"note", rows[k].note}});
        out["blowup"] = br;
        emit(g.out, out.dump(2) + "\n");
    } else {
        std::vector<std::vector<std::string>> table;
        for (std::size_t k = 0; k < rows.size(); ++k)
            table.push_back({origin[k], std::to_string(rows[k].n), fd(rows[k].h), fd(rows[k].radius),
                             fd(rows[k].max_abs), fd(rows[k].oscillation), rows[k].ok ? "1" : "0"});
        emit(g.out, csv_with_header(header, {"source", "n", "h", "radius", "max_abs", "oscillation", "ok"}, table));
    }
    return 0;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const NonConvergence*>(&e) || dynamic_cast<const QuadratureFailure*>(&e) ||
        dynamic_cast<const ConsistencyError*>(&e) || dynamic_cast<const ConstructiveFailure*>(&e))
        return 2;
    if (dynamic_cast<const Error*>(&e) || dynamic_cast<const json::exception*>(&e)) return 1;
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak geodesic and Hessian obstruction toolkit"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--out", g.out, "Output file, '-' for stdout; relative paths go under $HCMA_OUTPUT_DIR");
    app.add_option("--format", g.format, "Output format; the default depends on the subcommand")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", g.seed, "Seed for sampled checks");
    app.add_option("--threads", g.threads, "Threads for Jacobi-mode solves")->check(CLI::PositiveNumber);

    StripArgs sa;
    auto* strip = app.add_subcommand("strip-asymptotics", "I, J, K functionals of f_lambda on the strip (CSV)");
    strip->add_option("--lambdas", sa.lambdas, "Comma-separated lambda values, each > 0")->capture_default_str();
    strip->add_option("--tol", sa.tol, "Absolute quadrature tolerance, > 0")->capture_default_str();
    strip->add_option("--truncation", sa.truncation, "Minimum half-width of the real-line integrals")->capture_default_str();

    ObstructionArgs oa;
    auto* obst = app.add_subcommand("check-obstruction", "Hessian obstruction inequality at a point (JSON)");
    obst->add_option("--omega", oa.omega,
                     "Hermitian positive definite m x m matrix: a number or JSON rows; entries number or [re, im]")
        ->capture_default_str();
    obst->add_option("--p", oa.p, "Hermitian matrix of mixed second derivatives; omega + p must be positive definite")
        ->capture_default_str();
    obst->add_option("--q", oa.q, "Complex symmetric matrix of holomorphic second derivatives")->capture_default_str();
    obst->add_flag("--sampled", oa.sampled, "Use the randomized sampling checker");
    obst->add_option("--samples", oa.samples, "Sample count for --sampled, >= 10000")->capture_default_str();

    FamilyArgs fa;
    auto* fam = app.add_subcommand("verify-sharp-family", "Discrete checks of the degenerate sharp family (JSON)");
    fam->add_option("--epsilon", fa.epsilon, "Family parameter, > 0")->capture_default_str();
    fam->add_option("--grid", fa.grid, "Spatial resolution n, even and >= 8")->capture_default_str();
    fam->add_option("--limit", fa.limit, "Epsilon sequence for the sharpness table")->capture_default_str();

    SolveArgs sv;
    auto* solve = app.add_subcommand("solve-geodesic", "Solve the discrete envelope problem (JSON result)");
    solve->add_option("--config", sv.config,
                      "Problem JSON: n, nt, omega11, v {csv|constant|builder|sharp_family}, directions, "
                      "tol_sweep, max_sweeps, max_multiple, phases, max_denominator, kernel_candidates, "
                      "mode, threads, consistency_factor; unknown keys are rejected");
    solve->add_option("--grid-out", sv.grid_out, "Write the solved grid as CSV here instead of inline");
    solve->add_option("--n", sv.over.n, "Override n")->check(CLI::PositiveNumber);
    solve->add_option("--nt", sv.over.nt, "Override the number of time slices, >= 3");
    solve->add_option("--tol", sv.over.tol, "Override tol_sweep")->check(CLI::PositiveNumber);
    solve->add_option("--max-sweeps", sv.over.max_sweeps, "Override max_sweeps")->check(CLI::PositiveNumber);
    solve->add_option("--phases", sv.over.phases, "Override the number of kernel direction phases, >= 1");
    solve->add_option("--mode", sv.over.mode, "gauss-seidel or jacobi")
        ->check(CLI::IsMember({"gauss-seidel", "jacobi"}));

    ProbeArgs pa;
    auto* probe = app.add_subcommand("probe-regularity", "Trace, lambda and blowup diagnostics of a solution (CSV)");
    probe->add_option("--solution", pa.solution, "Result JSON written by solve-geodesic");
    probe->add_option("--grid", pa.grid, "Solved grid CSV; overrides the grid referenced by --solution");
    probe->add_option("--levels", pa.levels,
                      "Comma-separated resolutions to re-solve for the blowup scan; needs a builder or sharp_family source");
    probe->add_option("--radii", pa.radii, "Comma-separated radii around z = 0")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*strip) {
            if (g.format.empty()) g.format = "csv";
            return run_strip(sa, g);
        }
        if (*obst) {
            if (g.format.empty()) g.format = "json";
            return run_obstruction(oa, g);
        }
        if (*fam) {
            if (g.format.empty()) g.format = "json";
            return run_family(fa, g);
        }
        if (*solve) {
            if (g.format == "csv") throw ValidationError("solve-geodesic writes JSON; use --grid-out for CSV");
            return run_solve(sv, g);
        }
        if (g.format.empty()) g.format = "csv";
        return run_probe(pa, g);
    } catch (const std::exception& e) {
        std::cerr << "hcma: " << e.what() << "\n";
        return exit_code_for(e);
    }
}
