#include "oro/cli.hpp"

#include "oro/experiments.hpp"
#include "oro/ml.hpp"
#include "oro/mps.hpp"
#include "oro/norms.hpp"
#include "oro/orlp.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace oro::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitExternal = 3;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write file: " + path);
    f << content;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Replaying the command with the values recorded here reproduces the run
/// byte for byte; input files are pinned by their FNV-1a 64 digest.
class Manifest {
  public:
    explicit Manifest(std::string command) { set("command", std::move(command)); }

    void set(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
    void set(const std::string& key, double value) { set(key, fmt_double(value)); }
    void set(const std::string& key, int value) { set(key, std::to_string(value)); }
    void set(const std::string& key, uint64_t value) { set(key, std::to_string(value)); }

    void add_input(const std::string& path, const std::string& bytes) {
        set("input." + path, "fnv1a64:" + hex64(fnv1a64(bytes)));
    }

    void write(const std::string& out_path) const {
        std::ostringstream ss;
        ss << "version = " << kVersion << "\n";
        for (const auto& [k, v] : entries_) ss << k << " = " << v << "\n";
        write_file(out_path + ".manifest", ss.str());
    }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string join_list(const dvec& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i > 0) s += ',';
        s += fmt_double(v[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// solve-orlp
// ---------------------------------------------------------------------------

struct SolveArgs {
    std::string mps_path;
    bool random = false;
    double K = 0.0;
    double R = 0.0;
    double deviation = 0.10;
    std::string out;
    uint64_t seed = 0;
    int n = 250;
    int j = 50;
};

int cmd_solve_orlp(const SolveArgs& a) {
    Manifest manifest("solve-orlp");
    ProblemInstance inst;
    if (a.random) {
        inst = generate_random_lp(a.seed, a.n, a.j, a.deviation);
        manifest.set("source", "random");
        manifest.set("n", a.n);
        manifest.set("j", a.j);
    } else {
        std::string bytes;
        try {
            bytes = read_file(a.mps_path);
        } catch (const std::exception& ex) {
            std::fprintf(stderr, "error: %s\n", ex.what());
            return kExitUsage;
        }
        const NominalLP lp = parse_mps_string(bytes);
        for (const auto& warning : lp.warnings) log_info(a.mps_path + ": " + warning);
        inst = make_mps_instance(lp, a.deviation);
        manifest.set("source", "mps");
        manifest.add_input(a.mps_path, bytes);
    }
    manifest.set("k", a.K);
    manifest.set("r", a.R);
    manifest.set("deviation", a.deviation);
    manifest.set("seed", a.seed);

    const ORLPProblem problem = build_budgets(inst, a.K, a.R);
    auto [res, trace] = dca_solve(problem);

    std::ostringstream dump;
    dump << "status = " << to_string(res.status) << "\n";
    if (res.status != DcaStatus::SubproblemInfeasible) {
        dump << "objective = " << fmt_double(res.objective) << "\n";
        dump << "iterations = " << res.iterations << "\n";
        dump << "avg_protection = " << fmt_double(avg_protection(res.w, inst)) << "\n";
        for (size_t i = 0; i < res.w.size(); ++i)
            dump << "w." << inst.lp.col_names[i] << " = " << fmt_double(res.w[i]) << "\n";
    }
    write_file(a.out, dump.str());

    std::ostringstream tr;
    tr << "iteration,objective\n";
    for (const auto& it : trace.iterates)
        tr << it.iteration << ',' << fmt_double(it.objective) << '\n';
    write_file(a.out + ".trace.csv", tr.str());
    manifest.write(a.out);

    return res.status == DcaStatus::SubproblemInfeasible ? kExitSolver : kExitOk;
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

GridConfig parse_grid_file(const std::string& text) {
    GridConfig grid;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool saw_k = false, saw_r = false, saw_m = false;
    auto parse_list = [](const std::string& s, int lineno) {
        dvec out;
        std::string item;
        std::istringstream ss(s);
        while (std::getline(ss, item, ',')) {
            char* end = nullptr;
            const double v = std::strtod(item.c_str(), &end);
            if (end == item.c_str())
                throw std::runtime_error("grid file line " + std::to_string(lineno) +
                                         ": bad numeric list entry '" + item + "'");
            out.push_back(v);
        }
        return out;
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("grid file line " + std::to_string(lineno) +
                                     ": expected key = value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "K_values") { grid.K_values = parse_list(val, lineno); saw_k = true; }
        else if (key == "R_values") { grid.R_values = parse_list(val, lineno); saw_r = true; }
        else if (key == "M_values") { grid.M_values = parse_list(val, lineno); saw_m = true; }
        else if (key == "trials") grid.trials = static_cast<int>(std::stol(val));
        else if (key == "seed") grid.seed = std::stoull(val);
        else if (key == "deviation_fraction") grid.deviation_fraction = std::stod(val);
        else if (key == "n") grid.random_n = static_cast<int>(std::stol(val));
        else if (key == "j") grid.random_j = static_cast<int>(std::stol(val));
        else
            throw std::runtime_error("grid file line " + std::to_string(lineno) +
                                     ": unknown key '" + key + "'");
    }
    if (!saw_k || !saw_r || !saw_m)
        throw std::runtime_error("grid file: K_values, R_values and M_values are required");
    grid.validate();
    return grid;
}

struct ExperimentArgs {
    std::string family = "random";
    std::string mps_path;
    std::string grid_file;
    std::string out;
};

int cmd_experiment(const ExperimentArgs& a) {
    std::string grid_bytes;
    GridConfig grid;
    try {
        grid_bytes = read_file(a.grid_file);
        grid = parse_grid_file(grid_bytes);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitUsage;
    }

    Manifest manifest("experiment");
    manifest.set("family", a.family);
    manifest.add_input(a.grid_file, grid_bytes);
    manifest.set("K_values", join_list(grid.K_values));
    manifest.set("R_values", join_list(grid.R_values));
    manifest.set("M_values", join_list(grid.M_values));
    manifest.set("trials", grid.trials);
    manifest.set("seed", grid.seed);
    manifest.set("deviation_fraction", grid.deviation_fraction);

    ProblemInstance inst;
    if (a.family == "random") {
        inst = generate_random_lp(grid.seed, grid.random_n, grid.random_j,
                                  grid.deviation_fraction);
        manifest.set("n", grid.random_n);
        manifest.set("j", grid.random_j);
    } else if (a.family == "mps") {
        std::string bytes;
        try {
            bytes = read_file(a.mps_path);
        } catch (const std::exception& ex) {
            std::fprintf(stderr, "error: %s\n", ex.what());
            return kExitUsage;
        }
        const NominalLP lp = parse_mps_string(bytes);
        for (const auto& warning : lp.warnings) log_info(a.mps_path + ": " + warning);
        inst = make_mps_instance(lp, grid.deviation_fraction);
        manifest.add_input(a.mps_path, bytes);
    } else {
        std::fprintf(stderr, "error: unknown family '%s'\n", a.family.c_str());
        return kExitUsage;
    }

    log_info("experiment: " + std::to_string(grid.K_values.size() * grid.R_values.size()) +
             " grid cells, " + std::to_string(grid.trials) + " trials per scenario");
    const auto rows = run_grid(inst, grid);
    write_file(a.out, grid_rows_to_csv(rows));
    manifest.write(a.out);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string task;
    std::string data_path;
    std::string out;
    std::string reg = "none";
    double z = 0.0;
    double nu = 0.5;
    double mu = 0.0;
    double C = 1.0;
    double theta = 1.0;
    double lambda = 1.0;
    double k = 1.0;
    double radius = 0.0;
    std::string loss = "squared";
    uint64_t seed = 0;
};

std::optional<Regularizer> make_regularizer(const TrainArgs& a, int n) {
    if (a.reg == "none") return std::nullopt;
    Regularizer reg;
    if (a.reg == "l0") { reg.kind = RegKind::ApproxL0; reg.k = a.k; }
    else if (a.reg == "l12") reg.kind = RegKind::L12;
    else if (a.reg == "capped-l1") { reg.kind = RegKind::CappedL1; reg.theta = a.theta; }
    else if (a.reg == "mcp") { reg.kind = RegKind::MCP; reg.theta = a.theta; reg.lambda = a.lambda; }
    else if (a.reg == "scad") { reg.kind = RegKind::SCAD; reg.theta = a.theta; reg.lambda = a.lambda; }
    else throw DomainError("unknown regularizer '" + a.reg + "'");
    reg.validate(n);
    return reg;
}

int cmd_train(const TrainArgs& a) {
    std::string bytes;
    Dataset data;
    try {
        bytes = read_file(a.data_path);
        std::istringstream ss(bytes);
        data = parse_dataset(ss);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitUsage;
    }

    TrainerConfig cfg;
    cfg.seed = a.seed;
    const int N = data.num_samples();

    LinearModel model;
    std::string loss_desc;
    double data_loss = 0.0;
    try {
        if (a.task == "svc") {
            model = train_nu_svc_oro(data, make_regularizer(a, data.num_features()), a.z, a.nu, cfg);
            const double gamma = model.aux.value_or(0.0);
            for (int i = 0; i < N; ++i)
                data_loss += std::max(0.0, -data.y[i] * (dot(model.w, data.X[i]) + model.b) - gamma);
            data_loss /= N;
            loss_desc = "mean margin hinge";
        } else if (a.task == "svr") {
            model = train_nu_svr_oro(data, make_regularizer(a, data.num_features()), a.z, a.nu, a.C,
                                     cfg);
            const double eps = model.aux.value_or(0.0);
            for (int i = 0; i < N; ++i)
                data_loss += std::max(
                    0.0, std::fabs(data.y[i] - dot(model.w, data.X[i]) - model.b) - eps);
            data_loss /= N;
            loss_desc = "mean tube-excess";
        } else if (a.task == "trimmed") {
            const LossKind kind = a.loss == "abs" ? LossKind::Absolute : LossKind::Squared;
            model = train_trimmed_regression(data, a.nu, a.mu, a.C, kind, cfg);
            int kept = 0;
            for (int i = 0; i < N; ++i) {
                if (std::binary_search(model.excluded_indices.begin(),
                                       model.excluded_indices.end(), i))
                    continue;
                const double r = data.y[i] - dot(model.w, data.X[i]) - model.b;
                data_loss += kind == LossKind::Squared ? r * r : std::fabs(r);
                ++kept;
            }
            if (kept > 0) data_loss /= kept;
            loss_desc = "mean kept-sample residual score";
        } else if (a.task == "tsvc") {
            model = train_tsvc(data, a.C, dvec(N, a.radius), cfg);
            for (int i = 0; i < N; ++i)
                data_loss += std::max(0.0, 1.0 - data.y[i] * (dot(model.w, data.X[i]) + model.b));
            data_loss /= N;
            loss_desc = "mean hinge";
        } else if (a.task == "robust-svm") {
            model = train_robust_csvm(data, a.C, dvec(N, a.radius), cfg);
            for (int i = 0; i < N; ++i)
                data_loss += std::max(0.0, 1.0 - data.y[i] * (dot(model.w, data.X[i]) + model.b));
            data_loss /= N;
            loss_desc = "mean hinge";
        } else {
            std::fprintf(stderr, "error: unknown task '%s'\n", a.task.c_str());
            return kExitUsage;
        }
    } catch (const DomainError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitUsage;
    }

    std::ostringstream dump;
    dump << "task = " << a.task << "\n";
    dump << "n = " << data.num_features() << "\n";
    dump << "w =";
    for (double v : model.w) dump << ' ' << fmt_double(v);
    dump << "\nb = " << fmt_double(model.b) << "\n";
    if (model.aux) dump << "aux = " << fmt_double(*model.aux) << "\n";
    dump << "objective = " << fmt_double(model.objective) << "\n";
    dump << "iterations = " << model.iterations << "\n";
    dump << "loss = " << fmt_double(data_loss) << "\n";
    dump << "loss_kind = " << loss_desc << "\n";
    if (!model.excluded_indices.empty()) {
        dump << "excluded_indices =";
        for (int i : model.excluded_indices) dump << ' ' << i;
        dump << "\n";
    }
    write_file(a.out, dump.str());

    std::ostringstream tr;
    tr << "iteration,objective\n";
    for (size_t i = 0; i < model.objective_trace.size(); ++i)
        tr << i << ',' << fmt_double(model.objective_trace[i]) << '\n';
    write_file(a.out + ".trace.csv", tr.str());

    Manifest manifest("train");
    manifest.set("task", a.task);
    manifest.add_input(a.data_path, bytes);
    manifest.set("reg", a.reg);
    manifest.set("z", a.z);
    manifest.set("nu", a.nu);
    manifest.set("mu", a.mu);
    manifest.set("C", a.C);
    manifest.set("radius", a.radius);
    manifest.set("seed", a.seed);
    manifest.write(a.out);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fetch-netlib
// ---------------------------------------------------------------------------

const std::map<std::string, std::string>& known_instances() {
    // classic instances with their published (columns, inequalities,
    // equalities) only recorded for capri, which the toolkit verifies
    static const std::map<std::string, std::string> names = {
        {"adlittle", ""}, {"afiro", ""},  {"agg", ""},     {"bandm", ""},  {"beaconfd", ""},
        {"blend", ""},    {"brandy", ""}, {"capri", ""},   {"e226", ""},   {"israel", ""},
        {"kb2", ""},      {"lotfi", ""},  {"sc105", ""},   {"sc205", ""},  {"sc50a", ""},
        {"sc50b", ""},    {"scagr7", ""}, {"share1b", ""}, {"share2b", ""}, {"stocfor1", ""},
    };
    return names;
}

bool looks_like_mps(const std::string& payload) {
    std::istringstream in(payload);
    std::string line;
    int scanned = 0;
    while (std::getline(in, line) && scanned++ < 50) {
        if (line.empty() || line[0] == '*') continue;
        std::istringstream ss(line);
        std::string tok;
        ss >> tok;
        if (tok == "NAME" || tok == "ROWS") return true;
        return false;
    }
    return false;
}

struct FetchArgs {
    std::string name;
    std::string dest;
    std::string mirror = "https://www.netlib.org/lp/data";
};

int cmd_fetch_netlib(const FetchArgs& a) {
    std::string name = a.name;
    std::transform(name.begin(), name.end(), name.begin(), ::tolower);
    if (known_instances().count(name) == 0) {
        std::fprintf(stderr, "error: unknown instance '%s'\n", a.name.c_str());
        return kExitUsage;
    }

    std::string payload;
    if (a.mirror.rfind("file://", 0) == 0) {
        const std::string path = a.mirror.substr(7);
        std::ifstream f(path, std::ios::binary);
        if (!f) {
            std::fprintf(stderr,
                         "error: mirror file '%s' is unreachable; pass --mirror file://<path> "
                         "pointing at a local MPS copy\n",
                         path.c_str());
            return kExitExternal;
        }
        std::ostringstream ss;
        ss << f.rdbuf();
        payload = ss.str();
    } else {
        std::string url = a.mirror;
        std::string scheme_host = url;
        std::string path = "/";
        const auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) {
            std::fprintf(stderr, "error: mirror URL must start with http://, https:// or file://\n");
            return kExitUsage;
        }
        const auto path_start = url.find('/', scheme_end + 3);
        if (path_start != std::string::npos) {
            scheme_host = url.substr(0, path_start);
            path = url.substr(path_start);
        }
        if (!path.empty() && path.back() != '/') path += '/';
        path += name;
        httplib::Client client(scheme_host);
        client.set_follow_location(true);
        auto res = client.Get(path);
        if (!res || res->status != 200) {
            std::fprintf(stderr,
                         "error: could not download '%s' from %s (offline? wrong mirror?); "
                         "fetch the file manually and pass --mirror file://<path>\n",
                         name.c_str(), a.mirror.c_str());
            return kExitExternal;
        }
        payload = res->body;
    }

    if (!looks_like_mps(payload)) {
        std::fprintf(stderr,
                     "error: payload for '%s' is not plain MPS (the classic archives ship in a "
                     "line-compressed form); expand it with the archive's emps tool and retry "
                     "with --mirror file://<expanded>\n",
                     name.c_str());
        return kExitExternal;
    }

    NominalLP lp;
    try {
        lp = parse_mps_string(payload);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: downloaded payload does not parse: %s\n", ex.what());
        return kExitExternal;
    }
    write_file(a.dest, payload);

    bool dim_ok = true;
    if (name == "capri") {
        dim_ok = lp.num_cols() == 353 && lp.num_ineq() == 129 && lp.num_eq() == 142;
        if (!dim_ok)
            std::fprintf(stderr,
                         "warning: capri dimensions are %d cols / %d ineq / %d eq, expected "
                         "353/129/142\n",
                         lp.num_cols(), lp.num_ineq(), lp.num_eq());
    }

    Manifest manifest("fetch-netlib");
    manifest.set("name", name);
    manifest.set("mirror", a.mirror);
    manifest.add_input(a.dest, payload);
    manifest.set("columns", lp.num_cols());
    manifest.set("inequalities", lp.num_ineq());
    manifest.set("equalities", lp.num_eq());
    manifest.set("dimension_check", dim_ok ? "ok" : "mismatch");
    manifest.write(a.dest);
    std::printf("wrote %s (%d columns, %d inequalities, %d equalities)\n", a.dest.c_str(),
                lp.num_cols(), lp.num_ineq(), lp.num_eq());
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"optimistic robust optimization toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve-orlp", "solve one budgeted robust LP");
    auto* mps_opt = solve->add_option("--mps", sa.mps_path, "MPS problem file");
    auto* rnd_opt = solve->add_flag("--random", sa.random, "use the synthetic random family");
    mps_opt->excludes(rnd_opt);
    solve->add_option("--k", sa.K, "protected fraction K of nonzero coefficients per row")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    solve->add_option("--r", sa.R, "optimism fraction R of each budget")
        ->check(CLI::Range(0.0, 0.999999));
    solve->add_option("--deviation", sa.deviation, "deviation fraction of each coefficient");
    solve->add_option("--out", sa.out, "output path for the solution dump")->required();
    solve->add_option("--seed", sa.seed, "random-family seed");
    solve->add_option("--n", sa.n, "random-family variable count");
    solve->add_option("--j", sa.j, "random-family row count");

    ExperimentArgs ea;
    auto* exp = app.add_subcommand("experiment", "run the (K, R) grid protocol");
    exp->add_option("--family", ea.family, "problem source: random or mps")->required();
    exp->add_option("--mps", ea.mps_path, "MPS file for the mps family");
    exp->add_option("--grid-file", ea.grid_file, "flat key=value grid configuration")->required();
    exp->add_option("--out", ea.out, "CSV output path")->required();

    TrainArgs ta;
    auto* train = app.add_subcommand("train", "fit one of the robust learners");
    train->add_option("--task", ta.task, "svc | svr | trimmed | tsvc | robust-svm")->required();
    train->add_option("--data", ta.data_path, "sample-per-line data file, target last")->required();
    train->add_option("--out", ta.out, "model dump path")->required();
    train->add_option("--reg", ta.reg, "none | l0 | l12 | capped-l1 | mcp | scad");
    train->add_option("--z", ta.z, "uncertainty scale for the regularized trainers");
    train->add_option("--nu", ta.nu, "margin-violation fraction bound");
    train->add_option("--mu", ta.mu, "trimming fraction (trimmed task)");
    train->add_option("--C", ta.C, "loss weight");
    train->add_option("--theta", ta.theta, "regularizer theta");
    train->add_option("--lambda", ta.lambda, "regularizer lambda");
    train->add_option("--reg-k", ta.k, "order for the l0 regularizer");
    train->add_option("--radius", ta.radius, "per-sample disturbance radius (tsvc / robust-svm)");
    train->add_option("--loss", ta.loss, "abs | squared (trimmed task)");
    train->add_option("--seed", ta.seed, "trainer seed");

    FetchArgs fa;
    auto* fetch = app.add_subcommand("fetch-netlib", "download a classic LP test instance");
    fetch->add_option("--name", fa.name, "instance name, e.g. CAPRI")->required();
    fetch->add_option("--dest", fa.dest, "destination MPS path")->required();
    fetch->add_option("--mirror", fa.mirror, "base URL or file:// payload");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) {
            if (!sa.random && sa.mps_path.empty()) {
                std::fprintf(stderr, "error: pass exactly one of --mps or --random\n");
                return kExitUsage;
            }
            return cmd_solve_orlp(sa);
        }
        if (exp->parsed()) return cmd_experiment(ea);
        if (train->parsed()) return cmd_train(ta);
        if (fetch->parsed()) return cmd_fetch_netlib(fa);
    } catch (const MpsError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitUsage;
    } catch (const DomainError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitUsage;
    } catch (const IterationLimitError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitSolver;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace oro::cli
