// mfdp: batch CLI for matrix-factorization DP mechanisms.
//
// Subcommands: workload, sensitivity, factorize, loss, sweep-stamps, fft,
// tree, noise, account, demo-train, repro-table1, repro-table3.
// Exit codes: 0 success, 2 usage error, 1 numerical failure.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "mfdp/errors.hpp"
#include "mfdp/fftmech.hpp"
#include "mfdp/io.hpp"
#include "mfdp/matcore.hpp"
#include "mfdp/mechlab.hpp"
#include "mfdp/optfact.hpp"
#include "mfdp/participation.hpp"
#include "mfdp/rng.hpp"
#include "mfdp/treestamp.hpp"
#include "mfdp/workloads.hpp"

namespace {

using namespace mfdp;
using nlohmann::json;

WorkloadKind parse_kind(const std::string& s) {
    if (s == "prefix") return WorkloadKind::prefix;
    if (s == "momentum") return WorkloadKind::momentum;
    if (s == "momentum-cooldown" || s == "momentum_cooldown")
        return WorkloadKind::momentum_cooldown;
    throw CLI::ValidationError("--kind", "unknown workload kind: " + s);
}

ConstraintMode parse_mode(const std::string& s) {
    if (s == "full" || s == "full_corners") return ConstraintMode::full_corners;
    if (s == "pairwise" || s == "pairwise_nonneg") return ConstraintMode::pairwise_nonneg;
    if (s == "elementwise" || s == "elementwise_nonneg")
        return ConstraintMode::elementwise_nonneg;
    throw CLI::ValidationError("--mode", "unknown constraint mode: " + s);
}

MechanismFamily parse_family(const std::string& s) {
    if (s == "online-honaker" || s == "online_honaker")
        return MechanismFamily::online_honaker;
    if (s == "optimal-honaker" || s == "optimal_honaker")
        return MechanismFamily::optimal_honaker;
    if (s == "fft") return MechanismFamily::fft;
    if (s == "fft-optimal" || s == "fft_optimal") return MechanismFamily::fft_optimal;
    throw CLI::ValidationError("--family", "unknown mechanism family: " + s);
}

SensMethod parse_sens_method(const std::string& s) {
    if (s == "brute") return SensMethod::brute;
    if (s == "nonneg") return SensMethod::nonneg;
    if (s == "upper") return SensMethod::upper;
    throw CLI::ValidationError("--method", "unknown sensitivity method: " + s);
}

void write_matrix(const std::string& path, const Matrix& m, const std::string& format) {
    if (format == "csv")
        io::write_csv(path, m);
    else
        io::write_mat64(path, m);
}

// ---------------------------------------------------------------- workload
struct WorkloadArgs {
    std::string kind = "prefix";
    int n = 1;
    double beta = 0.95;
    double fraction = 0.25;
    double floor = 0.05;
    std::string out;
    std::string format = "mat64";
};

int run_workload(const WorkloadArgs& a) {
    WorkloadSpec spec{a.n, parse_kind(a.kind), a.beta, a.fraction, a.floor};
    write_matrix(a.out, make_workload(spec), a.format);
    return 0;
}

// ------------------------------------------------------------- sensitivity
struct SensArgs {
    std::string matrix;
    int k = 1, b = 1;
    std::string method = "brute";
};

int run_sensitivity(const SensArgs& a) {
    const Matrix c = io::read_mat64(a.matrix);
    const auto schema = make_schema(static_cast<int>(c.cols()), a.k, a.b);
    SensCertificate cert;
    switch (parse_sens_method(a.method)) {
        case SensMethod::brute: cert = sens_brute_cert(c, schema); break;
        case SensMethod::nonneg: cert = sens_nonneg_fastpath_cert(c, schema); break;
        case SensMethod::upper: cert = sens_upper_cert(c, schema); break;
    }
    std::cout << "sens=" << io::format_double(cert.value)
              << " method=" << to_string(cert.method)
              << " pattern=" << cert.pattern_index + 1 << "\n";
    return 0;
}

// ---------------------------------------------------------------- factorize
struct FactorizeArgs {
    std::string workload = "prefix";
    int n = 6;
    double beta = 0.95;
    double fraction = 0.25;
    double floor = 0.05;
    int k = 1, b = 1;
    std::string mode = "full";
    double gap_tol = 1e-6;
    int max_iters = 50000;
    std::string out_dir = ".";
};

int run_factorize(const FactorizeArgs& a) {
    WorkloadSpec wspec{a.n, parse_kind(a.workload), a.beta, a.fraction, a.floor};
    const Matrix workload = make_workload(wspec);
    const auto schema = make_schema(a.n, a.k, a.b);
    SolveOptions opts;
    opts.gap_tol = a.gap_tol;
    opts.max_iters = a.max_iters;
    auto res = solve(workload, schema, parse_mode(a.mode), opts);

    std::filesystem::create_directories(a.out_dir);
    const auto dir = std::filesystem::path(a.out_dir);
    io::write_mat64((dir / "B.mat64").string(), res.factorization.B);
    io::write_mat64((dir / "C.mat64").string(), res.factorization.C);

    json diag;
    diag["workload"] = a.workload;
    diag["n"] = a.n;
    diag["k"] = a.k;
    diag["b"] = a.b;
    diag["mode"] = to_string(parse_mode(a.mode));
    diag["dual_value"] = res.state.dual_value;
    diag["primal_value"] = res.state.primal_value;
    diag["root_loss"] = std::sqrt(res.state.primal_value);
    diag["gap"] = res.state.gap;
    diag["converged"] = res.converged;
    diag["iterations"] = res.iterations;
    diag["min_x_entry"] = res.min_x_entry;
    diag["min_x_co_occurring"] = res.min_x_constrained;
    diag["max_constraint_violation"] = res.max_constraint_violation;
    diag["sens"] = res.factorization.sens;
    diag["sens_method"] = to_string(res.factorization.sens_method);
    std::ofstream((dir / "diagnostics.json").string()) << diag.dump(2) << "\n";

    if (!res.converged) {
        std::cerr << "factorize: iteration cap reached before gap tolerance (gap="
                  << res.state.gap << ")\n";
        return 1;
    }
    return 0;
}

// --------------------------------------------------------------------- loss
struct LossArgs {
    std::string b_matrix, c_matrix;
    int k = 1, b = 1;
    std::string method = "brute";
    std::string name = "custom";
};

int run_loss(const LossArgs& a) {
    const Matrix bm = io::read_mat64(a.b_matrix);
    const Matrix cm = io::read_mat64(a.c_matrix);
    const auto schema = make_schema(static_cast<int>(cm.cols()), a.k, a.b);
    MechanismReport r;
    r.mechanism_name = a.name;
    r.n = schema.n;
    r.k = a.k;
    r.b = a.b;
    r.decoder = "custom";
    r.sens_method = parse_sens_method(a.method);
    switch (r.sens_method) {
        case SensMethod::brute: r.sens = sens_brute(cm, schema); break;
        case SensMethod::nonneg: r.sens = sens_nonneg_fastpath(cm, schema); break;
        case SensMethod::upper: r.sens = sens_upper(cm, schema); break;
    }
    r.loss = r.sens * r.sens * bm.squaredNorm();
    r.root_loss = std::sqrt(r.loss);
    std::cout << report_csv_header() << "\n" << report_csv_row(r) << "\n";
    return 0;
}

// ------------------------------------------------------------- sweep-stamps
struct SweepArgs {
    std::string family = "online-honaker";
    int n_total = 2000;
    int k = 20, b = 100;
    std::vector<int> stamps = {1, 2, 5, 10, 20};
    std::string out;
};

MechanismReport row_to_report(const StampSweepRow& row, const ParticipationSchema& s) {
    MechanismReport r;
    r.mechanism_name = to_string(row.family) + "(n=" + std::to_string(row.base_n) +
                       ")x" + std::to_string(row.stamps);
    r.n = s.n;
    r.k = s.k;
    r.b = s.b;
    r.stamps = row.stamps;
    r.decoder = row.decoder;
    r.sens = row.sens;
    r.sens_method = row.sens_method;
    r.loss = row.loss;
    r.root_loss = std::sqrt(row.loss);
    return r;
}

int run_sweep(const SweepArgs& a) {
    const auto schema = make_schema(a.n_total, a.k, a.b);
    std::vector<int> stamps = a.stamps.empty() ? std::vector<int>{1} : a.stamps;
    auto rows = sweep_stamps(parse_family(a.family), a.n_total, schema, stamps);
    std::ofstream out(a.out);
    if (!out) throw ContractViolation("sweep-stamps: cannot open " + a.out);
    out << report_csv_header() << "\n";
    const StampSweepRow* best = nullptr;
    for (const auto& row : rows) {
        if (row.skipped) {
            std::cerr << "sweep-stamps: skipping s=" << row.stamps
                      << " (does not divide n_total)\n";
            continue;
        }
        out << report_csv_row(row_to_report(row, schema)) << "\n";
        if (!best || row.loss < best->loss) best = &row;
    }
    if (best)
        std::cout << "argmin: s=" << best->stamps
                  << " loss=" << io::format_double(best->loss) << "\n";
    return 0;
}

// ---------------------------------------------------------------------- fft
struct FftArgs {
    int n = 16;
    double rho = 1.0;
    double kappa = 1.0;
    std::uint64_t seed = 0;
    std::string emit = "release";
    std::string input;
    std::string out;
    std::string format = "mat64";
};

int run_fft(const FftArgs& a) {
    if (a.emit == "release") {
        Vector x;
        if (!a.input.empty()) {
            const Matrix m = io::read_mat64(a.input);
            if (m.cols() != 1)
                throw ContractViolation("fft release: input must be a column vector");
            x = m.col(0);
        } else {
            x = Vector::Constant(a.n, a.kappa);
        }
        const Vector released = fft_prefix_release(x, a.rho, a.kappa, a.seed);
        write_matrix(a.out, released, a.format);
        return 0;
    }
    if (a.emit == "encoder") {
        write_matrix(a.out, real_fft_encoder(a.n), a.format);
        return 0;
    }
    if (a.emit == "mse-table") {
        std::ofstream out(a.out);
        if (!out) throw ContractViolation("fft mse-table: cannot open " + a.out);
        out << "n,analytic_mse,lower_bound,ratio\n";
        for (int n = 16; n <= std::max(16, a.n); n *= 2) {
            const double mse = mse_analytic(n, a.rho, a.kappa);
            const double lb = mse_lower_bound(n, a.rho) * a.kappa * a.kappa;
            out << n << "," << io::format_double(mse) << "," << io::format_double(lb)
                << "," << io::format_double(mse / lb) << "\n";
        }
        return 0;
    }
    throw CLI::ValidationError("--emit", "unknown fft emission: " + a.emit);
}

// --------------------------------------------------------------------- tree
struct TreeArgs {
    int n = 8;
    std::string emit = "encoder";
    bool uncompleted = false;
    std::string out;
    std::string format = "mat64";
};

int run_tree(const TreeArgs& a) {
    if (a.emit == "encoder") {
        auto [spec, embedding] = tree_encoder(a.n);
        write_matrix(a.out, spec.encoder * embedding, a.format);
        return 0;
    }
    if (a.emit == "online-decoder") {
        write_matrix(a.out, online_honaker_decoder(a.n, !a.uncompleted), a.format);
        return 0;
    }
    if (a.emit == "optimal-decoder") {
        write_matrix(a.out, optimal_tree_decoder(a.n), a.format);
        return 0;
    }
    throw CLI::ValidationError("--emit", "unknown tree emission: " + a.emit);
}

// -------------------------------------------------------------------- noise
struct NoiseArgs {
    std::string b_matrix;
    int d = 1;
    double sigma = 1.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "mat64";
};

int run_noise(const NoiseArgs& a) {
    const Matrix b = io::read_mat64(a.b_matrix);
    write_matrix(a.out, sample_noise(b, a.d, a.sigma, a.seed), a.format);
    return 0;
}

// ------------------------------------------------------------------ account
struct AccountArgs {
    double sens = 1.0;
    double sigma = 1.0;
    double delta = 1e-6;
};

int run_account(const AccountArgs& a) {
    const double rho = zcdp(a.sens, a.sigma);
    std::cout << "rho=" << io::format_double(rho)
              << " epsilon=" << io::format_double(zcdp_to_epsilon(rho, a.delta))
              << " delta=" << io::format_double(a.delta) << "\n";
    return 0;
}

// --------------------------------------------------------------- demo-train
struct DemoArgs {
    int k = 4;
    int b = 25;
    int batch = 4;
    int d = 4;
    int examples = 0;  // 0: derived as batch * b
    double rho = 0.25;
    double zeta = 1.0;
    int seeds = 50;
    std::string out;
};

struct DemoMechanism {
    std::string name;
    Matrix b_dec;  // decoder
    Matrix c_enc;  // unit-sensitivity encoder
};

int run_demo(const DemoArgs& a) {
    const int n = a.k * a.b;
    if (a.examples != 0 && a.examples != a.batch * a.b)
        throw ContractViolation(
            "demo-train: examples must equal batch * b for exact (k,b)-participation");
    const int m = a.batch * a.b;
    const auto schema = make_schema(n, a.k, a.b);

    // Fixed dataset, shuffled once: step t always takes batch (t mod b).
    Matrix data(m, a.d);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < a.d; ++j)
            data(i, j) = 1.5 * rng::keyed_gaussian(987654321, i, j);
    // Clip per-example contributions to zeta before averaging.
    Matrix clipped = data;
    for (int i = 0; i < m; ++i) {
        const double norm = clipped.row(i).norm();
        if (norm > a.zeta) clipped.row(i) *= a.zeta / norm;
    }
    const Eigen::RowVectorXd target = clipped.colwise().mean();

    Matrix batch_sums(n, a.d);
    for (int t = 0; t < n; ++t) {
        batch_sums.row(t).setZero();
        const int batch_id = t % a.b;
        for (int i = batch_id * a.batch; i < (batch_id + 1) * a.batch; ++i)
            batch_sums.row(t) += clipped.row(i);
    }
    Matrix exact_prefix(n, a.d);
    {
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(a.d);
        for (int t = 0; t < n; ++t) {
            acc += batch_sums.row(t);
            exact_prefix.row(t) = acc;
        }
    }

    std::vector<DemoMechanism> mechanisms;
    {
        auto res = solve(prefix_workload(n), schema, ConstraintMode::full_corners,
                         {1e-6, 50000});
        auto f = normalize(res.factorization);
        mechanisms.push_back({"optimal", f.B, f.C});
    }
    {
        auto [spec, embedding] = tree_encoder(n);
        Factorization f;
        f.B = online_honaker_decoder(n, true);
        f.C = spec.encoder * embedding;
        f.schema = schema;
        f.sens_method = SensMethod::nonneg;
        f.sens = sens_nonneg_fastpath(f.C, schema);
        auto g = normalize(f);
        mechanisms.push_back({"online_honaker", g.B, g.C});
    }
    {
        // Independent-noise baseline: one step per stamp (identity encoder).
        Factorization f;
        f.B = prefix_workload(n);
        f.C = Matrix::Identity(n, n);
        f.schema = schema;
        f.sens_method = SensMethod::nonneg;
        f.sens = sens_nonneg_fastpath(f.C, schema);
        auto g = normalize(f);
        mechanisms.push_back({"independent", g.B, g.C});
    }

    const double sigma = a.zeta / std::sqrt(2.0 * a.rho);
    std::ofstream out(a.out);
    if (!out) throw ContractViolation("demo-train: cannot open " + a.out);
    out << "mechanism,seed,traj_mse,final_step_mse\n";

    // traj_mse is the mean squared error of the mean estimate over the whole
    // run (fixed denominator batch*n); it carries exactly the mechanism's
    // total loss and is the quantity that orders mechanisms. The final-step
    // error alone does not: tree completion makes the Honaker final row
    // cheaper than an optimal-total mechanism's final row.
    std::vector<Vector> traj_mse(mechanisms.size(), Vector::Zero(a.seeds));
    std::vector<Vector> final_mse(mechanisms.size(), Vector::Zero(a.seeds));
    const double denom = static_cast<double>(a.batch) * n;
    for (size_t mi = 0; mi < mechanisms.size(); ++mi) {
        const auto& mech = mechanisms[mi];
        for (int seed = 0; seed < a.seeds; ++seed) {
            const Matrix noise = sample_noise(
                mech.b_dec, a.d, sigma,
                rng::splitmix64(static_cast<std::uint64_t>(seed) * 1315423911ULL + mi));
            const double traj = noise.squaredNorm() / (n * denom * denom);
            const Eigen::RowVectorXd estimate =
                (exact_prefix.row(n - 1) + noise.row(n - 1)) / denom;
            traj_mse[mi](seed) = traj;
            final_mse[mi](seed) = (estimate - target).squaredNorm();
            out << mech.name << "," << seed << "," << io::format_double(traj) << ","
                << io::format_double(final_mse[mi](seed)) << "\n";
        }
    }

    std::cout << "trajectory mse means:";
    for (size_t mi = 0; mi < mechanisms.size(); ++mi)
        std::cout << " " << mechanisms[mi].name << "=" << traj_mse[mi].mean();
    std::cout << "\nfinal-step mse means:";
    for (size_t mi = 0; mi < mechanisms.size(); ++mi)
        std::cout << " " << mechanisms[mi].name << "=" << final_mse[mi].mean();
    std::cout << "\n";

    // one-sided paired t test at 95%: mean(x - y) < 0
    auto ordered = [&](const Vector& x, const Vector& y) {
        const Vector d = x - y;
        const double mean = d.mean();
        const double sd = std::sqrt((d.array() - mean).square().sum() / (d.size() - 1));
        const double t = mean / (sd / std::sqrt(static_cast<double>(d.size())));
        return t < -1.6766;  // t_{0.95, 49}
    };
    const bool opt_beats_hon = ordered(traj_mse[0], traj_mse[1]);
    const bool hon_beats_ind = ordered(traj_mse[1], traj_mse[2]);
    std::cout << "ordering (trajectory mse): optimal<online_honaker="
              << (opt_beats_hon ? "yes" : "no")
              << " online_honaker<independent=" << (hon_beats_ind ? "yes" : "no")
              << "\n";
    return (opt_beats_hon && hon_beats_ind) ? 0 : 1;
}

// ------------------------------------------------------------- repro tables
int run_table1(const std::string& out_path) {
    const auto schema = make_schema(2000, 20, 100);
    std::ofstream out(out_path);
    if (!out) throw ContractViolation("repro-table1: cannot open " + out_path);
    out << report_csv_header() << "\n";
    for (auto family : {MechanismFamily::online_honaker, MechanismFamily::optimal_honaker,
                        MechanismFamily::fft, MechanismFamily::fft_optimal}) {
        const StampSweepRow* best = nullptr;
        auto rows = sweep_stamps(family, 2000, schema, {1, 2, 5, 10, 20});
        for (const auto& row : rows) {
            out << report_csv_row(row_to_report(row, schema)) << "\n";
            if (!best || row.loss < best->loss) best = &row;
        }
        std::cout << to_string(family) << " argmin s=" << best->stamps
                  << " loss=" << io::format_double(best->loss) << "\n";
    }
    return 0;
}

int run_table3(const std::string& out_path) {
    const auto schema = make_schema(6, 3, 2);
    std::ofstream out(out_path);
    if (!out) throw ContractViolation("repro-table3: cannot open " + out_path);
    out << "workload,constraints,min_x,min_x_co_occurring,root_loss,gap\n";
    const std::pair<std::string, Matrix> workloads[] = {
        {"prefix", prefix_workload(6)}, {"momentum", momentum_workload(6, 0.95)}};
    for (const auto& [wname, workload] : workloads) {
        for (auto mode : {ConstraintMode::full_corners, ConstraintMode::pairwise_nonneg,
                          ConstraintMode::elementwise_nonneg}) {
            auto res = solve(workload, schema, mode, {1e-7, 80000});
            out << wname << "," << to_string(mode) << ","
                << io::format_double(res.min_x_entry) << ","
                << io::format_double(res.min_x_constrained) << ","
                << io::format_double(std::sqrt(res.state.primal_value)) << ","
                << io::format_double(res.state.gap) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix-factorization DP mechanisms"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    WorkloadArgs wl;
    auto* cmd_wl = app.add_subcommand("workload", "emit a workload matrix");
    cmd_wl->add_option("--kind", wl.kind, "prefix|momentum|momentum-cooldown");
    cmd_wl->add_option("--n", wl.n, "steps")->required();
    cmd_wl->add_option("--beta", wl.beta, "momentum coefficient");
    cmd_wl->add_option("--cooldown-fraction", wl.fraction, "cooled fraction");
    cmd_wl->add_option("--cooldown-floor", wl.floor, "terminal multiplier");
    cmd_wl->add_option("--out", wl.out, "output path")->required();
    cmd_wl->add_option("--format", wl.format, "mat64|csv");

    SensArgs se;
    auto* cmd_se = app.add_subcommand("sensitivity", "sensitivity of an encoder");
    cmd_se->add_option("--matrix", se.matrix, "MAT64 encoder")->required();
    cmd_se->add_option("--k", se.k, "participations")->required();
    cmd_se->add_option("--b", se.b, "separation")->required();
    cmd_se->add_option("--method", se.method, "brute|nonneg|upper");

    FactorizeArgs fa;
    auto* cmd_fa = app.add_subcommand("factorize", "optimal factorization");
    cmd_fa->add_option("--workload", fa.workload, "prefix|momentum|momentum-cooldown");
    cmd_fa->add_option("--n", fa.n, "steps")->required();
    cmd_fa->add_option("--beta", fa.beta, "momentum coefficient");
    cmd_fa->add_option("--cooldown-fraction", fa.fraction, "cooled fraction");
    cmd_fa->add_option("--cooldown-floor", fa.floor, "terminal multiplier");
    cmd_fa->add_option("--k", fa.k, "participations")->required();
    cmd_fa->add_option("--b", fa.b, "separation")->required();
    cmd_fa->add_option("--mode", fa.mode, "full|pairwise|elementwise");
    cmd_fa->add_option("--gap-tol", fa.gap_tol, "relative duality gap target");
    cmd_fa->add_option("--max-iters", fa.max_iters, "iteration cap");
    cmd_fa->add_option("--out-dir", fa.out_dir, "output directory")->required();

    LossArgs lo;
    auto* cmd_lo = app.add_subcommand("loss", "loss of a factorization");
    cmd_lo->add_option("--b-matrix", lo.b_matrix, "MAT64 decoder")->required();
    cmd_lo->add_option("--c-matrix", lo.c_matrix, "MAT64 encoder")->required();
    cmd_lo->add_option("--k", lo.k)->required();
    cmd_lo->add_option("--b", lo.b)->required();
    cmd_lo->add_option("--sens-method", lo.method, "brute|nonneg|upper");
    cmd_lo->add_option("--name", lo.name, "mechanism name for the CSV row");

    SweepArgs sw;
    auto* cmd_sw = app.add_subcommand("sweep-stamps", "stamp-count loss sweep");
    cmd_sw->add_option("--family", sw.family,
                       "online-honaker|optimal-honaker|fft|fft-optimal");
    cmd_sw->add_option("--n-total", sw.n_total)->required();
    cmd_sw->add_option("--k", sw.k)->required();
    cmd_sw->add_option("--b", sw.b)->required();
    cmd_sw->add_option("--stamps", sw.stamps, "candidate stamp counts")->delimiter(',');
    cmd_sw->add_option("--out", sw.out, "CSV path")->required();

    FftArgs ff;
    auto* cmd_ff = app.add_subcommand("fft", "circulant mechanism utilities");
    cmd_ff->add_option("--n", ff.n, "steps");
    cmd_ff->add_option("--rho", ff.rho, "zCDP budget");
    cmd_ff->add_option("--kappa", ff.kappa, "per-step bound");
    cmd_ff->add_option("--seed", ff.seed, "noise seed");
    cmd_ff->add_option("--emit", ff.emit, "release|encoder|mse-table");
    cmd_ff->add_option("--input", ff.input, "MAT64 column vector for release");
    cmd_ff->add_option("--out", ff.out, "output path")->required();
    cmd_ff->add_option("--format", ff.format, "mat64|csv");

    TreeArgs tr;
    auto* cmd_tr = app.add_subcommand("tree", "binary-tree mechanism matrices");
    cmd_tr->add_option("--n", tr.n, "steps")->required();
    cmd_tr->add_option("--emit", tr.emit, "encoder|online-decoder|optimal-decoder");
    cmd_tr->add_flag("--uncompleted", tr.uncompleted, "skip tree completion");
    cmd_tr->add_option("--out", tr.out, "output path")->required();
    cmd_tr->add_option("--format", tr.format, "mat64|csv");

    NoiseArgs no;
    auto* cmd_no = app.add_subcommand("noise", "sample correlated noise B*Z");
    cmd_no->add_option("--b-matrix", no.b_matrix, "MAT64 decoder")->required();
    cmd_no->add_option("--d", no.d, "noise dimensions")->required();
    cmd_no->add_option("--sigma", no.sigma, "per-entry standard deviation");
    cmd_no->add_option("--seed", no.seed, "seed");
    cmd_no->add_option("--out", no.out, "output path")->required();
    cmd_no->add_option("--format", no.format, "mat64|csv");

    AccountArgs ac;
    auto* cmd_ac = app.add_subcommand("account", "zCDP accounting");
    cmd_ac->add_option("--sens", ac.sens, "encoder sensitivity")->required();
    cmd_ac->add_option("--sigma", ac.sigma, "noise scale")->required();
    cmd_ac->add_option("--delta", ac.delta, "delta for the epsilon conversion");

    DemoArgs de;
    auto* cmd_de = app.add_subcommand("demo-train",
                                      "DP mean-estimation demo with correlated noise");
    cmd_de->add_option("--k", de.k, "epochs");
    cmd_de->add_option("--b", de.b, "steps per epoch");
    cmd_de->add_option("--batch", de.batch, "batch size");
    cmd_de->add_option("--examples", de.examples, "dataset size (must equal batch*b)");
    cmd_de->add_option("--d", de.d, "dimension");
    cmd_de->add_option("--rho", de.rho, "zCDP budget");
    cmd_de->add_option("--zeta", de.zeta, "clip norm");
    cmd_de->add_option("--seeds", de.seeds, "number of noise seeds");
    cmd_de->add_option("--out", de.out, "per-seed CSV")->required();

    std::string t1_out, t3_out;
    auto* cmd_t1 = app.add_subcommand("repro-table1", "loss table at (20,100), n=2000");
    cmd_t1->add_option("--out", t1_out, "CSV path")->required();
    auto* cmd_t3 = app.add_subcommand("repro-table3", "constraint-mode comparison, n=6");
    cmd_t3->add_option("--out", t3_out, "CSV path")->required();

    try {
        app.parse(argc, argv);
        if (cmd_wl->parsed()) return run_workload(wl);
        if (cmd_se->parsed()) return run_sensitivity(se);
        if (cmd_fa->parsed()) return run_factorize(fa);
        if (cmd_lo->parsed()) return run_loss(lo);
        if (cmd_sw->parsed()) return run_sweep(sw);
        if (cmd_ff->parsed()) return run_fft(ff);
        if (cmd_tr->parsed()) return run_tree(tr);
        if (cmd_no->parsed()) return run_noise(no);
        if (cmd_ac->parsed()) return run_account(ac);
        if (cmd_de->parsed()) return run_demo(de);
        if (cmd_t1->parsed()) return run_table1(t1_out);
        if (cmd_t3->parsed()) return run_table3(t3_out);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    } catch (const ContractViolation& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidSchemaError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const TooLargeError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
