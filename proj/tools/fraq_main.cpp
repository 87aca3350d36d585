// fraq: benchmark harness for the fast convolution-quadrature library.
// Subcommands: weights, kernel-error, solve, convergence, bench.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "fraq/bench.hpp"
#include "fraq/fpfp.hpp"

namespace {

using OptMap = std::map<std::string, std::string>;

// Every option is declared as a string sink so that precedence
// (command line > config file > defaults) resolves in one place.
void add_str(CLI::App* cmd, OptMap& sink, const std::string& flag, const std::string& key,
             const std::string& desc) {
    cmd->add_option_function<std::string>(
        flag, [&sink, key](const std::string& v) { sink[key] = v; }, desc);
}

OptMap load_config_file(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return fraq::parse_config_text(in);
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
    if (path.empty() || path == "-") return nullptr;  // stdout
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f) throw std::runtime_error("cannot open output file: " + path);
    return f;
}

double get_d(const OptMap& m, const std::string& key, double fallback) {
    const auto it = m.find(key);
    return it == m.end() ? fallback : fraq::parse_fraction(it->second);
}

std::string get_s(const OptMap& m, const std::string& key, const std::string& fallback) {
    const auto it = m.find(key);
    return it == m.end() ? fallback : it->second;
}

fraq::ProblemSpec spec_from(const fraq::ExperimentConfig& cfg, double tau) {
    fraq::ProblemSpec spec;
    spec.alpha1 = cfg.alpha1;
    spec.alpha2 = cfg.alpha2;
    spec.coupling_a = cfg.coupling_a;
    spec.grid_m = cfg.grid_m;
    spec.t_final = cfg.t_final;
    spec.n_steps = std::lround(cfg.t_final / tau);
    spec.initial = cfg.initial;
    return spec;
}

void write_meta(const std::string& dir, const fraq::ExperimentConfig& cfg) {
    std::ofstream meta(std::filesystem::path(dir) / "meta.txt");
    meta << "alpha1 = " << fraq::format_double(cfg.alpha1) << "\n"
         << "alpha2 = " << fraq::format_double(cfg.alpha2) << "\n"
         << "a = " << fraq::format_double(cfg.coupling_a) << "\n"
         << "grid-m = " << cfg.grid_m << "\n"
         << "t-final = " << fraq::format_double(cfg.t_final) << "\n"
         << "ref-tau = " << fraq::format_double(cfg.ref_tau) << "\n"
         << "init = " << (cfg.initial == fraq::InitialData::poly_sin ? "poly_sin" : "indicator")
         << "\n"
         << "np = " << cfg.kernel.be_points << "\n"
         << "np1 = " << cfg.kernel.sbd_points_1 << "\n"
         << "np2 = " << cfg.kernel.sbd_points_2 << "\n"
         << "ns = " << cfg.kernel.sbd_head << "\n"
         << "eps-tol = " << fraq::format_double(cfg.kernel.eps_tol) << "\n"
         << "auto-kernel = " << (cfg.kernel.auto_size ? "1" : "0") << "\n";
    meta << "taus =";
    for (double t : cfg.taus) meta << ' ' << fraq::format_double(t);
    meta << "\nschemes =";
    for (auto s : cfg.schemes) meta << ' ' << fraq::scheme_name(s);
    meta << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fast convolution-quadrature benchmarks for the two-state "
                 "fractional Fokker-Planck system"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key=value config file")->expected(1);

    OptMap opts;
    std::string out_path;

    auto* w = app.add_subcommand("weights", "dump a classical CQ weight table as CSV i,d_i");
    add_str(w, opts, "--scheme", "scheme", "be or sbd");
    add_str(w, opts, "--alpha", "alpha", "fractional order in (0,1]");
    add_str(w, opts, "--tau", "tau", "time step (fractions like 1/3200 accepted)");
    add_str(w, opts, "--n", "n", "last index of the table");
    w->add_option("--out", out_path, "output file (default stdout)");

    auto* ke = app.add_subcommand("kernel-error",
                                  "per-weight compression errors as CSV i,eps_abs");
    add_str(ke, opts, "--scheme", "scheme", "be or sbd");
    add_str(ke, opts, "--alpha", "alpha", "fractional order in (0,1)");
    add_str(ke, opts, "--tau", "tau", "time step");
    add_str(ke, opts, "--np", "np", "BE quadrature points");
    add_str(ke, opts, "--np1", "np1", "SBD family-1 points");
    add_str(ke, opts, "--np2", "np2", "SBD family-2 points");
    add_str(ke, opts, "--ns", "ns", "SBD head length");
    add_str(ke, opts, "--n-max", "n-max", "largest index checked");
    ke->add_option("--out", out_path, "output file (default stdout)");

    auto* so = app.add_subcommand("solve", "single run; final snapshot as CSV x,g1,g2");
    for (const char* k :
         {"scheme", "alpha1", "alpha2", "a", "m", "grid-m", "tau", "n-steps", "t-final", "init",
          "np", "np1", "np2", "ns", "eps-tol", "auto-kernel", "snapshot-times", "out-dir"})
        add_str(so, opts, std::string("--") + k, k, k);
    so->add_option("--out", out_path, "final-snapshot file (default stdout)");

    auto* cv = app.add_subcommand("convergence",
                                  "tau sweep vs a fine-tau reference; per-scheme CSV tables");
    for (const char* k :
         {"scheme", "alpha1", "alpha2", "a", "m", "grid-m", "taus", "ref-tau", "t-final", "init",
          "np", "np1", "np2", "ns", "eps-tol", "auto-kernel", "out-dir"})
        add_str(cv, opts, std::string("--") + k, k, k);

    auto* be = app.add_subcommand("bench", "loop wall time per scheme and step count");
    for (const char* k : {"scheme", "alpha1", "alpha2", "a", "m", "grid-m", "t-final", "init",
                          "np", "np1", "np2", "ns", "eps-tol", "auto-kernel"})
        add_str(be, opts, std::string("--") + k, k, k);
    add_str(be, opts, "--n-list", "n-list", "comma-separated step counts");
    be->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        const OptMap file_opts = load_config_file(config_path);
        auto merged = [&](const std::string& key, const std::string& fallback) {
            if (const auto it = opts.find(key); it != opts.end()) return it->second;
            if (const auto it = file_opts.find(key); it != file_opts.end()) return it->second;
            return fallback;
        };

        auto require_cq_scheme = [](const std::string& s) {
            if (s != "be" && s != "sbd")
                throw std::invalid_argument("scheme must be 'be' or 'sbd', got '" + s + "'");
            return s;
        };

        if (w->parsed()) {
            const std::string scheme = require_cq_scheme(merged("scheme", "be"));
            const double alpha = fraq::parse_fraction(merged("alpha", "0.5"));
            const double tau = fraq::parse_fraction(merged("tau", "1"));
            const long n = std::lround(fraq::parse_fraction(merged("n", "10")));
            const fraq::WeightTable t = scheme == "sbd" ? fraq::sbd_weights(alpha, tau, n)
                                                        : fraq::be_weights(alpha, tau, n);
            auto f = open_out(out_path);
            fraq::write_weights_csv(f ? *f : std::cout, t);
        } else if (ke->parsed()) {
            const std::string scheme = require_cq_scheme(merged("scheme", "be"));
            const double alpha = fraq::parse_fraction(merged("alpha", "0.5"));
            const double tau = fraq::parse_fraction(merged("tau", "0.001"));
            const long n_max = std::lround(fraq::parse_fraction(merged("n-max", "1000")));
            fraq::KernelErrorReport rep;
            if (scheme == "sbd") {
                const int np1 = int(fraq::parse_fraction(merged("np1", "41")));
                const int np2 = int(fraq::parse_fraction(merged("np2", "41")));
                int ns = int(fraq::parse_fraction(merged("ns", "0")));
                if (ns <= 0) ns = fraq::default_sbd_head(alpha);
                rep = fraq::kernel_error_report(fraq::build_sbd_kernel(alpha, tau, np1, np2, ns),
                                                n_max);
            } else {
                const int np = int(fraq::parse_fraction(merged("np", "64")));
                rep = fraq::kernel_error_report(fraq::build_be_kernel(alpha, tau, np), n_max);
            }
            auto f = open_out(out_path);
            fraq::write_kernel_error_csv(f ? *f : std::cout, rep);
        } else if (so->parsed()) {
            fraq::ExperimentConfig cfg = fraq::resolve_config(file_opts, opts);
            const double tau = get_d(opts, "tau", get_d(file_opts, "tau", 0.0));
            fraq::ProblemSpec spec = spec_from(cfg, tau > 0 ? tau : cfg.t_final / 100.0);
            if (const auto n = get_d(opts, "n-steps", get_d(file_opts, "n-steps", 0.0)); n > 0)
                spec.n_steps = std::lround(n);
            const fraq::Scheme scheme = fraq::scheme_from_name(get_s(opts, "scheme",
                                                               get_s(file_opts, "scheme", "be")));
            // snapshot steps for the requested times (nearest grid time each)
            std::vector<long> snap_steps;
            if (const std::string times = merged("snapshot-times", ""); !times.empty())
                for (double t : fraq::parse_fraction_list(times))
                    snap_steps.push_back(std::lround(t / spec.tau()));
            const std::string out_dir = merged("out-dir", ".");
            std::function<void(long, const fraq::StateField&)> observer;
            if (!snap_steps.empty()) {
                std::filesystem::create_directories(out_dir);
                observer = [&](long n, const fraq::StateField& f) {
                    for (long s : snap_steps) {
                        if (s != n) continue;
                        std::ofstream snap(std::filesystem::path(out_dir) /
                                           ("snapshot_n" + std::to_string(n) + ".csv"));
                        fraq::write_snapshot_csv(snap, spec, f);
                    }
                };
            }
            const fraq::RunResult rr = fraq::run(spec, scheme, cfg.kernel, observer);
            auto f = open_out(out_path);
            fraq::write_snapshot_csv(f ? *f : std::cout, spec, rr.final_state);
            std::cerr << "loop_seconds=" << fraq::format_double(rr.loop_seconds)
                      << " setup_seconds=" << fraq::format_double(rr.setup_seconds) << "\n";
        } else if (cv->parsed()) {
            fraq::ExperimentConfig cfg = fraq::resolve_config(file_opts, opts);
            cfg.validate();
            std::filesystem::create_directories(cfg.out_dir);
            const auto reports = fraq::run_convergence(cfg);
            write_meta(cfg.out_dir, cfg);
            for (const auto& rep : reports) {
                const auto path = std::filesystem::path(cfg.out_dir) /
                                  ("convergence_" + fraq::scheme_name(rep.scheme) + ".csv");
                std::ofstream f(path);
                fraq::write_convergence_csv(f, rep);
                std::cout << path.string() << "\n";
            }
        } else if (be->parsed()) {
            fraq::ExperimentConfig cfg = fraq::resolve_config(file_opts, opts);
            std::vector<long> ns;
            for (double v : fraq::parse_fraction_list(merged("n-list", "100,200,400,800,1600")))
                ns.push_back(std::lround(v));
            const auto rows = fraq::timing_sweep(cfg, ns);
            auto f = open_out(out_path);
            fraq::write_bench_csv(f ? *f : std::cout, rows);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "fraq: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fraq: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
