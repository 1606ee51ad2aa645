#include "scatter1d/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scatter1d/errors.hpp"
#include "scatter1d/identities.hpp"
#include "scatter1d/potential.hpp"
#include "scatter1d/spectral.hpp"

namespace scatter1d::cli {

namespace {

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::ParseFailure:
        case ErrorCode::UsageError:
        case ErrorCode::InvalidPotential:
            return kExitUsage;
        default:
            return kExitNumerical;
    }
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt3e(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

struct CommonOpts {
    std::string file;
    double step{0.0};
    std::string method{"rk4"};
};

IntegratorConfig integrator_of(const CommonOpts& c) { return {c.step, c.method}; }

void write_text_output(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw Error(ErrorCode::UsageError, "cannot open output file: " + out_path);
    f << text;
    if (!f.good()) throw Error(ErrorCode::UsageError, "failed writing output file: " + out_path);
}

// ---- scan ----------------------------------------------------------------

struct ScanOpts {
    CommonOpts common;
    double k_min{0.5};
    double k_max{5.0};
    int points{200};
    double tol{-1.0};
    std::string format{"csv"};
    std::string out_path;
};

int run_scan(const ScanOpts& o, std::ostream& out) {
    if (!(o.k_min > 0.0) || !(o.k_max >= o.k_min) || o.points < 1)
        throw Error(ErrorCode::UsageError, "scan requires 0 < k-min <= k-max and points >= 1");
    if (o.points > 1 && o.k_max == o.k_min)
        throw Error(ErrorCode::UsageError, "scan with points > 1 requires k-min < k-max");

    const Potential p = load_potential_file(o.common.file);
    const IntegratorConfig cfg = integrator_of(o.common);

    std::vector<double> ks(o.points);
    const double dk = o.points > 1 ? (o.k_max - o.k_min) / (o.points - 1) : 0.0;
    for (int i = 0; i < o.points; ++i) ks[i] = o.k_min + dk * i;

    // Rows are independent: distribute them over a small pool and emit in
    // k order afterwards. Rows whose amplitudes do not exist (an exact
    // spectral singularity on a grid point) stay empty; configuration errors
    // abort the whole scan.
    std::vector<std::optional<IdentityReport>> reports(ks.size());
    std::atomic<size_t> next{0};
    std::mutex fatal_mutex;
    std::exception_ptr fatal;

    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= ks.size()) return;
            try {
                reports[i] = full_report(p, ks[i], cfg, o.tol);
            } catch (const Error& e) {
                switch (e.code()) {
                    case ErrorCode::SpectralSingularity:
                    case ErrorCode::ZeroTransmission:
                    case ErrorCode::DegenerateD:
                    case ErrorCode::SingularTransferMatrix:
                        break;  // leave the row empty
                    default: {
                        const std::lock_guard<std::mutex> lock(fatal_mutex);
                        if (!fatal) fatal = std::current_exception();
                        return;
                    }
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(fatal_mutex);
                if (!fatal) fatal = std::current_exception();
                return;
            }
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads = std::min<unsigned>(hw, static_cast<unsigned>(ks.size()));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (fatal) std::rethrow_exception(fatal);

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::ostringstream text;
    if (o.format == "csv") {
        text << "k,r_l_re,r_l_im,r_r_re,r_r_im,t_l_re,t_l_im,t_r_re,t_r_im,d_re,d_im,abs_d";
        for (const auto& name : identity_names()) text << "," << name;
        text << "\n";
        for (size_t i = 0; i < ks.size(); ++i) {
            text << fmt17(ks[i]);
            std::vector<double> cols;
            if (reports[i]) {
                const auto& a = reports[i]->amplitudes;
                const Complex d = a.t_l * a.t_r - a.r_l * a.r_r;
                cols = {a.r_l.real(), a.r_l.imag(), a.r_r.real(), a.r_r.imag(),
                        a.t_l.real(), a.t_l.imag(), a.t_r.real(), a.t_r.imag(),
                        d.real(),     d.imag(),     reports[i]->abs_d};
                for (const auto& name : identity_names()) {
                    const auto it = reports[i]->residuals.find(name);
                    cols.push_back(it == reports[i]->residuals.end() ? nan : it->second);
                }
            } else {
                cols.assign(11 + identity_names().size(), nan);
            }
            for (double v : cols) text << "," << fmt17(v);
            text << "\n";
        }
    } else {
        nlohmann::json rows = nlohmann::json::array();
        for (size_t i = 0; i < ks.size(); ++i) {
            if (reports[i]) {
                rows.push_back(nlohmann::json::parse(report_to_json_text(*reports[i])));
            } else {
                rows.push_back({{"k", ks[i]}, {"error", "amplitudes singular at this k"}});
            }
        }
        text << nlohmann::json{{"rows", rows}}.dump(2) << "\n";
    }
    write_text_output(text.str(), o.out_path, out);
    return kExitOk;
}

// ---- check ---------------------------------------------------------------

struct CheckOpts {
    CommonOpts common;
    double k{};
    double tol{-1.0};
    std::string format{"text"};
};

int run_check(const CheckOpts& o, std::ostream& out) {
    const Potential p = load_potential_file(o.common.file);
    const IdentityReport rep = full_report(p, o.k, integrator_of(o.common), o.tol);

    if (o.format == "json") {
        out << report_to_json_text(rep) << "\n";
    } else {
        out << "k = " << fmt17(rep.k) << "\n";
        out << "construction = " << rep.construction << "\n";
        out << "tolerance = " << fmt3e(rep.tolerance) << "\n";
        out << "abs(D) = " << fmt17(rep.abs_d) << "\n";
        const auto& a = rep.amplitudes;
        const auto cplx = [](Complex c) {
            return "(" + fmt17(c.real()) + ", " + fmt17(c.imag()) + ")";
        };
        out << "r_l = " << cplx(a.r_l) << "\n";
        out << "r_r = " << cplx(a.r_r) << "\n";
        out << "t_l = " << cplx(a.t_l) << "\n";
        out << "t_r = " << cplx(a.t_r) << "\n";
        out << "\n" << std::left << std::setw(24) << "identity" << std::setw(14) << "residual"
            << "status\n";
        for (const auto& name : identity_names()) {
            const auto rit = rep.residuals.find(name);
            const auto ait = rep.applicability.find(name);
            const double res = rit == rep.residuals.end()
                                   ? std::numeric_limits<double>::quiet_NaN()
                                   : rit->second;
            std::string status = "pass";
            if (ait != rep.applicability.end() &&
                ait->second.state == Applicability::NotApplicable) {
                status = "n/a (" + ait->second.reason + ")";
            } else if (ait != rep.applicability.end() &&
                       ait->second.state == Applicability::DegenerateD) {
                status = "degenerate (" + ait->second.reason + ")";
            } else if (!(res <= rep.tolerance)) {
                status = "FAIL";
            }
            out << std::left << std::setw(24) << name << std::setw(14) << fmt3e(res) << status
                << "\n";
        }
        out << "\nresult: " << (rep.all_applicable_pass() ? "PASS" : "FAIL") << "\n";
    }
    return rep.all_applicable_pass() ? kExitOk : kExitIdentityFailure;
}

// ---- find ----------------------------------------------------------------

struct FindOpts {
    CommonOpts common;
    std::string target{"cpa"};
    double k_min{0.5};
    double k_max{5.0};
    int points{400};
    std::string format{"text"};
};

int run_find(const FindOpts& o, std::ostream& out) {
    const Potential p = load_potential_file(o.common.file);
    const IntegratorConfig cfg = integrator_of(o.common);
    const SpectralTarget target = o.target == "ss" ? SpectralTarget::SpectralSingularity
                                                   : SpectralTarget::CPA;

    const std::vector<Bracket> brackets =
        scan_minima(p, KGrid{o.k_min, o.k_max, o.points}, target, cfg);

    std::vector<SpectralPoint> points;
    std::vector<NoZero> misses;
    for (const Bracket& b : brackets) {
        const RefineResult r = refine_zero(p, b, target, cfg);
        if (std::holds_alternative<SpectralPoint>(r)) {
            points.push_back(std::get<SpectralPoint>(r));
        } else {
            misses.push_back(std::get<NoZero>(r));
        }
    }

    if (o.format == "json") {
        nlohmann::json jpoints = nlohmann::json::array();
        for (const auto& pt : points)
            jpoints.push_back(nlohmann::json::parse(spectral_point_to_json_text(pt)));
        nlohmann::json jmisses = nlohmann::json::array();
        for (const auto& nz : misses)
            jmisses.push_back({{"k_at_min", nz.k_at_min}, {"achieved", nz.achieved}});
        out << nlohmann::json{{"points", jpoints}, {"near_misses", jmisses}}.dump(2) << "\n";
    } else {
        const char* label = target == SpectralTarget::CPA ? "cpa" : "spectral singularity";
        for (const auto& pt : points) {
            out << label << " at k0 = " << fmt17(pt.k0) << " (residual " << fmt3e(pt.residual)
                << ")\n";
            if (pt.mode) {
                out << "  mode: a_minus = (" << fmt17(pt.mode->first.real()) << ", "
                    << fmt17(pt.mode->first.imag()) << "), b_plus = ("
                    << fmt17(pt.mode->second.real()) << ", " << fmt17(pt.mode->second.imag())
                    << ")\n";
            }
            if (pt.transmission_near)
                out << "  transmission near the zero: " << fmt3e(*pt.transmission_near) << "\n";
        }
        for (const auto& nz : misses) {
            out << "minimum at k = " << fmt17(nz.k_at_min) << " reached "
                << fmt3e(nz.achieved) << " (no zero accepted)\n";
        }
        if (points.empty() && misses.empty()) out << "no zeros found\n";
    }
    return kExitOk;
}

// ---- design-cpa ----------------------------------------------------------

struct DesignOpts {
    CommonOpts common;
    double k{};
    unsigned seed{0};
    int restarts{8};
    bool real_couplings{false};
    std::string format{"text"};
    std::string out_path;
};

int run_design(const DesignOpts& o, std::ostream& out, std::ostream& err) {
    const Potential tmpl = load_potential_file(o.common.file);
    DesignConfig cfg;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    cfg.real_couplings = o.real_couplings;
    const DesignOutcome outcome = design_cpa(tmpl, o.k, cfg);

    const std::string summary = "abs(D) = " + fmt3e(outcome.abs_d) + " at k = " + fmt17(o.k) +
                                " after " + std::to_string(outcome.restarts_used) + " restarts";
    if (o.format == "json") {
        nlohmann::json j;
        j["abs_d"] = outcome.abs_d;
        j["k"] = o.k;
        j["restarts_used"] = outcome.restarts_used;
        j["potential"] = nlohmann::json::parse(potential_to_json_text(outcome.potential));
        out << j.dump(2) << "\n";
        if (!o.out_path.empty()) save_potential_file(outcome.potential, o.out_path);
    } else if (!o.out_path.empty()) {
        save_potential_file(outcome.potential, o.out_path);
        out << summary << "\nwrote " << o.out_path << "\n";
    } else {
        out << potential_to_json_text(outcome.potential) << "\n";
        err << summary << "\n";
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{
        "1D scattering toolkit: transfer matrices, reflection/transmission amplitudes,\n"
        "k <-> -k identity checks, and zero finding for absorption and lasing points"};
    app.require_subcommand(1);

    const auto add_common = [](CLI::App* sub, CommonOpts& c) {
        sub->add_option("potential", c.file, "potential description (JSON file)")->required();
        sub->add_option("--step", c.step,
                        "integrator step for sampled-grid models (0 = automatic)");
        sub->add_option("--method", c.method, "integrator method")
            ->check(CLI::IsMember({"rk4"}));
    };

    ScanOpts scan_opts;
    CLI::App* scan_cmd = app.add_subcommand(
        "scan", "tabulate amplitudes and identity residuals over a wavenumber range");
    add_common(scan_cmd, scan_opts.common);
    scan_cmd->add_option("--k-min", scan_opts.k_min, "lowest wavenumber (> 0)");
    scan_cmd->add_option("--k-max", scan_opts.k_max, "highest wavenumber");
    scan_cmd->add_option("--points", scan_opts.points, "number of samples");
    scan_cmd->add_option("--tol", scan_opts.tol, "residual tolerance override");
    scan_cmd->add_option("--format", scan_opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    scan_cmd->add_option("--out", scan_opts.out_path, "write output to this file");

    CheckOpts check_opts;
    CLI::App* check_cmd = app.add_subcommand(
        "check", "evaluate every identity at one wavenumber; exit 1 when one fails");
    add_common(check_cmd, check_opts.common);
    check_cmd->add_option("--k", check_opts.k, "wavenumber (> 0)")->required();
    check_cmd->add_option("--tol", check_opts.tol, "residual tolerance override");
    check_cmd->add_option("--format", check_opts.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    FindOpts find_opts;
    CLI::App* find_cmd = app.add_subcommand(
        "find", "locate real wavenumbers of perfect absorption (cpa) or lasing (ss)");
    add_common(find_cmd, find_opts.common);
    find_cmd->add_option("--target", find_opts.target, "what to look for")
        ->check(CLI::IsMember({"cpa", "ss"}));
    find_cmd->add_option("--k-min", find_opts.k_min, "lowest wavenumber (> 0)");
    find_cmd->add_option("--k-max", find_opts.k_max, "highest wavenumber");
    find_cmd->add_option("--points", find_opts.points, "scan resolution");
    find_cmd->add_option("--format", find_opts.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    DesignOpts design_opts;
    CLI::App* design_cmd = app.add_subcommand(
        "design-cpa", "tune template couplings until D(k) = 0 at the requested wavenumber");
    add_common(design_cmd, design_opts.common);
    design_cmd->add_option("--k", design_opts.k, "wavenumber where D must vanish")->required();
    design_cmd->add_option("--seed", design_opts.seed, "random restart seed");
    design_cmd->add_option("--restarts", design_opts.restarts, "random restart budget");
    design_cmd->add_flag("--real-couplings", design_opts.real_couplings,
                         "constrain couplings to real values");
    design_cmd->add_option("--format", design_opts.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    design_cmd->add_option("--out", design_opts.out_path, "write the tuned potential here");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (scan_cmd->parsed()) return run_scan(scan_opts, out);
        if (check_cmd->parsed()) return run_check(check_opts, out);
        if (find_cmd->parsed()) return run_find(find_opts, out);
        if (design_cmd->parsed()) return run_design(design_opts, out, err);
        err << "error: no subcommand selected\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<size_t>(argc - 1) : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace scatter1d::cli
