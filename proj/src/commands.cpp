#include "hslab/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hslab/serialize.hpp"

namespace hslab {

namespace {

using nlohmann::json;

bool write_text(const std::string& path, const std::string& content,
                std::string& err) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        err = "cannot open " + path + " for writing";
        return false;
    }
    out << content;
    out.close();
    if (!out) {
        err = "failed writing " + path;
        return false;
    }
    return true;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

Ansatz ansatz_from_name(const std::string& name) {
    if (name == "slow") return Ansatz::Slow;
    if (name == "fast") return Ansatz::Fast;
    if (name == "bubble") return Ansatz::Bubble;
    throw DomainError("ansatz", "unknown ansatz " + name);
}

// Default integrability exponent lists: an interior point, the integrable
// index, and the divergent endpoint, for each component.
void default_scan_exponents(const SystemParams& sp, std::vector<double>& for_u,
                            std::vector<double>& for_v) {
    const DerivedExponents d = derive(sp);
    const double end_u = sp.n / (sp.n - sp.alpha);
    const double anomalous = sp.p * (sp.n - sp.alpha) - (sp.alpha - sp.sigma2);
    const double end_v = std::max(end_u, anomalous > 0 ? sp.n / anomalous : end_u);
    for_u = {end_u * 4.0 / 3.0, d.r0, end_u};
    for_v = {end_v * 4.0 / 3.0, d.s0, end_v};
}

json analysis_sections(const SolutionBundle& bundle,
                       const RadialKernelProfile& profile,
                       const RunConfig& cfg) {
    json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["params"] = to_json(bundle.params);
    rep["status"] = to_string(bundle.status);

    try {
        rep["rate_report"] = to_json(rate_report(bundle, cfg.analysis));
    } catch (const std::exception& e) {
        rep["rate_report"] = json{{"error", e.what()}};
    }
    try {
        rep["asymptotic_constants"] =
            to_json(asymptotic_constants(bundle, profile, cfg.analysis));
    } catch (const std::exception& e) {
        rep["asymptotic_constants"] = json{{"error", e.what()}};
    }
    try {
        rep["pohozaev"] = to_json(pohozaev_report(bundle));
    } catch (const std::exception& e) {
        // Divergent energies are an expected signal off the integrable class.
        rep["pohozaev"] = json{{"error", e.what()}};
    }
    try {
        std::vector<double> for_u = cfg.integrability_exponents;
        std::vector<double> for_v = cfg.integrability_exponents;
        if (for_u.empty()) default_scan_exponents(bundle.params, for_u, for_v);
        rep["integrability"] =
            to_json(integrability_scan(bundle, for_u, for_v, cfg.analysis));
    } catch (const std::exception& e) {
        rep["integrability"] = json{{"error", e.what()}};
    }
    try {
        rep["bounds"] = to_json(bound_checks(bundle, cfg.analysis, /*strict=*/false));
    } catch (const std::exception& e) {
        rep["bounds"] = json{{"error", e.what()}};
    }
    return rep;
}

std::string profile_csv(const SolutionBundle& bundle) {
    const RadialGrid& g = *bundle.u.grid;
    std::ostringstream out;
    out << "r,u,v,slope_u,slope_v\n";
    for (int i = 0; i < g.size(); ++i) {
        double su = 0, sv = 0;
        if (i > 0 && i + 1 < g.size()) {
            const double dx = g.log_node(i + 1) - g.log_node(i - 1);
            su = std::log(bundle.u.values[i + 1] / bundle.u.values[i - 1]) / dx;
            sv = std::log(bundle.v.values[i + 1] / bundle.v.values[i - 1]) / dx;
        }
        out << fmt(g.node(i)) << ',' << fmt(bundle.u.values[i]) << ','
            << fmt(bundle.v.values[i]) << ',' << fmt(su) << ',' << fmt(sv) << '\n';
    }
    return out.str();
}

int status_exit_code(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return kExitOk;
        case SolveStatus::NoFixedPointCollapse:
        case SolveStatus::NoFixedPointBlowup: return kExitNoFixedPoint;
        case SolveStatus::MaxIterations: return kExitMaxIterations;
    }
    return kExitUsage;
}

} // namespace

int cmd_classify(const RunConfig& cfg, const std::string& out_path) {
    json out;
    try {
        const SystemParams sp = cfg.validated_params();
        out = json{{"schema_version", kSchemaVersion},
                   {"params", to_json(sp)},
                   {"exponents", to_json(derive(sp))},
                   {"regime", to_json(classify(sp))}};
    } catch (const DomainError& e) {
        std::cerr << "classify: " << e.what() << "\n";
        return kExitUsage;
    }
    const std::string text = out.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty()) {
        std::string err;
        if (!write_text(out_path, text, err)) {
            std::cerr << "classify: " << err << "\n";
            return kExitUsage;
        }
    }
    return kExitOk;
}

int cmd_solve(const RunConfig& cfg, const std::string& out_path,
              const std::string& cache_dir) {
    SolutionBundle bundle;
    try {
        const SystemParams sp = cfg.validated_params(/*for_solver=*/true);
        auto profile = std::make_shared<const RadialKernelProfile>(
            RadialKernelProfile::load_or_build(sp.n, sp.alpha, cache_dir));
        auto grid = make_grid(cfg.r_min, cfg.r_max, cfg.grid_n);
        bundle = solve(sp, ansatz_from_name(cfg.ansatz), profile, grid, cfg.solver);
    } catch (const std::exception& e) {
        std::cerr << "solve: " << e.what() << "\n";
        return kExitUsage;
    }

    const std::string path = out_path.empty() ? cfg.output.solution : out_path;
    std::string err;
    if (!write_text(path, to_json(bundle).dump(2) + "\n", err)) {
        std::cerr << "solve: " << err << "\n";
        return kExitUsage;
    }
    std::cout << "status " << to_string(bundle.status) << " after "
              << bundle.iterations << " sweeps";
    if (!bundle.status_detail.empty()) std::cout << " (" << bundle.status_detail << ")";
    std::cout << "; wrote " << path << "\n";
    return status_exit_code(bundle.status);
}

int cmd_analyze(const RunConfig& cfg, const std::string& solution_path,
                const std::string& report_path, const std::string& csv_path,
                const std::string& cache_dir) {
    SolutionBundle bundle;
    try {
        std::ifstream in(solution_path);
        if (!in) throw DomainError("analyze", "cannot open " + solution_path);
        json j = json::parse(in);
        bundle = bundle_from_json(j);
    } catch (const std::exception& e) {
        std::cerr << "analyze: bad solution file: " << e.what() << "\n";
        return kExitUsage;
    }
    if (!bundle.converged()) {
        std::cerr << "analyze: solution file holds a non-converged run ("
                  << to_string(bundle.status) << ")\n";
        return kExitUsage;
    }

    json rep;
    try {
        auto profile = RadialKernelProfile::load_or_build(
            bundle.params.n, bundle.params.alpha, cache_dir);
        rep = analysis_sections(bundle, profile, cfg);
    } catch (const std::exception& e) {
        std::cerr << "analyze: " << e.what() << "\n";
        return kExitUsage;
    }

    const std::string rp = report_path.empty() ? cfg.output.report : report_path;
    const std::string cp = csv_path.empty() ? cfg.output.csv : csv_path;
    std::string err;
    if (!write_text(rp, rep.dump(2) + "\n", err) ||
        !write_text(cp, profile_csv(bundle), err)) {
        std::cerr << "analyze: " << err << "\n";
        return kExitUsage;
    }
    std::cout << "wrote " << rp << " and " << cp << "\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const std::string& csv_path, int jobs,
              const std::string& cache_dir) {
    // Cartesian tuples in fixed parameter order.
    const char* names[6] = {"n", "alpha", "p", "q", "sigma1", "sigma2"};
    const double base[6] = {cfg.n, cfg.alpha, cfg.p, cfg.q, cfg.sigma1, cfg.sigma2};
    std::vector<std::vector<double>> axes(6);
    for (int k = 0; k < 6; ++k) {
        auto it = cfg.sweep.find(names[k]);
        axes[k] = (it != cfg.sweep.end()) ? it->second : std::vector<double>{base[k]};
    }
    std::size_t total = 1;
    for (const auto& ax : axes) total *= ax.size();
    if (cfg.sweep.empty()) total = 0;  // no ranges configured: header only

    struct Row {
        double vals[6];
        std::string regime, status, theta_u, theta_v, log_u, log_v, energy_gap, error;
    };
    std::vector<Row> rows(total);

    // Kernel profiles shared across tuples with the same (n, alpha).
    std::mutex profiles_mutex;
    std::map<std::pair<int, double>, std::shared_ptr<const RadialKernelProfile>> profiles;
    auto get_profile = [&](int n, double alpha) {
        std::lock_guard<std::mutex> lock(profiles_mutex);
        auto key = std::make_pair(n, alpha);
        auto it = profiles.find(key);
        if (it != profiles.end()) return it->second;
        auto prof = std::make_shared<const RadialKernelProfile>(
            RadialKernelProfile::load_or_build(n, alpha, cache_dir));
        profiles.emplace(key, prof);
        return prof;
    };

    auto run_tuple = [&](std::size_t flat) {
        Row& row = rows[flat];
        std::size_t rem = flat;
        for (int k = 5; k >= 0; --k) {
            row.vals[k] = axes[k][rem % axes[k].size()];
            rem /= axes[k].size();
        }
        try {
            const SystemParams sp =
                validate(row.vals[0], row.vals[1], row.vals[2], row.vals[3],
                         row.vals[4], row.vals[5], /*for_solver=*/true);
            row.regime = to_string(classify(sp).kind);
            auto profile = get_profile(sp.n, sp.alpha);
            auto grid = make_grid(cfg.r_min, cfg.r_max, cfg.grid_n);
            SolutionBundle bundle =
                solve(sp, ansatz_from_name(cfg.ansatz), profile, grid, cfg.solver);
            row.status = to_string(bundle.status);
            if (bundle.converged()) {
                const RateReport rr = rate_report(bundle, cfg.analysis);
                row.theta_u = fmt(rr.theta_u);
                row.theta_v = fmt(rr.theta_v);
                row.log_u = rr.log_u ? "1" : "0";
                row.log_v = rr.log_v ? "1" : "0";
                try {
                    row.energy_gap = fmt(pohozaev_report(bundle).energy_gap);
                } catch (const DivergentIntegral& e) {
                    row.energy_gap = "divergent";
                }
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    jobs = std::max(1, jobs);
    if (jobs == 1 || total <= 1) {
        for (std::size_t i = 0; i < total; ++i) run_tuple(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < total; i = next++) run_tuple(i);
            });
        for (auto& th : pool) th.join();
    }

    std::ostringstream out;
    out << "n,alpha,p,q,sigma1,sigma2,regime,status,theta_u,theta_v,"
           "log_u,log_v,energy_gap,error\n";
    for (const Row& row : rows) {
        for (double v : row.vals) out << fmt(v) << ',';
        out << row.regime << ',' << row.status << ',' << row.theta_u << ','
            << row.theta_v << ',' << row.log_u << ',' << row.log_v << ','
            << row.energy_gap << ',' << row.error << '\n';
    }

    const std::string path = csv_path.empty() ? cfg.output.sweep_csv : csv_path;
    std::string err;
    if (!write_text(path, out.str(), err)) {
        std::cerr << "sweep: " << err << "\n";
        return kExitUsage;
    }
    std::cout << "wrote " << rows.size() << " rows to " << path << "\n";
    return kExitOk;
}

int cmd_hls_check(const RunConfig& cfg, const std::string& out_path,
                  const std::string& cache_dir) {
    HlsIndices idx;
    idx.n = static_cast<int>(cfg.n);
    idx.alpha = cfg.alpha;
    idx.sigma1 = cfg.hls.sigma1;
    idx.sigma2 = cfg.hls.sigma2;
    const double rs_default =
        2.0 * cfg.n / (cfg.n + cfg.alpha - cfg.hls.sigma1 - cfg.hls.sigma2);
    idx.r = cfg.hls.r > 0 ? cfg.hls.r : rs_default;
    idx.s = cfg.hls.s > 0 ? cfg.hls.s : rs_default;

    const IndexCheck chk = check_indices(idx);
    json rep{{"schema_version", kSchemaVersion},
             {"indices",
              {{"n", idx.n}, {"alpha", idx.alpha}, {"r", idx.r}, {"s", idx.s},
               {"sigma1", idx.sigma1}, {"sigma2", idx.sigma2}}},
             {"index_check", to_json(chk)}};
    if (!chk.valid) {
        std::cerr << "hls-check: invalid indices: " << chk.failures.front() << "\n";
        std::cout << rep.dump(2) << "\n";
        return kExitUsage;
    }

    try {
        auto profile = std::make_shared<const RadialKernelProfile>(
            RadialKernelProfile::load_or_build(idx.n, idx.alpha, cache_dir));
        auto grid = make_grid(cfg.r_min, cfg.r_max, cfg.grid_n);
        const double theta = cfg.hls.sample_theta > 0 ? cfg.hls.sample_theta
                                                      : 2.0 * cfg.n;
        auto bump = [theta](double lambda) {
            return [theta, lambda](double r) {
                const double z = lambda * r;
                return std::pow(1.0 + z * z, -0.5 * theta);
            };
        };

        json table = json::array();
        double lo = HUGE_VAL, hi = 0;
        for (double lambda : cfg.hls.lambdas) {
            RadialField f = RadialField::from_function(grid, bump(lambda),
                                                       TailHint{theta, false});
            const double jn = j_normalized(f, f, idx, profile);
            lo = std::min(lo, jn);
            hi = std::max(hi, jn);
            table.push_back(json{{"lambda", lambda}, {"j_normalized", jn}});
        }
        rep["dilation"] = json{{"table", table},
                               {"variation", hi / lo - 1.0}};

        if (cfg.hls.brute_check) {
            RadialField f = RadialField::from_function(grid, bump(1.0),
                                                       TailHint{theta, false});
            const double jt = j_functional(f, f, idx, profile);
            const double jb = j_functional_brute(bump(1.0), bump(1.0), idx,
                                                 grid->r_min(), grid->r_max());
            rep["brute_check"] = json{{"tensorized", jt},
                                      {"brute", jb},
                                      {"rel_gap", std::abs(jt - jb) / jb}};
        }
    } catch (const std::exception& e) {
        std::cerr << "hls-check: " << e.what() << "\n";
        return kExitUsage;
    }

    const std::string text = rep.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty()) {
        std::string err;
        if (!write_text(out_path, text, err)) {
            std::cerr << "hls-check: " << err << "\n";
            return kExitUsage;
        }
    }
    return kExitOk;
}

} // namespace hslab
