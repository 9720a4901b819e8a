#pragma once

#include <map>
#include <string>
#include <vector>

#include "hslab/analysis.hpp"
#include "hslab/solver.hpp"

namespace hslab {

/// Parsed run configuration. The file format is [section] headers over
/// key = value lines; '#' starts a comment; unknown sections or keys are
/// rejected. Defaults follow the module design defaults.
struct RunConfig {
    // [params]
    double n = 3, alpha = 2, p = 5, q = 5, sigma1 = 0, sigma2 = 0;

    // [grid]
    double r_min = 1e-4, r_max = 1e4;
    int grid_n = 1024;

    // [solver]
    SolverOptions solver;
    std::string ansatz = "slow";  // slow | fast | bubble

    // [analysis]
    AnalysisOptions analysis;
    std::vector<double> integrability_exponents;  // empty = auto per params

    // [hls]
    struct HlsBlock {
        double r = 0, s = 0;           // 0 = derive from sigma-free relation
        double sigma1 = 0, sigma2 = 0;
        double sample_theta = 0;       // 0 = 2n
        std::vector<double> lambdas{0.5, 1.0, 2.0, 4.0};
        bool brute_check = false;
    } hls;

    // [sweep]: parameter name -> explicit value list
    std::map<std::string, std::vector<double>> sweep;

    // [output]
    struct OutputBlock {
        std::string solution = "solution.json";
        std::string report = "report.json";
        std::string csv = "profile.csv";
        std::string sweep_csv = "sweep.csv";
    } output;

    SystemParams validated_params(bool for_solver = false) const {
        return validate(n, alpha, p, q, sigma1, sigma2, for_solver);
    }
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

} // namespace hslab
