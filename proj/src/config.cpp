#include "hslab/config.hpp"

#include <fstream>
#include <sstream>

namespace hslab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& val) {
    std::size_t used = 0;
    double out;
    try {
        out = std::stod(val, &used);
    } catch (const std::exception&) {
        throw DomainError(key, "cannot parse number from '" + val + "'");
    }
    if (used != val.size())
        throw DomainError(key, "trailing characters in number '" + val + "'");
    return out;
}

int parse_int(const std::string& key, const std::string& val) {
    const double d = parse_double(key, val);
    const int i = static_cast<int>(d);
    if (d != i) throw DomainError(key, "expected an integer, got '" + val + "'");
    return i;
}

bool parse_bool(const std::string& key, const std::string& val) {
    if (val == "true" || val == "1" || val == "yes") return true;
    if (val == "false" || val == "0" || val == "no") return false;
    throw DomainError(key, "expected a boolean, got '" + val + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& val) {
    std::vector<double> out;
    std::stringstream ss(val);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw DomainError(key, "empty list entry");
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw DomainError(key, "empty value");
    return out;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw DomainError("config", "malformed section header at line "
                                                + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "params" && section != "grid" && section != "solver" &&
                section != "analysis" && section != "hls" && section != "sweep" &&
                section != "output")
                throw DomainError("config", "unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config", "expected key = value at line "
                                            + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw DomainError("config", "empty key at line " + std::to_string(lineno));
        if (val.empty() && section != "sweep")
            throw DomainError("config", "empty value at line " + std::to_string(lineno));
        const std::string qual = section + "." + key;

        if (section == "params") {
            if (key == "n") cfg.n = parse_double(qual, val);
            else if (key == "alpha") cfg.alpha = parse_double(qual, val);
            else if (key == "p") cfg.p = parse_double(qual, val);
            else if (key == "q") cfg.q = parse_double(qual, val);
            else if (key == "sigma1") cfg.sigma1 = parse_double(qual, val);
            else if (key == "sigma2") cfg.sigma2 = parse_double(qual, val);
            else throw DomainError("config", "unknown key " + qual);
        } else if (section == "grid") {
            if (key == "r_min") cfg.r_min = parse_double(qual, val);
            else if (key == "r_max") cfg.r_max = parse_double(qual, val);
            else if (key == "n") cfg.grid_n = parse_int(qual, val);
            else throw DomainError("config", "unknown key " + qual);
        } else if (section == "solver") {
            if (key == "damping") cfg.solver.damping = parse_double(qual, val);
            else if (key == "max_iterations")
                cfg.solver.max_iterations = parse_int(qual, val);
            else if (key == "tol") cfg.solver.tol = parse_double(qual, val);
            else if (key == "pivot_radius")
                cfg.solver.pivot_radius = parse_double(qual, val);
            else if (key == "collapse_threshold")
                cfg.solver.collapse_threshold = parse_double(qual, val);
            else if (key == "blowup_threshold")
                cfg.solver.blowup_threshold = parse_double(qual, val);
            else if (key == "ansatz") {
                if (val != "slow" && val != "fast" && val != "bubble")
                    throw DomainError(qual, "must be slow, fast, or bubble");
                cfg.ansatz = val;
            } else throw DomainError("config", "unknown key " + qual);
        } else if (section == "analysis") {
            if (key == "rate_tol") cfg.analysis.rate_tol = parse_double(qual, val);
            else if (key == "window_decades")
                cfg.analysis.window_decades = parse_double(qual, val);
            else if (key == "window_top_factor")
                cfg.analysis.window_top_factor = parse_double(qual, val);
            else if (key == "ratio_tol") cfg.analysis.ratio_tol = parse_double(qual, val);
            else if (key == "scan_radii") cfg.analysis.scan_radii = parse_list(qual, val);
            else if (key == "integrability_exponents")
                cfg.integrability_exponents = parse_list(qual, val);
            else throw DomainError("config", "unknown key " + qual);
        } else if (section == "hls") {
            if (key == "r") cfg.hls.r = parse_double(qual, val);
            else if (key == "s") cfg.hls.s = parse_double(qual, val);
            else if (key == "sigma1") cfg.hls.sigma1 = parse_double(qual, val);
            else if (key == "sigma2") cfg.hls.sigma2 = parse_double(qual, val);
            else if (key == "sample_theta")
                cfg.hls.sample_theta = parse_double(qual, val);
            else if (key == "lambdas") cfg.hls.lambdas = parse_list(qual, val);
            else if (key == "brute_check") cfg.hls.brute_check = parse_bool(qual, val);
            else throw DomainError("config", "unknown key " + qual);
        } else if (section == "sweep") {
            if (key != "n" && key != "alpha" && key != "p" && key != "q" &&
                key != "sigma1" && key != "sigma2")
                throw DomainError("config", "unknown sweep parameter " + key);
            cfg.sweep[key] = val.empty() ? std::vector<double>{} : parse_list(qual, val);
        } else if (section == "output") {
            if (key == "solution") cfg.output.solution = val;
            else if (key == "report") cfg.output.report = val;
            else if (key == "csv") cfg.output.csv = val;
            else if (key == "sweep_csv") cfg.output.sweep_csv = val;
            else throw DomainError("config", "unknown key " + qual);
        } else {
            throw DomainError("config", "key outside any section at line "
                                            + std::to_string(lineno));
        }
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("config", "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace hslab
