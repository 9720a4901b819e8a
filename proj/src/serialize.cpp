#include "hslab/serialize.hpp"

namespace hslab {

using nlohmann::json;

json to_json(const SystemParams& p) {
    return json{{"n", p.n},         {"alpha", p.alpha},   {"p", p.p},
                {"q", p.q},         {"sigma1", p.sigma1}, {"sigma2", p.sigma2}};
}

SystemParams params_from_json(const json& j) {
    return validate(j.at("n").get<double>(), j.at("alpha").get<double>(),
                    j.at("p").get<double>(), j.at("q").get<double>(),
                    j.at("sigma1").get<double>(), j.at("sigma2").get<double>());
}

json to_json(const RadialField& f) {
    return json{
        {"grid", {{"r_min", f.grid->r_min()},
                  {"r_max", f.grid->r_max()},
                  {"N", f.grid->size()}}},
        {"values", f.values},
        {"head", {{"f0", f.head.f0}, {"c", f.head.c}}},
        {"tail", {{"C", f.tail.amplitude},
                  {"theta", f.tail.exponent},
                  {"log", f.tail.log_flag}}},
    };
}

RadialField field_from_json(const json& j) {
    const auto& jg = j.at("grid");
    auto grid = make_grid(jg.at("r_min").get<double>(), jg.at("r_max").get<double>(),
                          jg.at("N").get<int>());
    RadialField f;
    f.grid = grid;
    f.values = j.at("values").get<std::vector<double>>();
    if (static_cast<int>(f.values.size()) != grid->size())
        throw DomainError("values", "length does not match the grid");
    f.head.f0 = j.at("head").at("f0").get<double>();
    f.head.c = j.at("head").at("c").get<double>();
    f.tail.amplitude = j.at("tail").at("C").get<double>();
    f.tail.exponent = j.at("tail").at("theta").get<double>();
    f.tail.log_flag = j.at("tail").at("log").get<bool>();
    return f;
}

json to_json(const SolutionBundle& b) {
    return json{
        {"schema_version", kSchemaVersion},
        {"params", to_json(b.params)},
        {"status", to_string(b.status)},
        {"status_detail", b.status_detail},
        {"iterations", b.iterations},
        {"residual_trace", b.residual_trace},
        {"operator_residuals",
         {{"u", b.operator_residual_u}, {"v", b.operator_residual_v}}},
        {"u", to_json(b.u)},
        {"v", to_json(b.v)},
    };
}

SolutionBundle bundle_from_json(const json& j) {
    SolutionBundle b;
    b.params = params_from_json(j.at("params"));
    const std::string st = j.at("status").get<std::string>();
    if (st == "converged") b.status = SolveStatus::Converged;
    else if (st == "no_fixed_point_collapse") b.status = SolveStatus::NoFixedPointCollapse;
    else if (st == "no_fixed_point_blowup") b.status = SolveStatus::NoFixedPointBlowup;
    else if (st == "max_iterations") b.status = SolveStatus::MaxIterations;
    else throw DomainError("status", "unknown solve status: " + st);
    b.status_detail = j.value("status_detail", std::string{});
    b.iterations = j.value("iterations", 0);
    b.residual_trace = j.value("residual_trace", std::vector<double>{});
    if (j.contains("operator_residuals")) {
        b.operator_residual_u = j["operator_residuals"].value("u", -1.0);
        b.operator_residual_v = j["operator_residuals"].value("v", -1.0);
    }
    b.u = field_from_json(j.at("u"));
    b.v = field_from_json(j.at("v"));
    b.v.grid = b.u.grid;  // share one grid object
    return b;
}

json to_json(const DerivedExponents& d) {
    return json{
        {"p0", d.p0},         {"q0", d.q0},
        {"r0", d.r0},         {"s0", d.s0},
        {"fast_u", d.fast_u}, {"fast_v", d.fast_v},
        {"fast_v_log", d.fast_v_log},
        {"v_case", to_string(d.v_case)},
    };
}

json to_json(const Regime& r) {
    const char* kind = to_string(r.kind);
    return json{
        {"kind", kind},
        {"criticality", r.criticality},
        {"rate_sum_gap", r.rate_sum_gap},
        {"theorem_a_nonexistence", r.theorem_a_nonexistence},
        {"notes", r.notes},
    };
}

json to_json(const RateReport& r) {
    return json{
        {"theta_u", r.theta_u},   {"theta_v", r.theta_v},
        {"log_u", r.log_u},       {"log_v", r.log_v},
        {"rms_u", r.rms_u},       {"rms_v", r.rms_v},
        {"window", {{"lo", r.window_lo}, {"hi", r.window_hi}}},
        {"slow_u", r.slow_u},     {"slow_v", r.slow_v},
        {"fast_u", r.fast_u},     {"fast_v", r.fast_v},
        {"fast_v_log", r.fast_v_log},
        {"verdict", to_string(r.verdict)},
    };
}

json to_json(const AsymptoticConstants& a) {
    json j{
        {"v_case", to_string(a.v_case)},
        {"a0", a.a0},
        {"u_tail_amplitude", a.u_tail_amplitude},
        {"v_tail_amplitude", a.v_tail_amplitude},
        {"u_gap", a.u_gap},
        {"v_gap", a.v_gap},
    };
    if (a.a1) j["a1"] = *a.a1;
    if (a.a2) j["a2"] = *a.a2;
    if (a.v_case == VCase::Log) j["log_amplitude"] = a.log_amplitude;
    return j;
}

json to_json(const PohozaevReport& p) {
    return json{
        {"e1", p.e1},
        {"e2", p.e2},
        {"energy_gap", p.energy_gap},
        {"criticality_coefficient", p.criticality_coefficient},
        {"product", p.product},
    };
}

json to_json(const std::vector<IntegrabilityRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows) {
        arr.push_back(json{
            {"component", std::string(1, row.component)},
            {"exponent", row.exponent},
            {"norms", row.norms},
            {"last_ratio", row.last_ratio},
            {"stabilized", row.stabilized},
        });
    }
    return arr;
}

json to_json(const BoundReport& b) {
    return json{
        {"upper_u", b.upper_u},   {"upper_v", b.upper_v},
        {"lower_u", b.lower_u},   {"lower_v", b.lower_v},
        {"fitted_u", b.fitted_u}, {"fitted_v", b.fitted_v},
        {"violations", b.violations},
    };
}

json to_json(const IndexCheck& c) {
    return json{{"valid", c.valid}, {"failures", c.failures}};
}

} // namespace hslab
