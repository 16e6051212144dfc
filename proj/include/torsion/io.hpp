#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "torsion/bounds.hpp"
#include "torsion/groundstate.hpp"
#include "torsion/landscape.hpp"
#include "torsion/radial3d.hpp"
#include "torsion/spectral.hpp"

namespace torsion {

using ordered_json = nlohmann::ordered_json;

/// 17 significant digits round-trip a double exactly; all CSV output goes
/// through here so repeated runs are byte-identical.
inline std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string landscape_csv(const LandscapeField& f) {
    const std::vector<double> w = effective_potential(f);
    std::string s = "x,u,W\n";
    for (std::size_t i = 0; i < f.u.size(); ++i)
        s += fmt17(f.grid->node(i)) + "," + fmt17(f.u[i]) + "," + fmt17(w[i]) + "\n";
    return s;
}

inline std::string radial_landscape_csv(const RadialLandscapeField& f) {
    const std::vector<double> w = radial_effective_potential(f);
    std::string s = "x,u,W\n";
    for (std::size_t i = 0; i < f.u.size(); ++i)
        s += fmt17(f.grid->nodes[i]) + "," + fmt17(f.u[i]) + "," + fmt17(w[i]) + "\n";
    return s;
}

inline std::string curves_csv(const std::vector<CountingCurve>& curves) {
    std::string s = "mu,count,provenance\n";
    for (const CountingCurve& c : curves)
        for (std::size_t i = 0; i < c.mu.size(); ++i)
            s += fmt17(c.mu[i]) + "," + std::to_string(c.count[i]) + "," +
                 provenance_name(c.provenance) + "\n";
    return s;
}

inline std::string iteration_csv(const IterationTrace& t) {
    std::string s = "step,M,inf_inv_u,max_u\n";
    for (const IterationStep& st : t.steps)
        s += std::to_string(st.step) + "," + fmt17(st.shift) + "," + fmt17(st.inf_inv_u) +
             "," + fmt17(st.max_u) + "\n";
    return s;
}

inline std::string asymptotics_csv(const std::vector<AsymptoticsRow>& rows) {
    std::string s = "mu,count_exact,semiclassical,count_substituted,ratio_b,ratio_c\n";
    for (const AsymptoticsRow& r : rows)
        s += fmt17(r.mu) + "," + fmt17(r.count_exact) + "," + fmt17(r.semiclassical) + "," +
             fmt17(r.count_substituted) + "," + fmt17(r.ratio_semiclassical) + "," +
             fmt17(r.ratio_substituted) + "\n";
    return s;
}

inline std::string bounds_csv(const BoundsReport& rep) {
    std::string s;
    for (std::size_t c = 0; c < rep.columns.size(); ++c)
        s += (c ? "," : "") + rep.columns[c];
    s += ",ok,note\n";
    for (std::size_t r = 0; r < rep.rows.size(); ++r) {
        for (std::size_t c = 0; c < rep.rows[r].size(); ++c)
            s += (c ? "," : "") + fmt17(rep.rows[r][c]);
        s += "," + std::to_string(rep.row_ok[r]) + "," + rep.row_note[r] + "\n";
    }
    return s;
}

inline ordered_json bounds_json(const BoundsReport& rep) {
    ordered_json j;
    j["kind"] = rep.kind;
    j["status"] = status_name(rep.status);
    j["violations"] = rep.violations;
    if (std::isfinite(rep.worst_margin)) j["worst_margin"] = rep.worst_margin;
    if (!rep.detail.empty()) j["detail"] = rep.detail;
    ordered_json consts = ordered_json::object();
    for (const auto& [name, value] : rep.constants) consts[name] = value;
    j["constants"] = consts;
    j["columns"] = rep.columns;
    ordered_json rows = ordered_json::array();
    for (std::size_t r = 0; r < rep.rows.size(); ++r) {
        ordered_json row = ordered_json::object();
        for (std::size_t c = 0; c < rep.rows[r].size(); ++c) {
            const double v = rep.rows[r][c];
            if (std::isnan(v))
                row[rep.columns[c]] = nullptr;
            else
                row[rep.columns[c]] = v;
        }
        row["ok"] = rep.row_ok[r];
        if (!rep.row_note[r].empty()) row["note"] = rep.row_note[r];
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

inline ordered_json harnack_json(const HarnackDiagnostics& d) {
    ordered_json j;
    j["C_HM"] = d.c_hm;
    j["C_HM_box"] = {{"scale", d.c_hm_box.scale}, {"lo", d.c_hm_box.lo}};
    j["A_M"] = d.a_m;
    j["c"] = d.c_parameter;
    j["C_c"] = d.c_c;
    switch (d.c_tilde_qualifier) {
    case CtildeQualifier::strict:
        j["Ctilde_H"] = *d.c_tilde;
        j["Ctilde_H_qualifier"] = "strict";
        j["Ctilde_H_box"] = {{"scale", d.c_tilde_box.scale}, {"lo", d.c_tilde_box.lo}};
        break;
    case CtildeQualifier::global_fallback:
        j["Ctilde_H"] = *d.c_tilde;
        j["Ctilde_H_qualifier"] = "global_fallback";
        j["Ctilde_H_box"] = {{"scale", d.c_tilde_box.scale}, {"lo", d.c_tilde_box.lo}};
        break;
    case CtildeQualifier::absent:
        j["Ctilde_H"] = nullptr;
        j["Ctilde_H_qualifier"] = "absent";
        break;
    }
    j["scale_count"] = d.scales.size();
    return j;
}

inline ordered_json iteration_json(const IterationTrace& t) {
    ordered_json j;
    j["converged"] = t.converged;
    j["stop_reason"] = t.stop_reason;
    j["final_shift"] = t.final_shift;
    j["groundstate_estimate"] = t.groundstate_estimate;
    j["steps"] = ordered_json::array();
    for (const IterationStep& s : t.steps)
        j["steps"].push_back({{"step", s.step},
                              {"M", s.shift},
                              {"inf_inv_u", s.inf_inv_u},
                              {"max_u", s.max_u}});
    return j;
}

} // namespace torsion
