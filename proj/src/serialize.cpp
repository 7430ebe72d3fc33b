#include "wh/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace wh {

namespace {

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

json to_json(const GridFunction &f) {
    json nodes = json::array();
    json re = json::array();
    json im = json::array();
    for (std::size_t j = 0; j < f.size(); ++j) {
        nodes.push_back(f.grid().nodes()[j]);
        re.push_back(f[j].real());
        im.push_back(f[j].imag());
    }
    return json{{"t", nodes},
                {"re", re},
                {"im", im},
                {"limit", complex_json(f.limit_at_infinity())}};
}

json to_json(const ScalarFactorization &fac) {
    return json{{"index", fac.index},
                {"residual", fac.residual},
                {"plus", to_json(fac.plus)},
                {"minus", to_json(fac.minus)}};
}

json to_json(const ScalarBoundReport &rep) {
    return json{{"epsilon", rep.epsilon},       {"m", rep.m_lower},
                {"M", rep.M_upper},             {"guaranteed", rep.guaranteed},
                {"measured_plus", rep.measured_plus}, {"measured_minus", rep.measured_minus}};
}

json to_json(const RationalFunction &R) {
    json zeros = json::array();
    for (const cplx &z : R.zeros)
        zeros.push_back(complex_json(z));
    json poles = json::array();
    for (const cplx &z : R.poles)
        poles.push_back(complex_json(z));
    return json{{"zeros", zeros}, {"poles", poles}, {"gain", complex_json(R.gain)}};
}

json to_json(const GridMat2 &m) {
    return json{{"a11", to_json(m.a11)},
                {"a12", to_json(m.a12)},
                {"a21", to_json(m.a21)},
                {"a22", to_json(m.a22)}};
}

json to_json(const MatrixFactorization &fac) {
    json poles = json::array();
    for (const cplx &z : fac.meromorphic_poles)
        poles.push_back(complex_json(z));
    return json{{"indices", json::array({fac.partial_indices.first, fac.partial_indices.second})},
                {"residual", fac.residual},
                {"plus", to_json(fac.plus)},
                {"minus", to_json(fac.minus)},
                {"poles", poles}};
}

json to_json(const DKBoundReport &rep) {
    return json{{"epsilon", rep.epsilon},
                {"m", rep.m},
                {"N", rep.N},
                {"M", rep.M},
                {"c", rep.c},
                {"d", rep.d},
                {"L", rep.L},
                {"r_bound", rep.r_bound},
                {"theta_bound", rep.theta_bound},
                {"r_factor_bound", rep.r_factor_bound},
                {"theta_split_bound", rep.theta_split_bound},
                {"measured_r", rep.measured_r},
                {"measured_theta", rep.measured_theta},
                {"measured_r_pm", rep.measured_r_pm},
                {"measured_theta_pm", rep.measured_theta_pm},
                {"admissible", rep.admissible},
                {"note", rep.note}};
}

json to_json(const MethodComparison &cmp) {
    return json{{"exact", to_json(cmp.exact_fac)},
                {"approx", to_json(cmp.approx_fac)},
                {"fit_error", cmp.fit_error},
                {"fit_degree", json::array({cmp.fit_degree.first, cmp.fit_degree.second})},
                {"a11_sup", cmp.a11_sup},
                {"a11_l2", cmp.a11_l2},
                {"bound", cmp.bound},
                {"exact_ms", cmp.exact_ms},
                {"approx_ms", cmp.approx_ms},
                {"degenerate_fit", cmp.degenerate_fit}};
}

json sweep_summary(const SweepResult &result) {
    return json{{"draws", result.draws.size()},
                {"admissible", result.admissible_count},
                {"passes", result.passes},
                {"slope", result.slope},
                {"slope_ci", result.slope_ci}};
}

std::string gridfunction_csv(const GridFunction &f) {
    std::string out = "t,re,im\n";
    for (std::size_t j = 0; j < f.size(); ++j) {
        out += fmt(f.grid().nodes()[j]);
        out += ',';
        out += fmt(f[j].real());
        out += ',';
        out += fmt(f[j].imag());
        out += '\n';
    }
    return out;
}

std::string modulus_trace_csv(const GridFunction &plus, const GridFunction &minus) {
    require_same_grid(plus, minus);
    std::string out = "t,abs_plus,abs_minus\n";
    for (std::size_t j = 0; j < plus.size(); ++j) {
        out += fmt(plus.grid().nodes()[j]);
        out += ',';
        out += fmt(std::abs(plus[j]));
        out += ',';
        out += fmt(std::abs(minus[j]));
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const SweepResult &result) {
    std::string out = "draw,epsilon_target,epsilon,m,N,M,c,d,L,r_bound,theta_bound,"
                      "r_factor_bound,theta_split_bound,measured_r,measured_theta,"
                      "measured_r_pm,measured_theta_pm,factor_error,admissible,pass,failure\n";
    for (std::size_t j = 0; j < result.draws.size(); ++j) {
        const SweepDraw &d = result.draws[j];
        const DKBoundReport &r = d.report;
        std::ostringstream row;
        row << j << ',' << fmt(d.epsilon_target) << ',' << fmt(r.epsilon) << ',' << fmt(r.m)
            << ',' << fmt(r.N) << ',' << fmt(r.M) << ',' << fmt(r.c) << ',' << fmt(r.d) << ','
            << fmt(r.L) << ',' << fmt(r.r_bound) << ',' << fmt(r.theta_bound) << ','
            << fmt(r.r_factor_bound) << ',' << fmt(r.theta_split_bound) << ','
            << fmt(r.measured_r) << ',' << fmt(r.measured_theta) << ',' << fmt(r.measured_r_pm)
            << ',' << fmt(r.measured_theta_pm) << ',' << fmt(d.factor_error) << ','
            << (d.admissible ? 1 : 0) << ',' << (d.pass ? 1 : 0) << ',' << d.failure << '\n';
        out += row.str();
    }
    return out;
}

void write_text_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open output file: " + path);
    out << content;
}

} // namespace wh
