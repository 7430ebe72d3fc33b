#include "wh/symbols.hpp"

#include <cmath>

namespace wh {

namespace {

const cplx I(0.0, 1.0);

// unimodular sqrt((t+ai)/(t-ai)) for real t and a > 0: equals
// exp(i arg(t+ai)), continuous on the line with limit 1 at both ends.
cplx pair_phase(double t, double a) {
    double phi = std::atan2(a, t);
    return std::exp(I * phi);
}

} // namespace

Symbol symbol_sqrt_ratio(double k) {
    Symbol s;
    s.name = "sqrt-ratio";
    s.limit = 1.0;
    s.index = 0;
    s.fn = [k](double t) {
        return std::sqrt((t * t + 1.0) / (t * t + k * k));
    };
    // sqrt((t+i)/(t+ki)) stays in the right half-plane for real t, so the
    // principal branch is already continuous.
    s.plus = [k](double t) {
        cplx z = cplx(t, 0.0) + I;
        return std::sqrt(z / (cplx(t, 0.0) + k * I));
    };
    s.minus = [k](double t) {
        cplx z = cplx(t, 0.0) - I;
        return std::sqrt(z / (cplx(t, 0.0) - k * I));
    };
    return s;
}

Symbol symbol_third_kind() {
    Symbol s;
    s.name = "third-kind";
    s.limit = 1.0;
    s.index = -1;
    s.fn = [](double t) { return pair_phase(t, 2.0) * pair_phase(t, 3.0); };
    // sqrt((t+2i)(t+3i))/(t+i): both radicands avoid the negative real axis
    // for real t, so principal roots multiply into the continuous branch.
    s.plus = [](double t) {
        cplx z(t, 0.0);
        return std::sqrt(z + 2.0 * I) * std::sqrt(z + 3.0 * I) / (z + I);
    };
    s.minus = [](double t) {
        cplx z(t, 0.0);
        return (z - I) / (std::sqrt(z - 2.0 * I) * std::sqrt(z - 3.0 * I));
    };
    return s;
}

Symbol symbol_k1_data() {
    Symbol s = symbol_sqrt_ratio(2.0);
    s.name = "k1-data";
    s.plus = nullptr;
    s.minus = nullptr;
    s.index = 0;
    return s;
}

Symbol symbol_k2_data() {
    Symbol s;
    s.name = "k2-data";
    s.limit = 1.0;
    s.index = 0;
    s.fn = [](double t) { return pair_phase(t, 2.0) * pair_phase(t, 1.0); };
    return s;
}

EntireMatrixJ reference_j() { return EntireMatrixJ::anti_diagonal(1.0, -2.0); }

DKMatrix make_k1(GridPtr grid) {
    Symbol s = symbol_k1_data();
    return DKMatrix{s.sample(std::move(grid)), reference_j()};
}

DKMatrix make_k2(GridPtr grid) {
    Symbol s = symbol_k2_data();
    return DKMatrix{s.sample(std::move(grid)), reference_j()};
}

Symbol find_scalar_symbol(const std::string &name, double k) {
    if (name == "sqrt-ratio" || name == "f-example-k2")
        return symbol_sqrt_ratio(name == "sqrt-ratio" ? k : 2.0);
    if (name == "third-kind" || name == "k-third-ex")
        return symbol_third_kind();
    if (name == "one") {
        Symbol s;
        s.name = "one";
        s.limit = 1.0;
        s.fn = [](double) { return cplx(1.0); };
        s.plus = s.fn;
        s.minus = s.fn;
        return s;
    }
    throw Error("unknown symbol name: " + name);
}

} // namespace wh
