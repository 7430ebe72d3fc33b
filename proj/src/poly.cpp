#include "wh/poly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "wh/errors.hpp"

namespace wh {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty())
        coeffs_.push_back(cplx(0.0));
    trim();
}

Polynomial Polynomial::from_roots(const std::vector<cplx> &roots, cplx lead) {
    Polynomial p({lead});
    for (const cplx &r : roots)
        p = p * Polynomial({-r, cplx(1.0)});
    return p;
}

int Polynomial::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

bool Polynomial::is_zero(double tol) const {
    for (const cplx &c : coeffs_)
        if (std::abs(c) > tol)
            return false;
    return true;
}

cplx Polynomial::operator()(cplx t) const {
    cplx acc(0.0);
    for (std::size_t k = coeffs_.size(); k-- > 0;)
        acc = acc * t + coeffs_[k];
    return acc;
}

Polynomial Polynomial::operator+(const Polynomial &rhs) const {
    std::vector<cplx> out(std::max(coeffs_.size(), rhs.coeffs_.size()), cplx(0.0));
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
        out[k] += coeffs_[k];
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k)
        out[k] += rhs.coeffs_[k];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial &rhs) const { return *this + rhs * cplx(-1.0); }

Polynomial Polynomial::operator*(const Polynomial &rhs) const {
    std::vector<cplx> out(coeffs_.size() + rhs.coeffs_.size() - 1, cplx(0.0));
    for (std::size_t a = 0; a < coeffs_.size(); ++a)
        for (std::size_t b = 0; b < rhs.coeffs_.size(); ++b)
            out[a + b] += coeffs_[a] * rhs.coeffs_[b];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(cplx c) const {
    std::vector<cplx> out(coeffs_);
    for (cplx &x : out)
        x *= c;
    return Polynomial(std::move(out));
}

std::vector<cplx> Polynomial::roots() const {
    int n = degree();
    if (n <= 0)
        return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    cplx lead = coeffs_.back();
    for (int k = 0; k < n; ++k)
        comp(k, n - 1) = -coeffs_[static_cast<std::size_t>(k)] / lead;
    for (int k = 1; k < n; ++k)
        comp(k, k - 1) = cplx(1.0);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success)
        throw Error("Polynomial::roots: eigensolver failed");
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        out[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    return out;
}

void Polynomial::trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == cplx(0.0))
        coeffs_.pop_back();
}

} // namespace wh
