#ifndef WH_POLY_HPP
#define WH_POLY_HPP

#include <complex>
#include <vector>

namespace wh {

using cplx = std::complex<double>;

/// Polynomial with complex coefficients, ascending order.
class Polynomial {
  public:
    Polynomial() : coeffs_{cplx(0.0)} {}
    explicit Polynomial(std::vector<cplx> coeffs);
    static Polynomial constant(cplx c) { return Polynomial({c}); }
    static Polynomial from_roots(const std::vector<cplx> &roots, cplx lead = cplx(1.0));

    const std::vector<cplx> &coeffs() const { return coeffs_; }
    int degree() const;
    bool is_zero(double tol = 0.0) const;
    cplx operator()(cplx t) const;

    Polynomial operator+(const Polynomial &rhs) const;
    Polynomial operator-(const Polynomial &rhs) const;
    Polynomial operator*(const Polynomial &rhs) const;
    Polynomial operator*(cplx c) const;

    /// Roots via the companion matrix.
    std::vector<cplx> roots() const;

  private:
    void trim();
    std::vector<cplx> coeffs_;
};

} // namespace wh

#endif
