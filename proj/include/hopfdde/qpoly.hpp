#pragma once

#include <complex>
#include <map>
#include <utility>

#include <json.hpp>

namespace hopfdde {

using cplx = std::complex<double>;

/// Finite sum  sum c * s^power * exp(i * mult * omega * s).
///
/// Exponential rates are keyed by the integer multiple `mult` of i*omega, so
/// resonance (mult == 0 under integration) is decided exactly. Coefficients
/// with |c| <= 1e-300 are dropped.
class QuasiPolynomial {
public:
    struct Key {
        int power = 0;
        int mult = 0;
        auto operator<=>(const Key&) const = default;
    };
    using TermMap = std::map<Key, cplx>;

    QuasiPolynomial() = default;
    explicit QuasiPolynomial(double omega);

    /// c * s^power * exp(i mult omega s)
    static QuasiPolynomial term(double omega, cplx c, int power, int mult);
    static QuasiPolynomial constant(double omega, cplx c) { return term(omega, c, 0, 0); }

    double omega() const { return omega_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    cplx coeff(int power, int mult) const;

    void add_term(cplx c, int power, int mult);

    cplx operator()(double s) const { return eval(s); }
    cplx eval(double s) const;

    QuasiPolynomial derivative() const;
    QuasiPolynomial conj() const;
    /// s -> s + shift, re-expanded into the same basis.
    QuasiPolynomial translated(double shift) const;

    QuasiPolynomial& operator+=(const QuasiPolynomial& other);
    QuasiPolynomial& operator-=(const QuasiPolynomial& other);
    QuasiPolynomial& operator*=(cplx c);

    /// Largest |c| over the terms, 0 for the zero polynomial.
    double max_coeff() const;

private:
    double omega_ = 1.0;
    TermMap terms_;
};

QuasiPolynomial operator+(QuasiPolynomial a, const QuasiPolynomial& b);
QuasiPolynomial operator-(QuasiPolynomial a, const QuasiPolynomial& b);
QuasiPolynomial operator*(cplx c, QuasiPolynomial a);
QuasiPolynomial operator*(QuasiPolynomial a, cplx c);

/// ca*a + cb*b. Throws UsageError on frequency mismatch.
QuasiPolynomial qp_combine(const QuasiPolynomial& a, const QuasiPolynomial& b, cplx ca, cplx cb);

/// Multiplies by exp(i dmult omega s).
QuasiPolynomial qp_shift_rate(const QuasiPolynomial& a, int dmult);

/// P(s) = int_0^s a(theta) d theta, so P(0) = 0.
QuasiPolynomial qp_integrate(const QuasiPolynomial& a);

cplx qp_eval(const QuasiPolynomial& a, double s);

/// Pointwise product. Only used for pairings, where one factor is short.
QuasiPolynomial qp_multiply(const QuasiPolynomial& a, const QuasiPolynomial& b);

/// int_lo^hi a(s) ds
cplx qp_definite_integral(const QuasiPolynomial& a, double lo, double hi);

/// [{"re":..,"im":..,"power":m,"mult":n}, ...]
nlohmann::json to_json(const QuasiPolynomial& a);
QuasiPolynomial qp_from_json(double omega, const nlohmann::json& j);

}  // namespace hopfdde
