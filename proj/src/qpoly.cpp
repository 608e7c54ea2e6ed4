#include "hopfdde/qpoly.hpp"

#include <cmath>

#include "hopfdde/errors.hpp"

namespace hopfdde {

namespace {

constexpr double kPruneFloor = 1e-300;
constexpr cplx kI{0.0, 1.0};

void require_same_omega(const QuasiPolynomial& a, const QuasiPolynomial& b) {
    if (a.omega() != b.omega())
        throw UsageError("quasipolynomial frequency mismatch");
}

double binomial(int m, int j) {
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c = c * (m - j + i) / i;
    return c;
}

}  // namespace

QuasiPolynomial::QuasiPolynomial(double omega) : omega_(omega) {
    if (!(omega > 0.0)) throw UsageError("quasipolynomial frequency must be positive");
}

QuasiPolynomial QuasiPolynomial::term(double omega, cplx c, int power, int mult) {
    QuasiPolynomial q(omega);
    q.add_term(c, power, mult);
    return q;
}

cplx QuasiPolynomial::coeff(int power, int mult) const {
    auto it = terms_.find(Key{power, mult});
    return it == terms_.end() ? cplx{} : it->second;
}

void QuasiPolynomial::add_term(cplx c, int power, int mult) {
    if (power < 0) throw UsageError("negative power in quasipolynomial term");
    auto [it, inserted] = terms_.try_emplace(Key{power, mult}, c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) <= kPruneFloor) terms_.erase(it);
}

cplx QuasiPolynomial::eval(double s) const {
    cplx acc{};
    for (const auto& [key, c] : terms_) {
        const double phase = key.mult * omega_ * s;
        acc += c * std::pow(s, key.power) * cplx(std::cos(phase), std::sin(phase));
    }
    return acc;
}

QuasiPolynomial QuasiPolynomial::derivative() const {
    QuasiPolynomial out(omega_);
    for (const auto& [key, c] : terms_) {
        if (key.mult != 0) out.add_term(c * kI * (key.mult * omega_), key.power, key.mult);
        if (key.power > 0) out.add_term(c * static_cast<double>(key.power), key.power - 1, key.mult);
    }
    return out;
}

QuasiPolynomial QuasiPolynomial::conj() const {
    QuasiPolynomial out(omega_);
    for (const auto& [key, c] : terms_) out.add_term(std::conj(c), key.power, -key.mult);
    return out;
}

QuasiPolynomial QuasiPolynomial::translated(double shift) const {
    QuasiPolynomial out(omega_);
    for (const auto& [key, c] : terms_) {
        const double phase = key.mult * omega_ * shift;
        const cplx scaled = c * cplx(std::cos(phase), std::sin(phase));
        for (int j = 0; j <= key.power; ++j)
            out.add_term(scaled * binomial(key.power, j) * std::pow(shift, key.power - j), j,
                         key.mult);
    }
    return out;
}

QuasiPolynomial& QuasiPolynomial::operator+=(const QuasiPolynomial& other) {
    if (other.is_zero()) return *this;
    if (is_zero()) omega_ = other.omega_;
    require_same_omega(*this, other);
    for (const auto& [key, c] : other.terms_) add_term(c, key.power, key.mult);
    return *this;
}

QuasiPolynomial& QuasiPolynomial::operator-=(const QuasiPolynomial& other) {
    return *this += (-1.0) * other;
}

QuasiPolynomial& QuasiPolynomial::operator*=(cplx c) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= c;
        if (std::abs(it->second) <= kPruneFloor)
            it = terms_.erase(it);
        else
            ++it;
    }
    return *this;
}

double QuasiPolynomial::max_coeff() const {
    double m = 0.0;
    for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

QuasiPolynomial operator+(QuasiPolynomial a, const QuasiPolynomial& b) { return a += b; }
QuasiPolynomial operator-(QuasiPolynomial a, const QuasiPolynomial& b) { return a -= b; }
QuasiPolynomial operator*(cplx c, QuasiPolynomial a) { return a *= c; }
QuasiPolynomial operator*(QuasiPolynomial a, cplx c) { return a *= c; }

QuasiPolynomial qp_combine(const QuasiPolynomial& a, const QuasiPolynomial& b, cplx ca, cplx cb) {
    require_same_omega(a, b);
    QuasiPolynomial out(a.omega());
    for (const auto& [key, c] : a.terms()) out.add_term(ca * c, key.power, key.mult);
    for (const auto& [key, c] : b.terms()) out.add_term(cb * c, key.power, key.mult);
    return out;
}

QuasiPolynomial qp_shift_rate(const QuasiPolynomial& a, int dmult) {
    QuasiPolynomial out(a.omega());
    for (const auto& [key, c] : a.terms()) out.add_term(c, key.power, key.mult + dmult);
    return out;
}

QuasiPolynomial qp_integrate(const QuasiPolynomial& a) {
    QuasiPolynomial out(a.omega());
    for (const auto& [key, c] : a.terms()) {
        const int m = key.power;
        if (key.mult == 0) {
            out.add_term(c / static_cast<double>(m + 1), m + 1, 0);
            continue;
        }
        // int_0^s t^m e^{at} dt
        //   = e^{as} sum_j (-1)^j m!/(m-j)! s^{m-j} / a^{j+1} - (-1)^m m! / a^{m+1}
        const cplx rate = kI * (key.mult * a.omega());
        cplx falling = 1.0;       // m!/(m-j)!
        cplx inv_pow = 1.0 / rate;  // 1/a^{j+1}
        double sign = 1.0;
        for (int j = 0; j <= m; ++j) {
            out.add_term(c * sign * falling * inv_pow, m - j, key.mult);
            if (j == m) out.add_term(-c * sign * falling * inv_pow, 0, 0);
            falling *= static_cast<double>(m - j);
            inv_pow /= rate;
            sign = -sign;
        }
    }
    return out;
}

cplx qp_eval(const QuasiPolynomial& a, double s) { return a.eval(s); }

QuasiPolynomial qp_multiply(const QuasiPolynomial& a, const QuasiPolynomial& b) {
    require_same_omega(a, b);
    QuasiPolynomial out(a.omega());
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms())
            out.add_term(ca * cb, ka.power + kb.power, ka.mult + kb.mult);
    return out;
}

cplx qp_definite_integral(const QuasiPolynomial& a, double lo, double hi) {
    const QuasiPolynomial p = qp_integrate(a);
    return p.eval(hi) - p.eval(lo);
}

nlohmann::json to_json(const QuasiPolynomial& a) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [key, c] : a.terms())
        out.push_back({{"re", c.real()}, {"im", c.imag()}, {"power", key.power}, {"mult", key.mult}});
    return out;
}

QuasiPolynomial qp_from_json(double omega, const nlohmann::json& j) {
    if (!j.is_array()) throw UsageError("quasipolynomial JSON must be an array of terms");
    QuasiPolynomial out(omega);
    for (const auto& t : j)
        out.add_term(cplx(t.at("re").get<double>(), t.at("im").get<double>()),
                     t.at("power").get<int>(), t.at("mult").get<int>());
    return out;
}

}  // namespace hopfdde
