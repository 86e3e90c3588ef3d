#pragma once

#include <cstddef>
#include <vector>

namespace gstft {

/// Dense univariate polynomial, coeffs[i] * u^i.
struct Poly {
    std::vector<double> coeffs;

    Poly() = default;
    explicit Poly(std::vector<double> c) : coeffs(std::move(c)) { trim(); }

    static Poly constant(double c) { return Poly({c}); }
    static Poly identity() { return Poly({0.0, 1.0}); }

    int degree() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1; }
    bool is_zero() const { return coeffs.empty(); }

    double operator()(double u) const {
        double v = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) v = v * u + coeffs[i];
        return v;
    }

    Poly derivative() const {
        if (coeffs.size() <= 1) return Poly();
        std::vector<double> d(coeffs.size() - 1);
        for (std::size_t i = 1; i < coeffs.size(); ++i)
            d[i - 1] = coeffs[i] * static_cast<double>(i);
        return Poly(std::move(d));
    }

    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<double> p(coeffs.size() + o.coeffs.size() - 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs.size(); ++j)
                p[i + j] += coeffs[i] * o.coeffs[j];
        return Poly(std::move(p));
    }

    Poly operator+(const Poly& o) const {
        std::vector<double> p(std::max(coeffs.size(), o.coeffs.size()), 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) p[i] += coeffs[i];
        for (std::size_t i = 0; i < o.coeffs.size(); ++i) p[i] += o.coeffs[i];
        return Poly(std::move(p));
    }

    Poly operator*(double s) const {
        Poly p = *this;
        for (double& c : p.coeffs) c *= s;
        p.trim();
        return p;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (double c : coeffs) m = std::max(m, std::abs(c));
        return m;
    }

private:
    void trim() {
        while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    }
};

}  // namespace gstft
