#include "ffinv/series.hpp"

#include <algorithm>
#include <cmath>

#include "ffinv/errors.hpp"

namespace ffinv {

// ---------------------------------------------------------------------------
// Poly2

Poly2::Poly2(int degree) : degree_(degree)
{
    if (degree < 0)
        throw ValidationError("Poly2: degree must be >= 0");
    coeff_.assign(static_cast<std::size_t>(degree + 1) * (degree + 2) / 2, 0.0);
}

std::size_t Poly2::index_of(int i, int j)
{
    const int g = i + j;
    return static_cast<std::size_t>(g) * (g + 1) / 2 + static_cast<std::size_t>(g - i);
}

std::vector<std::pair<int, int>> Poly2::exponents(int degree)
{
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(degree + 1) * (degree + 2) / 2);
    for (int g = 0; g <= degree; ++g)
        for (int i = g; i >= 0; --i)
            out.emplace_back(i, g - i);
    return out;
}

double Poly2::at(int i, int j) const
{
    if (i < 0 || j < 0 || i + j > degree_)
        return 0.0;
    return coeff_[index_of(i, j)];
}

double& Poly2::at(int i, int j)
{
    if (i < 0 || j < 0 || i + j > degree_)
        throw ValidationError("Poly2::at: exponent out of range");
    return coeff_[index_of(i, j)];
}

double Poly2::eval(const RegularValue& c) const
{
    std::vector<double> p1(degree_ + 1, 1.0), p2(degree_ + 1, 1.0);
    for (int n = 1; n <= degree_; ++n) {
        p1[n] = p1[n - 1] * c.c1;
        p2[n] = p2[n - 1] * c.c2;
    }
    double total = 0.0;
    std::size_t idx = 0;
    for (int g = 0; g <= degree_; ++g) {
        double grade_sum = 0.0;
        for (int i = g; i >= 0; --i)
            grade_sum += coeff_[idx++] * p1[i] * p2[g - i];
        total += grade_sum;
    }
    return total;
}

Poly2 Poly2::multiply(const Poly2& other) const
{
    Poly2 out(degree_ + other.degree_);
    auto self_exp = exponents(degree_);
    auto other_exp = exponents(other.degree_);
    for (std::size_t a = 0; a < self_exp.size(); ++a) {
        if (coeff_[a] == 0.0)
            continue;
        for (std::size_t b = 0; b < other_exp.size(); ++b) {
            if (other.coeff_[b] == 0.0)
                continue;
            out.at(self_exp[a].first + other_exp[b].first,
                   self_exp[a].second + other_exp[b].second) += coeff_[a] * other.coeff_[b];
        }
    }
    return out;
}

Poly2 Poly2::pow(int n) const
{
    if (n < 0)
        throw ValidationError("Poly2::pow: negative exponent");
    Poly2 out(0);
    out.at(0, 0) = 1.0;
    for (int k = 0; k < n; ++k)
        out = out.multiply(*this);
    return out;
}

Poly2 Poly2::plus(const Poly2& other) const
{
    Poly2 out(std::max(degree_, other.degree_));
    for (auto [i, j] : exponents(out.degree()))
        out.at(i, j) = at(i, j) + other.at(i, j);
    return out;
}

Poly2 Poly2::scaled(double s) const
{
    Poly2 out = *this;
    for (auto& v : out.coeff_)
        v *= s;
    return out;
}

Poly2 Poly2::compose(const Poly2& xs, const Poly2& ys) const
{
    Poly2 out(0);
    for (auto [i, j] : exponents(degree_)) {
        const double v = at(i, j);
        if (v == 0.0)
            continue;
        Poly2 term = xs.pow(i).multiply(ys.pow(j)).scaled(v);
        out = out.plus(term);
    }
    return out.trimmed();
}

Poly2 Poly2::dx() const
{
    Poly2 out(degree_ > 0 ? degree_ - 1 : 0);
    for (auto [i, j] : exponents(degree_))
        if (i >= 1)
            out.at(i - 1, j) += static_cast<double>(i) * at(i, j);
    return out;
}

Poly2 Poly2::dy() const
{
    Poly2 out(degree_ > 0 ? degree_ - 1 : 0);
    for (auto [i, j] : exponents(degree_))
        if (j >= 1)
            out.at(i, j - 1) += static_cast<double>(j) * at(i, j);
    return out;
}

Poly2 Poly2::trimmed() const
{
    int d = degree_;
    while (d > 0) {
        bool zero = true;
        for (int i = d; i >= 0; --i)
            if (at(i, d - i) != 0.0) {
                zero = false;
                break;
            }
        if (!zero)
            break;
        --d;
    }
    Poly2 out(d);
    for (auto [i, j] : exponents(d))
        out.at(i, j) = at(i, j);
    return out;
}

double Poly2::max_abs_coeff() const
{
    double m = 0.0;
    for (double v : coeff_)
        m = std::max(m, std::abs(v));
    return m;
}

// ---------------------------------------------------------------------------
// TruncatedSeries2

TruncatedSeries2::TruncatedSeries2(int degree) : degree_(degree)
{
    if (degree < 1)
        throw ValidationError("TruncatedSeries2: degree must be >= 1");
    coeff_.assign(coefficient_count(degree), 0.0);
}

TruncatedSeries2::TruncatedSeries2(int degree, const std::vector<SeriesTriple>& triples)
    : TruncatedSeries2(degree)
{
    for (const auto& t : triples) {
        if (t.i < 0 || t.j < 0 || t.i + t.j < 1 || t.i + t.j > degree)
            throw ValidationError("TruncatedSeries2: triple exponent out of range");
        at(t.i, t.j) = t.value;
    }
}

std::size_t TruncatedSeries2::index_of(int i, int j)
{
    const int g = i + j;
    return static_cast<std::size_t>(g - 1) * (g + 2) / 2 + static_cast<std::size_t>(g - i);
}

std::vector<std::pair<int, int>> TruncatedSeries2::exponents(int degree)
{
    std::vector<std::pair<int, int>> out;
    out.reserve(coefficient_count(degree));
    for (int g = 1; g <= degree; ++g)
        for (int i = g; i >= 0; --i)
            out.emplace_back(i, g - i);
    return out;
}

double TruncatedSeries2::at(int i, int j) const
{
    if (i < 0 || j < 0 || i + j < 1 || i + j > degree_)
        return 0.0;
    return coeff_[index_of(i, j)];
}

double& TruncatedSeries2::at(int i, int j)
{
    if (i < 0 || j < 0 || i + j < 1 || i + j > degree_)
        throw ValidationError("TruncatedSeries2::at: exponent out of range");
    return coeff_[index_of(i, j)];
}

double TruncatedSeries2::eval(const RegularValue& c) const
{
    std::vector<double> p1(degree_ + 1, 1.0), p2(degree_ + 1, 1.0);
    for (int n = 1; n <= degree_; ++n) {
        p1[n] = p1[n - 1] * c.c1;
        p2[n] = p2[n - 1] * c.c2;
    }
    double total = 0.0;
    std::size_t idx = 0;
    for (int g = 1; g <= degree_; ++g) {
        double grade_sum = 0.0;
        for (int i = g; i >= 0; --i)
            grade_sum += coeff_[idx++] * p1[i] * p2[g - i];
        total += grade_sum;
    }
    return total;
}

std::pair<Poly2, Poly2> TruncatedSeries2::partials() const
{
    Poly2 px(degree_ - 1 > 0 ? degree_ - 1 : 0);
    Poly2 py(px.degree());
    for (auto [i, j] : exponents(degree_)) {
        const double v = at(i, j);
        if (v == 0.0)
            continue;
        if (i >= 1)
            px.at(i - 1, j) += static_cast<double>(i) * v;
        if (j >= 1)
            py.at(i, j - 1) += static_cast<double>(j) * v;
    }
    return {px, py};
}

Poly2 TruncatedSeries2::to_poly() const
{
    Poly2 out(degree_);
    for (auto [i, j] : exponents(degree_))
        out.at(i, j) = at(i, j);
    return out;
}

std::vector<SeriesTriple> TruncatedSeries2::triples() const
{
    std::vector<SeriesTriple> out;
    out.reserve(coeff_.size());
    for (auto [i, j] : exponents(degree_))
        out.push_back({i, j, at(i, j)});
    return out;
}

bool TruncatedSeries2::is_zero(double tol) const
{
    for (double v : coeff_)
        if (std::abs(v) > tol)
            return false;
    return true;
}

double TruncatedSeries2::max_abs_coeff() const
{
    double m = 0.0;
    for (double v : coeff_)
        m = std::max(m, std::abs(v));
    return m;
}

TruncatedSeries2 TruncatedSeries2::resized(int degree) const
{
    TruncatedSeries2 out(degree);
    for (auto [i, j] : exponents(std::min(degree, degree_)))
        out.at(i, j) = at(i, j);
    return out;
}

// ---------------------------------------------------------------------------

TruncatedSeries2 antiderivative(const Poly2& p, const Poly2& q)
{
    const int d = std::max(p.degree(), q.degree()) + 1;
    TruncatedSeries2 out(d);
    for (auto [i, j] : TruncatedSeries2::exponents(d)) {
        if (i >= 1)
            out.at(i, j) = p.at(i - 1, j) / static_cast<double>(i);
        else
            out.at(i, j) = q.at(0, j - 1) / static_cast<double>(j);
    }
    return out;
}

TruncatedSeries2 drop_constant(const Poly2& p)
{
    const int d = std::max(p.degree(), 1);
    TruncatedSeries2 out(d);
    for (auto [i, j] : TruncatedSeries2::exponents(d))
        out.at(i, j) = p.at(i, j);
    return out;
}

Poly2 poly_X()
{
    Poly2 p(1);
    p.at(1, 0) = 1.0;
    return p;
}

Poly2 poly_Y()
{
    Poly2 p(1);
    p.at(0, 1) = 1.0;
    return p;
}

double coefficient_distance(const TruncatedSeries2& a, const TruncatedSeries2& b,
                            bool mod_2pi_on_s01)
{
    const int d = std::max(a.degree(), b.degree());
    double worst = 0.0;
    for (auto [i, j] : TruncatedSeries2::exponents(d)) {
        double diff = a.at(i, j) - b.at(i, j);
        if (mod_2pi_on_s01 && i == 0 && j == 1)
            diff = std::remainder(diff, kTwoPi);
        worst = std::max(worst, std::abs(diff));
    }
    return worst;
}

} // namespace ffinv
