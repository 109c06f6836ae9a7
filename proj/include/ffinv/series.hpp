#ifndef FFINV_SERIES_HPP
#define FFINV_SERIES_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "ffinv/phase.hpp"

namespace ffinv {

/// One serialized coefficient: X^i Y^j |-> value.
struct SeriesTriple {
    int i = 0;
    int j = 0;
    double value = 0.0;
};

/// Dense bivariate polynomial with constant term, graded-lex storage
/// (grade ascending, i descending within a grade).
class Poly2 {
public:
    Poly2() : degree_(0), coeff_(1, 0.0) {}
    explicit Poly2(int degree);

    int degree() const { return degree_; }
    const std::vector<double>& coefficients() const { return coeff_; }

    double at(int i, int j) const;
    double& at(int i, int j);

    double eval(const RegularValue& c) const;

    Poly2 multiply(const Poly2& other) const;
    Poly2 pow(int n) const;
    Poly2 plus(const Poly2& other) const;
    Poly2 scaled(double s) const;

    /// Substitute X -> xs, Y -> ys.
    Poly2 compose(const Poly2& xs, const Poly2& ys) const;

    Poly2 dx() const;
    Poly2 dy() const;

    /// Drop top grades that are identically zero (degree never below 0).
    Poly2 trimmed() const;

    double max_abs_coeff() const;

    static std::size_t index_of(int i, int j);
    static std::vector<std::pair<int, int>> exponents(int degree);

private:
    int degree_;
    std::vector<double> coeff_; // (degree+1)(degree+2)/2 entries
};

/// Element of the series space with vanishing constant term, truncated at
/// degree d >= 1. Stores coefficients s_ij for 1 <= i+j <= d in graded-lex
/// order (grade ascending, i descending), d(d+3)/2 entries in total.
class TruncatedSeries2 {
public:
    explicit TruncatedSeries2(int degree = 1);
    TruncatedSeries2(int degree, const std::vector<SeriesTriple>& triples);

    int degree() const { return degree_; }
    const std::vector<double>& coefficients() const { return coeff_; }
    std::vector<double>& coefficients() { return coeff_; }

    double at(int i, int j) const;
    double& at(int i, int j);

    /// Sum of s_ij c1^i c2^j, accumulated grade by grade in storage order.
    double eval(const RegularValue& c) const;

    /// (d/dX, d/dY) as degree-(d-1) polynomials with constant terms.
    std::pair<Poly2, Poly2> partials() const;

    Poly2 to_poly() const;

    /// Serialized form: [i, j, value] triples in storage order.
    std::vector<SeriesTriple> triples() const;

    bool is_zero(double tol = 0.0) const;
    double max_abs_coeff() const;

    /// Copy extended or truncated to the given degree.
    TruncatedSeries2 resized(int degree) const;

    static std::size_t index_of(int i, int j);
    static std::size_t coefficient_count(int degree) { return static_cast<std::size_t>(degree) * (degree + 3) / 2; }
    static std::vector<std::pair<int, int>> exponents(int degree);

private:
    int degree_;
    std::vector<double> coeff_;
};

/// Inverse of TruncatedSeries2::partials: rebuild the series from its
/// gradient pair, dropping the integration constant. Exact on consistent
/// input (p = dS/dX, q = dS/dY).
TruncatedSeries2 antiderivative(const Poly2& p, const Poly2& q);

/// Reconstruct a polynomial with zero constant term from a Poly2,
/// discarding the constant entry.
TruncatedSeries2 drop_constant(const Poly2& p);

/// The monomials X and Y as polynomials.
Poly2 poly_X();
Poly2 poly_Y();

/// Coefficient-wise distance between two series (padded to a common
/// degree). When mod_2pi_on_s01 is set, the (0,1) slot is compared modulo
/// 2*pi: that coefficient is the sigma2(0) representative, fixed only up
/// to the branch convention.
double coefficient_distance(const TruncatedSeries2& a, const TruncatedSeries2& b,
                            bool mod_2pi_on_s01 = true);

} // namespace ffinv

#endif
