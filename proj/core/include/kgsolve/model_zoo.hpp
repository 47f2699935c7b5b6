#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kgsolve {

enum class NonlinearityKind { zero, constant, sine, sine_skew, poly_bounded };

/// Nonlinear drift B. The sine_skew kind multiplies sin(x_i) by the i-th
/// component of B_m x, where B_m is the skew-symmetric Toeplitz matrix with
/// +1 above and -1 below the diagonal; it is unbounded, so its sup norm is
/// only available through declared_sup.
struct Nonlinearity {
    NonlinearityKind kind = NonlinearityKind::sine;
    std::vector<double> b;    // constant: the fixed drift vector
    std::vector<double> ybar; // poly_bounded: the attractor point, ||ybar|| > 0
    double p = 2.0;           // poly_bounded: exponent, >= 1
    std::optional<double> declared_sup; // user surrogate for unbounded kinds

    static Nonlinearity zero();
    static Nonlinearity constant(std::vector<double> b);
    static Nonlinearity sine();
    static Nonlinearity sine_skew(std::optional<double> declared_sup = std::nullopt);
    static Nonlinearity poly_bounded(std::vector<double> ybar, double p);

    void validate() const; // throws ConfigError on broken invariants
};

enum class DatumKind { threshold, trig };

/// Initial datum u0: either the indicator 1{||x|| >= H} or cos(<h, x>).
/// Both have sup norm 1.
struct InitialDatum {
    DatumKind kind = DatumKind::threshold;
    double H = 1.0;
    std::vector<double> h; // trig frequency vector

    static InitialDatum threshold(double H);
    static InitialDatum trig(std::vector<double> h);

    double sup_norm() const { return 1.0; }
};

/// Evaluate B(x) into out. Pure; out.size() == x.size().
void eval_B(const Nonlinearity& nl, std::span<const double> x, std::span<double> out);
std::vector<double> eval_B(const Nonlinearity& nl, std::span<const double> x);

double eval_u0(const InitialDatum& u0, std::span<const double> x);

/// Analytic Euclidean bound sup_x ||B(x)||, or nullopt for unbounded kinds.
/// sine -> sqrt(d), poly_bounded -> ||ybar||, sine_skew -> nullopt
/// (use declared_sup instead).
std::optional<double> sup_norm_B(const Nonlinearity& nl, std::size_t d);

std::string to_string(NonlinearityKind k);
std::string to_string(DatumKind k);

} // namespace kgsolve
