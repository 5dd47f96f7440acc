#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "smslab/grid.hpp"

namespace smslab {

using Complex = std::complex<double>;

/// Complex-valued grid function, one value per node, flat row-major storage.
struct ComplexField {
    Grid grid;
    std::vector<Complex> values;

    ComplexField() = default;
    explicit ComplexField(const Grid& g) : grid(g), values(g.size(), Complex{0.0, 0.0}) {}
    ComplexField(const Grid& g, std::vector<Complex> v);

    std::size_t size() const { return values.size(); }
    Complex& operator[](std::size_t i) { return values[i]; }
    const Complex& operator[](std::size_t i) const { return values[i]; }

    /// Throws if any entry is non-finite.
    void check_finite(const char* what = "field") const;
};

/// Real-valued grid function (coefficients live here).
struct RealField {
    Grid grid;
    std::vector<double> values;

    RealField() = default;
    explicit RealField(const Grid& g) : grid(g), values(g.size(), 0.0) {}
    RealField(const Grid& g, std::vector<double> v);

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    const double& operator[](std::size_t i) const { return values[i]; }

    double min() const;
    double max() const;
    void check_finite(const char* what = "field") const;
};

// Elementwise arithmetic used all over the solvers and tests.
ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(Complex s, const ComplexField& a);
RealField operator-(const RealField& a, const RealField& b);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// CSV serialization: header comment names the grid parameters, then one row
/// per node with per-axis indices and value columns (re,im or value).
void write_csv(std::ostream& os, const ComplexField& f);
void write_csv(std::ostream& os, const RealField& f);
void save_csv(const std::string& path, const ComplexField& f);
void save_csv(const std::string& path, const RealField& f);
ComplexField load_complex_csv(const std::string& path);
RealField load_real_csv(const std::string& path);

}  // namespace smslab
