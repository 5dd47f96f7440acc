#include "smslab/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace smslab {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ComplexField::ComplexField(const Grid& g, std::vector<Complex> v) : grid(g), values(std::move(v))
{
    if (values.size() != grid.size())
        throw std::invalid_argument("ComplexField: value count does not match grid size");
}

void ComplexField::check_finite(const char* what) const
{
    for (const Complex& z : values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::runtime_error(std::string(what) + ": non-finite entry");
}

RealField::RealField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v))
{
    if (values.size() != grid.size())
        throw std::invalid_argument("RealField: value count does not match grid size");
}

double RealField::min() const { return *std::min_element(values.begin(), values.end()); }
double RealField::max() const { return *std::max_element(values.begin(), values.end()); }

void RealField::check_finite(const char* what) const
{
    for (double v : values)
        if (!std::isfinite(v)) throw std::runtime_error(std::string(what) + ": non-finite entry");
}

void require_same_grid(const Grid& a, const Grid& b, const char* what)
{
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

ComplexField operator+(const ComplexField& a, const ComplexField& b)
{
    require_same_grid(a.grid, b.grid, "operator+");
    ComplexField r(a.grid);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

ComplexField operator-(const ComplexField& a, const ComplexField& b)
{
    require_same_grid(a.grid, b.grid, "operator-");
    ComplexField r(a.grid);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

ComplexField operator*(Complex s, const ComplexField& a)
{
    ComplexField r(a.grid);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = s * a[i];
    return r;
}

RealField operator-(const RealField& a, const RealField& b)
{
    require_same_grid(a.grid, b.grid, "operator-");
    RealField r(a.grid);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

namespace {

void write_header(std::ostream& os, const Grid& g)
{
    os << "# grid d=" << g.d << " half_width=" << fmt(g.half_width) << " n=" << g.n << "\n";
}

}  // namespace

void write_csv(std::ostream& os, const ComplexField& f)
{
    write_header(os, f.grid);
    os << (f.grid.d == 1 ? "i,re,im\n" : "i,j,re,im\n");
    const int n = f.grid.n;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f.grid.d == 1)
            os << k;
        else
            os << k / static_cast<std::size_t>(n) << ',' << k % static_cast<std::size_t>(n);
        os << ',' << fmt(f[k].real()) << ',' << fmt(f[k].imag()) << '\n';
    }
}

void write_csv(std::ostream& os, const RealField& f)
{
    write_header(os, f.grid);
    os << (f.grid.d == 1 ? "i,value\n" : "i,j,value\n");
    const int n = f.grid.n;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f.grid.d == 1)
            os << k;
        else
            os << k / static_cast<std::size_t>(n) << ',' << k % static_cast<std::size_t>(n);
        os << ',' << fmt(f[k]) << '\n';
    }
}

namespace {

template <class F>
F load_csv_impl(const std::string& path, int value_cols)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open field CSV: " + path);

    std::string line;
    if (!std::getline(in, line) || line.rfind("# grid", 0) != 0)
        throw std::runtime_error(path + ": missing grid header");

    int d = 0, n = 0;
    double L = 0;
    if (std::sscanf(line.c_str(), "# grid d=%d half_width=%lf n=%d", &d, &L, &n) != 3)
        throw std::runtime_error(path + ": malformed grid header");

    F field(build_grid(d, L, n));
    std::getline(in, line);  // column names
    std::size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
        const int idx_cols = d;
        if (static_cast<int>(cells.size()) != idx_cols + value_cols)
            throw std::runtime_error(path + ": bad column count");
        std::size_t flat = static_cast<std::size_t>(cells[0]);
        if (d == 2) flat = flat * n + static_cast<std::size_t>(cells[1]);
        if (flat >= field.size()) throw std::runtime_error(path + ": node index out of range");
        if constexpr (std::is_same_v<F, ComplexField>)
            field[flat] = Complex{cells[idx_cols], cells[idx_cols + 1]};
        else
            field[flat] = cells[idx_cols];
        ++count;
    }
    if (count != field.size()) throw std::runtime_error(path + ": node count mismatch");
    return field;
}

}  // namespace

void save_csv(const std::string& path, const ComplexField& f)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_csv(out, f);
}

void save_csv(const std::string& path, const RealField& f)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_csv(out, f);
}

ComplexField load_complex_csv(const std::string& path) { return load_csv_impl<ComplexField>(path, 2); }
RealField load_real_csv(const std::string& path) { return load_csv_impl<RealField>(path, 1); }

}  // namespace smslab
