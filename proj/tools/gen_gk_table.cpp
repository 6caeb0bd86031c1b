// Generates the nested Genz-Keister tables (1, 3, 9, 19, 35 points) for the
// standard normal density by successive Patterson extension of Gauss-Hermite.
// Output is C++ source consumed by src/knots_gk_table.cpp.
//
// Build: g++ -std=c++20 -O2 -I/usr/include/eigen3 gen_gk_table.cpp -o gen_gk_table

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <vector>

using Real = boost::multiprecision::cpp_bin_float_100;
using Poly = std::vector<Real>;  // coefficients, lowest degree first

namespace {

Real normal_moment(int k)
{
    if (k % 2) return 0;
    Real m = 1;
    for (int j = k - 1; j > 1; j -= 2) m *= j;
    return m;
}

Poly multiply(const Poly& a, const Poly& b)
{
    Poly c(a.size() + b.size() - 1, Real(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Real horner(const Poly& p, const Real& x)
{
    Real v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
    return v;
}

std::vector<Real> solve(std::vector<std::vector<Real>> a, std::vector<Real> b)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            Real f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<Real> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Real s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

// Monic degree-p polynomial orthogonal to x^0..x^{p-1} against pi(x) * rho(x).
Poly extension_polynomial(const Poly& pi, int p)
{
    auto moment = [&](int k) {
        Real s = 0;
        for (std::size_t l = 0; l < pi.size(); ++l) s += pi[l] * normal_moment(k + static_cast<int>(l));
        return s;
    };
    std::vector<std::vector<Real>> a(p, std::vector<Real>(p));
    std::vector<Real> b(p);
    for (int k = 0; k < p; ++k) {
        for (int j = 0; j < p; ++j) a[k][j] = moment(k + j);
        b[k] = -moment(k + p);
    }
    auto coef = solve(a, b);
    coef.push_back(1);
    return coef;
}

std::vector<Real> real_roots(const Poly& q)
{
    const int deg = static_cast<int>(q.size()) - 1;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -static_cast<double>(q[i]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    Poly dq(deg);
    for (int i = 1; i <= deg; ++i) dq[i - 1] = q[i] * i;
    std::vector<Real> roots;
    for (int i = 0; i < deg; ++i) {
        auto z = es.eigenvalues()[i];
        if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z.real()))) {
            std::cerr << "complex root " << z << "\n";
            std::exit(1);
        }
        Real x = z.real();
        for (int it = 0; it < 200; ++it) x -= horner(q, x) / horner(dq, x);
        roots.push_back(x);
    }
    return roots;
}

std::vector<Real> weights_for(const std::vector<Real>& nodes)
{
    const std::size_t n = nodes.size();
    std::vector<std::vector<Real>> a(n, std::vector<Real>(n));
    std::vector<Real> b(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) a[k][j] = pow(nodes[j], static_cast<int>(k));
        b[k] = normal_moment(static_cast<int>(k));
    }
    return solve(a, b);
}

}  // namespace

int main()
{
    std::vector<Real> nodes{Real(0)};
    const int extensions[] = {2, 6, 10, 16};
    std::vector<std::vector<Real>> levels{nodes};
    for (int p : extensions) {
        Poly pi{Real(1)};
        for (const auto& x : nodes) pi = multiply(pi, Poly{-x, Real(1)});
        auto added = real_roots(extension_polynomial(pi, p));
        nodes.insert(nodes.end(), added.begin(), added.end());
        std::sort(nodes.begin(), nodes.end());
        levels.push_back(nodes);
    }
    std::cout << std::setprecision(17);
    for (const auto& lvl : levels) {
        auto w = weights_for(lvl);
        Real total = 0;
        for (const auto& wi : w) total += wi;
        // degree check: first odd/even moment that fails
        int exact = 0;
        for (int k = 0; k < 80; ++k) {
            Real s = 0;
            for (std::size_t j = 0; j < lvl.size(); ++j) s += w[j] * pow(lvl[j], k);
            if (abs(s - normal_moment(k)) > Real(1e-40) * (1 + normal_moment(k))) break;
            exact = k;
        }
        std::cout << "// " << lvl.size() << " points, degree of exactness " << exact << "\n";
        std::cout << "{";
        for (std::size_t j = 0; j < lvl.size(); ++j)
            std::cout << (j ? ", " : "") << static_cast<double>(lvl[j]);
        std::cout << "},\n{";
        for (std::size_t j = 0; j < lvl.size(); ++j)
            std::cout << (j ? ", " : "") << static_cast<double>(w[j]);
        std::cout << "},\n";
    }
}
