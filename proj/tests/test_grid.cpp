#include "sparsegrid/evalkit.hpp"
#include "sparsegrid/grid.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace sparsegrid;

namespace {

SparseGrid level3_grid()
{
    return build_sparse_grid_from_rule(2, 3, repeat(KnotFamily::cc(0, 1), 2), LevelMap::doubling(), rule_sum());
}

void check_same(const SparseGrid& a, const SparseGrid& b, double tol)
{
    REQUIRE(a.tensors.size() == b.tensors.size());
    CHECK(a.set == b.set);
    CHECK(a.set_coeffs == b.set_coeffs);
    for (std::size_t k = 0; k < a.tensors.size(); ++k) {
        const auto &s = a.tensors[k], &t = b.tensors[k];
        CHECK(s.idx == t.idx);
        CHECK(s.m == t.m);
        CHECK(s.coeff == t.coeff);
        CHECK((s.knots - t.knots).cwiseAbs().maxCoeff() <= tol);
        CHECK((s.weights - t.weights).cwiseAbs().maxCoeff() <= tol);
    }
}

// Sort-unique on coordinates rationalized to multiples of 1e-12.
Index brute_unique(const MatrixXd& pts)
{
    std::set<std::vector<long long>> seen;
    for (Index j = 0; j < pts.cols(); ++j) {
        std::vector<long long> key;
        for (Index d = 0; d < pts.rows(); ++d) key.push_back(std::llround(pts(d, j) * 1e12));
        seen.insert(key);
    }
    return static_cast<Index>(seen.size());
}

}  // namespace

TEST_CASE("Tensor grids")
{
    const auto cc = repeat(KnotFamily::cc(0, 1), 2);
    const TensorGrid t = build_tensor_grid({1, 3}, cc, LevelMap::doubling());
    CHECK(t.m == std::vector<int>{1, 5});
    CHECK(t.size() == 5);
    CHECK(t.knots_per_dim[0][0] == 0.5);
    const double expected[] = {1, 0.8536, 0.5, 0.1464, 0};
    for (int j = 0; j < 5; ++j) CHECK(t.knots_per_dim[1][j] == doctest::Approx(expected[j]).epsilon(1e-4));
    CHECK(build_tensor_grid({1, 1}, cc, LevelMap::doubling()).weights[0] == 1.0);
    const TensorGrid t22 = build_tensor_grid({2, 2}, cc, LevelMap::doubling());
    CHECK(t22.size() == 9);
    // First dimension varies fastest.
    CHECK(t22.knots(0, 1) == t22.knots_per_dim[0][1]);
    CHECK(t22.knots(1, 1) == t22.knots_per_dim[1][0]);
    CHECK(t22.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Smolyak grid of level 3 on the unit square")
{
    const SparseGrid g = level3_grid();
    CHECK(g.tensors.size() == 7);
    CHECK(g.extended_size() == 67);
    const ReducedGrid r = reduce(g);
    CHECK(r.size() == 29);
    CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));

    const TensorGrid& first = g.tensors.front();
    CHECK(first.idx == MultiIndex{1, 3});
    CHECK(first.coeff == -1);
    const double w[] = {-0.0333, -0.2667, -0.4000, -0.2667, -0.0333};
    for (int j = 0; j < 5; ++j) CHECK(std::abs(first.weights[j] - w[j]) < 5e-5);
    for (const auto& t : g.tensors) {
        CHECK(t.coeff != 0);
        CHECK(t.weights.sum() == doctest::Approx(t.coeff).epsilon(1e-12));
    }
}

TEST_CASE("Degenerate grids")
{
    const auto cc = repeat(KnotFamily::cc(-1, 1), 3);
    const SparseGrid g = build_sparse_grid_from_rule(3, 0, cc, LevelMap::doubling(), rule_sum());
    CHECK(g.tensors.size() == 1);
    CHECK(reduce(g).size() == 1);
    const auto [qg, qr] = quick_preset(1, 0);
    CHECK(qr.size() == 1);
    CHECK(qr.knots(0, 0) == 0.0);
}

TEST_CASE("An L-shaped set drops the zero-coefficient tensor")
{
    const auto set = MultiIndexSet::from_rows(2, {{1, 1}, {1, 2}, {2, 1}, {3, 1}});
    const SparseGrid g = build_sparse_grid(set, repeat(KnotFamily::cc(0, 1), 2), LevelMap::doubling());
    REQUIRE(g.tensors.size() == 3);
    CHECK(g.tensors[0].idx == MultiIndex{1, 1});
    CHECK(g.tensors[1].idx == MultiIndex{1, 2});
    CHECK(g.tensors[2].idx == MultiIndex{3, 1});
}

TEST_CASE("Quick preset on [-1, 1]^2")
{
    const auto [g, r] = quick_preset(2, 3);
    CHECK(r.size() == 29);
    const auto [g3, r3] = quick_preset(3, 2);
    CHECK(r3.size() == brute_unique(g3.extended_knots()));
}

TEST_CASE("Reduction of a non-nested Gauss-Legendre grid")
{
    const auto gl = repeat(KnotFamily::gauss(DistributionSpec::uniform(-1, 1)), 2);
    const SparseGrid g = build_sparse_grid(fast_td_set(2, 2), gl, LevelMap::linear());
    const ReducedGrid r = reduce(g);
    CHECK(r.size() == brute_unique(g.extended_knots()));
    CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Reduced-format invariants")
{
    const SparseGrid g = build_sparse_grid_from_rule(3, 3, repeat(KnotFamily::leja(0, 2), 3), LevelMap::linear(),
                                                     rule_sum());
    const ReducedGrid r = reduce(g);
    const MatrixXd ext = g.extended_knots();
    REQUIRE(static_cast<Index>(r.n.size()) == g.extended_size());
    for (Index p = 0; p < r.size(); ++p) {
        CHECK(r.n[r.m[p]] == p);
        CHECK(r.knots.col(p) == ext.col(r.m[p]));
    }
    for (Index e = 0; e < g.extended_size(); ++e) CHECK((ext.col(e) - r.knots.col(r.n[e])).cwiseAbs().maxCoeff() < 1e-13);

    // Random table: the reduced weights carry the same quadrature as the extended ones.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    VectorXd v(r.size());
    for (Index p = 0; p < v.size(); ++p) v[p] = u(rng);
    const VectorXd we = g.extended_weights();
    double ext_sum = 0;
    for (Index e = 0; e < we.size(); ++e) ext_sum += we[e] * v[r.n[e]];
    CHECK(r.weights.dot(v) == doctest::Approx(ext_sum).epsilon(1e-12));
}

TEST_CASE("Building with a previous grid equals the cold build")
{
    for (int dim : {2, 4}) {
        const auto cc = repeat(KnotFamily::cc(0, 1), dim);
        SparseGrid prev;
        for (int w = 0; w <= 5; ++w) {
            const SparseGrid cold = build_sparse_grid_from_rule(dim, w, cc, LevelMap::doubling(), rule_sum());
            const SparseGrid warm =
                build_sparse_grid_from_rule(dim, w, cc, LevelMap::doubling(), rule_sum(), w ? &prev : nullptr);
            check_same(cold, warm, 1e-15);
            prev = warm;
        }
    }
}

TEST_CASE("Adding one index")
{
    const auto cc = repeat(KnotFamily::cc(0, 1), 2);
    const auto lshape = MultiIndexSet::from_rows(2, {{1, 1}, {1, 2}, {2, 1}, {3, 1}});
    const SparseGrid g = build_sparse_grid(lshape, cc, LevelMap::doubling());
    check_same(add_one_index(g, {4, 1}), build_sparse_grid(lshape.with({4, 1}), cc, LevelMap::doubling()), 0);

    const SparseGrid root = build_sparse_grid(MultiIndexSet::from_rows(2, {{1, 1}}), cc, LevelMap::doubling());
    const SparseGrid up = add_one_index(root, {2, 1});
    CHECK(up.set_coeffs == std::vector<int>{0, 1});
    CHECK(up.tensors.size() == 1);
    CHECK_THROWS_AS(add_one_index(g, {2, 1}), ContractError);
    CHECK_THROWS_AS(add_one_index(g, {3, 2}), ContractError);

    // A chain of additions reproduces the cold build of the final set.
    SparseGrid chain = root;
    const auto target = fast_td_set(2, 4);
    for (const auto& i : target)
        if (!chain.set.contains(i)) chain = add_one_index(chain, i);
    check_same(chain, build_sparse_grid(target, cc, LevelMap::doubling()), 0);
}

TEST_CASE("Unsorted rows are rejected with a hint")
{
    CHECK_THROWS_WITH_AS(MultiIndexSet::from_sorted_rows(2, {{2, 1}, {1, 1}}), doctest::Contains("sort"),
                         ContractError);
}

TEST_CASE("Knot registry tolerance")
{
    KnotRegistry reg(VectorXd::Constant(1, 1e-14));
    VectorXd a(1), b(1), c(1);
    a << 0.5;
    b << 0.5 + 4e-15;
    c << 0.5 + 1e-12;
    CHECK(reg.insert(a).second);
    CHECK_FALSE(reg.insert(b).second);
    CHECK(reg.insert(c).second);
    CHECK(reg.size() == 2);
}
