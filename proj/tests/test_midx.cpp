#include "sparsegrid/midx.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace sparsegrid;

namespace {

MultiIndexSet set_of(int dim, std::vector<MultiIndex> rows) { return MultiIndexSet::from_rows(dim, std::move(rows)); }

// Brute-force enumeration of {i : 1 <= i <= top, pred(i)}.
template <typename Pred>
std::vector<MultiIndex> enumerate(int dim, int top, Pred pred)
{
    std::vector<MultiIndex> out;
    MultiIndex i(dim, 1);
    while (true) {
        if (pred(i)) out.push_back(i);
        int d = dim - 1;
        while (d >= 0 && i[d] == top) i[d--] = 1;
        if (d < 0) break;
        ++i[d];
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("Total-degree rule sets")
{
    const auto s = generate_rule_set(2, rule_sum(), 3);
    const std::vector<MultiIndex> expected{{1, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 1},
                                           {2, 2}, {2, 3}, {3, 1}, {3, 2}, {4, 1}};
    CHECK(s.rows() == expected);
    CHECK(fast_td_set(2, 3) == s);
    CHECK(fast_td_set(3, 0).rows() == std::vector<MultiIndex>{{1, 1, 1}});
    CHECK(fast_td_set(2, 4).size() == 15);
    CHECK(generate_rule_set(1, rule_sum(), 0).rows() == std::vector<MultiIndex>{{1}});
    for (int dim = 1; dim <= 4; ++dim)
        for (int w = 0; w <= 5; ++w) CHECK(fast_td_set(dim, w) == generate_rule_set(dim, rule_sum(), w));
}

TEST_CASE("Anisotropic total degree, g = [1, 2], w = 4")
{
    const auto s = generate_rule_set(2, rule_sum({1, 2}), 4);
    const auto brute = enumerate(2, 8, [](const MultiIndex& i) { return (i[0] - 1) + 2 * (i[1] - 1) <= 4; });
    CHECK(s.rows() == brute);
    CHECK(s.size() == 9);
}

TEST_CASE("Rule sets match brute force for every rule")
{
    for (int dim = 1; dim <= 3; ++dim) {
        for (double w : {0.0, 1.0, 2.5, 4.0}) {
            auto check = [&](const IndexRule& r, auto pred) {
                CHECK(generate_rule_set(dim, r, w).rows() == enumerate(dim, 8, pred));
            };
            check(rule_sum(), [&](const MultiIndex& i) {
                double s = 0;
                for (int v : i) s += v - 1;
                return s <= w;
            });
            check(rule_max(), [&](const MultiIndex& i) { return *std::max_element(i.begin(), i.end()) - 1 <= w; });
            check(rule_prod(), [&](const MultiIndex& i) {
                double p = 1;
                for (int v : i) p *= v;
                return p <= w;
            });
        }
    }
}

TEST_CASE("Box sets")
{
    CHECK(box_set({2, 2}).rows() == std::vector<MultiIndex>{{1, 1}, {1, 2}, {2, 1}, {2, 2}});
    CHECK(box_set({3, 1}).rows() == std::vector<MultiIndex>{{1, 1}, {2, 1}, {3, 1}});
    CHECK(box_set({2, 2, 2}).size() == 8);
    const Preset tp = preset(PresetName::TP);
    CHECK(generate_rule_set(2, tp.rule, 2) == box_set({3, 3}));
}

TEST_CASE("Presets")
{
    CHECK(preset(PresetName::SM).level_map == LevelMap::doubling());
    CHECK(preset(PresetName::TD).level_map == LevelMap::linear());
    CHECK(preset(PresetName::SM).rule({2, 3}) == doctest::Approx(3.0));
    CHECK(preset(PresetName::HC, {1, 2}).rule({2, 3}) == doctest::Approx(18.0));
    CHECK(preset_name_from_string("HC") == PresetName::HC);
    CHECK_THROWS_AS(preset_name_from_string("XX"), ParameterError);
}

TEST_CASE("Rule sets are invariant under permutation of dimensions")
{
    const auto s = generate_rule_set(3, rule_prod(), 6);
    std::vector<MultiIndex> rotated;
    for (const auto& i : s) rotated.push_back({i[2], i[0], i[1]});
    CHECK(MultiIndexSet::from_rows(3, rotated) == s);
}

TEST_CASE("Downward closedness")
{
    CHECK(is_downward_closed(set_of(2, {{1, 1}, {1, 2}, {2, 1}, {3, 1}})));
    CHECK_FALSE(is_downward_closed(set_of(2, {{1, 1}, {1, 2}, {2, 1}, {3, 1}, {3, 2}})));
    CHECK(is_downward_closed(set_of(2, {{1, 1}})));
}

TEST_CASE("Reduced margin")
{
    CHECK(reduced_margin(set_of(2, {{1, 1}})).rows() == std::vector<MultiIndex>{{1, 2}, {2, 1}});
    const auto s = set_of(2, {{1, 1}, {1, 2}, {2, 1}, {3, 1}});
    const auto brute = enumerate(2, 5, [&](const MultiIndex& i) {
        if (s.contains(i)) return false;
        for (int n = 0; n < 2; ++n) {
            if (i[n] == 1) continue;
            MultiIndex b = i;
            --b[n];
            if (!s.contains(b)) return false;
        }
        return true;
    });
    CHECK(reduced_margin(s).rows() == brute);
    CHECK(reduced_margin(s).rows() == std::vector<MultiIndex>{{1, 3}, {2, 2}, {4, 1}});
    CHECK_THROWS_AS(reduced_margin(set_of(2, {{1, 1}, {3, 1}})), ContractError);
}

TEST_CASE("Adding any margin index keeps the set downward closed")
{
    for (int w = 0; w <= 4; ++w) {
        const auto s = generate_rule_set(3, rule_sum({1, 2, 1.5}), w);
        const auto margin = reduced_margin(s);
        for (const auto& i : margin) {
            CHECK_FALSE(s.contains(i));
            CHECK(is_downward_closed(s.with(i)));
        }
    }
}

TEST_CASE("Combination coefficients")
{
    const auto lshape = set_of(2, {{1, 1}, {1, 2}, {2, 1}, {3, 1}});
    CHECK(combination_coefficients(lshape) == std::vector<int>{-1, 1, 0, 1});
    CHECK(combination_coefficients(set_of(2, {{1, 1}})) == std::vector<int>{1});

    const auto td = fast_td_set(2, 3);
    const auto c = combination_coefficients(td);
    std::vector<MultiIndex> nonzero;
    for (std::size_t k = 0; k < td.size(); ++k)
        if (c[k] != 0) nonzero.push_back(td[k]);
    CHECK(nonzero == std::vector<MultiIndex>{{1, 3}, {1, 4}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {4, 1}});

    CHECK_THROWS_AS(combination_coefficients(set_of(2, {{1, 1}, {1, 3}})), ContractError);
}

TEST_CASE("Coefficients sum to one on downward-closed sets")
{
    for (int dim = 1; dim <= 4; ++dim)
        for (int w = 0; w <= 4; ++w)
            for (const auto& r : {rule_sum(), rule_max(), rule_prod()}) {
                const auto c = combination_coefficients(generate_rule_set(dim, r, w + 1));
                int sum = 0;
                for (int v : c) sum += v;
                CHECK(sum == 1);
            }
}

TEST_CASE("Telescoping: the combination over a box is its top tensor")
{
    // Oracle: with a random table F over box(jj), sum_i c_i F_i = F_jj.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (const MultiIndex& jj : std::vector<MultiIndex>{{3}, {2, 3}, {3, 3}, {1, 2, 3}, {3, 3, 3}}) {
        const auto box = box_set(jj);
        const auto c = combination_coefficients(box);
        double sum = 0, top = 0;
        for (std::size_t k = 0; k < box.size(); ++k) {
            const double f = u(rng);
            sum += c[k] * f;
            if (box[k] == jj) top = f;
        }
        CHECK(sum == doctest::Approx(top).epsilon(1e-12));
    }
}

TEST_CASE("Row ordering contract")
{
    CHECK_THROWS_AS(MultiIndexSet::from_sorted_rows(2, {{1, 2}, {1, 1}}), ContractError);
    const auto s = MultiIndexSet::from_rows(2, {{2, 1}, {1, 1}, {2, 1}});
    CHECK(s.rows() == std::vector<MultiIndex>{{1, 1}, {2, 1}});
    CHECK(s.find({2, 1}) == std::optional<std::size_t>(1));
    CHECK_FALSE(s.contains({3, 1}));
}
