#include "sparsegrid/levels.hpp"

#include "sparsegrid/types.hpp"

#include <array>
#include <limits>

namespace sparsegrid {

int LevelMap::max_level() const
{
    switch (kind) {
    case LevelMapKind::gk: return 5;
    case LevelMapKind::doubling: return 31;
    case LevelMapKind::tripling: return 20;
    default: return std::numeric_limits<int>::max() / 2;
    }
}

int LevelMap::operator()(int level) const
{
    if (level < 0) throw ParameterError("level must be >= 0, got " + std::to_string(level));
    if (level == 0) return 0;
    if (level > max_level())
        throw UnsupportedError(to_string(kind) + " level map is defined up to level " +
                               std::to_string(max_level()) + ", got " + std::to_string(level));
    switch (kind) {
    case LevelMapKind::linear: return level;
    case LevelMapKind::two_step: return 2 * (level - 1) + 1;
    case LevelMapKind::doubling: return level == 1 ? 1 : (1 << (level - 1)) + 1;
    case LevelMapKind::tripling: {
        int m = 1;
        for (int i = 1; i < level; ++i) m *= 3;
        return m;
    }
    case LevelMapKind::gk: {
        static constexpr std::array<int, 5> counts{1, 3, 9, 19, 35};
        return counts[level - 1];
    }
    }
    throw ParameterError("unknown level map");
}

int apply_level_map(LevelMap map, int level) { return map(level); }

std::string to_string(LevelMapKind kind)
{
    switch (kind) {
    case LevelMapKind::linear: return "linear";
    case LevelMapKind::two_step: return "two_step";
    case LevelMapKind::doubling: return "doubling";
    case LevelMapKind::tripling: return "tripling";
    case LevelMapKind::gk: return "gk";
    }
    return "?";
}

LevelMapKind level_map_kind_from_string(const std::string& name)
{
    for (auto k : {LevelMapKind::linear, LevelMapKind::two_step, LevelMapKind::doubling, LevelMapKind::tripling,
                   LevelMapKind::gk})
        if (to_string(k) == name) return k;
    throw ParameterError("unknown level map '" + name + "'");
}

}  // namespace sparsegrid
