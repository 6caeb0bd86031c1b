#pragma once

#include <string>

namespace sparsegrid {

enum class LevelMapKind { linear, two_step, doubling, tripling, gk };

/// Level-to-knots function m(i). Levels start at 1; m(0) = 0 by convention so
/// that increments m(i) - m(i-1) are defined at the first level.
struct LevelMap {
    LevelMapKind kind = LevelMapKind::doubling;

    int operator()(int level) const;

    /// Largest admissible level (gk stops at 5).
    int max_level() const;

    static LevelMap linear() { return {LevelMapKind::linear}; }
    static LevelMap two_step() { return {LevelMapKind::two_step}; }
    static LevelMap doubling() { return {LevelMapKind::doubling}; }
    static LevelMap tripling() { return {LevelMapKind::tripling}; }
    static LevelMap gk() { return {LevelMapKind::gk}; }

    friend bool operator==(LevelMap, LevelMap) = default;
};

int apply_level_map(LevelMap map, int level);

std::string to_string(LevelMapKind kind);
LevelMapKind level_map_kind_from_string(const std::string& name);

}  // namespace sparsegrid
