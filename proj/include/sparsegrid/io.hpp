#pragma once

#include "sparsegrid/adaptive.hpp"
#include "sparsegrid/pce.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sparsegrid {

constexpr int kGridFormatVersion = 1;

/// Unreadable or inconsistent grid file.
struct FormatError : ParameterError {
    using ParameterError::ParameterError;
};

/// Everything a grid file can hold. Optional sections are omitted when empty.
struct GridBundle {
    SparseGrid grid;
    ReducedGrid reduced;
    std::optional<MatrixXd> values;  // V x P, aligned with reduced knots
    std::optional<AdaptState> adapt_state;
    std::optional<PCExpansion> pce;
};

/// JSON text of a bundle. Doubles are written in shortest round-trip form, so
/// parsing reproduces every array bitwise.
std::string grid_to_json(const GridBundle& bundle);
GridBundle grid_from_json(const std::string& text);

void save_grid(const std::string& path, const GridBundle& bundle);
GridBundle load_grid(const std::string& path);

enum class ExportKind { knots, knots3d_projection, interp_samples, midx_set, pce_coefficients };

std::string to_string(ExportKind kind);
ExportKind export_kind_from_string(const std::string& name);

struct ExportOptions {
    /// 1-based dimension pairs sampled by interp_samples. Empty means (1, 2)
    /// for N = 2 and consecutive pairs (1, 2), (3, 4), ... otherwise.
    std::vector<std::pair<int, int>> two_dim_cuts;
    /// Samples per axis of each cut.
    int resolution = 20;
    /// 1-based dimensions kept by knots3d_projection.
    std::vector<int> projection{1, 2, 3};
    /// Sampling box; defaults to the family supports, with unbounded sides
    /// replaced by the extent of the grid knots.
    std::optional<Domain> domain;
};

/// CSV export with a header row, comma separator and LF line endings.
///   knots               y1..yN,weight per reduced knot
///   knots3d_projection  the projection columns, duplicates removed
///   interp_samples      cut,y1..yN,f1..fV on a resolution^2 lattice per cut,
///                       other coordinates fixed at the domain midpoint
///   midx_set            i1..iN,coeff per index of the set
///   pce_coefficients    p1..pN,c1..cV in degree order
void export_points(const GridBundle& bundle, ExportKind kind, const ExportOptions& options, std::ostream& out);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

}  // namespace sparsegrid
