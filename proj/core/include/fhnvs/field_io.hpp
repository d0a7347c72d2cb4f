#pragma once

#include <filesystem>
#include <string_view>

#include "fhnvs/grid.hpp"

namespace fhnvs {

/// CSV with header `x1[,x2[,x3]],value`, one row per interior node in flat
/// (row-major) order. Values are written with 17 significant digits so a
/// round trip is bitwise exact.
void save_csv(const Field& field, const std::filesystem::path& path);
Field load_csv(const Grid& grid, const std::filesystem::path& path);

/// Legacy VTK STRUCTURED_POINTS export of the interior nodes.
void save_vtk(const Field& field, const std::filesystem::path& path, std::string_view name = "value");

}  // namespace fhnvs
