#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "voxelrun/image.hpp"

namespace voxelrun::figures {

namespace fs = std::filesystem;

/// Tiles the axial (k) slices of a 3D image row-major into a grid with
/// `cols` columns and ceil(K / cols) rows. The result has rows * dim_j rows
/// and cols * dim_i columns; unused cells stay zero.
Eigen::MatrixXd slice_mosaic(const Image& volume, std::size_t cols);

/// Binary PGM ("P5", maxval 255) with values min-max scaled to 0..255.
/// A constant matrix maps to 0. Throws invalid_argument on non-finite input.
std::string encode_pgm(const Eigen::MatrixXd& matrix);
void write_pgm(const Eigen::MatrixXd& matrix, const fs::path& path);

struct Marker {
  double x = 0.0;
  double y = 0.0;
};

/// Line plot in an 800x600 viewBox: one polyline per series (x = sample
/// index), circle markers, dashed horizontal lines. Output depends only on
/// the inputs.
std::string render_svg_lines(const std::vector<std::vector<double>>& series,
                             const std::vector<Marker>& markers,
                             const std::vector<double>& hlines,
                             const std::string& title = {});
void write_svg_lines(const std::vector<std::vector<double>>& series,
                     const std::vector<Marker>& markers,
                     const std::vector<double>& hlines, const fs::path& path,
                     const std::string& title = {});

}  // namespace voxelrun::figures
