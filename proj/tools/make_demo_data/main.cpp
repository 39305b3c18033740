// Generates the synthetic demo run: demo/raw/ds_synth.nii, cond001.txt and
// hashes.json. Output is committed; rerunning with the same toolchain
// reproduces it byte for byte.
#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "voxelrun/design.hpp"
#include "voxelrun/io.hpp"
#include "voxelrun/manifest.hpp"
#include "voxelrun/nifti.hpp"

namespace {

namespace fs = std::filesystem;
using namespace voxelrun;

constexpr int kNi = 12, kNj = 12, kNk = 8, kNt = 68;
constexpr double kTr = 2.5;
constexpr float kSlope = 0.5f;
constexpr std::uint64_t kSeed = 20240607;

const char* kEvents =
    "10 20 1\n"
    "50 20 1\n"
    "90 20 1\n"
    "130 20 1\n";

double brain_weight(int i, int j, int k) {
  const double di = (i - 5.5) / 5.0, dj = (j - 5.5) / 5.0, dk = (k - 3.5) / 3.6;
  return di * di + dj * dj + dk * dk <= 1.0 ? 1.0 : 0.0;
}

bool active(int i, int j, int k) { return i >= 2 && i <= 4 && j >= 6 && j <= 8 && k >= 3 && k <= 5; }

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_demo_data DEMO_DIR\n";
    return 2;
  }
  const fs::path demo = argv[1];
  try {
    const auto events = design::parse_events(kEvents);
    const auto regressor = design::hemodynamic_regressor(events, kNt, kTr);

    std::mt19937_64 rng(kSeed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const double saturation[] = {1.35, 1.18, 1.08, 1.03};

    std::vector<std::int16_t> raw(static_cast<std::size_t>(kNi) * kNj * kNk * kNt);
    std::size_t n = 0;
    for (int t = 0; t < kNt; ++t) {
      const double gain = t < 4 ? saturation[t] : 1.0;
      const double drift = 6.0 * t / (kNt - 1);
      const double spike = (t == 30 || t == 51) ? 220.0 : 0.0;
      for (int k = 0; k < kNk; ++k) {
        for (int j = 0; j < kNj; ++j) {
          for (int i = 0; i < kNi; ++i) {
            const double w = brain_weight(i, j, k);
            double v = 20.0 + 3.0 * noise(rng);
            if (w > 0.0) {
              v = gain * (900.0 + 8.0 * (i - j) + drift) + 8.0 * noise(rng) + spike;
              if (active(i, j, k)) v += 40.0 * regressor[static_cast<std::size_t>(t)];
            }
            raw[n++] = static_cast<std::int16_t>(std::lround(v / kSlope));
          }
        }
      }
    }

    nifti::NiftiHeader h;
    h.dim = {4, kNi, kNj, kNk, kNt, 1, 1, 1};
    h.datatype = static_cast<std::int16_t>(nifti::Datatype::int16);
    h.bitpix = 16;
    h.pixdim = {1.0f, 3.0f, 3.0f, 3.5f, static_cast<float>(kTr), 0.0f, 0.0f, 0.0f};
    h.scl_slope = kSlope;
    h.xyzt_units = 10;
    h.sform_code = 1;
    h.srow_x = {3.0f, 0.0f, 0.0f, -16.5f};
    h.srow_y = {0.0f, 3.0f, 0.0f, -16.5f};
    h.srow_z = {0.0f, 0.0f, 3.5f, -12.25f};

    std::vector<std::byte> header = nifti::encode_header(h);
    std::string file(reinterpret_cast<const char*>(header.data()), header.size());
    file.append(4, '\0');
    for (std::int16_t v : raw) {
      const auto u = static_cast<std::uint16_t>(v);
      file.push_back(static_cast<char>(u & 0xff));
      file.push_back(static_cast<char>(u >> 8));
    }

    write_file_atomic(demo / "raw" / "ds_synth.nii", file);
    write_file_atomic(demo / "cond001.txt", kEvents);
    manifest::HashManifest m;
    m.entries["ds_synth.nii"] = manifest::sha256_file(demo / "raw" / "ds_synth.nii");
    manifest::save_manifest(m, demo / "hashes.json");
  } catch (const std::exception& e) {
    std::cerr << "make_demo_data: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
