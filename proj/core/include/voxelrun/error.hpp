#pragma once

#include <stdexcept>
#include <string>

namespace voxelrun {

/// Failure categories raised by the library. Every public operation reports
/// domain failures by throwing voxelrun::Error with one of these codes.
enum class Errc {
  invalid_argument,
  io_error,
  // nifti
  header_too_short,
  bad_sizeof_hdr,
  bad_magic,
  unsupported_datatype,
  invalid_header,
  truncated_data,
  index_out_of_range,
  drop_too_many,
  singular_affine,
  // design
  malformed_line,
  negative_onset,
  dt_mismatch,
  length_mismatch,
  unsupported_order,
  all_zero_column,
  // glm
  shape_mismatch,
  degenerate_design,
  zero_variance,
  zero_contrast,
  constant_regressor,
  // diagnostics
  too_few_volumes,
  too_few_values,
  degenerate_after_drop,
  // image ops
  non_positive,
  non_positive_voxel_size,
  // pipeline
  recipe_without_rule,
  duplicate_target,
  missing_colon,
  invalid_rule,
  cycle_detected,
  unknown_target,
  recipe_failed,
  malformed_manifest,
  network_error,
  digest_mismatch,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised by the pipeline executor when a recipe line exits nonzero.
class RecipeFailed : public Error {
 public:
  RecipeFailed(std::string target, std::string line, int exit_status);

  const std::string& target() const noexcept { return target_; }
  const std::string& line() const noexcept { return line_; }
  int exit_status() const noexcept { return exit_status_; }

 private:
  std::string target_;
  std::string line_;
  int exit_status_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace voxelrun
